from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from apps.core.exceptions import (
    InstanceConfigError,
    RepeatedEigenvalueError,
    SearchConfigError,
    SelfAdjointnessError,
    SingularMapError,
    SymmetryError,
    VerificationError,
)
from apps.core.services.report import KIND_EXCLUDED, KIND_ISOLATED_POINT
from apps.exalg.services import linalg
from apps.exalg.services.multivector import MultiVector
from apps.epw.services import census as epw_census
from apps.epw.services.census import (
    FixedLocusDownstairs,
    census_upstairs,
    double_cover_points,
    fixed_locus_downstairs,
    line_complex_certificates,
)
from apps.epw.services.fixed_locus import (
    V_SYMBOLS,
    EigenPoint,
    eigen_fixed_points,
    eigen_point,
    kummer_membership,
    kummer_quartic,
    line_complex_normal_form,
    on_quadric_via_fiber,
    quadric_of_phi,
    quartic_degree_check,
    sample_base_locus,
)
from apps.epw.services.instances import instance_from_data, load_instance, reference_instance
from apps.epw.services.involution import InvolutionSplit, smoothness_obstruction
from apps.epw.services.lagrangian import (
    PLUCKER,
    SelfAdjointOp,
    SymmetricPhi,
    assemble_invariant_lagrangian,
    build_A_minus,
    build_A_plus,
    check_LG_star,
    fiber_dim,
    fiber_split,
    hyperbolic_eigenbasis,
    operator_from_A_minus,
    phi_from_A_plus,
)
from apps.epw.services.node_search import (
    NodeCandidate,
    NodeCensus,
    NodeCheck,
    NodeSearchConfig,
    QuarticEvaluator,
    conic_rank_ratio,
    dedupe_points,
    node_census,
    normalize_point,
    projective_distance,
    rationalize,
    verify_node,
)

REFERENCE_B = [[2, 1, 0, 1], [1, -3, 1, 0], [0, 1, 5, 1], [1, 0, 1, -7]]
REFERENCE_DATA = {
    'name': 'reference',
    'seed': 42,
    'u': {'eigenvalues': ['1', '2', '3', '4', '5', '6'], 'eigenbasis': 'hyperbolic'},
    'phi': {'B': REFERENCE_B},
}


@pytest.fixture(scope='module')
def u():
    return SelfAdjointOp.from_spectrum([1, 2, 3, 4, 5, 6])


@pytest.fixture(scope='module')
def phi():
    return SymmetricPhi(REFERENCE_B)


@pytest.fixture(scope='module')
def lag(u, phi):
    return assemble_invariant_lagrangian(u, phi)


@pytest.fixture(scope='module')
def quartic(u):
    return kummer_quartic(u)


def plus_basis(*indices):
    return MultiVector.basis(4, *indices)


def irrational_operator():
    """G·diag(1, 2, 3, 5, 7, 11): eigenvalues ±√11, ±√14, ±√15."""
    g = PLUCKER.gram
    return SelfAdjointOp(tuple(tuple(r) for r in linalg.matmul(g, linalg.diagonal([1, 2, 3, 5, 7, 11]))))


class TestInvolutionSplit:
    def test_block_dimensions(self):
        split = InvolutionSplit(4)
        assert split.block_dims() == {0: 4, 1: 12, 2: 4, 3: 0}
        assert split.eigenspace_dims() == (8, 12)
        assert split.symplectic_on_wedge3
        assert split.labels == ('e1', 'e2', 'e3', 'e4', 'f1', 'f2')

    def test_odd_minus_dimension_is_antisymplectic(self):
        assert not InvolutionSplit(5).symplectic_on_wedge3
        assert not InvolutionSplit(3).symplectic_on_wedge3

    def test_rejects_other_dimensions(self):
        with pytest.raises(VerificationError):
            InvolutionSplit(2)

    def test_act_and_project(self):
        split = InvolutionSplit(4)
        alpha = MultiVector.basis(6, 1, 2, 3) + MultiVector.basis(6, 1, 2, 5)
        assert split.act(alpha) == MultiVector.basis(6, 1, 2, 3) - MultiVector.basis(6, 1, 2, 5)
        assert split.project(alpha, -1) == MultiVector.basis(6, 1, 2, 5)
        assert split.project(alpha, 1) in split.eigenspace(1)

    @pytest.mark.parametrize('dim_plus,obstructed', [(3, True), (4, False), (5, True)])
    def test_smoothness_obstruction(self, dim_plus, obstructed):
        verdict = smoothness_obstruction(dim_plus)
        assert verdict.obstructed is obstructed
        assert all(w.forces_intersection for w in verdict.witnesses)
        assert verdict.to_dict()['dim_plus'] == dim_plus


class TestPluckerForm:
    def test_gram_entries(self):
        e = plus_basis
        assert PLUCKER(e(1, 2), e(3, 4)) == 1
        assert PLUCKER(e(1, 3), e(2, 4)) == -1
        assert PLUCKER(e(1, 4), e(2, 3)) == 1
        assert PLUCKER(e(1, 2), e(1, 3)) == 0
        assert PLUCKER.is_nondegenerate()

    def test_hyperbolic_basis_is_orthogonal(self):
        basis = hyperbolic_eigenbasis()
        weights = [PLUCKER.quadratic(x) for x in basis]
        assert weights == [2, -2, -2, 2, 2, -2]
        assert all(PLUCKER(x, y) == 0 for i, x in enumerate(basis) for y in basis[i + 1:])


class TestSelfAdjointOp:
    def test_reference_spectrum(self, u):
        assert u.rational_eigenvalues() == [Fraction(k) for k in range(1, 7)]
        assert u.has_distinct_eigenvalues()
        for lam, x in zip(range(1, 7), hyperbolic_eigenbasis()):
            assert u(x) == x * lam

    def test_rejects_non_self_adjoint(self):
        matrix = [[0] * 6 for _ in range(6)]
        matrix[0][0] = 1
        with pytest.raises(SelfAdjointnessError) as err:
            SelfAdjointOp(matrix)
        assert err.value.pair == ('e12', 'e34')

    def test_repeated_spectrum(self):
        identity = SelfAdjointOp.identity()
        assert not identity.has_distinct_eigenvalues()
        assert identity.rational_eigenvalues() == [1] * 6
        with pytest.raises(RepeatedEigenvalueError):
            eigen_fixed_points(identity)

    def test_irrational_spectrum(self):
        op = irrational_operator()
        assert op.has_distinct_eigenvalues()
        assert op.rational_eigenvalues() is None

    @given(st.lists(st.integers(min_value=-6, max_value=6), min_size=21, max_size=21))
    def test_gram_times_symmetric_is_self_adjoint(self, entries):
        sym = [[0] * 6 for _ in range(6)]
        it = iter(entries)
        for i in range(6):
            for j in range(i, 6):
                sym[i][j] = sym[j][i] = next(it)
        op = SelfAdjointOp(tuple(tuple(r) for r in linalg.matmul(PLUCKER.gram, linalg.to_rows(sym))))
        x, y = MultiVector.basis(4, 1, 3), MultiVector.basis(4, 2, 3) + MultiVector.basis(4, 1, 4)
        assert PLUCKER(op(x), y) == PLUCKER(x, op(y))


class TestSymmetricPhi:
    def test_bilinear_reads_back_B(self, phi):
        for i in range(4):
            for k in range(4):
                assert phi.bilinear(MultiVector.basis(4, i + 1), MultiVector.basis(4, k + 1)) == REFERENCE_B[i][k]

    def test_rejects_asymmetric(self):
        b = [row[:] for row in REFERENCE_B]
        b[0][1] = 5
        with pytest.raises(SymmetryError) as err:
            SymmetricPhi(b)
        assert err.value.pair == ('e1', 'e2')

    def test_rejects_singular(self):
        with pytest.raises(SingularMapError):
            SymmetricPhi([[1, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])


class TestInvariantLagrangian:
    def test_dimensions(self, lag):
        assert (lag.A_plus.dim, lag.A_minus.dim, lag.dim) == (4, 6, 10)

    def test_graph_lemma_recovers_u_and_phi(self, u, phi):
        assert operator_from_A_minus(build_A_minus(u)) == u
        assert phi_from_A_plus(build_A_plus(phi)) == phi

    def test_reference_passes_every_certificate(self, lag):
        certs = check_LG_star(lag)
        assert [c.name for c in certs] == [
            'lagrangian', 'open_f1', 'open_f2', 'plus_graph', 'distinct_eigenvalues', 'no_decomposable_eigenvector',
        ]
        assert all(c.passed for c in certs), [c for c in certs if not c.passed]
        assert all(c.hypothesis for c in certs)

    def test_sampled_decomposable_search(self, lag):
        certs = check_LG_star(lag, decomposable_budget=20, seed=1)
        sampled = certs[-1]
        assert sampled.name == 'no_decomposable_sampled'
        assert sampled.passed

    def test_repeated_spectrum_fails_named_certificate(self, phi):
        lag = assemble_invariant_lagrangian(SelfAdjointOp.identity(), phi)
        failed = [c.name for c in check_LG_star(lag) if not c.passed]
        assert failed == ['distinct_eigenvalues', 'no_decomposable_eigenvector']

    def test_irrational_spectrum_uses_numeric_plucker_values(self, phi):
        lag = assemble_invariant_lagrangian(irrational_operator(), phi)
        certs = {c.name: c for c in check_LG_star(lag)}
        assert certs['no_decomposable_eigenvector'].passed
        assert 'numeric' in certs['no_decomposable_eigenvector'].detail


class TestEigenPoints:
    def test_exact_points(self, u, lag):
        points = eigen_fixed_points(u, lag)
        assert [p.eigenvalue for p in points] == list(range(1, 7))
        assert all(p.exact and p.fiber == 1 and p.split == (0, 1) for p in points)
        assert points[2].point == eigen_point(3)
        assert points[0].to_dict()['fiber_split'] == [0, 1]

    def test_numeric_points(self):
        op = irrational_operator()
        points = eigen_fixed_points(op)
        assert len(points) == 6
        assert all(not p.exact and p.residual < 1e-9 for p in points)
        values = sorted(p.eigenvalue.real for p in points)
        assert values[-1] == pytest.approx(np.sqrt(15))

    def test_generic_point_of_V_minus_is_off_A(self, lag):
        v = MultiVector.from_terms(6, 1, {(5,): 1, (6,): Fraction(1, 2)})
        assert fiber_dim(v, lag) == 0

    def test_split_needs_eigenvector(self, lag):
        with pytest.raises(VerificationError):
            fiber_split(MultiVector.from_terms(6, 1, {(1,): 1, (5,): 1}), lag)


class TestQuadric:
    def test_matrix_is_B(self, phi):
        quadric = quadric_of_phi(phi)
        assert [list(r) for r in quadric.matrix] == REFERENCE_B
        assert quadric.determinant == 280
        assert quadric.smooth

    def test_fiber_detects_quadric(self, phi, lag):
        quadric = quadric_of_phi(phi)
        # B(v, v) = 2 - 3 + 2 = 1 for v = e1 + e2; e3 + t e4 gives 5 + 2t - 7t²
        assert not on_quadric_via_fiber(MultiVector.vector([1, 1, 0, 0]), lag)
        on = MultiVector.vector([0, 0, 1, 1])
        assert quadric.value([0, 0, 1, 1]) == 0
        assert on_quadric_via_fiber(on, lag)


class TestKummer:
    def test_quartic_is_homogeneous_of_degree_4(self, quartic):
        assert quartic.is_homogeneous
        assert quartic.total_degree() == 4
        assert quartic_degree_check(quartic, seed=7) == (4, 4)

    def test_membership_trivial_operators(self):
        v = MultiVector.vector([1, 2, 0, -1])
        assert kummer_membership(v, SelfAdjointOp.identity()) == 3
        assert kummer_membership(v, SelfAdjointOp.zero()) == 3

    @given(st.lists(st.integers(min_value=-5, max_value=5), min_size=3, max_size=3), st.integers(1, 5))
    def test_membership_matches_quartic(self, u, quartic, tail, head):
        coords = [head, *tail]
        on_surface = quartic.eval(dict(zip(V_SYMBOLS, coords))) == 0
        assert on_surface == (kummer_membership(MultiVector.vector(coords), u) >= 1)

    def test_normal_form(self, u):
        nf = line_complex_normal_form(u)
        assert nf.exact
        assert all(nf.checks.values()), nf.checks
        assert nf.eigenvalues == tuple(range(1, 7))
        assert sympy.Poly(nf.F, *nf.G.free_symbols).total_degree() == 2

    def test_base_locus_samples(self, u):
        points, residual = sample_base_locus(line_complex_normal_form(u), count=3, seed=0)
        assert len(points) == 3
        assert residual < 1e-8


class TestNodeSearch:
    def test_config_from_settings(self):
        config = NodeSearchConfig.from_settings({'starts': 5, 'n_jobs': 4, 'unknown': 1})
        assert config.starts == 5
        assert config.residual == 1e-10
        assert 'n_jobs' not in config.to_dict()

    @pytest.mark.parametrize('field, value', [
        ('starts', 0), ('starts', -3), ('max_iterations', 0), ('residual', 0.0), ('dedupe', -1e-6),
        ('rank_tol', 0.0),
    ])
    def test_config_rejects_nonpositive_values(self, field, value):
        with pytest.raises(SearchConfigError) as err:
            NodeSearchConfig(**{field: value})
        assert err.value.field == field

    def test_from_settings_validates_overrides(self):
        with pytest.raises(SearchConfigError):
            NodeSearchConfig.from_settings({'starts': -3})

    def test_evaluator_derivatives(self):
        v1, v2, v3, _ = V_SYMBOLS
        evaluator = QuarticEvaluator.from_poly(sympy.Poly(v1 ** 2 * v2 + 3 * v3 ** 4, *V_SYMBOLS))
        point = np.array([1, 2, 3, 4], dtype=complex)
        assert evaluator.value(point) == pytest.approx(245)
        assert np.allclose(evaluator.gradient(point), [4, 1, 324, 0])
        hess = evaluator.hessian(point)
        assert hess[0, 0] == pytest.approx(4)
        assert hess[0, 1] == pytest.approx(2)
        assert hess[2, 2] == pytest.approx(324)
        assert hess[3, 3] == 0

    def test_projective_distance_ignores_phase(self):
        v = normalize_point([3, 1, -1, 0.5])
        w = normalize_point(np.array([3, 1, -1, 0.5]) * (0.6 + 0.8j))
        assert projective_distance(v, w) == pytest.approx(0, abs=1e-12)
        assert np.allclose(v, w)

    def test_dedupe(self):
        a = NodeCandidate(tuple(normalize_point([1, 0, 0, 0])), 0.0, 0.0, 0.0, 3)
        b = NodeCandidate(tuple(normalize_point([1, 1e-9, 0, 0])), 0.0, 0.0, 0.0, 4)
        c = NodeCandidate(tuple(normalize_point([0, 1, 0, 0])), 0.0, 0.0, 0.0, 5)
        assert len(dedupe_points([a, b, c], 1e-6)) == 2

    def test_rationalize(self):
        point = np.array([2, 1, 0, -1]) * (0.3 + 0.4j)
        assert rationalize(point) == MultiVector.vector([1, Fraction(1, 2), 0, Fraction(-1, 2)])
        assert rationalize([1, 1j, 0, 0]) is None

    def test_rank_ratio_off_surface(self, u):
        assert conic_rank_ratio(np.array([1, 2, 0, -1], dtype=complex), u.to_numpy()) > 1e-6

    def test_small_search_finds_only_verified_nodes(self, u, quartic):
        census = node_census(u, quartic, NodeSearchConfig(starts=40, seed=3))
        assert census.count <= 16
        assert all(verify_node(node, u).is_node for node in census.nodes)

    def test_search_is_reproducible(self, u, quartic):
        config = NodeSearchConfig(starts=12, seed=5)
        first = node_census(u, quartic, config).to_dict()
        again = node_census(u, quartic, replace(config, n_jobs=2)).to_dict()
        assert first == again

    def test_requires_distinct_eigenvalues(self, quartic):
        with pytest.raises(RepeatedEigenvalueError):
            node_census(SelfAdjointOp.identity(), quartic, NodeSearchConfig(starts=1))


class TestCensus:
    def test_counts_from_downstairs_data(self, u, phi, lag, quartic):
        nodes = tuple(
            NodeCandidate(tuple(normalize_point([1, k, 0, 0])), 0.0, 0.0, 0.0, 1) for k in range(16)
        )
        fl = FixedLocusDownstairs(
            eigen_points=tuple(eigen_fixed_points(u, lag)),
            quadric=quadric_of_phi(phi),
            quartic=quartic,
            quartic_degree=(4, 4),
            nodes=NodeCensus(nodes, 16, NodeSearchConfig()),
            node_checks=tuple(NodeCheck(2, True, 0.0) for _ in nodes),
            lagrangian=lag,
        )
        assert len(double_cover_points(fl)) == 28
        report = census_upstairs(fl)
        assert report.counts == (28, 1, 0)
        assert report.passed
        assert {item.kind for item in report.items} >= {KIND_ISOLATED_POINT, KIND_EXCLUDED}
        assert report.to_dict()['details']['downstairs']['quadric']['determinant'] == '280'

    def test_missing_nodes_fail_the_count_certificate(self, u, phi, lag, quartic):
        fl = FixedLocusDownstairs(
            eigen_points=tuple(eigen_fixed_points(u, lag)),
            quadric=quadric_of_phi(phi),
            quartic=quartic,
            quartic_degree=(4, 4),
            nodes=NodeCensus((), 0, NodeSearchConfig()),
            node_checks=(),
            lagrangian=lag,
        )
        report = census_upstairs(fl)
        assert report.isolated_points == 12
        assert [c.name for c in report.certificates if not c.passed] == ['sixteen_nodes']

    def test_line_complex_certificates(self, u):
        normal_form = line_complex_normal_form(u)
        _, residual = sample_base_locus(normal_form, seed=42)
        certs = line_complex_certificates(normal_form, residual, 1e-8)
        assert [c.name for c in certs] == ['line_complex_normal_form', 'base_locus_on_three_quadrics']
        assert all(c.passed for c in certs)

    def test_broken_normal_form_is_named(self, u):
        normal_form = line_complex_normal_form(u)
        broken = replace(normal_form, checks={**normal_form.checks, 'G_diagonal': False})
        cert = line_complex_certificates(broken, 0.0, 1e-8)[0]
        assert not cert.passed
        assert 'G_diagonal' in cert.detail
        assert not line_complex_certificates(normal_form, 1e-3, 1e-8)[1].passed

    def test_report_carries_line_complex(self, u, phi, lag, quartic):
        normal_form = line_complex_normal_form(u)
        _, residual = sample_base_locus(normal_form, seed=42)
        fl = FixedLocusDownstairs(
            eigen_points=tuple(eigen_fixed_points(u, lag)),
            quadric=quadric_of_phi(phi),
            quartic=quartic,
            quartic_degree=(4, 4),
            nodes=NodeCensus((), 0, NodeSearchConfig()),
            node_checks=(),
            lagrangian=lag,
            normal_form=normal_form,
            base_locus_residual=residual,
        )
        section = census_upstairs(fl).to_dict()['details']['downstairs']['line_complex']
        assert section['exact']
        assert section['eigenvalues'] == ['1', '2', '3', '4', '5', '6']
        assert section['checks']['H_is_QprimeQinvQprime']
        assert all(section['checks'].values())

    def test_downstairs_threads_the_seed(self, monkeypatch):
        seen = {}

        def record(name, result):
            def fake(*args, **kwargs):
                seen[name] = kwargs.get('seed')
                return result
            return fake

        def fake_nodes(u, quartic, config):
            seen['node_census'] = config.seed
            return NodeCensus((), 0, config)

        monkeypatch.setattr(epw_census, 'check_LG_star', record('check_LG_star', []))
        monkeypatch.setattr(epw_census, 'quartic_degree_check', record('quartic_degree_check', (4, 4)))
        monkeypatch.setattr(epw_census, 'genericity_checks', record('genericity_checks', []))
        monkeypatch.setattr(epw_census, 'sample_base_locus', record('sample_base_locus', ([], 0.0)))
        monkeypatch.setattr(epw_census, 'node_census', fake_nodes)
        steps = ['check_LG_star', 'quartic_degree_check', 'node_census', 'genericity_checks', 'sample_base_locus']

        fixed_locus_downstairs(reference_instance(), NodeSearchConfig(seed=7))
        assert seen == dict.fromkeys(steps, 7)
        fixed_locus_downstairs(reference_instance())
        assert seen == dict.fromkeys(steps, 42)


class TestInstances:
    def test_reference_fixture(self, u, phi):
        instance = reference_instance()
        assert instance.name == 'reference'
        assert instance.seed == 42
        assert instance.u == u
        assert instance.phi == phi
        assert instance.node_search['starts'] == 1000
        assert instance.source == 'reference.toml'

    def test_from_data(self, u):
        assert instance_from_data(REFERENCE_DATA).u == u

    def test_explicit_matrix(self, u):
        data = {**REFERENCE_DATA, 'u': {'matrix': [[str(c) for c in row] for row in u.matrix]}}
        assert instance_from_data(data).u == u

    def test_reports_every_bad_field(self):
        data = {**REFERENCE_DATA, 'seed': -1, 'phi': {'B': [[1, 2], [2, 1]]}}
        with pytest.raises(InstanceConfigError) as err:
            instance_from_data(data)
        assert set(err.value.errors) == {'seed', 'phi'}

    @pytest.mark.parametrize('value', [0, -1e-6])
    def test_tolerances_must_be_strictly_positive(self, value):
        data = {**REFERENCE_DATA, 'tolerances': {'residual': value, 'dedupe': 1e-6, 'plucker': value}}
        with pytest.raises(InstanceConfigError) as err:
            instance_from_data(data)
        assert set(err.value.errors['tolerances']) == {'residual', 'plucker'}

    def test_both_spectrum_and_matrix(self, u):
        data = {**REFERENCE_DATA, 'u': {'eigenvalues': ['1', '2', '3', '4', '5', '6'],
                                        'matrix': [[str(c) for c in row] for row in u.matrix]}}
        with pytest.raises(InstanceConfigError):
            instance_from_data(data)

    def test_rational_strings(self):
        data = {**REFERENCE_DATA, 'u': {'eigenvalues': ['1/2', '2', '3', '4', '5', '6']}}
        assert instance_from_data(data).u.rational_eigenvalues()[0] == Fraction(1, 2)

    def test_missing_and_malformed_files(self, tmp_path):
        with pytest.raises(InstanceConfigError):
            load_instance(tmp_path / 'missing.toml')
        broken = tmp_path / 'broken.toml'
        broken.write_text('name = \n', encoding='utf-8')
        with pytest.raises(InstanceConfigError) as err:
            load_instance(broken)
        assert 'toml' in err.value.errors

    def test_eigen_point_dict(self):
        point = EigenPoint(Fraction(1, 2), None, eigen_point(Fraction(1, 2)), True)
        assert point.to_dict()['eigenvalue'] == '1/2'
