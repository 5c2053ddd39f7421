"""
Numeric census of the singular points of the Kummer surface S.

Each start draws a random affine chart v = p₀ + Pz of P(V⁺) (z ∈ C³) and runs
damped Newton on Pᵀ∇K(v) = 0. Converged points are kept when the full
gradient of K vanishes and the conic matrix of v∧V⁺ drops to rank 1. Starts
are independent: each gets its own child seed, so the result does not
depend on how the starts are spread over workers.
"""

import logging
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from joblib import Parallel, delayed

from apps.core.exceptions import RepeatedEigenvalueError, SearchConfigError
from apps.core.services.report import Certificate
from apps.exalg.services.multivector import MultiVector

from .fixed_locus import kummer_membership
from .lagrangian import PLUCKER, PLUS_DIM, WEDGE2_TUPLES

logger = logging.getLogger(__name__)

DIVERGENCE_BOUND = 1e8
DAMPING_STEPS = 8
RATIONALIZE_DENOMINATOR = 10 ** 6


@dataclass(frozen=True)
class NodeSearchConfig:
    starts: int = 1000
    max_iterations: int = 60
    residual: float = 1e-10
    dedupe: float = 1e-6
    rank_tol: float = 1e-8
    n_jobs: int = 1
    seed: int = 0
    expected_nodes: int = 16

    def __post_init__(self):
        for field in ('starts', 'max_iterations', 'residual', 'dedupe', 'rank_tol'):
            value = getattr(self, field)
            if not value > 0:
                raise SearchConfigError(field, value)

    @classmethod
    def from_settings(cls, overrides=None):
        from django.conf import settings

        values = {**getattr(settings, 'NODE_SEARCH', {}), **(overrides or {})}
        tolerances = getattr(settings, 'CENSUS_TOLERANCES', {})
        values.setdefault('residual', tolerances.get('residual', cls.residual))
        values.setdefault('dedupe', tolerances.get('dedupe', cls.dedupe))
        values.setdefault('rank_tol', tolerances.get('rank', cls.rank_tol))
        known = cls.__dataclass_fields__.keys()
        return cls(**{k: v for k, v in values.items() if k in known})

    def to_dict(self):
        """Everything except n_jobs, which does not affect results."""
        values = asdict(self)
        values.pop('n_jobs')
        return values


class QuarticEvaluator:
    """Value, gradient and Hessian of a polynomial given by exponents and coefficients."""

    def __init__(self, exponents, coefficients):
        self.exponents = np.asarray(exponents, dtype=int)
        self.coefficients = np.asarray(coefficients, dtype=complex)
        self.scale = float(np.max(np.abs(self.coefficients))) if len(self.coefficients) else 1.0

    @classmethod
    def from_poly(cls, poly):
        terms = poly.terms()
        return cls([monom for monom, _ in terms], [complex(coeff) for _, coeff in terms])

    def _monomials(self, v, exponents):
        return np.prod(np.power(v[None, :], np.maximum(exponents, 0)), axis=1)

    def value(self, v):
        return complex(self.coefficients @ self._monomials(v, self.exponents))

    def gradient(self, v):
        grad = np.empty(len(v), dtype=complex)
        for k in range(len(v)):
            shifted = self.exponents.copy()
            shifted[:, k] -= 1
            grad[k] = (self.coefficients * self.exponents[:, k]) @ self._monomials(v, shifted)
        return grad

    def hessian(self, v):
        n = len(v)
        hess = np.empty((n, n), dtype=complex)
        for i in range(n):
            for j in range(i, n):
                shifted = self.exponents.copy()
                shifted[:, i] -= 1
                factor = self.exponents[:, i].astype(complex)
                factor = factor * (shifted[:, j])
                shifted[:, j] -= 1
                hess[i, j] = hess[j, i] = (self.coefficients * factor) @ self._monomials(v, shifted)
        return hess


def normalize_point(v):
    """Unit vector with the largest-modulus coordinate real and positive."""
    v = np.asarray(v, dtype=complex)
    k = int(np.argmax(np.abs(v)))
    v = v * (abs(v[k]) / v[k])
    return v / np.linalg.norm(v)


def projective_distance(a, b):
    """sqrt(1 − |⟨a, b⟩|²) for unit vectors; invariant under phases."""
    overlap = min(1.0, abs(np.vdot(a, b)))
    return float(np.sqrt(max(0.0, 1.0 - overlap ** 2)))


def conic_rank_ratio(v, u_matrix):
    """
    σ₂/σ₁ of N = Wᵀ Uᵀ G W with W the 6×4 matrix of v ∧ eᵢ.

    N has rank 3 off S, rank 2 on S and rank 1 at a node.
    """
    columns = []
    for i in range(PLUS_DIM):
        col = np.zeros(len(WEDGE2_TUPLES), dtype=complex)
        for pos, (a, b) in enumerate(WEDGE2_TUPLES):
            if b == i + 1:
                col[pos] += v[a - 1]
            if a == i + 1:
                col[pos] -= v[b - 1]
        columns.append(col)
    w = np.column_stack(columns)
    n = w.T @ u_matrix.T @ PLUCKER.numeric_gram() @ w
    s = np.linalg.svd(n, compute_uv=False)
    return float(s[1] / s[0]) if s[0] > 0 else 0.0


@dataclass(frozen=True)
class NodeCandidate:
    point: tuple
    residual: float
    value: float
    rank_ratio: float
    iterations: int

    @property
    def vector(self):
        return np.array(self.point, dtype=complex)


def _newton(evaluator, p0, chart, z, config):
    """Damped Newton on Pᵀ∇K(p₀ + Pz); returns (z, iterations) or None on degeneracy."""
    def system(z):
        v = p0 + chart @ z
        return chart.T @ evaluator.gradient(v)

    f = system(z)
    for iteration in range(1, config.max_iterations + 1):
        v = p0 + chart @ z
        jac = chart.T @ evaluator.hessian(v) @ chart
        try:
            step = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            return None
        t = 1.0
        for _ in range(DAMPING_STEPS):
            trial = z + t * step
            f_trial = system(trial)
            if np.linalg.norm(f_trial) < np.linalg.norm(f) or t < 2 ** -(DAMPING_STEPS - 1):
                break
            t /= 2
        z, f = trial, f_trial
        if not np.all(np.isfinite(z)) or np.linalg.norm(z) > DIVERGENCE_BOUND:
            return None
        if np.linalg.norm(t * step) <= 1e-14 * (1 + np.linalg.norm(z)):
            return z, iteration
    return z, config.max_iterations


def _run_start(seed_sequence, evaluator, u_matrix, config):
    rng = np.random.default_rng(seed_sequence)
    for _ in range(3):
        p0 = rng.normal(size=PLUS_DIM) + 1j * rng.normal(size=PLUS_DIM)
        chart = rng.normal(size=(PLUS_DIM, 3)) + 1j * rng.normal(size=(PLUS_DIM, 3))
        z0 = rng.normal(size=3) + 1j * rng.normal(size=3)
        outcome = _newton(evaluator, p0, chart, z0, config)
        if outcome is not None:
            break
    else:
        return None
    z, iterations = outcome
    v = normalize_point(p0 + chart @ z)
    residual = float(np.linalg.norm(evaluator.gradient(v)) / evaluator.scale)
    value = abs(evaluator.value(v)) / evaluator.scale
    if residual > config.residual:
        return None
    ratio = conic_rank_ratio(v, u_matrix)
    return NodeCandidate(tuple(complex(c) for c in v), residual, value, ratio, iterations)


def _sort_key(candidate):
    return tuple((round(c.real, 8), round(c.imag, 8)) for c in candidate.point)


def dedupe_points(candidates, tol):
    """Greedy deduplication in sorted order with the projective distance."""
    kept = []
    for cand in sorted(candidates, key=_sort_key):
        if all(projective_distance(cand.vector, k.vector) > tol for k in kept):
            kept.append(cand)
    return kept


@dataclass(frozen=True)
class NodeCensus:
    nodes: tuple
    candidates: int
    config: NodeSearchConfig

    @property
    def count(self):
        return len(self.nodes)

    def to_dict(self):
        return {
            'count': self.count,
            'candidates': self.candidates,
            'config': self.config.to_dict(),
            'nodes': [
                {
                    'point': [[round(c.real, 12), round(c.imag, 12)] for c in node.point],
                    'residual': node.residual,
                    'rank_ratio': node.rank_ratio,
                }
                for node in self.nodes
            ],
        }


def node_census(u, quartic, config=None):
    """
    Multistart search for the nodes of S.

    Args:
        u: SelfAdjointOp with distinct eigenvalues
        quartic: sympy Poly of the Kummer surface (see kummer_quartic)
        config: NodeSearchConfig

    Raises:
        RepeatedEigenvalueError: u has a repeated eigenvalue
    """
    config = config or NodeSearchConfig()
    if not u.has_distinct_eigenvalues():
        raise RepeatedEigenvalueError("node search needs u with distinct eigenvalues")
    evaluator = QuarticEvaluator.from_poly(quartic)
    u_matrix = u.to_numpy()
    seeds = np.random.SeedSequence(config.seed).spawn(config.starts)
    logger.info("node search: %d starts on %d worker(s)", config.starts, config.n_jobs)
    results = Parallel(n_jobs=config.n_jobs)(
        delayed(_run_start)(s, evaluator, u_matrix, config) for s in seeds
    )
    converged = [r for r in results if r is not None]
    nodes = [c for c in converged if c.rank_ratio <= config.rank_tol]
    unique = dedupe_points(nodes, config.dedupe)
    logger.info("node search: %d converged, %d rank-1 points, %d distinct", len(converged), len(nodes), len(unique))
    if len(unique) != config.expected_nodes:
        logger.warning("found %d nodes, expected %d", len(unique), config.expected_nodes)
    return NodeCensus(tuple(unique), len(converged), config)


@dataclass(frozen=True)
class NodeCheck:
    membership: Optional[int]
    exact: bool
    rank_ratio: float

    @property
    def is_node(self):
        return self.membership == 2


def rationalize(point, tol=1e-9, max_denominator=RATIONALIZE_DENOMINATOR):
    """
    Continued-fraction rounding of a numeric point of P(V⁺).

    Returns None unless the phase-normalized point is real to within tol.
    """
    v = np.asarray(point, dtype=complex)
    k = int(np.argmax(np.abs(v)))
    v = v / v[k]
    if np.max(np.abs(v.imag)) > tol:
        return None
    coords = [Fraction(float(c.real)).limit_denominator(max_denominator) for c in v]
    return MultiVector.vector(coords)


def verify_node(node, u, rank_tol=1e-8):
    """
    Re-check a node: exact kummer_membership after rationalization when the
    point is real, otherwise the numeric rank test.
    """
    exact_point = rationalize(node.point)
    if exact_point is not None:
        membership = kummer_membership(exact_point, u)
        if membership == 2:
            return NodeCheck(2, True, 0.0)
    ratio = conic_rank_ratio(node.vector, u.to_numpy())
    return NodeCheck(2 if ratio <= rank_tol else None, False, ratio)


def _plane_newton(evaluator, b, p0, chart, z, iterations):
    def system(z):
        v = p0 + chart @ z
        return np.array([v @ b @ v, evaluator.value(v)])

    for _ in range(iterations):
        v = p0 + chart @ z
        jac = np.vstack([2 * (b @ v), evaluator.gradient(v)]) @ chart
        try:
            step = np.linalg.solve(jac, -system(z))
        except np.linalg.LinAlgError:
            return None
        z = z + step
        if not np.all(np.isfinite(z)) or np.linalg.norm(z) > DIVERGENCE_BOUND:
            return None
        if np.linalg.norm(step) <= 1e-14 * (1 + np.linalg.norm(z)):
            break
    return p0 + chart @ z


def sample_quadric_kummer_points(quadric, quartic, count=8, seed=0, max_iterations=60, residual=1e-10):
    """
    Points of Q ∩ S on random planes, found by Newton in a 2-dimensional chart.

    Returns:
        list of unit vectors whose normalized residual is below residual
    """
    evaluator = QuarticEvaluator.from_poly(quartic)
    b = quadric.to_numpy()
    rng = np.random.default_rng(seed)
    points = []
    for _ in range(count * 4):
        p0 = rng.normal(size=PLUS_DIM) + 1j * rng.normal(size=PLUS_DIM)
        chart = rng.normal(size=(PLUS_DIM, 2)) + 1j * rng.normal(size=(PLUS_DIM, 2))
        v = _plane_newton(evaluator, b, p0, chart, rng.normal(size=2) + 1j * rng.normal(size=2), max_iterations)
        if v is None:
            continue
        v = normalize_point(v)
        q_res = abs(v @ b @ v) / np.max(np.abs(b))
        k_res = abs(evaluator.value(v)) / evaluator.scale
        if max(q_res, k_res) <= residual:
            points.append(v)
        if len(points) == count:
            break
    return points


def genericity_checks(census, quadric, quartic, seed=0, off_quadric_tol=1e-6, rank_tol=1e-8):
    """
    Per-instance replacements for "Q general enough".

    Certificates: no node lies on Q, Q ∩ S is smooth at sampled points, the
    reported nodes are pairwise distinct.
    """
    source = 'epw.genericity_checks'
    b = quadric.to_numpy()
    b_scale = float(np.max(np.abs(b)))
    distances = [abs(node.vector @ b @ node.vector) / b_scale for node in census.nodes]
    certs = [Certificate(
        'nodes_off_quadric', bool(distances) and min(distances) > off_quadric_tol,
        f"min |B(v,v)| over {len(distances)} nodes = {min(distances) if distances else 'n/a'}",
        source, 'no node of S lies on Q',
    )]

    evaluator = QuarticEvaluator.from_poly(quartic)
    samples = sample_quadric_kummer_points(quadric, quartic, seed=seed)
    ratios = []
    for v in samples:
        jac = np.vstack([2 * (b @ v) / b_scale, evaluator.gradient(v) / evaluator.scale])
        s = np.linalg.svd(jac, compute_uv=False)
        ratios.append(float(s[1] / s[0]))
    certs.append(Certificate(
        'quadric_kummer_smooth', bool(ratios) and min(ratios) > rank_tol,
        f"{len(ratios)} sampled points of Q∩S, min σ2/σ1 = {min(ratios) if ratios else 'n/a'}",
        source, 'Q ∩ S is a smooth curve',
    ))

    pairs = [
        projective_distance(first.vector, second.vector)
        for i, first in enumerate(census.nodes) for second in census.nodes[i + 1:]
    ]
    certs.append(Certificate(
        'nodes_distinct', all(d > census.config.dedupe for d in pairs),
        f"min pairwise distance = {min(pairs) if pairs else 'n/a'}", source, 'nodes are isolated',
    ))
    for cert in certs:
        (logger.info if cert.passed else logger.warning)("genericity %s: %s", cert.name, cert.passed)
    return certs
