"""
End-to-end census of the reference instance.

These run the full Newton node search (1000 starts) and take a while;
deselect with ``-m "not slow"``.
"""

import pytest

from apps.core.services.runner import RunConfig, run
from apps.epw.services.census import census_upstairs, fixed_locus_downstairs
from apps.epw.services.instances import reference_instance
from apps.epw.services.node_search import NodeSearchConfig

pytestmark = pytest.mark.slow


@pytest.fixture(scope='module')
def instance():
    return reference_instance()


@pytest.fixture(scope='module')
def config(instance):
    return NodeSearchConfig.from_settings({**instance.node_search, 'seed': instance.seed})


@pytest.fixture(scope='module')
def downstairs(instance, config):
    return fixed_locus_downstairs(instance, config)


def test_sixteen_nodes(downstairs):
    assert downstairs.nodes.count == 16
    assert all(check.is_node for check in downstairs.node_checks)


def test_line_complex_is_reported(downstairs):
    names = {c.name: c.passed for c in downstairs.certificates}
    assert names['line_complex_normal_form']
    assert names['base_locus_on_three_quadrics']
    assert downstairs.to_dict()['line_complex']['checks']['H_is_QprimeQinvQprime']


def test_upstairs_census(downstairs):
    report = census_upstairs(downstairs)
    assert report.counts == (28, 1, 0)
    failed = [c.name for c in report.certificates if not c.passed]
    assert failed == []


def test_full_suite_cross_validates(instance, config):
    builder = run(RunConfig('all', instance.seed, instance, config, 'reference.toml'))
    assert set(builder.censuses) == {'hilbert', 'fano', 'epw'}
    cross = [cert for section, cert in builder.certificates if section == 'cross_validation']
    assert [c.name for c in cross][-1] == 'censuses_agree'
    assert all(c.passed for c in cross)
    assert builder.passed
