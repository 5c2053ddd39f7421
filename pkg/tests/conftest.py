import pytest

from apps.core.services.records import record_run
from apps.core.services.runner import RunConfig, run


@pytest.fixture
def recorded_run(db):
    """A passing hilbert run stored in the database."""
    builder = run(RunConfig('hilbert'))
    return record_run(builder, *builder.render())


@pytest.fixture
def failing_instance(tmp_path):
    path = tmp_path / 'broken.toml'
    path.write_text('name = "broken"\n\n[u]\neigenvalues = ["1", "2"]\n\n[phi]\nB = [[1, 0], [0, 1]]\n')
    return path
