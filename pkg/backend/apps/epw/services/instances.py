"""
Loading EPW instances (u, φ, tolerances, seed) from TOML files.
"""

import logging
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field
from pathlib import Path

from django.conf import settings

from apps.core.exceptions import InstanceConfigError
from apps.epw.serializers import InstanceConfigSerializer

from .lagrangian import SelfAdjointOp, SymmetricPhi

logger = logging.getLogger(__name__)

DEFAULT_FIXTURES_DIR = Path(__file__).resolve().parent.parent / 'fixtures'
REFERENCE_FILE = 'reference.toml'


@dataclass(frozen=True)
class EPWInstance:
    name: str
    u: SelfAdjointOp
    phi: SymmetricPhi
    seed: int = 0
    tolerances: dict = field(default_factory=dict)
    node_search: dict = field(default_factory=dict)
    decomposable_budget: int = 0
    source: str = ''

    def to_dict(self):
        return {
            'name': self.name,
            'source': self.source,
            'seed': self.seed,
            'u': [[str(c) for c in row] for row in self.u.matrix],
            'B': [[str(c) for c in row] for row in self.phi.matrix],
            'tolerances': self.tolerances,
            'node_search': self.node_search,
            'decomposable_budget': self.decomposable_budget,
        }


def instance_from_data(data, source=''):
    """
    Validate a parsed instance document and build the operators.

    Raises:
        InstanceConfigError: carries the serializer's error dictionary
    """
    serializer = InstanceConfigSerializer(data=data)
    if not serializer.is_valid():
        raise InstanceConfigError(serializer.errors)
    values = serializer.validated_data
    spec_u = values['u']
    if 'matrix' in spec_u:
        u = SelfAdjointOp(tuple(tuple(r) for r in spec_u['matrix']))
    else:
        u = SelfAdjointOp.from_spectrum(spec_u['eigenvalues'], spec_u['eigenbasis'])
    phi = SymmetricPhi(tuple(tuple(r) for r in values['phi']['B']))
    return EPWInstance(
        name=values['name'],
        u=u,
        phi=phi,
        seed=values['seed'],
        tolerances=dict(values.get('tolerances', {})),
        node_search=dict(values.get('node_search', {})),
        decomposable_budget=values.get('decomposable_search', {}).get('budget', 0),
        source=source,
    )


def load_instance(path):
    path = Path(path)
    try:
        with path.open('rb') as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise InstanceConfigError({'path': [f'{path} does not exist']}) from None
    except tomllib.TOMLDecodeError as exc:
        raise InstanceConfigError({'toml': [str(exc)]}) from exc
    instance = instance_from_data(data, source=path.name)
    logger.info("loaded instance %r from %s", instance.name, path)
    return instance


def reference_instance():
    fixtures = Path(getattr(settings, 'EPW_FIXTURES_DIR', DEFAULT_FIXTURES_DIR))
    return load_instance(fixtures / REFERENCE_FILE)
