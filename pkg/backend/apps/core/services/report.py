"""
Certificates, census reports and the report document.

A report is rendered as one JSON document with a fixed key order and no
timestamps, so identical runs produce byte-identical files. The SHA-256 of the
rendered text is the run fingerprint shown in the summary and stored with
recorded runs.
"""

import hashlib
import json
from dataclasses import dataclass, field

REPORT_FORMAT_VERSION = 1

KIND_ISOLATED_POINT = 'isolated_point'
KIND_K3 = 'k3_surface'
KIND_ABELIAN = 'abelian_surface'
KIND_EXCLUDED = 'not_fixed'


@dataclass(frozen=True)
class Certificate:
    """
    Outcome of one verifiable claim.

    source names the operation that produced it; hypothesis names the
    assumption that is violated when the certificate fails.
    """

    name: str
    passed: bool
    detail: str = ''
    source: str = ''
    hypothesis: str = ''

    def to_dict(self):
        return {
            'name': self.name,
            'passed': self.passed,
            'source': self.source,
            'hypothesis': self.hypothesis,
            'detail': self.detail,
        }


@dataclass(frozen=True)
class ProvenanceItem:
    kind: str
    count: int
    source: str
    note: str = ''

    def to_dict(self):
        return {'kind': self.kind, 'count': self.count, 'source': self.source, 'note': self.note}


@dataclass(frozen=True)
class CensusReport:
    """
    Fixed-locus census (N isolated points, K K3 surfaces, abelian surfaces).

    Every counted object is covered by a provenance item; the per-kind sums
    of the items must reproduce the three counts.
    """

    label: str
    isolated_points: int
    k3_surfaces: int
    abelian_surfaces: int
    items: tuple = ()
    certificates: tuple = ()
    conventions: tuple = ()
    details: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for name in ('isolated_points', 'k3_surfaces', 'abelian_surfaces'):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        expected = {
            KIND_ISOLATED_POINT: self.isolated_points,
            KIND_K3: self.k3_surfaces,
            KIND_ABELIAN: self.abelian_surfaces,
        }
        for kind, count in expected.items():
            covered = sum(item.count for item in self.items if item.kind == kind)
            if covered != count:
                raise ValueError(f"provenance covers {covered} objects of kind {kind}, report counts {count}")

    @property
    def counts(self):
        return (self.isolated_points, self.k3_surfaces, self.abelian_surfaces)

    @property
    def passed(self):
        return all(c.passed for c in self.certificates)

    def to_dict(self):
        return {
            'label': self.label,
            'N': self.isolated_points,
            'K': self.k3_surfaces,
            'abelian': self.abelian_surfaces,
            'items': [item.to_dict() for item in self.items],
            'conventions': list(self.conventions),
            'certificates': [c.to_dict() for c in self.certificates],
            'details': self.details,
        }


def first_failure(certificates):
    return next((c for c in certificates if not c.passed), None)


def render(document):
    """
    Serialize a report document.

    Returns:
        (text, sha256 hex digest of text)
    """
    text = json.dumps(document, indent=2, ensure_ascii=False) + '\n'
    return text, hashlib.sha256(text.encode('utf-8')).hexdigest()


def digest_of(text):
    return hashlib.sha256(text.encode('utf-8')).hexdigest()
