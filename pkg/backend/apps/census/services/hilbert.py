"""
Fixed-point census for the natural involution on the Hilbert square of a K3.

An involution σ of a K3 surface S with k isolated fixed points induces σ^[2]
on S^[2]. Its fixed locus consists of the C(k, 2) reduced subschemes made of
two distinct fixed points, plus one K3 surface: the closure of the locus
{p, σ(p)}.
"""

import logging
from dataclasses import dataclass
from math import comb

from apps.core.exceptions import ParityError, VerificationError
from apps.core.services.report import (
    KIND_ISOLATED_POINT,
    KIND_K3,
    CensusReport,
    Certificate,
    ProvenanceItem,
)

logger = logging.getLogger(__name__)

K3_H11 = 20


@dataclass(frozen=True)
class HilbertCensusInput:
    """k fixed points of σ on S and the trace τ_S of σ* on H^{1,1}(S)."""

    k: int = 8
    tau_s: int = 4

    def __post_init__(self):
        if self.k < 0:
            raise VerificationError(f"k must be nonnegative, got {self.k}")
        if abs(self.tau_s) > K3_H11:
            raise VerificationError(f"|tau_S| must be at most {K3_H11}, got {self.tau_s}")


@dataclass(frozen=True)
class HilbertInvariantDims:
    dim_s: int
    dim_x: int
    tau_x: int

    @property
    def deformation_dim(self):
        """Infinitesimal deformations of (S^[2], σ^[2]) are H^{1,1}(X)^i."""
        return self.dim_x


def hilbert_census(inp):
    if inp.k < 2:
        raise VerificationError(f"need at least two fixed points to pair, got k={inp.k}")
    pairs = comb(inp.k, 2)
    logger.info("Hilbert census: %d pairs of fixed points", pairs)
    return CensusReport(
        label='hilbert',
        isolated_points=pairs,
        k3_surfaces=1,
        abelian_surfaces=0,
        items=(
            ProvenanceItem(KIND_ISOLATED_POINT, pairs, 'census.hilbert_census',
                           f'unordered pairs of the {inp.k} fixed points of sigma'),
            ProvenanceItem(KIND_K3, 1, 'census.hilbert_census', 'closure of {p, sigma(p)} for p not fixed'),
        ),
        certificates=(
            Certificate('pair_count', pairs == inp.k * (inp.k - 1) // 2, f'C({inp.k},2) = {pairs}',
                        'census.hilbert_census'),
        ),
        details={'k': inp.k, 'tau_S': inp.tau_s},
    )


def hilbert_invariant_dims(inp):
    """
    Invariant parts of H^{1,1} on S and on X = S^[2].

    H^{1,1}(X)^i = H^{1,1}(S)^σ ⊕ Ce, with the exceptional class e invariant.
    """
    if (K3_H11 - inp.tau_s) % 2:
        raise ParityError(f"tau_S={inp.tau_s} must have the parity of h^(1,1)(S)={K3_H11}")
    dim_s = (K3_H11 + inp.tau_s) // 2
    dims = HilbertInvariantDims(dim_s=dim_s, dim_x=dim_s + 1, tau_x=inp.tau_s + 1)
    if (K3_H11 + 1 + dims.tau_x) // 2 != dims.dim_x:
        raise VerificationError(f"eigenvalue count mismatch for tau_X={dims.tau_x}")
    return dims
