"""
Self-confident, cut-balanced family.

Construction per step:
    1. symmetric random support: pair (i, j) inside the same block is linked
       with probability `density`
    2. off-diagonal weight w_ij = b_ij * u_ij, with a symmetric base
       b_ij ~ U(0.5, 1) and an asymmetry factor u_ij ~ U(1, psi) drawn per
       ordered pair, so w_ij / w_ji lies in [1/psi, psi]
    3. off-diagonals scaled by c = (1 - delta) / max_i sum_j w_ij; the diagonal
       absorbs the remainder and is therefore >= delta

Pairwise ratios bounded by psi on a symmetric support give cut-balance with
bound psi for every subset. Every supported off-diagonal entry is at least
(1 - delta) / (2 (N - 1) psi), which is the largest connectivity the family
can promise.
"""

import numpy as np

from app.config import (
    GeneratorFamily,
    GENERATION_VERIFY_MAX_N,
    GENERATION_SAMPLE_COUNT,
)
from app.engine.families.base import ChainFamily
from app.engine.subsets import first_cut_violation, first_sampled_cut_violation
from app.errors import InfeasibleParameterError
from app.models.generators import GeneratorParams


def block_labels(n: int, blocks: int) -> np.ndarray:
    """Block index of each agent; contiguous, sizes differ by at most one."""
    labels = np.empty(n, dtype=int)
    for b, members in enumerate(np.array_split(np.arange(n), blocks)):
        labels[members] = b
    return labels


def connectivity_ceiling(n: int, delta: float, psi: float) -> float:
    if n < 2:
        return 0.0
    return (1.0 - delta) / (2.0 * (n - 1) * psi)


class SelfConfidentCutBalancedFamily(ChainFamily):

    family = GeneratorFamily.SELF_CONFIDENT_CUT_BALANCED

    def validate(self, params: GeneratorParams) -> None:
        if not 0.0 < params.delta < 1.0:
            raise InfeasibleParameterError(f"delta must lie in (0, 1), got {params.delta}")
        if params.psi < 1.0:
            raise InfeasibleParameterError(f"psi must be >= 1, got {params.psi}")
        if not 0.0 < params.density <= 1.0:
            raise InfeasibleParameterError(f"density must lie in (0, 1], got {params.density}")
        if params.blocks > params.n:
            raise InfeasibleParameterError(
                f"cannot split {params.n} agents into {params.blocks} blocks"
            )
        ceiling = connectivity_ceiling(params.n, params.delta, params.psi)
        if params.connectivity > ceiling:
            raise InfeasibleParameterError(
                f"connectivity {params.connectivity:g} exceeds "
                f"(1 - delta) / (2 (N - 1) psi) = {ceiling:.6g} for delta={params.delta:g}"
            )

    def sample(self, params: GeneratorParams, rng: np.random.Generator) -> np.ndarray:
        n = params.n
        labels = block_labels(n, params.blocks)
        same_block = labels[:, None] == labels[None, :]
        upper = np.triu(rng.random((n, n)) < params.density, k=1)
        support = (upper | upper.T) & same_block

        base = np.triu(rng.uniform(0.5, 1.0, size=(n, n)), k=1)
        base = base + base.T
        factor = rng.uniform(1.0, params.psi, size=(n, n))
        weights = np.where(support, base * factor, 0.0)

        row_mass = weights.sum(axis=1)
        if row_mass.max() <= 0.0:
            return np.eye(n)
        A = weights * ((1.0 - params.delta) / row_mass.max())
        np.fill_diagonal(A, np.maximum(1.0 - A.sum(axis=1), params.delta))
        return A

    def accepts(
        self, params: GeneratorParams, A: np.ndarray, rng: np.random.Generator
    ) -> bool:
        if params.n <= GENERATION_VERIFY_MAX_N:
            return first_cut_violation(A, params.psi) is None
        return first_sampled_cut_violation(A, params.psi, GENERATION_SAMPLE_COUNT, rng) is None
