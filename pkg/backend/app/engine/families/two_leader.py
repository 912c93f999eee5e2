"""
Two-leader family: agents {1..N//2} and {N//2+1..N} never exchange weight.

Each block mixes internally with 0.5*I + 0.5*D, D a random doubly stochastic
matrix on the block, so both blocks are leaders (zero influence from their
complement) and the chain cannot reach unconditional consensus.
"""

import numpy as np

from app.config import GeneratorFamily
from app.engine.families.base import ChainFamily, random_doubly_stochastic
from app.errors import DomainError
from app.models.generators import GeneratorParams


def leader_blocks(n: int) -> tuple[list[int], list[int]]:
    """The two leader blocks as 1-based agent labels."""
    half = n // 2
    return list(range(1, half + 1)), list(range(half + 1, n + 1))


class TwoLeaderFamily(ChainFamily):

    family = GeneratorFamily.TWO_LEADER

    def validate(self, params: GeneratorParams) -> None:
        if params.n < 2:
            raise DomainError(f"two-leader chains need n >= 2, got {params.n}")

    def sample(self, params: GeneratorParams, rng: np.random.Generator) -> np.ndarray:
        n = params.n
        A = np.zeros((n, n))
        for block in leader_blocks(n):
            idx = np.array(block) - 1
            m = len(idx)
            A[np.ix_(idx, idx)] = 0.5 * np.eye(m) + 0.5 * random_doubly_stochastic(m, rng)
        return A
