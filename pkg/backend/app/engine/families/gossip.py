"""
Randomized pairwise gossip.

At every step one uniformly drawn pair (i, j) averages with weight w:

    A = I - w (e_i - e_j)(e_i - e_j)^t

A is symmetric and doubly stochastic with diagonal >= 1 - w.
"""

import numpy as np

from app.config import GeneratorFamily
from app.engine.families.base import ChainFamily
from app.errors import InfeasibleParameterError
from app.models.generators import GeneratorParams


class GossipFamily(ChainFamily):

    family = GeneratorFamily.GOSSIP

    def validate(self, params: GeneratorParams) -> None:
        if params.n < 2:
            raise InfeasibleParameterError(f"gossip needs n >= 2, got {params.n}")
        if not 0.0 < params.weight <= 0.5:
            raise InfeasibleParameterError(
                f"gossip weight must lie in (0, 0.5], got {params.weight}"
            )

    def sample(self, params: GeneratorParams, rng: np.random.Generator) -> np.ndarray:
        i, j = rng.choice(params.n, size=2, replace=False)
        d = np.zeros(params.n)
        d[i], d[j] = 1.0, -1.0
        return np.eye(params.n) - params.weight * np.outer(d, d)
