"""
Doubly stochastic family.

Each A(n) is a random convex combination of at most N permutation matrices
(Birkhoff form), so row and column sums are both 1 and the uniform vector is a
left fixed vector at every step.
"""

import numpy as np

from app.config import GeneratorFamily
from app.engine.families.base import ChainFamily, random_doubly_stochastic
from app.models.generators import GeneratorParams


class DoublyStochasticFamily(ChainFamily):

    family = GeneratorFamily.DOUBLY_STOCHASTIC

    def sample(self, params: GeneratorParams, rng: np.random.Generator) -> np.ndarray:
        return random_doubly_stochastic(params.n, rng)
