"""
Swap chain A = [[0, 1], [1, 0]]: backward products alternate between I and A.
"""

import numpy as np

from app.config import GeneratorFamily
from app.engine.families.base import ChainFamily
from app.errors import UnsupportedSizeError
from app.models.generators import GeneratorParams

SWAP = np.array([[0.0, 1.0], [1.0, 0.0]])


class PeriodicSwapFamily(ChainFamily):

    family = GeneratorFamily.PERIODIC_SWAP

    def validate(self, params: GeneratorParams) -> None:
        if params.n != 2:
            raise UnsupportedSizeError(f"periodic swap is defined for n = 2 only, got {params.n}")

    def sample(self, params: GeneratorParams, rng: np.random.Generator) -> np.ndarray:
        return SWAP.copy()
