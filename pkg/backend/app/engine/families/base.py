"""
Abstract base class for seeded chain families.
"""

import logging
from abc import ABC, abstractmethod

import numpy as np

from app.config import GeneratorFamily, REJECTION_BUDGET
from app.errors import ResamplingBudgetError
from app.models.generators import GeneratorParams

logger = logging.getLogger(__name__)


def step_rng(seed: int, step: int) -> np.random.Generator:
    """Counter-based generator: the draw for step n depends only on (seed, n)."""
    return np.random.default_rng([seed, step])


class ChainFamily(ABC):
    """Base class for all generator families.

    Subclasses produce one candidate matrix per call to `sample`; families with
    a certified property override `accepts`, and `draw` rejection-samples
    against it with a fixed per-step budget.
    """

    family: GeneratorFamily

    def validate(self, params: GeneratorParams) -> None:
        """Raise if params are outside the family's documented range."""

    @abstractmethod
    def sample(self, params: GeneratorParams, rng: np.random.Generator) -> np.ndarray:
        """Draw one candidate N x N row-stochastic matrix."""
        ...

    def accepts(
        self, params: GeneratorParams, A: np.ndarray, rng: np.random.Generator
    ) -> bool:
        return True

    def draw(self, params: GeneratorParams, step: int) -> tuple[np.ndarray, int]:
        """Return (A(step), number of rejected candidates)."""
        rng = step_rng(params.seed, step)
        for rejected in range(REJECTION_BUDGET):
            A = self.sample(params, rng)
            if self.accepts(params, A, rng):
                if rejected:
                    logger.debug(
                        "%s: step %d accepted after %d rejections",
                        self.family.value, step, rejected,
                    )
                return A, rejected
        raise ResamplingBudgetError(self.family.value, step, REJECTION_BUDGET)


def random_permutation_matrix(n: int, rng: np.random.Generator) -> np.ndarray:
    return np.eye(n)[rng.permutation(n)]


def random_doubly_stochastic(n: int, rng: np.random.Generator) -> np.ndarray:
    """Dirichlet-weighted convex combination of at most n permutation matrices."""
    k = int(rng.integers(1, n + 1))
    weights = rng.dirichlet(np.ones(k))
    A = np.zeros((n, n))
    for w in weights:
        A += w * random_permutation_matrix(n, rng)
    return A
