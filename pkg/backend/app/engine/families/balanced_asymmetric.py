"""
Balanced asymmetric family.

Candidates are row permutations of random doubly stochastic matrices (these
satisfy the balanced-asymmetry inequality with psi = 1, since permuting rows
only relabels M_1), optionally mixed with a random row-stochastic
perturbation:

    A = (1 - p) * Q D + p * R

Every candidate is verified against psi (exhaustively for N <= 6, on sampled
subset pairs above) and rejected on failure.
"""

import numpy as np

from app.config import (
    GeneratorFamily,
    GENERATION_VERIFY_MAX_N,
    GENERATION_SAMPLE_COUNT,
)
from app.engine.families.base import (
    ChainFamily,
    random_doubly_stochastic,
    random_permutation_matrix,
)
from app.engine.subsets import first_balance_violation, first_sampled_balance_violation
from app.errors import InfeasibleParameterError
from app.models.generators import GeneratorParams


class BalancedAsymmetricFamily(ChainFamily):

    family = GeneratorFamily.BALANCED_ASYMMETRIC

    def validate(self, params: GeneratorParams) -> None:
        if params.n < 2:
            raise InfeasibleParameterError(f"n must be >= 2, got {params.n}")
        if params.psi < 1.0:
            raise InfeasibleParameterError(f"psi must be >= 1, got {params.psi}")
        if not 0.0 <= params.perturbation < 1.0:
            raise InfeasibleParameterError(
                f"perturbation must lie in [0, 1), got {params.perturbation}"
            )

    def sample(self, params: GeneratorParams, rng: np.random.Generator) -> np.ndarray:
        n = params.n
        A = random_permutation_matrix(n, rng) @ random_doubly_stochastic(n, rng)
        if params.perturbation > 0.0:
            R = rng.dirichlet(np.ones(n), size=n)
            A = (1.0 - params.perturbation) * A + params.perturbation * R
        return A

    def accepts(
        self, params: GeneratorParams, A: np.ndarray, rng: np.random.Generator
    ) -> bool:
        if params.n <= GENERATION_VERIFY_MAX_N:
            return first_balance_violation(A, params.psi) is None
        return first_sampled_balance_violation(
            A, params.psi, GENERATION_SAMPLE_COUNT, rng
        ) is None
