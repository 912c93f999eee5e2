"""
Pydantic models for permutation matchings and normalized chains.
"""

import numpy as np
from pydantic import BaseModel, Field, model_validator


def permutation_matrix(tau: list[int]) -> np.ndarray:
    """P with rows e_{tau(i)}, so (P A)_ii = A_{tau(i), i}. tau is 1-based."""
    n = len(tau)
    P = np.zeros((n, n))
    P[np.arange(n), np.asarray(tau) - 1] = 1.0
    return P


class MatchingResult(BaseModel):
    tau: list[int] = Field(..., description="tau(i) for i = 1..N, 1-based")
    delta: float = Field(..., description="Edge threshold A_ij >= delta")
    matched_entries: list[float] = Field(..., description="A_{tau(i), i}")

    @model_validator(mode="after")
    def _check_bijection(self) -> "MatchingResult":
        if sorted(self.tau) != list(range(1, len(self.tau) + 1)):
            raise ValueError(f"tau is not a permutation of 1..{len(self.tau)}: {self.tau}")
        return self

    def as_matrix(self) -> np.ndarray:
        return permutation_matrix(self.tau)


class HallCertificate(BaseModel):
    """Rows `violator` reach only the columns in `neighbourhood` (fewer of them)."""

    violator: list[int]
    neighbourhood: list[int]
    delta: float


class NormalizedChain(BaseModel):
    """B(n) = P(n) A(n) P(n-1)^t for n < T, with P(-1) = I."""

    horizon: int
    delta: float
    B: list[list[list[float]]]
    perms: list[list[int]] = Field(..., description="tau of P(n), n = 0..T-1")

    def as_array(self) -> np.ndarray:
        return np.array(self.B, dtype=float)

    def perm_matrices(self) -> list[np.ndarray]:
        return [permutation_matrix(t) for t in self.perms]
