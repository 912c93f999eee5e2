"""
Pydantic models for absolute probability sequences and the induced forward chain.
"""

from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class AbsProbApprox(BaseModel):
    """pi(0..T) obtained by backward propagation from a chosen terminal pi(T)."""

    model_config = ConfigDict(frozen=True)

    horizon: int = Field(..., ge=0)
    pi: list[list[float]] = Field(..., description="pi(n) for n = 0..T, one row per step")
    terminal: list[float] = Field(..., description="The chosen pi(T)")

    def as_array(self) -> np.ndarray:
        return np.array(self.pi, dtype=float)


class ForwardChain(BaseModel):
    """P(n) for n = 0..T-1 and the joint flows r_ij(n) = pi_i(n) P_ij(n)."""

    model_config = ConfigDict(frozen=True)

    matrices: list[list[list[float]]]
    rij: list[list[list[float]]]

    def as_array(self) -> np.ndarray:
        return np.array(self.matrices, dtype=float)

    def rij_array(self) -> np.ndarray:
        return np.array(self.rij, dtype=float)


class DualityReport(BaseModel):
    max_residual: float
    passed: bool
    location: Optional[tuple[int, int, int]] = Field(
        None, description="(n, i, j) of the largest residual; i, j are 1-based"
    )
    tolerance: float


class TerminalSensitivity(BaseModel):
    """Gap ||pi_a(0) - pi_b(0)||_inf between two terminals, per horizon."""

    horizons: list[int]
    gaps: list[float]
