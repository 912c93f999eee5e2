"""
Pydantic models for stochastic matrices, chain specifications and trajectories.
"""

from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.config import ChainKind, TailPolicy, GeneratorFamily


class StochasticMatrix(BaseModel):
    """One N x N row-stochastic update matrix A(n).

    Build instances through engine.chain_core.validate_stochastic, which
    enforces nonnegativity and unit row sums.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1, description="Agent count N")
    entries: tuple[tuple[float, ...], ...] = Field(
        ..., description="Row-major entries A_ij (dimensionless weights)"
    )

    @model_validator(mode="after")
    def _check_square(self) -> "StochasticMatrix":
        if len(self.entries) != self.n or any(len(r) != self.n for r in self.entries):
            raise ValueError(f"entries must be {self.n}x{self.n}")
        return self

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=float)


class ChainSpec(BaseModel):
    """Finite description of an infinite chain {A(n)}."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1)
    kind: ChainKind

    # static: exactly one matrix; periodic/explicit: one or more
    matrices: tuple[StochasticMatrix, ...] = ()
    tail: Optional[TailPolicy] = None

    # generator kind
    family: Optional[GeneratorFamily] = None
    params: dict[str, float] = Field(default_factory=dict)
    seed: int = Field(0, ge=0)

    @model_validator(mode="after")
    def _check_kind(self) -> "ChainSpec":
        if self.kind == ChainKind.GENERATOR:
            if self.family is None:
                raise ValueError("generator chains need a family")
            return self
        if not self.matrices:
            raise ValueError(f"{self.kind.value} chains need at least one matrix")
        if self.kind == ChainKind.STATIC and len(self.matrices) != 1:
            raise ValueError("static chains hold exactly one matrix")
        if self.kind == ChainKind.EXPLICIT and self.tail is None:
            raise ValueError("explicit chains need a tail policy")
        for m in self.matrices:
            if m.n != self.n:
                raise ValueError(f"matrix of size {m.n} in a chain of size {self.n}")
        return self


class StateVector(BaseModel):
    """Agent states X(n) (arbitrary units)."""

    model_config = ConfigDict(frozen=True)

    values: tuple[float, ...]

    @model_validator(mode="after")
    def _check_finite(self) -> "StateVector":
        if not np.all(np.isfinite(self.values)):
            raise ValueError("state entries must be finite")
        return self

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)


class TrajectoryRecord(BaseModel):
    """States X(0..T) with the spread and sorted-state diagnostics."""

    horizon: int
    states: list[StateVector]
    spread: list[float]             # max_i X_i(n) - min_i X_i(n)
    sorted_states: list[list[float]]  # z(n), nondecreasing rearrangement

    def as_array(self) -> np.ndarray:
        return np.array([s.values for s in self.states], dtype=float)
