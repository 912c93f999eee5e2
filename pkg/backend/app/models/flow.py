"""
Pydantic models for jets, flow graphs, islands and jet-flow series.
"""

from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class Jet(BaseModel):
    """A sequence of agent subsets J(0..T) followed by a constant tail.

    Subsets hold sorted 1-based agent labels. A proper jet is nonempty and
    strictly smaller than M at every step, tail included.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1, description="Agent count N")
    horizon: int = Field(..., ge=0)
    subsets: list[list[int]]
    tail: list[int]
    proper: bool = True

    @model_validator(mode="before")
    @classmethod
    def _sort_members(cls, data):
        if isinstance(data, dict):
            data = dict(data)
            if "subsets" in data:
                data["subsets"] = [sorted(set(s)) for s in data["subsets"]]
            if "tail" in data:
                data["tail"] = sorted(set(data["tail"]))
        return data

    @model_validator(mode="after")
    def _check(self) -> "Jet":
        if len(self.subsets) != self.horizon + 1:
            raise ValueError(
                f"a jet over horizon {self.horizon} needs {self.horizon + 1} subsets, "
                f"got {len(self.subsets)}"
            )
        for step, members in enumerate(self.subsets + [self.tail]):
            if any(not 1 <= a <= self.n for a in members):
                raise ValueError(f"agent labels must lie in 1..{self.n} (step {step})")
            if self.proper and not 0 < len(members) < self.n:
                where = "tail" if step > self.horizon else f"step {step}"
                raise ValueError(f"proper jet is empty or all of M at {where}")
        return self

    @classmethod
    def constant(cls, n: int, members: list[int], horizon: int) -> "Jet":
        members = sorted(set(members))
        return cls(
            n=n,
            horizon=horizon,
            subsets=[members] * (horizon + 1),
            tail=members,
            proper=0 < len(members) < n,
        )

    def at(self, step: int) -> list[int]:
        return self.subsets[step] if step <= self.horizon else self.tail

    def complement(self) -> "Jet":
        everyone = set(range(1, self.n + 1))
        return Jet(
            n=self.n,
            horizon=self.horizon,
            subsets=[sorted(everyone - set(s)) for s in self.subsets],
            tail=sorted(everyone - set(self.tail)),
            proper=self.proper,
        )

    def limit(self) -> Optional[list[int]]:
        """Jet-limit: the tail, provided J(T) already equals it."""
        return list(self.tail) if self.subsets[-1] == self.tail else None

    def indicators(self, upto: int) -> np.ndarray:
        """(upto + 1, N) indicator rows for J(0..upto)."""
        out = np.zeros((upto + 1, self.n))
        for step in range(upto + 1):
            members = self.at(step)
            if members:
                out[step, np.array(members) - 1] = 1.0
        return out


class FlowGraph(BaseModel):
    """W_ij(T) = sum_{n<T} (A_ij(n) + A_ji(n)); symmetric with zero diagonal."""

    horizon: int
    weights: list[list[float]]

    def as_array(self) -> np.ndarray:
        return np.array(self.weights, dtype=float)


class IslandPartition(BaseModel):
    blocks: list[list[int]] = Field(..., description="Islands, sorted by smallest member")
    threshold: float
    horizon: int


class FlowSeries(BaseModel):
    """Partial sums S(t) for t = 1..T."""

    horizon: int
    partial_sums: list[float]

    @property
    def total(self) -> float:
        return self.partial_sums[-1] if self.partial_sums else 0.0


class LeaderReport(BaseModel):
    horizon: int
    budget: float
    influence: list[float] = Field(..., description="Influence of the complement, L(t), t = 1..T")
    leader: bool
    verdict: str


class JetFlowScan(BaseModel):
    """Minimum cumulative cut U(S, complement) over constant proper subsets."""

    horizon: int
    within: Optional[list[int]] = None
    minimizer: list[int]
    minimum: float
    min_by_size: dict[int, float] = Field(
        ..., description="Minimum over subsets of each cardinality"
    )
    series: list[float] = Field(..., description="Partial sums of the minimizing cut")
    subsets_scanned: int


class LeaderPairReport(BaseModel):
    horizon: int
    budget: float
    found: bool
    first: Optional[list[int]] = None
    second: Optional[list[int]] = None
    influence_first: Optional[float] = None
    influence_second: Optional[float] = None
    leaders_scanned: int = 0
