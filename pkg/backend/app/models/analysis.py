"""
Pydantic models for finite-horizon consensus verdicts and decompositions.
"""

from typing import Optional

from pydantic import BaseModel, Field

from app.config import Verdict


class ClusterReport(BaseModel):
    """Ergodic-class estimate at a horizon."""

    horizon: int
    epsilon: float
    clusters: list[list[int]] = Field(..., description="Partition of M, sorted by smallest member")
    limits: list[float] = Field(..., description="Estimated consensus value per cluster")
    masses: list[float] = Field(..., description="Estimated absolute-probability mass per cluster")
    residual: float = Field(..., description="Largest within-cluster disagreement")
    warnings: list[str] = Field(default_factory=list)


class JetTrack(BaseModel):
    """One jet of a decomposition over the recorded steps; index 0 is J^0."""

    index: int
    subsets: list[list[int]] = Field(..., description="J(n) at each recorded step")
    settled_step: int = Field(..., description="Last recorded step where |J(n)| changed")
    limit: Optional[float] = None
    mass: Optional[float] = None
    vanishing: bool = False


class CrossFlow(BaseModel):
    """V partial sums between jets `first` and `second`."""

    first: int
    second: int
    partial_sums: list[float]


class DecompositionReport(BaseModel):
    verdict: Verdict
    horizon: int
    epsilon: float
    recorded_steps: list[int]
    clusters: list[list[int]]
    jets: list[JetTrack]
    cross_flows: list[CrossFlow] = Field(default_factory=list)
    cauchy_residual: float = Field(
        ..., description="Largest change over the trailing quarter of the horizon"
    )
    islands: Optional[list[list[int]]] = None
    islands_agree: Optional[bool] = None
    warnings: list[str] = Field(default_factory=list)

    @property
    def cluster_count(self) -> int:
        return sum(1 for j in self.jets if j.index > 0 and j.subsets and j.subsets[-1])

    @property
    def null_jet(self) -> list[int]:
        for j in self.jets:
            if j.index == 0:
                return j.subsets[-1] if j.subsets else []
        return []


class SortedConvergenceReport(BaseModel):
    passed: bool
    epsilon: float
    window_start: int
    oscillation: list[float] = Field(..., description="max_n |z_i(n) - z_i(T)| per rank i")
