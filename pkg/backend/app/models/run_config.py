"""
Pydantic models for CLI runs: the effective configuration echoed into every
report, and what a command hands back to the dispatcher.
"""

from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field

from app.config import (
    Command,
    GeneratorFamily,
    OutputFormat,
    Verdict,
    DEFAULT_DELTA,
    DEFAULT_EPS,
    DEFAULT_GOSSIP_WEIGHT,
    DEFAULT_HORIZON,
    DEFAULT_PSI,
    DEFAULT_THETA,
    ROW_SUM_TOL,
)


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    command: Command
    input: Optional[str] = Field(None, description="Chain file path (all commands but gen)")
    out: Optional[str] = Field(None, description="Report path; stdout when omitted")
    format: OutputFormat = OutputFormat.JSON

    horizon: int = Field(DEFAULT_HORIZON, ge=1, description="Horizon T")
    eps: float = Field(DEFAULT_EPS, gt=0)
    theta: float = Field(DEFAULT_THETA, gt=0)
    row_tol: float = Field(ROW_SUM_TOL, gt=0, description="Row-sum tolerance for input matrices")
    psi: float = Field(DEFAULT_PSI, ge=1.0)
    seed: int = Field(0, ge=0)
    probes: Optional[int] = Field(None, ge=1)
    strict: bool = False

    # command-specific
    x0: Optional[list[float]] = None
    step: int = Field(0, ge=0, description="match: which A(n)")
    within: Optional[list[int]] = None

    # gen
    family: Optional[GeneratorFamily] = None
    agents: Optional[int] = Field(None, ge=1)
    delta: float = DEFAULT_DELTA
    weight: float = DEFAULT_GOSSIP_WEIGHT
    blocks: int = Field(1, ge=1)


class CommandOutcome(BaseModel):
    result: dict[str, Any]
    residuals: dict[str, float] = Field(default_factory=dict)
    warnings: list[str] = Field(default_factory=list)
    verdict: Optional[Verdict] = None
    failed: bool = Field(False, description="A structural failure reported in `result` (exit 1)")

    # per-step series for CSV output
    series_header: Optional[list[str]] = None
    series: Optional[list[list[int | float]]] = None
