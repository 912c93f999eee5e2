"""
Pydantic model for generator family parameters.
"""

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from app.config import (
    GeneratorFamily,
    DEFAULT_DELTA,
    DEFAULT_DENSITY,
    DEFAULT_GOSSIP_WEIGHT,
    DEFAULT_PSI,
)


class GeneratorParams(BaseModel):
    """Parameters of a seeded chain family. Ranges are checked per family."""

    model_config = ConfigDict(frozen=True)

    family: GeneratorFamily
    n: int = Field(..., ge=1)
    seed: int = Field(0, ge=0)

    # self-confident / cut-balanced
    delta: float = Field(DEFAULT_DELTA, description="Minimum diagonal entry")
    psi: float = Field(DEFAULT_PSI, description="Cut-balance / balance bound")
    density: float = Field(DEFAULT_DENSITY, description="Per-step edge probability")
    connectivity: float = Field(
        0.0, description="Requested lower bound on supported off-diagonal weights"
    )
    blocks: int = Field(1, ge=1, description="Contiguous agent blocks (no cross support)")

    # gossip
    weight: float = Field(DEFAULT_GOSSIP_WEIGHT, description="Pairwise averaging weight")

    # balanced asymmetric
    perturbation: float = Field(
        0.0, description="Mixing weight of a random stochastic perturbation"
    )

    def chain_params(self) -> dict[str, float]:
        """Family-specific fields as stored in ChainSpec.params."""
        return self.model_dump(exclude={"family", "n", "seed"})

    @classmethod
    def from_chain_params(
        cls,
        family: GeneratorFamily,
        n: int,
        seed: int,
        params: Optional[dict[str, float]] = None,
    ) -> "GeneratorParams":
        values = dict(params or {})
        if "blocks" in values:
            values["blocks"] = int(values["blocks"])
        return cls(family=family, n=n, seed=seed, **values)
