"""
Pydantic models for chain-class certificates.
"""

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from app.config import CertificateMethod


class CertificateWitness(BaseModel):
    """Where a bound is attained or violated. Agent labels are 1-based."""

    step: Optional[int] = None
    agent: Optional[int] = None
    pair: Optional[tuple[int, int]] = None
    subset: Optional[list[int]] = None
    subset2: Optional[list[int]] = None
    lhs: Optional[float] = Field(None, description="Left side of the violated inequality")
    rhs: Optional[float] = Field(None, description="Right side, before the bound is applied")


class PropertyCertificate(BaseModel):
    """Outcome of one property check; `witness` is set whenever holds is False."""

    model_config = ConfigDict(ser_json_inf_nan="strings")

    property_name: str
    holds: bool
    bound: float
    witness: Optional[CertificateWitness] = None
    method: CertificateMethod = CertificateMethod.EXHAUSTIVE
    samples: Optional[int] = None
    note: Optional[str] = None
