from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field


class ConditionStatus(str, Enum):
    """Enumeration of per-condition outcomes"""
    PASSED = "passed"
    FAILED = "failed"
    UNCHECKED = "unchecked"


class ConditionResult(BaseModel):
    """Outcome of one membership condition"""
    status: ConditionStatus
    value: Optional[float] = Field(None, description="Measured quantity")
    threshold: Optional[float] = Field(None, description="Bound the quantity is compared with")
    detail: str = ""


class ValidationReport(BaseModel):
    """Membership report for K_{B_V}"""
    condition_i: ConditionResult = Field(..., description="q >= B_V·C·√(mn log₂ q)")
    condition_ii: ConditionResult = Field(..., description="‖e‖∞ <= B_V")
    distance: ConditionResult = Field(..., description="column distance >= 2q/(C√(n log₂ q))")
    closeness_modulus: ConditionResult = Field(..., description="q >= 8mB_V·C√(mn log₂ q)/ε")
    strict: ConditionResult = Field(..., description="2√n <= B_L < B_V <= q")
    r: int
    B_P: float

    @property
    def failures(self) -> list[str]:
        return [
            name for name in ("condition_i", "condition_ii", "distance", "strict")
            if getattr(self, name).status == ConditionStatus.FAILED
        ]

    @property
    def in_K(self) -> bool:
        """True when nothing failed; unchecked conditions do not count as failures."""
        return not self.failures

    @property
    def fully_checked(self) -> bool:
        return all(
            getattr(self, name).status != ConditionStatus.UNCHECKED
            for name in ("condition_i", "condition_ii", "distance")
        )


class PreconditionReport(BaseModel):
    """q >= 8mB_V·C√(mn log₂ q)/ε, the modulus needed for ε-closeness"""
    holds: bool
    q: int
    threshold: float
    slack: float = Field(..., description="q / threshold")


class RobustnessSummary(BaseModel):
    """Quantities of the interval state over I = {−2^{r−1}, …, 2^{r−1}−1}"""
    r: int
    B_P: float
    interval_size: int
    bounded_radius: int = Field(..., description="2^{r−1}; the state is (2^{r−1}+1)-bounded")
    overlap_floor: float = Field(..., description="1 − m·B_V/2^{r−1}")
    closeness_budget: float = Field(..., description="n/q² from the uniform x registers")
