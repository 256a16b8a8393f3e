from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, computed_field

from qlwe.schemas.circuit import DepthReport


class SuiteKind(str, Enum):
    """Enumeration of acceptance batteries"""
    INVARIANTS = "invariants"
    PROTOCOL = "protocol"
    DEPTH = "depth"
    EXTRACT = "extract"


class ChallengeStats(BaseModel):
    trials: int = 0
    accepted: int = 0

    @computed_field
    @property
    def rate(self) -> float:
        return self.accepted / self.trials if self.trials else 0.0


class PassRateStats(BaseModel):
    """Acceptance statistics of one prover over seeded trials"""
    prover: str
    seed: int
    trials: int = Field(..., ge=1)
    accepted: int = Field(..., ge=0)
    rate: float
    ci_low: float
    ci_high: float
    per_challenge: Dict[str, ChallengeStats] = Field(default_factory=dict, description="Keyed by challenge bit")
    reasons: Dict[str, int] = Field(default_factory=dict)
    repetitions: int = 1
    amplified_rate: Optional[float] = Field(None, description="Share of repetition groups with every round accepted")
    simulation_only: bool = False
    elapsed: float = 0.0


class ExtractionStats(BaseModel):
    """Label counts of rewound (b, x, d, c) tuples"""
    prover: str
    seed: int
    trials: int = Field(..., ge=1)
    counts: Dict[str, int] = Field(default_factory=dict)
    in_h_rate: float
    ci_low: float
    ci_high: float
    simulation_only: bool = True


class CheckResult(BaseModel):
    """One measured check of a suite"""
    name: str
    passed: bool
    value: Optional[float] = None
    threshold: Optional[float] = None
    detail: str = ""


class RunReport(BaseModel):
    """Result of a suite run; every figure is a function of (preset, seed)"""
    kind: SuiteKind
    preset: str
    seed: int
    prover: Optional[str] = None
    trials: Optional[int] = None
    checks: List[CheckResult] = Field(default_factory=list)
    stats: Optional[PassRateStats] = None
    extraction: Optional[ExtractionStats] = None
    depth: List[DepthReport] = Field(default_factory=list)
    config_hash: str
    version: str
    elapsed: float = Field(0.0, description="Wall time in seconds, excluded from comparisons")

    @computed_field
    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def accept_rate(self) -> Optional[float]:
        return self.stats.rate if self.stats else None
