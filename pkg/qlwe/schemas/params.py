import math
from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator


class GaussianParams(BaseModel):
    """Parameters of the truncated discrete Gaussian D_{q,B}"""
    model_config = ConfigDict(frozen=True)

    q: int = Field(..., ge=2, description="Modulus")
    B: float = Field(..., gt=0, description="Width and truncation radius")


class ParamMode(str, Enum):
    """Enumeration of parameter regimes"""
    DESK = "desk"
    STRICT = "strict"


class ProtocolParams(BaseModel):
    """Protocol parameters with the derived robust-state quantities"""
    model_config = ConfigDict(
        frozen=True,
        populate_by_name=True,
        json_schema_extra={
            "example": {"n": 2, "m": 6, "q": 64, "B_V": 1, "epsilon": 0.5, "C": 1}
        },
    )

    lambda_: int = Field(0, alias="lambda", ge=0, description="Security parameter (recorded only)")
    ell: int = Field(0, ge=0, description="Auxiliary length parameter (recorded only)")
    n: int = Field(..., ge=1, description="Secret dimension")
    m: int = Field(..., ge=1, description="Number of LWE samples")
    q: int = Field(..., ge=2, description="Modulus")
    B_L: float = Field(0.0, ge=0, description="Hardness-assumption noise width")
    B_V: float = Field(..., gt=0, description="Verifier noise width")
    epsilon: float = Field(..., gt=0, le=1, description="Target closeness")
    C: float = Field(1.0, gt=0, description="Trapdoor constant")
    mode: ParamMode = Field(ParamMode.DESK, description="Desk or strict regime")

    @computed_field
    @property
    def log_q(self) -> float:
        return math.log2(self.q)

    @computed_field
    @property
    def bits(self) -> int:
        return (self.q - 1).bit_length()

    @computed_field
    @property
    def B_P(self) -> float:
        """Boundedness radius q/(C√(mn log₂ q))"""
        return self.q / (self.C * math.sqrt(self.m * self.n * self.log_q))

    @computed_field
    @property
    def r(self) -> int:
        return math.floor(math.log2(self.B_P))

    @property
    def inversion_bound(self) -> float:
        """q/(C√(n log₂ q)): radius of Λ_k and of INVERT"""
        return self.q / (self.C * math.sqrt(self.n * self.log_q))

    @property
    def acceptance_bound(self) -> float:
        """2q/(C√(n log₂ q)): verifier check radius and required column distance"""
        return 2 * self.inversion_bound

    @property
    def condition_i_threshold(self) -> float:
        return self.B_V * self.C * math.sqrt(self.m * self.n * self.log_q)

    @property
    def closeness_threshold(self) -> float:
        """8mB_V·C√(mn log₂ q)/ε, the modulus needed for ε-closeness"""
        return 8 * self.m * self.condition_i_threshold / self.epsilon

    @model_validator(mode="after")
    def check_regime(self):
        if self.r < 1:
            raise ValueError(
                f"derived r = floor(log2(B_P)) = {self.r} < 1; increase q or decrease C, m or n"
            )
        if self.mode == ParamMode.STRICT:
            if not (2 * math.sqrt(self.n) <= self.B_L < self.B_V <= self.q):
                raise ValueError("strict mode requires 2√n <= B_L < B_V <= q")
        return self

    def gaussian(self, B: Optional[float] = None) -> GaussianParams:
        return GaussianParams(q=self.q, B=self.B_V if B is None else B)
