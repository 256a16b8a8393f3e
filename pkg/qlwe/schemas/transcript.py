from enum import Enum
from typing import Annotated, Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field

from qlwe.schemas.lattice import ZqPayload
from qlwe.schemas.params import ProtocolParams


class ReasonCode(str, Enum):
    """Why the verifier accepted or rejected a round"""
    ACCEPTED = "accepted"
    PREIMAGE_TOO_FAR = "preimage_too_far"
    INVERSION_FAILED = "inversion_failed"
    RESIDUAL_TOO_FAR = "residual_too_far"
    EQUATION_MISMATCH = "equation_mismatch"
    D_NOT_IN_G = "d_not_in_G"
    MALFORMED_RESPONSE = "malformed_response"


class TupleClass(str, Enum):
    """Labels of a (b, x, d, c) tuple against the secret"""
    IN_H = "InH"
    IN_HBAR = "InHbar"
    NEITHER = "Neither"


class PreimageResponse(BaseModel):
    """Answer to r = 0"""
    kind: Literal["preimage"] = "preimage"
    b: int = Field(..., ge=0, le=1)
    x: List[int]


class EquationResponse(BaseModel):
    """Answer to r = 1"""
    kind: Literal["equation"] = "equation"
    c: int = Field(..., ge=0, le=1)
    d: List[int]


Response = Annotated[Union[PreimageResponse, EquationResponse], Field(discriminator="kind")]


class Verdict(BaseModel):
    accepted: bool
    reason: ReasonCode


class PublicKey(BaseModel):
    """First verifier message (A, u)"""
    A: ZqPayload
    u: List[int]


class Transcript(BaseModel):
    """One protocol round as seen on the wire, plus bookkeeping"""
    trial: int = Field(..., ge=0)
    seed: int
    prover: str
    public_key: PublicKey
    y: List[int]
    r: int = Field(..., ge=0, le=1)
    response: Response
    verdict: Verdict
    simulation_only: bool = False
    elapsed: float = Field(0.0, ge=0, description="Wall time in seconds")


class HardcoreTuple(BaseModel):
    b: int = Field(..., ge=0, le=1)
    x: List[int]
    d: List[int]
    c: int = Field(..., ge=0, le=1)


class ExtractionResult(BaseModel):
    """Tuple assembled by rewinding a prover between both challenges"""
    trial: int = 0
    hardcore: HardcoreTuple
    label: TupleClass
    simulation_only: bool = True


class TranscriptHeader(BaseModel):
    """Step-0 line of a transcript stream"""
    params: ProtocolParams
    seed: int
    prover: str
    trials: int
    version: str


class WireMessage(BaseModel):
    """One JSON line: {"trial", "step", "payload"}"""
    trial: int
    step: int = Field(..., ge=0, le=5)
    payload: Dict[str, Any]
    note: Optional[str] = None


class ReplayReport(BaseModel):
    """Outcome of re-deciding a transcript stream"""
    trials: int = 0
    matched: int = 0
    mismatches: List[str] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches
