from typing import List, Optional

from pydantic import BaseModel, Field, model_validator


class ZqPayload(BaseModel):
    """JSON encoding of a Z_q vector or matrix"""
    q: int = Field(..., ge=2, description="Modulus")
    dims: List[int] = Field(..., min_length=1, max_length=2, description="[m, n] or [length]")
    entries: List[int] = Field(..., description="Row-major entries in [0, q)")

    @model_validator(mode="after")
    def check_entries(self):
        size = 1
        for d in self.dims:
            size *= d
        if len(self.entries) != size:
            raise ValueError(f"dims {self.dims} need {size} entries, got {len(self.entries)}")
        if any(e < 0 or e >= self.q for e in self.entries):
            raise ValueError(f"entries must lie in [0, {self.q})")
        return self


class TrapdoorPayload(BaseModel):
    """Gadget trapdoor: A = [Ā ; G − R·Ā] with R in {±1}"""
    m_bar: int = Field(..., ge=1, description="Rows of the uniform block Ā")
    width: int = Field(..., ge=1, description="Gadget width ⌈log₂ q⌉")
    R: Optional[ZqPayload] = Field(None, description="Gadget relation matrix, entries mod q")


class KeypairPayload(BaseModel):
    """Keypair with trapdoor, serialized for replay"""
    A: ZqPayload
    trapdoor: Optional[TrapdoorPayload] = None


class KeygenReport(BaseModel):
    """Verifier key material for one trial, with the trapdoor's guarantees"""
    seed: int
    trial: int = Field(0, ge=0)
    keypair: KeypairPayload
    u: List[int] = Field(..., description="Public LWE sample A·s + e")
    s: List[int] = Field(..., description="Secret, for simulation and replay only")
    gadget: bool
    decoding_radius: Optional[float] = Field(None, description="Euclidean error radius INVERT always corrects")
    implied_constant: Optional[float] = Field(None, description="C with q/(C√(n log₂ q)) equal to the decoding radius")
