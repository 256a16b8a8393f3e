from datetime import datetime
from typing import Optional
from uuid import UUID

from pydantic import BaseModel, ConfigDict, Field


class RunRecordBase(BaseModel):
    """Ledger fields shared by create and read"""
    kind: str
    preset: str
    prover: Optional[str] = None
    seed: str = Field(..., description="Master seed as a decimal string")
    trials: Optional[int] = None
    accepted: Optional[int] = None
    accept_rate: Optional[float] = None
    ci_low: Optional[float] = None
    ci_high: Optional[float] = None
    passed: bool
    config_hash: str
    code_version: str


class RunRecordCreate(RunRecordBase):
    """Schema for recording a run"""
    report_json: str


class RunRecordRead(RunRecordBase):
    """Schema for listing runs"""
    model_config = ConfigDict(from_attributes=True)

    id: UUID
    created_at: datetime
