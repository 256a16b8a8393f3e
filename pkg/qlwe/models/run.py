from sqlalchemy import Boolean, Column, Float, Integer, String, Text

from qlwe.models.base import BaseModel


class RunRecord(BaseModel):
    """One suite run in the ledger"""

    kind = Column(String(32), nullable=False, index=True)
    preset = Column(String(255), nullable=False, index=True)
    prover = Column(String(32), nullable=True)
    seed = Column(String(40), nullable=False)
    trials = Column(Integer, nullable=True)
    accepted = Column(Integer, nullable=True)
    accept_rate = Column(Float, nullable=True)
    ci_low = Column(Float, nullable=True)
    ci_high = Column(Float, nullable=True)
    passed = Column(Boolean, nullable=False, default=False)
    config_hash = Column(String(64), nullable=False, index=True)
    code_version = Column(String(32), nullable=False)
    report_json = Column(Text, nullable=False)
