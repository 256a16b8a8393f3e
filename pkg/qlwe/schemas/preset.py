from enum import Enum
from typing import Dict, Optional

from pydantic import BaseModel, Field, model_validator

from qlwe.core.exceptions import ConfigError
from qlwe.schemas.params import ProtocolParams


class PresetMode(str, Enum):
    """Enumeration of preset kinds"""
    DESK = "desk"
    STRICT_SYMBOLIC = "strict-symbolic"


class TrialDefaults(BaseModel):
    """Default trial settings of a preset"""
    count: int = Field(1000, ge=1, description="Protocol trials per prover")
    workers: int = Field(1, ge=1, description="Worker threads")
    repetitions: int = Field(1, ge=1, description="Rounds per amplified group")


class PresetConfig(BaseModel):
    """A named parameter set with trial defaults"""
    name: str = Field(..., min_length=1)
    mode: PresetMode = PresetMode.DESK
    description: str = ""
    params: Optional[ProtocolParams] = None
    trials: TrialDefaults = Field(default_factory=TrialDefaults)
    symbolic: Dict[str, str] = Field(default_factory=dict, description="Asymptotic choices, recorded only")

    @model_validator(mode="after")
    def check_params(self):
        if self.mode == PresetMode.DESK and self.params is None:
            raise ValueError("desk presets need a [params] section")
        return self

    @property
    def desk_runnable(self) -> bool:
        return self.mode == PresetMode.DESK and self.params is not None

    def require_params(self) -> ProtocolParams:
        if not self.desk_runnable:
            raise ConfigError(f"preset '{self.name}' is not desk-runnable")
        return self.params
