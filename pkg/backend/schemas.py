from typing import Any, Dict, Optional

from pydantic import BaseModel, Field

from harness.sweep import AXIS_TRAFFIC
from network.consts import SCHEME_PROPOSED, SCHEMES


class RunRequest(BaseModel):
    scenario: Optional[str] = None
    scheme: str = SCHEME_PROPOSED
    seed: Optional[int] = None
    full_scale: bool = False
    overrides: Dict[str, Any] = Field(default_factory=dict)


class SweepRequest(BaseModel):
    scenario: Optional[str] = None
    axis: str = AXIS_TRAFFIC
    values: list[float]
    schemes: list[str] = Field(default_factory=lambda: list(SCHEMES))
    replications: Optional[int] = None
    full_scale: bool = False
    overrides: Dict[str, Any] = Field(default_factory=dict)


class SchemeInfo(BaseModel):
    name: str
    uses_matching: bool
    optimizes_power: bool


class SweepTableRow(BaseModel):
    axis: str
    value: float
    scheme: str
    replications: int
    mean: Dict[str, float]
    stderr: Dict[str, float]


class SweepResponse(BaseModel):
    rows: list[SweepTableRow]
