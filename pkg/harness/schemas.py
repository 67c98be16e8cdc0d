# harness/schemas.py
from __future__ import annotations

from enum import Enum
from typing import Any

from pydantic import BaseModel, ConfigDict, Field

CSV_COLUMNS = (
    "protocol",
    "input_id",
    "trials",
    "estimate",
    "std_err",
    "exact",
    "abs_err",
    "bits_sent",
    "qubits_sent",
    "ebits",
    "pass",
)


class InputMode(str, Enum):
    EXPLICIT = "explicit"
    GRID = "grid"
    EXHAUSTIVE = "exhaustive"
    RANDOM = "random"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    protocol: str = Field(..., min_length=1)
    mode: InputMode = InputMode.EXHAUSTIVE
    inputs: list[str] = Field(default_factory=list)
    grid: str | None = None
    count: int = Field(default=0, ge=0)
    trials: int = Field(default=1, ge=1)
    seed: int = Field(..., ge=0)
    format: OutputFormat = OutputFormat.CSV
    params: dict[str, Any] = Field(default_factory=dict)
    # tolerance overrides
    pass_sigma: float | None = Field(default=None, gt=0)
    exact_tolerance: float = Field(default=1e-9, ge=0)


class EstimateRow(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    protocol: str
    input_id: str
    trials: int
    estimate: float
    std_err: float
    exact: float | None = None
    abs_err: float | None = None
    bits_sent: int
    qubits_sent: int
    ebits: int
    passed: bool | None = Field(default=None, alias="pass")


class ReportHeader(BaseModel):
    protocol: str
    estimate: str
    seed: int
    seed_source: str
    trials: int
    mode: str
    params: dict[str, str]
    pass_rule: str
    version: str


class Report(BaseModel):
    header: ReportHeader
    rows: list[EstimateRow]

    @property
    def passed(self) -> bool:
        return all(row.passed is not False for row in self.rows)
