"""Request/response models for the pricing service (pydantic, strict)."""

from __future__ import annotations

from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict

from ..config import ModelConfig
from ..reporting import PriceReport


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class PriceRequest(_Strict):
    """A pricing request: the full config tree plus run-level seed/threads."""

    config: ModelConfig
    seed: int = 1234
    threads: int = 1


class AmericanRequest(PriceRequest):
    method: Literal["eep", "lsm"] = "eep"


class ConvergenceRequest(PriceRequest):
    """Geometric sweep along one resolution axis (factor-2 steps)."""

    axis: Literal["paths", "steps", "nodes", "zmax"]
    start: Optional[float] = None
    stop: Optional[float] = None


class CheckSuiteRequest(_Strict):
    scale: float = 1.0
    names: Optional[List[str]] = None
    threads: int = 1


class ValidateRequest(_Strict):
    config: ModelConfig


class ValidateResponse(BaseModel):
    ok: bool
    violations: List[str]


class PriceResponse(BaseModel):
    method: str
    measure_tag: str
    price: float
    term1: Optional[float] = None
    term2: Optional[float] = None
    stderr: Optional[float] = None
    quad_error: Optional[float] = None
    clamp_flag: bool = False
    seed: Optional[int] = None
    config_hash: str = ""
    detail: Dict[str, float] = {}

    @classmethod
    def from_report(cls, report: PriceReport, cfg_hash: str) -> "PriceResponse":
        return cls(
            method=report.method,
            measure_tag=report.measure_tag,
            price=report.price,
            term1=report.term1,
            term2=report.term2,
            stderr=report.stderr,
            quad_error=report.quad_error,
            clamp_flag=report.clamp_flag,
            seed=report.seed,
            config_hash=cfg_hash,
            detail={k: float(v) for k, v in report.detail.items()},
        )

    def to_report(self) -> PriceReport:
        return PriceReport(
            price=self.price,
            method=self.method,
            measure_tag=self.measure_tag,
            term1=self.term1,
            term2=self.term2,
            stderr=self.stderr,
            quad_error=self.quad_error,
            clamp_flag=self.clamp_flag,
            seed=self.seed,
            detail=dict(self.detail),
        )


class BoundaryResponse(BaseModel):
    """Solved exercise boundary; value null encodes the no-exercise (+inf) sentinel."""

    times: List[float]
    values: List[Optional[float]]
    residuals: List[float]
    converged: bool
    config_hash: str = ""


class ConvergenceRow(BaseModel):
    axis_value: float
    price: float
    err: Optional[float] = None
    wall_ms: float = 0.0


class ConvergenceResponse(BaseModel):
    axis: str
    rows: List[ConvergenceRow]
    config_hash: str = ""


class CheckRow(BaseModel):
    name: str
    passed: bool
    detail: str
    wall_ms: float


class CheckSuiteResponse(BaseModel):
    rows: List[CheckRow]
    all_passed: bool


class ErrorBody(BaseModel):
    error: Literal["validation", "domain", "convergence"]
    messages: List[str]
