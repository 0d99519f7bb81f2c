"""Price report container and its CSV row contract."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional

#: Column contract for report CSVs (documented in the README).
CSV_HEADER = [
    "method",
    "measure_tag",
    "price",
    "term1",
    "term2",
    "stderr_or_quad_err",
    "clamp_flag",
    "seed",
    "config_hash",
    "detail",
]


@dataclass
class PriceReport:
    """Outcome of a pricing run: price plus decomposition terms and diagnostics.

    `stderr` is set for Monte Carlo estimators, `quad_error` for Fourier
    quadrature; `detail` carries named auxiliary metrics (exercise
    probabilities, premium components, convergence flags).
    """

    price: float
    method: str  # fourier | mc | lsm | decomposition
    measure_tag: str = "Q"
    term1: Optional[float] = None
    term2: Optional[float] = None
    stderr: Optional[float] = None
    quad_error: Optional[float] = None
    clamp_flag: bool = False
    seed: Optional[int] = None
    config: Dict = field(default_factory=dict)
    detail: Dict = field(default_factory=dict)

    @property
    def error_measure(self) -> Optional[float]:
        return self.stderr if self.stderr is not None else self.quad_error

    def csv_row(self, config_hash: str) -> list:
        def num(x):
            return "" if x is None else repr(float(x))

        detail = ";".join(
            f"{k}={repr(float(v)) if isinstance(v, (int, float)) else v}"
            for k, v in sorted(self.detail.items())
        )
        return [
            self.method,
            self.measure_tag,
            num(self.price),
            num(self.term1),
            num(self.term2),
            num(self.error_measure),
            str(int(self.clamp_flag)),
            "" if self.seed is None else str(self.seed),
            config_hash,
            detail,
        ]
