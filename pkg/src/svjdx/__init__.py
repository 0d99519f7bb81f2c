"""Exchange and spread option pricing under two-asset SVJD dynamics.

Core layers: market model containers and validation (`market`), measure
changes (`measures`), the closed-form joint characteristic function
(`charfn`), Fourier inversion pricing (`fourier`), Monte Carlo simulation and
estimators (`mc`), American valuation (`american`). A FastAPI service
(`svjdx.service`) and a thin CLI (`svjdx.cli`) wrap the library.
"""

from .market import (
    AssetParams,
    CorrelationStructure,
    JumpSpec,
    MarketModel,
    MarketState,
    ValidationReport,
    VolParams,
    forward_price,
    kappa,
    validate,
)
from .measures import (
    MeasureShift,
    ModelDynamics,
    apply_measure_shift,
    numeraire_shift_1,
    numeraire_shift_2,
    q_dynamics,
    risk_neutral_drift,
    tilt_jump,
)
from .charfn import CFValue, RiccatiParts, phi_joint, phi_jump, riccati
from .fourier import (
    QuadratureConfig,
    exchange_price,
    exchange_price_decomposed,
    r_independence_check,
    spread_lower_bound,
)
from .mc import (
    PathBatch,
    SimConfig,
    martingale_checks,
    price_exchange_mc,
    price_spread_mc,
    qhat_prob,
    simulate,
)
from .reporting import PriceReport

__version__ = "0.1.0"

__all__ = [
    "AssetParams",
    "CFValue",
    "CorrelationStructure",
    "JumpSpec",
    "MarketModel",
    "MarketState",
    "MeasureShift",
    "ModelDynamics",
    "PathBatch",
    "PriceReport",
    "QuadratureConfig",
    "RiccatiParts",
    "SimConfig",
    "ValidationReport",
    "VolParams",
    "apply_measure_shift",
    "exchange_price",
    "exchange_price_decomposed",
    "forward_price",
    "kappa",
    "martingale_checks",
    "numeraire_shift_1",
    "numeraire_shift_2",
    "phi_joint",
    "phi_jump",
    "price_exchange_mc",
    "price_spread_mc",
    "q_dynamics",
    "qhat_prob",
    "r_independence_check",
    "riccati",
    "risk_neutral_drift",
    "simulate",
    "spread_lower_bound",
    "tilt_jump",
    "validate",
    "__version__",
]
