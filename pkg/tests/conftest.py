import pytest

from svjdx import (
    AssetParams,
    CorrelationStructure,
    JumpSpec,
    MarketModel,
    VolParams,
)


@pytest.fixture
def desk_model() -> MarketModel:
    """Full SVJD model with independent-volatility correlations (CF-compatible)."""
    return MarketModel(
        asset1=AssetParams(
            100.0, 0.03, VolParams(2.0, 0.04, 0.25, 0.045), JumpSpec(0.4, -0.04, 0.18)
        ),
        asset2=AssetParams(
            96.0, 0.02, VolParams(1.6, 0.05, 0.30, 0.05, 0.1), JumpSpec(0.25, 0.02, 0.15)
        ),
        corr=CorrelationStructure(0.0, -0.5, -0.4, 0.0),
        r=0.05,
    )


@pytest.fixture
def flat_model() -> MarketModel:
    """Flat-variance no-jump degeneration (Margrabe limit)."""
    return MarketModel(
        asset1=AssetParams(100.0, 0.03, VolParams(2.0, 0.04, 1e-8, 0.04)),
        asset2=AssetParams(96.0, 0.02, VolParams(1.6, 0.05, 1e-8, 0.05)),
        corr=CorrelationStructure(),
        r=0.05,
    )


@pytest.fixture
def general_corr_model() -> MarketModel:
    """Model with the full correlation structure (MC only; no closed-form CF)."""
    return MarketModel(
        asset1=AssetParams(
            100.0, 0.03, VolParams(2.0, 0.04, 0.25, 0.045), JumpSpec(0.4, -0.04, 0.18)
        ),
        asset2=AssetParams(
            96.0, 0.02, VolParams(1.6, 0.05, 0.30, 0.05), JumpSpec(0.25, 0.02, 0.15)
        ),
        corr=CorrelationStructure(0.35, -0.5, -0.4, 0.2),
        r=0.05,
    )
