"""Command implementations shared by the FastAPI endpoints and the CLI."""

from __future__ import annotations

import math
import time
from typing import Callable, Dict

import numpy as np

from ..american import american_price, lsm_price, solve_boundary
from ..config import ModelConfig, config_hash
from ..errors import ConvergenceError
from ..fourier import exchange_price, exchange_price_decomposed, spread_lower_bound
from ..mc import price_exchange_mc, price_spread_mc
from ..market import validate
from .schemas import (
    AmericanRequest,
    BoundaryResponse,
    CheckSuiteRequest,
    CheckSuiteResponse,
    ConvergenceRequest,
    ConvergenceResponse,
    ConvergenceRow,
    PriceRequest,
    PriceResponse,
    ValidateResponse,
)


def run_validate(cfg: ModelConfig) -> ValidateResponse:
    report = validate(cfg.market_model())
    return ValidateResponse(ok=report.ok, violations=report.violations)


def _price_eu_fourier(req: PriceRequest):
    cfg = req.config
    return exchange_price(
        cfg.market_model(), None, cfg.t0, cfg.maturity, cfg.quad_config()
    )


def _price_eu_mc(req: PriceRequest):
    cfg = req.config
    return price_exchange_mc(
        cfg.market_model(), None, cfg.t0, cfg.maturity, cfg.sim_config(req.seed, req.threads)
    )


def _price_eu_decomp(req: PriceRequest):
    cfg = req.config
    return exchange_price_decomposed(
        cfg.market_model(), None, cfg.t0, cfg.maturity, cfg.quad_config()
    )


def _price_spread(req: PriceRequest):
    cfg = req.config
    return spread_lower_bound(
        cfg.market_model(), None, cfg.t0, cfg.maturity, cfg.strike, cfg.quad_config()
    )


def _price_am(req: AmericanRequest):
    cfg = req.config
    model = cfg.market_model()
    if req.method == "lsm":
        return lsm_price(model, None, cfg.t0, cfg.maturity, cfg.lsm_config(req.seed, req.threads))
    return american_price(
        model,
        None,
        cfg.t0,
        cfg.maturity,
        cfg.lsm_config(req.seed, req.threads),
        cfg.boundary_config(req.seed + 1, req.threads),
        cfg.quad_config(),
    )


PRICE_COMMANDS: Dict[str, Callable] = {
    "price-eu-fourier": _price_eu_fourier,
    "price-eu-mc": _price_eu_mc,
    "price-eu-decomp": _price_eu_decomp,
    "price-spread": _price_spread,
    "price-am": _price_am,
}


def run_price(command: str, req: PriceRequest) -> PriceResponse:
    report = PRICE_COMMANDS[command](req)
    if report.seed is None:
        report.seed = req.seed
    resp = PriceResponse.from_report(report, config_hash(req.config))
    if resp.detail.get("converged") == 0.0:
        raise ConvergenceError("quadrature did not converge within the node budget")
    return resp


def run_boundary(req: PriceRequest) -> BoundaryResponse:
    cfg = req.config
    curve = solve_boundary(
        cfg.market_model(), None, cfg.maturity, cfg.boundary_config(req.seed, req.threads),
        cfg.quad_config(),
    )
    return BoundaryResponse(
        times=[float(t) for t in curve.times],
        values=[float(v) if math.isfinite(v) else None for v in curve.values],
        residuals=[float(r) for r in curve.residuals],
        converged=curve.converged,
        config_hash=config_hash(cfg),
    )


_SWEEP_DEFAULTS = {
    "paths": (1_000, 1_000_000),
    "steps": (25, 800),
    "nodes": (256, 8192),
    "zmax": (50.0, 800.0),
}


def run_convergence(req: ConvergenceRequest) -> ConvergenceResponse:
    """Geometric sweep of one resolution axis; MC axes honor the request seed."""
    cfg = req.config
    lo, hi = _SWEEP_DEFAULTS[req.axis]
    start = lo if req.start is None else req.start
    stop = hi if req.stop is None else req.stop
    if not (start > 0 and stop >= start):
        raise ConvergenceError(f"bad sweep range [{start}, {stop}]")

    rows = []
    value = float(start)
    while value <= stop * (1.0 + 1e-12):
        t0 = time.perf_counter()
        if req.axis in ("paths", "steps"):
            sim = cfg.sim_config(req.seed, req.threads)
            n_paths = int(round(value)) if req.axis == "paths" else sim.n_paths
            n_steps = int(round(value)) if req.axis == "steps" else sim.n_steps
            if sim.antithetic and n_paths % 2:
                n_paths += 1
            from ..mc import SimConfig

            sim = SimConfig(n_paths, n_steps, req.seed, sim.scheme, sim.antithetic, req.threads)
            report = price_exchange_mc(cfg.market_model(), None, cfg.t0, cfg.maturity, sim)
        else:
            quad = cfg.quad_config()
            from ..fourier import QuadratureConfig

            quad = QuadratureConfig(
                delta=quad.delta,
                z_max=float(value) if req.axis == "zmax" else quad.z_max,
                n_nodes=int(round(value)) if req.axis == "nodes" else quad.n_nodes,
                scheme="trapezoid",
            )
            report = exchange_price(cfg.market_model(), None, cfg.t0, cfg.maturity, quad)
        wall = (time.perf_counter() - t0) * 1e3
        rows.append(
            ConvergenceRow(
                axis_value=float(value),
                price=report.price,
                err=report.error_measure,
                wall_ms=wall,
            )
        )
        value *= 2.0
    return ConvergenceResponse(axis=req.axis, rows=rows, config_hash=config_hash(cfg))


def run_check_suite(req: CheckSuiteRequest) -> CheckSuiteResponse:
    from ..checks import run_checks

    results = run_checks(names=req.names, scale=req.scale, threads=req.threads)
    rows = [
        dict(name=r.name, passed=r.passed, detail=r.detail, wall_ms=r.wall_ms)
        for r in results
    ]
    return CheckSuiteResponse(rows=rows, all_passed=all(r.passed for r in results))
