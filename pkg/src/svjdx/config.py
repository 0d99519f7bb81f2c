"""Config file schema (v1) and helpers: strict YAML tree mapping 1:1 onto the model.

The same pydantic models double as the service request schema, so a config
file and a request body are interchangeable. Unknown keys are rejected
everywhere (extra="forbid"); overrides are dotted `key.path=value` pairs
applied to the parsed tree before validation.
"""

from __future__ import annotations

import hashlib
import json
from typing import Literal, Optional

import yaml
from pydantic import BaseModel, ConfigDict, ValidationError

from .american import BoundarySolverConfig, LSMConfig
from .errors import ModelValidationError
from .fourier import QuadratureConfig
from .market import (
    AssetParams,
    CorrelationStructure,
    JumpSpec,
    MarketModel,
    VolParams,
)
from .mc import SimConfig

SCHEMA_VERSION = 1


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class VolSection(_Strict):
    xi: float
    eta: float
    sigma: float
    v0: float
    risk_premium: float = 0.0


class JumpSection(_Strict):
    intensity: float = 0.0
    mu_j: float = 0.0
    sigma_j: float = 0.0


class AssetSection(_Strict):
    s0: float
    q: float
    vol: VolSection
    jump: JumpSection = JumpSection()


class CorrelationSection(_Strict):
    rho_w: float = 0.0
    rho_wz1: float = 0.0
    rho_wz2: float = 0.0
    rho_z: float = 0.0


class QuadratureSection(_Strict):
    delta: float = 0.75
    z_max: float = 200.0
    n_nodes: int = 2048
    scheme: Literal["trapezoid", "adaptive"] = "trapezoid"


class SimulationSection(_Strict):
    n_paths: int = 100_000
    n_steps: int = 250
    scheme: Literal["full-truncation-euler", "qe"] = "full-truncation-euler"
    antithetic: bool = True


class LsmSection(_Strict):
    n_paths: int = 100_000
    n_dates: int = 50
    degree: int = 2
    steps_per_date: int = 2
    scheme: Literal["full-truncation-euler", "qe"] = "full-truncation-euler"
    antithetic: bool = True


class BoundarySection(_Strict):
    n_nodes: int = 17
    n_paths: int = 16384
    steps_per_year: int = 100
    max_iter: int = 20
    tol: float = 5e-4


class ModelConfig(_Strict):
    """Versioned pricing request: model parameters plus engine settings."""

    schema_version: Literal[1] = SCHEMA_VERSION
    r: float
    maturity: float
    t0: float = 0.0
    strike: float = 0.0
    asset1: AssetSection
    asset2: AssetSection
    correlation: CorrelationSection = CorrelationSection()
    quadrature: QuadratureSection = QuadratureSection()
    simulation: SimulationSection = SimulationSection()
    lsm: LsmSection = LsmSection()
    boundary: BoundarySection = BoundarySection()

    def market_model(self) -> MarketModel:
        def asset(section: AssetSection) -> AssetParams:
            return AssetParams(
                s0=section.s0,
                q=section.q,
                vol=VolParams(
                    xi=section.vol.xi,
                    eta=section.vol.eta,
                    sigma=section.vol.sigma,
                    v0=section.vol.v0,
                    risk_premium=section.vol.risk_premium,
                ),
                jump=JumpSpec(
                    intensity=section.jump.intensity,
                    mu_j=section.jump.mu_j,
                    sigma_j=section.jump.sigma_j,
                ),
            )

        return MarketModel(
            asset1=asset(self.asset1),
            asset2=asset(self.asset2),
            corr=CorrelationStructure(
                rho_w=self.correlation.rho_w,
                rho_wz1=self.correlation.rho_wz1,
                rho_wz2=self.correlation.rho_wz2,
                rho_z=self.correlation.rho_z,
            ),
            r=self.r,
        )

    def quad_config(self) -> QuadratureConfig:
        q = self.quadrature
        return QuadratureConfig(q.delta, q.z_max, q.n_nodes, q.scheme).check()

    def sim_config(self, seed: int, threads: int = 1) -> SimConfig:
        s = self.simulation
        return SimConfig(
            n_paths=s.n_paths,
            n_steps=s.n_steps,
            seed=seed,
            scheme=s.scheme,
            antithetic=s.antithetic,
            threads=threads,
        ).check()

    def lsm_config(self, seed: int, threads: int = 1) -> LSMConfig:
        l = self.lsm
        return LSMConfig(
            n_paths=l.n_paths,
            n_dates=l.n_dates,
            seed=seed,
            degree=l.degree,
            steps_per_date=l.steps_per_date,
            scheme=l.scheme,
            antithetic=l.antithetic,
            threads=threads,
        ).check()

    def boundary_config(self, seed: int, threads: int = 1) -> BoundarySolverConfig:
        b = self.boundary
        return BoundarySolverConfig(
            seed=seed,
            n_nodes=b.n_nodes,
            n_paths=b.n_paths,
            steps_per_year=b.steps_per_year,
            max_iter=b.max_iter,
            tol=b.tol,
            threads=threads,
        ).check()


def load_tree(path: str) -> dict:
    """Parse a YAML config file into a plain tree (no validation yet)."""
    with open(path, "r") as fh:
        tree = yaml.safe_load(fh)
    if not isinstance(tree, dict):
        raise ModelValidationError([f"config file {path} is not a key/value tree"])
    return tree


def apply_overrides(tree: dict, overrides: list[str]) -> dict:
    """Apply dotted `a.b.c=value` overrides to a config tree (values are YAML-parsed)."""
    import copy

    out = copy.deepcopy(tree)
    for item in overrides:
        if "=" not in item:
            raise ModelValidationError([f"override '{item}' is not of the form key=value"])
        key, raw = item.split("=", 1)
        parts = [p for p in key.strip().split(".") if p]
        if not parts:
            raise ModelValidationError([f"override '{item}' has an empty key"])
        node = out
        for part in parts[:-1]:
            if not isinstance(node.get(part), dict):
                node[part] = {}
            node = node[part]
        node[parts[-1]] = yaml.safe_load(raw)
    return out


def parse_tree(tree: dict) -> ModelConfig:
    """Validate a config tree; unknown keys or malformed values raise ModelValidationError."""
    try:
        return ModelConfig.model_validate(tree)
    except ValidationError as exc:
        msgs = [
            f"config.{'.'.join(str(p) for p in err['loc'])}: {err['msg']}"
            for err in exc.errors()
        ]
        raise ModelValidationError(msgs) from exc


def load_config(path: str, overrides: Optional[list[str]] = None) -> ModelConfig:
    tree = load_tree(path)
    if overrides:
        tree = apply_overrides(tree, overrides)
    return parse_tree(tree)


def config_hash(cfg: ModelConfig) -> str:
    """Short stable digest of the resolved config (echoed in every CSV row)."""
    payload = json.dumps(cfg.model_dump(mode="json"), sort_keys=True).encode()
    return hashlib.sha256(payload).hexdigest()[:12]
