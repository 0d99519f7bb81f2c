"""Batch command-line front end: a thin client over the pricing service.

Commands parse the config file, apply overrides, build the same request
models the HTTP API accepts, execute them in-process (or against a remote
service via --server), and write CSV reports. Exit codes: 0 success,
2 validation failure, 3 numerical-domain failure, 4 non-convergence;
check-suite exits 1 when any criterion fails.
"""

from __future__ import annotations

import csv
import os
import sys
from typing import List, Optional

import click

from .config import config_hash, load_config
from .errors import CFDomainError, ConvergenceError, ModelValidationError
from .reporting import CSV_HEADER
from .service import runs
from .service.schemas import (
    AmericanRequest,
    BoundaryResponse,
    CheckSuiteRequest,
    ConvergenceRequest,
    PriceRequest,
    PriceResponse,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_VALIDATION = 2
EXIT_DOMAIN = 3
EXIT_NO_CONVERGENCE = 4

_REMOTE_PATHS = {
    "price-eu-fourier": "/v1/price/eu-fourier",
    "price-eu-mc": "/v1/price/eu-mc",
    "price-eu-decomp": "/v1/price/eu-decomp",
    "price-spread": "/v1/price/spread",
    "price-am": "/v1/price/american",
    "solve-boundary": "/v1/boundary/solve",
    "convergence": "/v1/convergence",
    "check-suite": "/v1/checks",
}


def _fail(code: int, messages: List[str]) -> None:
    for msg in messages:
        click.echo(f"error: {msg}", err=True)
    sys.exit(code)


def _resolve_out(out: str) -> str:
    if out == "-":
        return out
    base = os.environ.get("SVJDX_OUT_DIR")
    if base and not os.path.isabs(out):
        return os.path.join(base, out)
    return out


def _write_csv(out: str, header: List[str], rows: List[List], summary: str) -> None:
    out = _resolve_out(out)
    if out == "-":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        click.echo(summary, err=True)
    else:
        parent = os.path.dirname(out)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(out, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
        click.echo(f"{summary} -> {out}")


def _post_remote(server: str, command: str, payload: dict) -> dict:
    import httpx

    url = server.rstrip("/") + _REMOTE_PATHS[command]
    resp = httpx.post(url, json=payload, timeout=3600.0)
    if resp.status_code == 200:
        return resp.json()
    try:
        body = resp.json()
    except Exception:
        _fail(EXIT_VALIDATION, [f"server error {resp.status_code}: {resp.text[:200]}"])
    kind = body.get("error")
    messages = body.get("messages", [resp.text[:200]])
    if kind == "domain":
        _fail(EXIT_DOMAIN, messages)
    if kind == "convergence":
        _fail(EXIT_NO_CONVERGENCE, messages)
    _fail(EXIT_VALIDATION, messages if isinstance(messages, list) else [str(messages)])


def _common(fn):
    fn = click.option("--config", "-c", "config_path", required=True, help="YAML config file")(fn)
    fn = click.option(
        "--override", "-o", "overrides", multiple=True, metavar="KEY=VALUE",
        help="dotted config override, applied before validation",
    )(fn)
    fn = click.option("--out", default="-", show_default=True, help="output CSV path ('-' = stdout)")(fn)
    fn = click.option("--seed", default=1234, show_default=True, type=int)(fn)
    fn = click.option(
        "--threads", default=1, show_default=True, type=int,
        help="worker cap; 1 guarantees bit-exact reproducibility",
    )(fn)
    fn = click.option("--server", default=None, help="remote service URL (default: run in-process)")(fn)
    return fn


def _build_request(config_path, overrides, seed, threads, cls=PriceRequest, **extra):
    cfg = load_config(config_path, list(overrides))
    return cls(config=cfg, seed=seed, threads=threads, **extra)


def _run_price_command(command, config_path, overrides, out, seed, threads, server, **extra):
    cls = AmericanRequest if command == "price-am" else PriceRequest
    try:
        req = _build_request(config_path, overrides, seed, threads, cls=cls, **extra)
        if server:
            resp = PriceResponse.model_validate(
                _post_remote(server, command, req.model_dump(mode="json"))
            )
        else:
            resp = runs.run_price(command, req)
    except ModelValidationError as exc:
        _fail(EXIT_VALIDATION, exc.violations)
    except CFDomainError as exc:
        _fail(EXIT_DOMAIN, [str(exc)])
    except ConvergenceError as exc:
        _fail(EXIT_NO_CONVERGENCE, [str(exc)])
    except OSError as exc:
        _fail(EXIT_VALIDATION, [str(exc)])
    report = resp.to_report()
    row = report.csv_row(resp.config_hash)
    err = report.error_measure
    summary = (
        f"{command} price={report.price:.6f}"
        + (f" +-{err:.2e}" if err is not None else "")
        + f" method={report.method} hash={resp.config_hash}"
    )
    _write_csv(out, CSV_HEADER, [row], summary)


def _register_price_command(name: str, help_text: str, with_method: bool = False):
    def _cmd(config_path, overrides, out, seed, threads, server, **extra):
        _run_price_command(name, config_path, overrides, out, seed, threads, server, **extra)

    _cmd.__name__ = name.replace("-", "_")
    wrapped = _common(_cmd)
    if with_method:
        wrapped = click.option(
            "--method", type=click.Choice(["eep", "lsm"]), default="eep", show_default=True,
            help="eep: solved boundary + premium decomposition; lsm: regression MC",
        )(wrapped)
    return main.command(name=name, help=help_text)(wrapped)


@click.group()
@click.version_option()
def main():
    """Exchange/spread option pricing under two-asset SVJD dynamics."""


_register_price_command("price-eu-fourier", "European exchange price via Fourier inversion.")
_register_price_command("price-eu-mc", "European exchange price via Monte Carlo.")
_register_price_command("price-eu-decomp", "European price via the numeraire-measure decomposition.")
_register_price_command("price-spread", "Spread option lower bound (strike from config).")
_register_price_command("price-am", "American exchange price.", with_method=True)


@main.command(name="solve-boundary", help="Solve the early-exercise boundary; CSV columns t,B,residual.")
@_common
def solve_boundary_cmd(config_path, overrides, out, seed, threads, server):
    try:
        req = _build_request(config_path, overrides, seed, threads)
        if server:
            resp = BoundaryResponse.model_validate(
                _post_remote(server, "solve-boundary", req.model_dump(mode="json"))
            )
        else:
            resp = runs.run_boundary(req)
    except ModelValidationError as exc:
        _fail(EXIT_VALIDATION, exc.violations)
    except CFDomainError as exc:
        _fail(EXIT_DOMAIN, [str(exc)])
    except ConvergenceError as exc:
        _fail(EXIT_NO_CONVERGENCE, [str(exc)])
    except OSError as exc:
        _fail(EXIT_VALIDATION, [str(exc)])
    rows = [
        [repr(t), "inf" if b is None else repr(b), repr(res)]
        for t, b, res in zip(resp.times, resp.values, resp.residuals)
    ]
    summary = f"solve-boundary nodes={len(rows)} converged={resp.converged} hash={resp.config_hash}"
    _write_csv(out, ["t", "B", "residual"], rows, summary)
    if not resp.converged:
        _fail(EXIT_NO_CONVERGENCE, ["boundary iteration did not meet tolerance; see residual column"])


@main.command(name="convergence", help="Geometric resolution sweep; CSV columns axis_value,price,err,wall_ms.")
@_common
@click.option("--axis", type=click.Choice(["paths", "steps", "nodes", "zmax"]), required=True)
@click.option("--start", type=float, default=None, help="sweep start (default per axis)")
@click.option("--stop", type=float, default=None, help="sweep stop (default per axis)")
def convergence_cmd(config_path, overrides, out, seed, threads, server, axis, start, stop):
    try:
        req = _build_request(
            config_path, overrides, seed, threads,
            cls=ConvergenceRequest, axis=axis, start=start, stop=stop,
        )
        if server:
            from .service.schemas import ConvergenceResponse

            resp = ConvergenceResponse.model_validate(
                _post_remote(server, "convergence", req.model_dump(mode="json"))
            )
        else:
            resp = runs.run_convergence(req)
    except ModelValidationError as exc:
        _fail(EXIT_VALIDATION, exc.violations)
    except CFDomainError as exc:
        _fail(EXIT_DOMAIN, [str(exc)])
    except ConvergenceError as exc:
        _fail(EXIT_NO_CONVERGENCE, [str(exc)])
    except OSError as exc:
        _fail(EXIT_VALIDATION, [str(exc)])
    rows = [
        [repr(r.axis_value), repr(r.price), "" if r.err is None else repr(r.err), f"{r.wall_ms:.3f}"]
        for r in resp.rows
    ]
    summary = f"convergence axis={axis} points={len(rows)} hash={resp.config_hash}"
    _write_csv(out, ["axis_value", "price", "stderr_or_quad_err", "wall_ms"], rows, summary)


@main.command(name="check-suite", help="Run the acceptance criteria battery; CSV pass/fail table.")
@click.option("--out", default="-", show_default=True)
@click.option("--scale", default=1.0, show_default=True, type=float,
              help="path-count scale factor (1.0 = full acceptance scale)")
@click.option("--names", multiple=True, help="run only the named criteria")
@click.option("--threads", default=1, show_default=True, type=int)
@click.option("--server", default=None)
def check_suite_cmd(out, scale, names, threads, server):
    try:
        req = CheckSuiteRequest(scale=scale, names=list(names) or None, threads=threads)
        if server:
            from .service.schemas import CheckSuiteResponse

            resp = CheckSuiteResponse.model_validate(
                _post_remote(server, "check-suite", req.model_dump(mode="json"))
            )
        else:
            resp = runs.run_check_suite(req)
    except ModelValidationError as exc:
        _fail(EXIT_VALIDATION, exc.violations)
    rows = [
        [r.name, "PASS" if r.passed else "FAIL", r.detail, f"{r.wall_ms:.1f}"]
        for r in resp.rows
    ]
    for r in resp.rows:
        click.echo(f"[{'PASS' if r.passed else 'FAIL'}] {r.name}: {r.detail}", err=(out == "-"))
    summary = f"check-suite {'all passed' if resp.all_passed else 'FAILURES PRESENT'}"
    _write_csv(out, ["criterion", "passed", "detail", "wall_ms"], rows, summary)
    if not resp.all_passed:
        sys.exit(EXIT_CHECK_FAILED)


@main.command(name="serve", help="Run the pricing service with uvicorn.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve_cmd(host, port):
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
