"""FastAPI service wrapping the pricing engine."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import CFDomainError, ConvergenceError, ModelValidationError
from . import runs
from .schemas import (
    AmericanRequest,
    BoundaryResponse,
    CheckSuiteRequest,
    CheckSuiteResponse,
    ConvergenceRequest,
    ConvergenceResponse,
    PriceRequest,
    PriceResponse,
    ValidateRequest,
    ValidateResponse,
)

app = FastAPI(title="svjdx pricing service", version=__version__)


@app.exception_handler(ModelValidationError)
async def _validation_handler(_: Request, exc: ModelValidationError):
    return JSONResponse(
        status_code=422, content={"error": "validation", "messages": exc.violations}
    )


@app.exception_handler(CFDomainError)
async def _domain_handler(_: Request, exc: CFDomainError):
    return JSONResponse(status_code=400, content={"error": "domain", "messages": [str(exc)]})


@app.exception_handler(ConvergenceError)
async def _convergence_handler(_: Request, exc: ConvergenceError):
    return JSONResponse(
        status_code=409, content={"error": "convergence", "messages": [str(exc)]}
    )


@app.get("/v1/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/v1/validate", response_model=ValidateResponse)
def validate_model(req: ValidateRequest) -> ValidateResponse:
    return runs.run_validate(req.config)


@app.post("/v1/price/eu-fourier", response_model=PriceResponse)
def price_eu_fourier(req: PriceRequest) -> PriceResponse:
    return runs.run_price("price-eu-fourier", req)


@app.post("/v1/price/eu-mc", response_model=PriceResponse)
def price_eu_mc(req: PriceRequest) -> PriceResponse:
    return runs.run_price("price-eu-mc", req)


@app.post("/v1/price/eu-decomp", response_model=PriceResponse)
def price_eu_decomp(req: PriceRequest) -> PriceResponse:
    return runs.run_price("price-eu-decomp", req)


@app.post("/v1/price/spread", response_model=PriceResponse)
def price_spread(req: PriceRequest) -> PriceResponse:
    return runs.run_price("price-spread", req)


@app.post("/v1/price/american", response_model=PriceResponse)
def price_american(req: AmericanRequest) -> PriceResponse:
    return runs.run_price("price-am", req)


@app.post("/v1/boundary/solve", response_model=BoundaryResponse)
def boundary_solve(req: PriceRequest) -> BoundaryResponse:
    return runs.run_boundary(req)


@app.post("/v1/convergence", response_model=ConvergenceResponse)
def convergence(req: ConvergenceRequest) -> ConvergenceResponse:
    return runs.run_convergence(req)


@app.post("/v1/checks", response_model=CheckSuiteResponse)
def checks(req: CheckSuiteRequest) -> CheckSuiteResponse:
    return runs.run_check_suite(req)
