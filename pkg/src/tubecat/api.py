"""HTTP front end over the shared service handlers."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import __version__
from .category import bundled_names
from .service import (
    CheckRepReport,
    CheckRepRequest,
    EnumerateReport,
    EnumerateRequest,
    EXIT_LOAD_ERROR,
    EXIT_SEARCH_BUDGET,
    ModularDataReport,
    ModularDataRequest,
    VerifyReport,
    VerifyRequest,
    handle_check_rep,
    handle_enumerate,
    handle_modular_data,
    handle_verify,
)

app = FastAPI(title="tubecat", version=__version__)


def _respond(code: int, report: dict) -> dict:
    if code == EXIT_LOAD_ERROR:
        raise HTTPException(status_code=400, detail=report)
    if code == EXIT_SEARCH_BUDGET:
        raise HTTPException(status_code=422, detail=report)
    return report


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.get("/categories")
def categories() -> dict:
    return {"categories": list(bundled_names())}


@app.post("/verify", response_model=VerifyReport)
def verify(req: VerifyRequest):
    return _respond(*handle_verify(req))


@app.post("/modular-data", response_model=ModularDataReport)
def modular_data(req: ModularDataRequest):
    return _respond(*handle_modular_data(req))


@app.post("/enumerate", response_model=EnumerateReport)
def enumerate_invariants(req: EnumerateRequest):
    return _respond(*handle_enumerate(req))


@app.post("/check-rep", response_model=CheckRepReport)
def check_rep(req: CheckRepRequest):
    return _respond(*handle_check_rep(req))
