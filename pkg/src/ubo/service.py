"""FastAPI service wrapping the optimization engine and the benchmark lab.

Endpoints:
    GET  /health       liveness probe
    GET  /benchmarks   available objectives with their canonical domains
    POST /run          execute one (strategy, benchmark, seed) run
    POST /compare      strategies x seeds matrix with aggregated curves

The CLI talks to this app in-process; ``uvicorn ubo.service:app`` serves
it over the network.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import traceio
from .benchmarks import BENCHMARKS
from .experiment import run_matrix, run_single
from .gp import NumericError
from .schemas import (
    BenchmarkInfo,
    CompareRequest,
    CompareResponse,
    CompareRow,
    RunResponse,
    RunSettings,
)

app = FastAPI(title="ubo", version="0.1.0")


@app.get("/health")
def health():
    return {"status": "ok"}


@app.get("/benchmarks", response_model=list[BenchmarkInfo])
def list_benchmarks():
    return [
        BenchmarkInfo(
            name=b.name,
            dim=b.dim,
            domain_lower=[float(v) for v in b.domain_lower],
            domain_upper=[float(v) for v in b.domain_upper],
            max_value=b.max_value,
        )
        for b in BENCHMARKS.values()
    ]


@app.post("/run", response_model=RunResponse)
def run_endpoint(settings: RunSettings) -> RunResponse:
    try:
        normalized, trace = run_single(settings.model_dump())
    except NumericError as exc:
        raise HTTPException(status_code=500, detail=f"numeric-failure: {exc}")
    dim = trace.recommendation_x.size
    return RunResponse(
        settings=RunSettings(**normalized),
        dim=dim,
        columns=traceio.columns(dim),
        rows=traceio.trace_rows(trace),
        recommendation_x=[float(v) for v in trace.recommendation_x],
        recommendation_y=trace.recommendation_y,
        incomplete=trace.incomplete,
    )


@app.post("/compare", response_model=CompareResponse)
def compare_endpoint(request: CompareRequest) -> CompareResponse:
    try:
        rows = run_matrix(
            request.settings.model_dump(),
            request.strategies,
            request.seeds,
            jobs=request.jobs,
        )
    except NumericError as exc:
        raise HTTPException(status_code=500, detail=f"numeric-failure: {exc}")
    return CompareResponse(rows=[CompareRow(**r) for r in rows])
