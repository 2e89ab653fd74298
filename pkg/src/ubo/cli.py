"""Command-line client for the optimization service.

The CLI builds the FastAPI app in-process (no network needed) and talks to
it over an HTTP test transport, so the same request/response surface is
exercised whether runs come from the command line or a deployed server.

Exit codes: 0 success, 2 configuration error, 3 numeric failure.
"""

from __future__ import annotations

import json
import os
import sys

import click
from fastapi.testclient import TestClient

from . import traceio
from .service import app

CONFIG_FIELDS = (
    "strategy",
    "benchmark",
    "seed",
    "epsilon",
    "delta",
    "beta_scale",
    "budget_multiplier",
    "init_multiplier",
    "kernel",
    "refit_every",
    "placement",
)


def _client() -> TestClient:
    return TestClient(app, raise_server_exceptions=False)


def _load_config(path):
    if path is None:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        click.echo(f"error: cannot read config {path}: {exc}", err=True)
        sys.exit(2)
    if not isinstance(cfg, dict):
        click.echo("error: config must be a JSON object", err=True)
        sys.exit(2)
    unknown = set(cfg) - set(CONFIG_FIELDS)
    if unknown:
        click.echo(f"error: unknown config field(s): {sorted(unknown)}", err=True)
        sys.exit(2)
    return cfg


def _out_dir(out):
    return os.environ.get("UBO_OUT_DIR", out)


def _fail_from_response(resp):
    if resp.status_code == 422:
        detail = resp.json().get("detail", [])
        msgs = []
        for item in detail if isinstance(detail, list) else [detail]:
            loc = ".".join(str(p) for p in item.get("loc", []) if p != "body")
            msgs.append(f"{loc}: {item.get('msg', 'invalid value')}")
        click.echo("error: invalid configuration: " + "; ".join(msgs), err=True)
        sys.exit(2)
    if resp.status_code == 500 and "numeric-failure" in resp.text:
        click.echo(f"error: {resp.json().get('detail')}", err=True)
        sys.exit(3)
    click.echo(f"error: service returned {resp.status_code}: {resp.text}", err=True)
    sys.exit(3)


@click.group()
def main():
    """Bayesian optimization with automatic search-space expansion."""


@main.command()
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="JSON config file.")
@click.option("--out", default=".", show_default=True,
              help="Output directory (UBO_OUT_DIR overrides).")
@click.option("--seed", type=int, default=None)
@click.option("--strategy", default=None)
@click.option("--benchmark", default=None)
def run(config_path, out, seed, strategy, benchmark):
    """Execute one run and write its trace CSV and summary JSON."""
    cfg = _load_config(config_path)
    for key, val in (("seed", seed), ("strategy", strategy), ("benchmark", benchmark)):
        if val is not None:
            cfg[key] = val
    resp = _client().post("/run", json=cfg)
    if resp.status_code != 200:
        _fail_from_response(resp)
    body = resp.json()
    settings = body["settings"]
    stem = f"run_{settings['benchmark']}_{settings['strategy']}_seed{settings['seed']}"
    out_dir = _out_dir(out)
    csv_path = os.path.join(out_dir, stem + ".csv")
    traceio.write_trace_csv(csv_path, body["dim"], body["rows"])
    summary = {
        "settings": settings,
        "recommendation_x": body["recommendation_x"],
        "recommendation_y": body["recommendation_y"],
        "incomplete": body["incomplete"],
        "trace_csv": os.path.basename(csv_path),
    }
    traceio.write_summary_json(os.path.join(out_dir, stem + ".json"), summary)
    click.echo(f"wrote {csv_path}")
    click.echo(f"best value: {body['recommendation_y']!r}")


@main.command()
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--out", default=".", show_default=True)
@click.option("--seed", type=int, default=0, help="First seed of the repetition block.")
@click.option("--strategy", "strategies", multiple=True,
              help="Repeatable; defaults to ubo + both baselines.")
@click.option("--benchmark", default=None)
@click.option("--reps", type=int, default=1, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
def compare(config_path, out, seed, strategies, benchmark, reps, jobs):
    """Run a strategies-by-seeds matrix and write aggregated curves."""
    cfg = _load_config(config_path)
    if benchmark is not None:
        cfg["benchmark"] = benchmark
    if not strategies:
        strategies = ("ubo", "vanilla-fixed-box", "volume-doubling")
    if reps < 1:
        click.echo("error: reps must be >= 1", err=True)
        sys.exit(2)
    request = {
        "settings": cfg,
        "strategies": list(strategies),
        "seeds": list(range(seed, seed + reps)),
        "jobs": jobs,
    }
    resp = _client().post("/compare", json=request)
    if resp.status_code != 200:
        _fail_from_response(resp)
    rows = resp.json()["rows"]
    bench_name = cfg.get("benchmark", "beale")
    path = os.path.join(_out_dir(out), f"compare_{bench_name}.csv")
    traceio.write_compare_csv(path, rows)
    click.echo(f"wrote {path}")


@main.command()
def benchmarks():
    """List available benchmark objectives."""
    resp = _client().get("/benchmarks")
    for b in resp.json():
        click.echo(f"{b['name']}: d={b['dim']}, max={b['max_value']!r}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Serve the HTTP API (requires uvicorn)."""
    import uvicorn

    uvicorn.run("ubo.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
