"""Command line entry point.

Every command builds the same request model the HTTP service accepts and
dispatches locally by default, or to a running service when --server is
given. Exit codes: 0 success, 1 validation error, 2 I/O error.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click
from pydantic import ValidationError as PydanticValidationError

from .errors import StorageError, ValidationError
from .scenes import PRESET_NAMES
from .service import handlers, schemas
from .state import VARIANTS


def _request(model_cls, config_path: str | None, **overrides):
    """Build a request model from an optional JSON config plus CLI overrides."""
    data: dict = {}
    if config_path:
        try:
            text = Path(config_path).read_text(encoding="utf-8")
        except OSError as exc:
            raise StorageError(f"cannot read config {config_path}: {exc}") from exc
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config {config_path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ValidationError(f"config {config_path} must hold a JSON object")
    data.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return model_cls(**data)
    except PydanticValidationError as exc:
        raise ValidationError(str(exc)) from exc


def _dispatch(server: str | None, route: str, handler, req, resp_model):
    if server is None:
        return handler(req)
    import httpx

    url = f"{server.rstrip('/')}{route}"
    try:
        resp = httpx.post(url, json=req.model_dump(), timeout=600.0)
    except httpx.HTTPError as exc:
        raise StorageError(f"cannot reach server at {url}: {exc}") from exc
    if resp.status_code == 400:
        raise ValidationError(str(resp.json().get("detail", resp.text)))
    if resp.status_code != 200:
        raise StorageError(f"server returned {resp.status_code}: {resp.text}")
    return resp_model.model_validate(resp.json())


def _guard(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ValidationError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)
        except StorageError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)

    return wrapper


def _emit(resp) -> None:
    click.echo(resp.model_dump_json(indent=2))


@click.group()
@click.option("--server", default=None, metavar="URL",
              help="Dispatch to a running fhop service instead of in-process.")
@click.pass_context
def main(ctx, server):
    """Frame-skipping toolkit: train, run, and evaluate skip policies."""
    ctx.obj = server


@main.command()
@click.option("--preset", default=None, metavar="|".join(PRESET_NAMES))
@click.option("--out", "out_dir", default=None, metavar="DIR")
@click.option("--seed", type=int, default=None)
@click.pass_obj
@_guard
def synth(server, preset, out_dir, seed):
    """Generate a synthetic scene: frame directory plus detections.jsonl."""
    req = _request(schemas.SynthRequest, None, preset=preset, out_dir=out_dir, seed=seed)
    _emit(_dispatch(server, "/synth", handlers.synth, req, schemas.SynthResponse))


@main.command()
@click.option("--config", "config_path", default=None, metavar="PATH")
@click.option("--frames", "frames_dir", default=None, metavar="DIR")
@click.option("--log", "log_path", default=None, metavar="PATH")
@click.option("--out", "out_path", default=None, metavar="PATH")
@click.option("--theta", type=float, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--epochs", type=int, default=None)
@click.option("--k", "k_max", type=int, default=None, help="Max skip length.")
@click.option("--variant", default=None, metavar="|".join(VARIANTS))
@click.option("--fps", type=float, default=None)
@click.option("--downscale", type=int, default=None)
@click.pass_obj
@_guard
def train(server, config_path, **opts):
    """Fit the state clusters and train the skip policy; save the artifact."""
    req = _request(schemas.TrainRequest, config_path, **opts)
    _emit(_dispatch(server, "/train", handlers.train, req, schemas.TrainResponse))


@main.command()
@click.option("--frames", "frames_dir", default=None, metavar="DIR")
@click.option("--agent", "agent_path", default=None, metavar="PATH")
@click.option("--out", "out_dir", default=None, metavar="DIR")
@click.option("--downscale", type=int, default=None)
@click.pass_obj
@_guard
def run(server, **opts):
    """Run a trained agent over frames; write the trace and selected indices."""
    req = _request(schemas.RunRequest, None, **opts)
    _emit(_dispatch(server, "/run", handlers.run, req, schemas.RunResponse))


@main.command()
@click.option("--config", "config_path", default=None, metavar="PATH")
@click.option("--log", "log_path", default=None, metavar="PATH")
@click.option("--theta", type=float, default=None)
@click.option("--out", "out_path", default=None, metavar="PATH")
@click.option("--k", "k_max", type=int, default=None, help="Max skip length.")
@click.option("--iou", "iou_threshold", type=float, default=None)
@click.pass_obj
@_guard
def oracle(server, config_path, **opts):
    """Exact minimal frame selection for a detection log at a threshold."""
    req = _request(schemas.OracleRequest, config_path, **opts)
    _emit(_dispatch(server, "/oracle", handlers.oracle, req, schemas.TraceResponse))


@main.command()
@click.option("--kind", default=None, metavar="fixed|diff")
@click.option("--out", "out_path", default=None, metavar="PATH")
@click.option("--frames", "frames_dir", default=None, metavar="DIR")
@click.option("--n-frames", type=int, default=None)
@click.option("--k", type=int, default=None, help="Skip length for kind=fixed.")
@click.option("--tau", type=float, default=None, help="Change fraction for kind=diff.")
@click.option("--k-max", type=int, default=None, help="Skip cap for kind=diff.")
@click.option("--downscale", type=int, default=None)
@click.pass_obj
@_guard
def baseline(server, **opts):
    """Fixed-skip or pixel-difference-threshold baseline trace."""
    req = _request(schemas.BaselineRequest, None, **opts)
    _emit(_dispatch(server, "/baseline", handlers.baseline, req, schemas.TraceResponse))


@main.command()
@click.option("--config", "config_path", default=None, metavar="PATH")
@click.option("--log", "log_path", default=None, metavar="PATH")
@click.option("--k", "k_max", type=int, default=None, help="Max skip length.")
@click.option("--iou", "iou_threshold", type=float, default=None)
@click.option("--grid", default=None, metavar="T1,T2,...",
              help="Theta grid; defaults to 0.10..0.50 step 0.05.")
@click.option("--out", "out_path", default=None, metavar="PATH")
@click.pass_obj
@_guard
def sweep(server, config_path, grid, **opts):
    """Sweep the theta grid with the oracle and pick the E^2+P^2 minimizer."""
    parsed = [float(x) for x in grid.split(",")] if grid else None
    req = _request(schemas.SweepRequest, config_path, grid=parsed, **opts)
    _emit(_dispatch(server, "/sweep", handlers.sweep, req, schemas.SweepResponse))


@main.command("eval")
@click.option("--trace", "trace_path", default=None, metavar="PATH")
@click.option("--log", "log_path", default=None, metavar="PATH")
@click.option("--iou", "iou_threshold", type=float, default=None)
@click.pass_obj
@_guard
def eval_cmd(server, **opts):
    """Score a skip trace against a detection log."""
    req = _request(schemas.EvalRequest, None, **opts)
    _emit(_dispatch(server, "/eval", handlers.eval_trace, req, schemas.EvalReportModel))


@main.command()
@click.option("--config", "config_path", default=None, metavar="PATH")
@click.option("--frames", "frames_dir", default=None, metavar="DIR")
@click.option("--log", "log_path", default=None, metavar="PATH")
@click.option("--out", "out_path", default=None, metavar="PATH")
@click.option("--seed", type=int, default=None)
@click.option("--targets", default=None, metavar="F1,F2,...",
              help="Target F1 values; defaults to 0.7,0.8,0.9.")
@click.option("--split", "split_fraction", type=float, default=None)
@click.option("--k", "k_max", type=int, default=None, help="Max skip length.")
@click.option("--epochs", type=int, default=None)
@click.option("--variant", default=None, metavar="|".join(VARIANTS))
@click.option("--fps", type=float, default=None)
@click.option("--downscale", type=int, default=None)
@click.pass_obj
@_guard
def report(server, config_path, targets, **opts):
    """Train/test comparison of oracle, agent, and fixed-skip per target F1."""
    parsed = [float(x) for x in targets.split(",")] if targets else None
    req = _request(schemas.ReportRequest, config_path, targets=parsed, **opts)
    resp = _dispatch(server, "/report", handlers.report, req, schemas.ReportResponse)
    click.echo(resp.table, nl=False)
    click.echo(f"report written to {resp.out_path}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@_guard
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=host, port=port, log_level="info")


if __name__ == "__main__":
    main()
