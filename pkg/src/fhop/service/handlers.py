"""Mode handlers: each takes a request model, touches the filesystem through
the core package, and returns a response model. The HTTP app and the CLI
both dispatch through these.
"""

from __future__ import annotations

import dataclasses
import tempfile
from pathlib import Path

from .. import __version__
from ..agent import RLConfig, run_agent
from ..artifacts import load_agent, save_agent
from ..detections import log_digest, read_detection_log, write_detection_log
from ..errors import FhopError, StorageError, ValidationError
from ..evaluation import (
    RunConfig,
    evaluate,
    format_report_table,
    run_report,
    train_agent,
    write_report_csv,
)
from ..frames import load_frames, write_pgm
from ..scenes import generate_scene, preset
from ..state import StateConfig
from ..strategies import (
    OracleConfig,
    diff_threshold_baseline,
    fixed_skip,
    oracle_select,
)
from ..thresholds import DEFAULT_GRID, oracle_strategy, sweep_theta, write_sweep_csv
from ..traces import SkipTrace, read_trace, write_trace
from . import schemas


def health() -> schemas.HealthResponse:
    return schemas.HealthResponse(status="ok", version=__version__)


def synth(req: schemas.SynthRequest) -> schemas.SynthResponse:
    spec = dataclasses.replace(preset(req.preset), seed=req.seed)
    frames, log = generate_scene(spec)
    out = Path(req.out_dir)
    frames_dir = out / "frames"
    try:
        frames_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise StorageError(f"cannot create {frames_dir}: {exc}") from exc
    for frame in frames:
        write_pgm(frames_dir / f"{frame.index:06d}.pgm", frame.pixels)
    log_path = out / "detections.jsonl"
    write_detection_log(log, log_path)
    return schemas.SynthResponse(
        frames_dir=str(frames_dir), log_path=str(log_path), n_frames=len(frames)
    )


def train(req: schemas.TrainRequest) -> schemas.TrainResponse:
    frames = load_frames(req.frames_dir, req.downscale)
    log = read_detection_log(req.log_path)
    if len(log) != len(frames):
        raise ValidationError(
            f"frames ({len(frames)}) and log ({len(log)}) lengths differ"
        )
    rl = RLConfig(
        theta=req.theta,
        alpha=req.alpha,
        gamma=req.gamma,
        k_max=req.k_max,
        epochs=req.epochs,
        epsilon=req.epsilon,
        reward_mode=req.reward_mode,
    )
    artifact = train_agent(
        frames, log, StateConfig(), rl, req.variant, req.seed, req.fps
    )
    save_agent(artifact, req.out_path)
    return schemas.TrainResponse(
        artifact_path=req.out_path,
        config_fingerprint=artifact.config_fingerprint,
        n_states=artifact.state_model.k,
        k_max=artifact.q_table.k_max,
    )


def _trace_response(trace: SkipTrace, path: str) -> schemas.TraceResponse:
    return schemas.TraceResponse(
        trace_path=path,
        frames_total=trace.total_frames,
        frames_processed=trace.frames_processed,
        fraction_processed=trace.fraction_processed,
    )


def run(req: schemas.RunRequest) -> schemas.RunResponse:
    frames = load_frames(req.frames_dir, req.downscale)
    artifact = load_agent(req.agent_path)
    trace = run_agent(frames, artifact)
    out = Path(req.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise StorageError(f"cannot create {out}: {exc}") from exc
    trace_path = out / "trace.csv"
    write_trace(trace, trace_path)
    selected_path = out / "selected_frames.txt"
    try:
        selected_path.write_text(
            "".join(f"{i}\n" for i in trace.processed_indices()), encoding="utf-8"
        )
    except OSError as exc:
        raise StorageError(f"cannot write {selected_path}: {exc}") from exc
    return schemas.RunResponse(
        trace_path=str(trace_path),
        selected_path=str(selected_path),
        frames_total=trace.total_frames,
        frames_processed=trace.frames_processed,
        fraction_processed=trace.fraction_processed,
    )


def oracle(req: schemas.OracleRequest) -> schemas.TraceResponse:
    log = read_detection_log(req.log_path)
    cfg = OracleConfig(
        theta=req.theta, k_max=req.k_max, iou_threshold=req.iou_threshold
    )
    trace = oracle_select(log, cfg)
    write_trace(trace, req.out_path)
    return _trace_response(trace, req.out_path)


def baseline(req: schemas.BaselineRequest) -> schemas.TraceResponse:
    if req.kind == "fixed":
        if req.n_frames is not None:
            n = req.n_frames
        elif req.frames_dir is not None:
            n = len(load_frames(req.frames_dir, req.downscale))
        else:
            raise ValidationError("fixed baseline needs n_frames or frames_dir")
        trace = fixed_skip(n, req.k)
    elif req.kind == "diff":
        if req.frames_dir is None:
            raise ValidationError("diff baseline needs frames_dir")
        frames = load_frames(req.frames_dir, req.downscale)
        trace = diff_threshold_baseline(frames, req.tau, k_max=req.k_max)
    else:
        raise ValidationError(f"unknown baseline kind {req.kind!r}; use fixed or diff")
    write_trace(trace, req.out_path)
    return _trace_response(trace, req.out_path)


def sweep(req: schemas.SweepRequest) -> schemas.SweepResponse:
    log = read_detection_log(req.log_path)
    grid = tuple(req.grid) if req.grid else DEFAULT_GRID
    strategy = oracle_strategy(req.k_max, req.iou_threshold)
    best_theta, points = sweep_theta(log, strategy, grid, req.iou_threshold)
    if req.out_path:
        write_sweep_csv(best_theta, points, req.out_path)
    return schemas.SweepResponse(
        best_theta=best_theta,
        points=[schemas.SweepPointModel(**dataclasses.asdict(pt)) for pt in points],
        out_path=req.out_path,
    )


def eval_trace(req: schemas.EvalRequest) -> schemas.EvalReportModel:
    trace = read_trace(req.trace_path)
    log = read_detection_log(req.log_path)
    report = evaluate(trace, log, req.iou_threshold)
    return schemas.EvalReportModel(**dataclasses.asdict(report))


def report(req: schemas.ReportRequest) -> schemas.ReportResponse:
    frames = load_frames(req.frames_dir, req.downscale)
    log = read_detection_log(req.log_path)
    if len(log) != len(frames):
        raise ValidationError(
            f"frames ({len(frames)}) and log ({len(log)}) lengths differ"
        )
    cfg = RunConfig(
        frames_dir=req.frames_dir,
        log_path=req.log_path,
        rl=RLConfig(theta=0.2, k_max=req.k_max, epochs=req.epochs),
        split_fraction=req.split_fraction,
        targets=tuple(req.targets),
        seed=req.seed,
        fps=req.fps,
        variant=req.variant,
        downscale=req.downscale,
    )
    rows = run_report(frames, log, cfg)
    write_report_csv(rows, req.out_path)
    return schemas.ReportResponse(
        out_path=req.out_path,
        rows=[schemas.EvalReportModel(**dataclasses.asdict(r)) for r in rows],
        table=format_report_table(rows),
    )


def validate_log(req: schemas.ValidateLogRequest) -> schemas.ValidateLogResponse:
    try:
        log = read_detection_log(req.path)
    except FhopError as exc:
        return schemas.ValidateLogResponse(
            ok=False,
            frames=0,
            detections=0,
            digest="",
            roundtrip_ok=False,
            diagnostics=[str(exc)],
        )
    with tempfile.TemporaryDirectory() as tmp:
        copy_path = Path(tmp) / "roundtrip.jsonl"
        write_detection_log(log, copy_path)
        roundtrip_ok = read_detection_log(copy_path) == log
    return schemas.ValidateLogResponse(
        ok=True,
        frames=len(log),
        detections=sum(log.count(i) for i in range(len(log))),
        digest=log_digest(log),
        roundtrip_ok=roundtrip_ok,
        diagnostics=[],
    )
