"""Request/response models shared by the HTTP service and the CLI."""

from __future__ import annotations

from pydantic import BaseModel


class HealthResponse(BaseModel):
    status: str
    version: str


class SynthRequest(BaseModel):
    preset: str
    out_dir: str
    seed: int = 0


class SynthResponse(BaseModel):
    frames_dir: str
    log_path: str
    n_frames: int


class TrainRequest(BaseModel):
    frames_dir: str
    log_path: str
    out_path: str
    theta: float
    seed: int = 0
    epochs: int = 20
    k_max: int = 30
    alpha: float = 0.1
    gamma: float = 0.9
    epsilon: float = 1.0
    reward_mode: str = "max"
    variant: str = "chunk"
    fps: float = 30.0
    downscale: int | None = None


class TrainResponse(BaseModel):
    artifact_path: str
    config_fingerprint: str
    n_states: int
    k_max: int


class RunRequest(BaseModel):
    frames_dir: str
    agent_path: str
    out_dir: str
    downscale: int | None = None


class RunResponse(BaseModel):
    trace_path: str
    selected_path: str
    frames_total: int
    frames_processed: int
    fraction_processed: float


class OracleRequest(BaseModel):
    log_path: str
    theta: float
    out_path: str
    k_max: int = 30
    iou_threshold: float = 0.5


class TraceResponse(BaseModel):
    trace_path: str
    frames_total: int
    frames_processed: int
    fraction_processed: float


class BaselineRequest(BaseModel):
    kind: str
    out_path: str
    frames_dir: str | None = None
    n_frames: int | None = None
    k: int = 0
    tau: float = 0.1
    k_max: int = 30
    downscale: int | None = None


class SweepRequest(BaseModel):
    log_path: str
    k_max: int = 30
    iou_threshold: float = 0.5
    grid: list[float] | None = None
    out_path: str | None = None


class SweepPointModel(BaseModel):
    theta: float
    fraction_processed: float
    error_per_skipped: float
    objective: float


class SweepResponse(BaseModel):
    best_theta: float
    points: list[SweepPointModel]
    out_path: str | None = None


class EvalRequest(BaseModel):
    trace_path: str
    log_path: str
    iou_threshold: float = 0.5


class EvalReportModel(BaseModel):
    strategy: str
    target_f1: float | None = None
    theta: float | None = None
    fraction_processed: float
    fraction_filtered: float
    error_per_skipped: float
    achieved_f1: float
    achieved_f1_skipped_only: float
    count_accuracy: float
    frames_total: int
    frames_processed: int


class ReportRequest(BaseModel):
    frames_dir: str
    log_path: str
    out_path: str
    seed: int = 0
    targets: list[float] = [0.7, 0.8, 0.9]
    split_fraction: float = 0.5
    k_max: int = 30
    epochs: int = 20
    variant: str = "chunk"
    fps: float = 30.0
    downscale: int | None = None


class ReportResponse(BaseModel):
    out_path: str
    rows: list[EvalReportModel]
    table: str


class ValidateLogRequest(BaseModel):
    path: str


class ValidateLogResponse(BaseModel):
    ok: bool
    frames: int
    detections: int
    digest: str
    roundtrip_ok: bool
    diagnostics: list[str]
