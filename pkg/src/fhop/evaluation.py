"""End-to-end harness: train/test splitting, strategy execution, and the
comparison metrics reported per strategy and target accuracy.

Skipped frames are scored against their surrogate (the processed frame that
stands in for them): achieved_f1 averages the per-frame F1 against the
surrogate over ALL frames, counting processed frames as 1.0. A skipped-only
average is reported alongside.
"""

from __future__ import annotations

import csv
import dataclasses
import math
from pathlib import Path
from typing import Sequence

from .agent import RLConfig, train, run_agent
from .artifacts import AgentArtifact, config_fingerprint
from .detections import DetectionLog
from .errors import FhopError, StorageError, ValidationError
from .frames import Frame
from .metrics import DEFAULT_IOU_THRESHOLD, count_accuracy, f1_score
from .state import (
    StateConfig,
    StateModel,
    VARIANT_CHUNK,
    VARIANT_DETECTION,
    VARIANT_WHOLE,
    chunk_diff_features,
    detection_state_features,
    fit_clusters,
    whole_diff_feature,
)
from .strategies import OracleConfig, fixed_skip, oracle_select, trace_feasible
from .thresholds import mean_skip_error
from .traces import SkipTrace

DEFAULT_TARGETS = (0.7, 0.8, 0.9)


@dataclasses.dataclass(frozen=True)
class EvalReport:
    strategy: str
    target_f1: float | None
    theta: float | None
    fraction_processed: float
    fraction_filtered: float
    error_per_skipped: float
    achieved_f1: float
    achieved_f1_skipped_only: float
    count_accuracy: float
    frames_total: int
    frames_processed: int

    def __post_init__(self) -> None:
        if self.fraction_processed + self.fraction_filtered != 1.0:
            raise ValidationError("fraction_processed + fraction_filtered must equal 1")
        for name in ("achieved_f1", "achieved_f1_skipped_only", "count_accuracy"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValidationError(f"{name} must be in [0, 1], got {value}")
        if self.frames_processed > self.frames_total:
            raise ValidationError("frames_processed cannot exceed frames_total")


@dataclasses.dataclass(frozen=True)
class RunConfig:
    frames_dir: str | None = None
    log_path: str | None = None
    state: StateConfig = StateConfig()
    rl: RLConfig = RLConfig(theta=0.2)
    split_fraction: float = 0.5
    targets: tuple[float, ...] = DEFAULT_TARGETS
    seed: int = 0
    fps: float = 30.0
    variant: str = VARIANT_CHUNK
    downscale: int | None = None

    def __post_init__(self) -> None:
        if not (0.0 < self.split_fraction < 1.0):
            raise ValidationError(
                f"split_fraction must be in (0, 1), got {self.split_fraction}"
            )
        if len(self.targets) == 0:
            raise ValidationError("targets must be non-empty")
        for t in self.targets:
            if not (0.0 < t < 1.0):
                raise ValidationError(f"target F1 must be in (0, 1), got {t}")
        if self.fps <= 0:
            raise ValidationError(f"fps must be positive, got {self.fps}")


def theta_for_target(target_f1: float) -> float:
    return round(1.0 - target_f1, 12)


def split(
    log: DetectionLog,
    frames: Sequence[Frame],
    fraction: float,
) -> tuple[tuple[list[Frame], DetectionLog], tuple[list[Frame], DetectionLog]]:
    """Contiguous prefix for training, remainder re-indexed from 0 for testing."""
    if not (0.0 < fraction < 1.0):
        raise ValidationError(f"split fraction must be in (0, 1), got {fraction}")
    n = len(frames)
    if len(log) != n:
        raise ValidationError(f"frames ({n}) and log ({len(log)}) lengths differ")
    n_train = math.floor(fraction * n)
    if n_train < 1 or n - n_train < 1:
        raise ValidationError(f"split of {n} frames at {fraction} leaves an empty side")
    train_frames = list(frames[:n_train])
    test_frames = [
        dataclasses.replace(f, index=i) for i, f in enumerate(frames[n_train:])
    ]
    return (
        (train_frames, log.slice(0, n_train)),
        (test_frames, log.slice(n_train, n)),
    )


def evaluate(
    trace: SkipTrace,
    log: DetectionLog,
    iou_threshold: float = DEFAULT_IOU_THRESHOLD,
    strategy: str = "",
    theta: float | None = None,
    target_f1: float | None = None,
) -> EvalReport:
    if trace.total_frames != len(log):
        raise ValidationError(
            f"trace covers {trace.total_frames} frames but the log has {len(log)}"
        )
    n = trace.total_frames
    surrogates = trace.surrogate_indices()
    per_frame = []
    skipped_only = []
    for f in range(n):
        s = int(surrogates[f])
        if s == f:
            per_frame.append(1.0)
            continue
        value = f1_score(log.detections(f), log.detections(s), iou_threshold)
        per_frame.append(value)
        skipped_only.append(value)
    processed = trace.frames_processed
    fp = trace.fraction_processed
    return EvalReport(
        strategy=strategy,
        target_f1=target_f1,
        theta=theta,
        fraction_processed=fp,
        fraction_filtered=1.0 - fp,
        error_per_skipped=mean_skip_error(log, trace, iou_threshold),
        achieved_f1=sum(per_frame) / n,
        achieved_f1_skipped_only=(
            sum(skipped_only) / len(skipped_only) if skipped_only else 1.0
        ),
        count_accuracy=count_accuracy(log, trace),
        frames_total=n,
        frames_processed=processed,
    )


def clustering_features(
    frames: Sequence[Frame],
    log: DetectionLog | None,
    cfg: StateConfig,
    variant: str = VARIANT_CHUNK,
):
    """Consecutive-frame difference features, the stream the clusters are fit on."""
    if len(frames) < 2:
        raise ValidationError("need at least 2 frames to build difference features")
    if variant == VARIANT_CHUNK:
        return [chunk_diff_features(frames[t - 1], frames[t], cfg) for t in range(1, len(frames))]
    if variant == VARIANT_WHOLE:
        return [whole_diff_feature(frames[t - 1], frames[t], cfg) for t in range(1, len(frames))]
    if variant == VARIANT_DETECTION:
        if log is None:
            raise ValidationError("detection-variant features require a detection log")
        if len(log) != len(frames):
            raise ValidationError("frames and log lengths differ")
        return [detection_state_features(log, t - 1, t, cfg) for t in range(1, len(frames))]
    raise ValidationError(f"unknown state variant {variant!r}")


def fit_state_model(
    frames: Sequence[Frame],
    log: DetectionLog | None,
    cfg: StateConfig,
    variant: str,
    seed: int,
    fps: float = 30.0,
) -> StateModel:
    features = clustering_features(frames, log, cfg, variant)
    return fit_clusters(features, cfg, seed=seed, fps=fps)


def train_agent(
    frames: Sequence[Frame],
    log: DetectionLog,
    state_cfg: StateConfig,
    rl_cfg: RLConfig,
    variant: str,
    seed: int,
    fps: float = 30.0,
) -> AgentArtifact:
    model = fit_state_model(frames, log, state_cfg, variant, seed, fps)
    q = train(frames, log, model, rl_cfg, seed)
    return AgentArtifact(
        state_model=model,
        q_table=q,
        config_fingerprint=config_fingerprint(state_cfg, rl_cfg, seed),
    )


def run_report(
    frames: Sequence[Frame],
    log: DetectionLog,
    cfg: RunConfig,
) -> list[EvalReport]:
    """Comparison table: oracle, trained agent, and fixed-skip per target F1.

    The fixed-skip row uses the constant skip whose rate matches the oracle's
    (the "skip a constant number of frames" strawman at comparable load).
    Whenever the agent's trace is feasible, oracle minimality is asserted.
    """
    (train_frames, train_log), (test_frames, test_log) = split(
        log, frames, cfg.split_fraction
    )
    rows = []
    for target in cfg.targets:
        theta = theta_for_target(target)
        rl = dataclasses.replace(cfg.rl, theta=theta)
        artifact = train_agent(
            train_frames, train_log, cfg.state, rl, cfg.variant, cfg.seed, cfg.fps
        )
        agent_trace = run_agent(test_frames, artifact)
        oracle_cfg = OracleConfig(
            theta=theta, k_max=rl.k_max, iou_threshold=rl.iou_threshold
        )
        oracle_trace = oracle_select(test_log, oracle_cfg)
        if trace_feasible(test_log, agent_trace, theta, rl.iou_threshold):
            if oracle_trace.frames_processed > agent_trace.frames_processed:
                raise FhopError(
                    "oracle processed more frames than a feasible agent trace; "
                    "the selection is not minimal"
                )
        k_fixed = round(len(test_log) / oracle_trace.frames_processed) - 1
        k_fixed = min(rl.k_max, max(0, k_fixed))
        fixed_trace = fixed_skip(len(test_frames), k_fixed)
        rows.append(
            evaluate(oracle_trace, test_log, rl.iou_threshold, "oracle", theta, target)
        )
        rows.append(
            evaluate(agent_trace, test_log, rl.iou_threshold, "agent", theta, target)
        )
        rows.append(
            evaluate(fixed_trace, test_log, rl.iou_threshold, "fixed_skip", theta, target)
        )
    return rows


REPORT_COLUMNS = (
    "strategy",
    "target_f1",
    "theta",
    "fraction_processed",
    "fraction_filtered",
    "error_per_skipped",
    "achieved_f1",
    "achieved_f1_skipped_only",
    "count_accuracy",
    "frames_total",
    "frames_processed",
)


def _cell(value) -> str:
    if value is None:
        return ""
    return str(value)


def write_report_csv(rows: Sequence[EvalReport], path: str | Path) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(REPORT_COLUMNS)
            for row in rows:
                writer.writerow([_cell(getattr(row, col)) for col in REPORT_COLUMNS])
    except OSError as exc:
        raise StorageError(f"cannot write report {path}: {exc}") from exc


def read_report_csv(path: str | Path) -> list[EvalReport]:
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != list(REPORT_COLUMNS):
                raise ValidationError(f"unexpected report header in {path}")
            rows = []
            for rec in reader:
                if len(rec) != len(REPORT_COLUMNS):
                    raise ValidationError(f"malformed report row in {path}: {rec}")
                rows.append(
                    EvalReport(
                        strategy=rec[0],
                        target_f1=float(rec[1]) if rec[1] else None,
                        theta=float(rec[2]) if rec[2] else None,
                        fraction_processed=float(rec[3]),
                        fraction_filtered=float(rec[4]),
                        error_per_skipped=float(rec[5]),
                        achieved_f1=float(rec[6]),
                        achieved_f1_skipped_only=float(rec[7]),
                        count_accuracy=float(rec[8]),
                        frames_total=int(rec[9]),
                        frames_processed=int(rec[10]),
                    )
                )
    except OSError as exc:
        raise StorageError(f"cannot read report {path}: {exc}") from exc
    return rows


def format_report_table(rows: Sequence[EvalReport]) -> str:
    """Aligned plaintext rendering of the report rows."""
    def fmt(value) -> str:
        if value is None:
            return "-"
        if isinstance(value, float):
            return f"{value:.4f}"
        return str(value)

    cells = [list(REPORT_COLUMNS)]
    for row in rows:
        cells.append([fmt(getattr(row, col)) for col in REPORT_COLUMNS])
    widths = [max(len(r[c]) for r in cells) for c in range(len(REPORT_COLUMNS))]
    lines = [
        "  ".join(cell.ljust(width) for cell, width in zip(r, widths)).rstrip()
        for r in cells
    ]
    return "\n".join(lines) + "\n"
