"""Application-agnostic error-threshold selection.

Sweeps a theta grid, runs a selection strategy per point, and keeps the
theta minimizing fraction_processed squared plus mean skip error squared.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from .detections import DetectionLog
from .errors import FhopError, StorageError, ValidationError
from .metrics import DEFAULT_IOU_THRESHOLD, skip_error
from .strategies import OracleConfig, oracle_select
from .traces import SkipTrace

DEFAULT_GRID = tuple(round(0.10 + 0.05 * i, 2) for i in range(9))

Strategy = Callable[[DetectionLog, float], SkipTrace]


@dataclass(frozen=True)
class SweepPoint:
    theta: float
    fraction_processed: float
    error_per_skipped: float
    objective: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.fraction_processed <= 1.0):
            raise ValidationError(
                f"fraction_processed must be in [0, 1], got {self.fraction_processed}"
            )
        if self.error_per_skipped < 0.0:
            raise ValidationError(
                f"error_per_skipped must be >= 0, got {self.error_per_skipped}"
            )
        expected = self.error_per_skipped**2 + self.fraction_processed**2
        if self.objective != expected:
            raise ValidationError(
                f"objective {self.objective} != E^2 + P^2 = {expected}"
            )


def oracle_strategy(k_max: int = 30, iou_threshold: float = DEFAULT_IOU_THRESHOLD) -> Strategy:
    def run(log: DetectionLog, theta: float) -> SkipTrace:
        return oracle_select(log, OracleConfig(theta=theta, k_max=k_max, iou_threshold=iou_threshold))

    return run


def mean_skip_error(
    log: DetectionLog,
    trace: SkipTrace,
    iou_threshold: float = DEFAULT_IOU_THRESHOLD,
) -> float:
    """Total skip error divided by the number of skipped frames; 0 when none."""
    if trace.total_frames != len(log):
        raise ValidationError(
            f"trace covers {trace.total_frames} frames but the log has {len(log)}"
        )
    skipped = trace.total_frames - trace.frames_processed
    if skipped == 0:
        return 0.0
    total = sum(skip_error(log, i, k, iou_threshold) for i, k in trace.entries)
    return total / skipped


def sweep_theta(
    log: DetectionLog,
    strategy: Strategy,
    grid: Sequence[float] = DEFAULT_GRID,
    iou_threshold: float = DEFAULT_IOU_THRESHOLD,
) -> tuple[float, list[SweepPoint]]:
    """Evaluate the strategy on each grid theta; ties break toward smaller theta."""
    if len(log) == 0:
        raise ValidationError("cannot sweep over an empty log")
    if len(grid) == 0:
        raise ValidationError("theta grid is empty")
    if list(grid) != sorted(grid):
        raise ValidationError("theta grid must be ascending")
    points = []
    for theta in grid:
        if not (0.0 < theta < 1.0):
            raise ValidationError(f"grid theta must be in (0, 1), got {theta}")
        try:
            trace = strategy(log, theta)
        except FhopError as exc:
            raise type(exc)(f"sweep strategy failed at theta={theta:g}: {exc}") from exc
        p = trace.fraction_processed
        e = mean_skip_error(log, trace, iou_threshold)
        points.append(
            SweepPoint(
                theta=theta,
                fraction_processed=p,
                error_per_skipped=e,
                objective=e**2 + p**2,
            )
        )
    best = min(points, key=lambda pt: pt.objective)
    return best.theta, points


def write_sweep_csv(
    best_theta: float,
    points: Sequence[SweepPoint],
    path: str | Path,
) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(f"# best_theta={best_theta}\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(
                ["theta", "fraction_processed", "error_per_skipped", "objective"]
            )
            for pt in points:
                writer.writerow(
                    [pt.theta, pt.fraction_processed, pt.error_per_skipped, pt.objective]
                )
    except OSError as exc:
        raise StorageError(f"cannot write sweep table {path}: {exc}") from exc
