"""Exact oracle frame selection plus fixed-skip and diff-threshold baselines.

The oracle minimizes the number of processed frames subject to every skipped
frame staying within a distance bound of its reference, solved exactly by
dynamic programming over suffixes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .detections import DetectionLog
from .errors import ValidationError
from .frames import Frame
from .metrics import DEFAULT_IOU_THRESHOLD, frame_distance
from .state import StateConfig, whole_diff_feature
from .traces import SkipTrace


@dataclass(frozen=True)
class OracleConfig:
    theta: float
    k_max: int = 30
    iou_threshold: float = DEFAULT_IOU_THRESHOLD

    def __post_init__(self) -> None:
        if not (0.0 < self.theta < 1.0):
            raise ValidationError(f"theta must be in (0, 1), got {self.theta}")
        if self.k_max < 1:
            raise ValidationError(f"k_max must be >= 1, got {self.k_max}")


def oracle_select(log: DetectionLog, cfg: OracleConfig) -> SkipTrace:
    """Minimal processed-frame selection with every skip within cfg.theta.

    dp[i] is the fewest processed frames covering the suffix starting at i;
    a skip of k from i is feasible when D(f_i, f_{i+j}) <= theta for every
    j <= k and k <= k_max. Among optimal skips the largest is taken. k = 0
    is always feasible, so a solution always exists.
    """
    n = len(log)
    if n == 0:
        raise ValidationError("cannot run the oracle on an empty log")
    dp = [0] * (n + 1)
    best_k = [0] * n
    for i in range(n - 1, -1, -1):
        best = dp[i + 1]
        bk = 0
        for k in range(1, cfg.k_max + 1):
            if i + k + 1 > n:
                break
            if frame_distance(log, i, i + k, cfg.iou_threshold) > cfg.theta:
                break
            if dp[i + k + 1] <= best:
                best = dp[i + k + 1]
                bk = k
        dp[i] = 1 + best
        best_k[i] = bk
    entries = []
    i = 0
    while i < n:
        entries.append((i, best_k[i]))
        i += best_k[i] + 1
    return SkipTrace(entries=tuple(entries), total_frames=n)


def trace_feasible(
    log: DetectionLog,
    trace: SkipTrace,
    theta: float,
    iou_threshold: float = DEFAULT_IOU_THRESHOLD,
) -> bool:
    """Whether every skipped frame sits within theta of its reference."""
    if trace.total_frames != len(log):
        raise ValidationError(
            f"trace covers {trace.total_frames} frames but the log has {len(log)}"
        )
    for i, k in trace.entries:
        for j in range(1, k + 1):
            if frame_distance(log, i, i + j, iou_threshold) > theta:
                return False
    return True


def fixed_skip(n_frames: int, k: int) -> SkipTrace:
    """Process every (k+1)-th frame; the tail segment is truncated."""
    if n_frames < 1:
        raise ValidationError(f"n_frames must be >= 1, got {n_frames}")
    if k < 0:
        raise ValidationError(f"k must be >= 0, got {k}")
    entries = []
    i = 0
    while i < n_frames:
        skip = min(k, n_frames - 1 - i)
        entries.append((i, skip))
        i += skip + 1
    return SkipTrace(entries=tuple(entries), total_frames=n_frames)


def diff_threshold_baseline(
    frames: Sequence[Frame],
    tau: float,
    state_cfg: StateConfig | None = None,
    k_max: int = 30,
) -> SkipTrace:
    """Process a frame when its whole-frame change against the last processed
    frame reaches tau; skips are capped at k_max, forcing a process.
    """
    n = len(frames)
    if n == 0:
        raise ValidationError("cannot run the baseline on an empty frame sequence")
    if not (0.0 <= tau <= 1.0):
        raise ValidationError(f"tau must be in [0, 1], got {tau}")
    if k_max < 1:
        raise ValidationError(f"k_max must be >= 1, got {k_max}")
    cfg = state_cfg if state_cfg is not None else StateConfig()
    entries = []
    last = 0
    pending = 0
    for i in range(1, n):
        feature = float(whole_diff_feature(frames[last], frames[i], cfg).values[0])
        if feature >= tau or pending == k_max:
            entries.append((last, pending))
            last = i
            pending = 0
        else:
            pending += 1
    entries.append((last, pending))
    return SkipTrace(entries=tuple(entries), total_frames=n)
