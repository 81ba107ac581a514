"""Detection-level similarity metrics between frames.

Two frames are compared through their detection sets: same-class boxes are
greedily matched by descending IoU, precision and recall follow from the
hit count, and the frame distance is one minus the F1 score. The skip
error accumulates that distance from a reference frame over the frames
skipped after it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .detections import BBox, Detection, DetectionLog
from .errors import ValidationError
from .traces import SkipTrace

DEFAULT_IOU_THRESHOLD = 0.5


@dataclass(frozen=True)
class MatchResult:
    """Greedy matching outcome: accepted pairs as (ref index, other index, iou)."""

    hits: int
    pairs: tuple[tuple[int, int, float], ...]
    ref_count: int
    other_count: int


def iou(a: BBox, b: BBox) -> float:
    """Intersection-over-union of two boxes; 0 when disjoint."""
    ix = min(a.x2, b.x2) - max(a.x1, b.x1)
    iy = min(a.y2, b.y2) - max(a.y1, b.y1)
    if ix <= 0.0 or iy <= 0.0:
        return 0.0
    inter = ix * iy
    return inter / (a.area + b.area - inter)


def match_detections(
    ref: Sequence[Detection],
    other: Sequence[Detection],
    iou_threshold: float = DEFAULT_IOU_THRESHOLD,
) -> MatchResult:
    """Greedily match same-class detections with IoU at or above the threshold.

    Candidate pairs are taken in descending IoU order (ties broken by lower
    ref index, then lower other index); a pair is accepted only when neither
    side is matched yet.
    """
    if not (0.0 < iou_threshold <= 1.0):
        raise ValidationError(f"iou threshold must be in (0, 1], got {iou_threshold}")
    candidates = []
    for ri, rdet in enumerate(ref):
        for oi, odet in enumerate(other):
            if rdet.class_label != odet.class_label:
                continue
            value = iou(rdet.bbox, odet.bbox)
            if value >= iou_threshold:
                candidates.append((-value, ri, oi))
    candidates.sort()

    ref_used = [False] * len(ref)
    other_used = [False] * len(other)
    pairs = []
    for neg_value, ri, oi in candidates:
        if ref_used[ri] or other_used[oi]:
            continue
        ref_used[ri] = True
        other_used[oi] = True
        pairs.append((ri, oi, -neg_value))
    return MatchResult(
        hits=len(pairs),
        pairs=tuple(pairs),
        ref_count=len(ref),
        other_count=len(other),
    )


def f1_score(
    ref: Sequence[Detection],
    other: Sequence[Detection],
    iou_threshold: float = DEFAULT_IOU_THRESHOLD,
) -> float:
    """F1 between two detection sets.

    Conventions: both sets empty yields 1 (an unchanged empty scene), exactly
    one empty yields 0, and zero precision plus recall yields 0.
    """
    if not ref and not other:
        return 1.0
    if not ref or not other:
        return 0.0
    hits = match_detections(ref, other, iou_threshold).hits
    precision = hits / len(other)
    recall = hits / len(ref)
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def frame_distance(
    log: DetectionLog, i: int, j: int, iou_threshold: float = DEFAULT_IOU_THRESHOLD
) -> float:
    """Distance between two frames of a log: 1 - F1 of their detection sets."""
    return 1.0 - f1_score(log.detections(i), log.detections(j), iou_threshold)


def skip_error(
    log: DetectionLog, i: int, k: int, iou_threshold: float = DEFAULT_IOU_THRESHOLD
) -> float:
    """Cumulative distance from reference frame i to each of the k frames after it."""
    if k < 0:
        raise ValidationError(f"skip length must be >= 0, got {k}")
    if i + k >= len(log):
        raise ValidationError(
            f"skip range [{i}, {i + k}] exceeds log length {len(log)}"
        )
    return sum(frame_distance(log, i, i + j, iou_threshold) for j in range(1, k + 1))


def count_accuracy(log: DetectionLog, trace: SkipTrace) -> float:
    """Mean per-frame agreement between true object counts and surrogate counts.

    Each skipped frame is represented by its preceding processed frame; the
    per-frame term is 1 - |c_true - c_surrogate| / max(c_true, c_surrogate, 1).
    """
    if trace.total_frames != len(log):
        raise ValidationError(
            f"trace covers {trace.total_frames} frames but log has {len(log)}"
        )
    surrogate = trace.surrogate_indices()
    total = 0.0
    for t in range(len(log)):
        c_true = log.count(t)
        c_sur = log.count(int(surrogate[t]))
        total += 1.0 - abs(c_true - c_sur) / max(c_true, c_sur, 1)
    return total / len(log)
