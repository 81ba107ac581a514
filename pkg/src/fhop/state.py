"""State abstraction: frame-difference features quantized by minibatch k-means.

Three feature variants exist. The chunk variant splits the frame into a
grid (3x3 by default) and reports, per chunk, the fraction of pixels whose
absolute grayscale difference exceeds a threshold. The whole variant is the
same with a 1x1 grid. The detection variant uses the normalized change in
object count and the F1 complement between two frames of a detection log.

Cluster fitting happens once, before policy training, so the discrete
state space stays fixed while the agent learns.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .detections import DetectionLog
from .errors import ValidationError
from .frames import Frame
from .metrics import DEFAULT_IOU_THRESHOLD, f1_score

VARIANT_CHUNK = "chunk"
VARIANT_WHOLE = "whole"
VARIANT_DETECTION = "detection"
VARIANTS = (VARIANT_CHUNK, VARIANT_WHOLE, VARIANT_DETECTION)


@dataclass(frozen=True)
class StateConfig:
    grid_rows: int = 3
    grid_cols: int = 3
    pixel_change_threshold: int = 30
    k: int = 10
    minibatch_size: int = 30
    segment_seconds: float = 3.0
    beta1: float = 1.0
    beta2: float = 1.0

    def __post_init__(self) -> None:
        if self.grid_rows < 1 or self.grid_cols < 1:
            raise ValidationError("grid dimensions must be >= 1")
        if not (0 < self.pixel_change_threshold < 255):
            raise ValidationError(
                f"pixel change threshold must be in (0, 255), got {self.pixel_change_threshold}"
            )
        if self.k < 2:
            raise ValidationError(f"cluster count must be >= 2, got {self.k}")
        if self.minibatch_size < 1:
            raise ValidationError("minibatch size must be >= 1")
        if self.segment_seconds <= 0:
            raise ValidationError("segment length must be positive")


@dataclass(frozen=True)
class StateFeature:
    """A difference-feature vector tagged with the variant that produced it."""

    values: np.ndarray
    variant: str

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ValidationError(f"unknown feature variant {self.variant!r}")
        self.values.setflags(write=False)


@dataclass(frozen=True)
class StateModel:
    """Fitted centroids plus the feature recipe needed to reproduce inputs."""

    centroids: np.ndarray
    variant: str
    n_samples: int
    grid_rows: int
    grid_cols: int
    pixel_change_threshold: int
    beta1: float = 1.0
    beta2: float = 1.0

    def __post_init__(self) -> None:
        if self.centroids.ndim != 2 or len(self.centroids) < 1:
            raise ValidationError("centroid matrix must be 2-D with at least one row")
        if self.n_samples < len(self.centroids):
            raise ValidationError("fitted sample count must be >= cluster count")
        self.centroids.setflags(write=False)

    @property
    def k(self) -> int:
        return len(self.centroids)

    @property
    def feature_dim(self) -> int:
        return self.centroids.shape[1]


def _grid_edges(extent: int, cells: int) -> list[tuple[int, int]]:
    # remainder pixels go to the last cell in each dimension
    base = extent // cells
    edges = [(i * base, (i + 1) * base) for i in range(cells - 1)]
    edges.append(((cells - 1) * base, extent))
    return edges


def chunk_diff_features(prev: Frame, nxt: Frame, cfg: StateConfig) -> StateFeature:
    """Per-chunk fraction of pixels changed beyond the intensity threshold, row-major."""
    return _pixel_diff(prev, nxt, cfg.grid_rows, cfg.grid_cols,
                       cfg.pixel_change_threshold, VARIANT_CHUNK)


def whole_diff_feature(prev: Frame, nxt: Frame, cfg: StateConfig) -> StateFeature:
    """Single-element changed-pixel fraction over the whole frame."""
    return _pixel_diff(prev, nxt, 1, 1, cfg.pixel_change_threshold, VARIANT_WHOLE)


def _pixel_diff(
    prev: Frame, nxt: Frame, rows: int, cols: int, threshold: int, variant: str
) -> StateFeature:
    if prev.pixels.shape != nxt.pixels.shape:
        raise ValidationError(
            f"frame size mismatch: {prev.pixels.shape[::-1]} vs {nxt.pixels.shape[::-1]}"
        )
    h, w = prev.pixels.shape
    if rows > h or cols > w:
        raise ValidationError(f"grid {rows}x{cols} larger than frame {w}x{h}")
    changed = (
        np.abs(prev.pixels.astype(np.int16) - nxt.pixels.astype(np.int16)) > threshold
    )
    values = np.empty(rows * cols, dtype=np.float64)
    for r, (r0, r1) in enumerate(_grid_edges(h, rows)):
        for c, (c0, c1) in enumerate(_grid_edges(w, cols)):
            values[r * cols + c] = changed[r0:r1, c0:c1].mean()
    return StateFeature(values=values, variant=variant)


def detection_state_features(
    log: DetectionLog,
    i: int,
    j: int,
    cfg: StateConfig,
    iou_threshold: float = DEFAULT_IOU_THRESHOLD,
) -> StateFeature:
    """Two-element vector: weighted count change and weighted F1 complement."""
    c_prev = log.count(i)
    c_next = log.count(j)
    denom = max(c_prev, c_next, 1)
    d1 = cfg.beta1 * abs(c_prev - c_next) / denom
    d2 = cfg.beta2 * (1.0 - f1_score(log.detections(i), log.detections(j), iou_threshold))
    return StateFeature(values=np.array([d1, d2]), variant=VARIANT_DETECTION)


def _kmeans_pp(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    centroids = np.empty((k, points.shape[1]), dtype=np.float64)
    centroids[0] = points[rng.integers(len(points))]
    d2 = ((points - centroids[0]) ** 2).sum(axis=1)
    for c in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            idx = int(rng.integers(len(points)))
        else:
            idx = int(rng.choice(len(points), p=d2 / total))
        centroids[c] = points[idx]
        d2 = np.minimum(d2, ((points - centroids[c]) ** 2).sum(axis=1))
    return centroids


def fit_clusters(
    features: Sequence[StateFeature],
    cfg: StateConfig,
    seed: int,
    fps: float = 30.0,
) -> StateModel:
    """One-pass minibatch k-means over the feature stream.

    Centroids are seeded by k-means++ on the first batch; every subsequent
    minibatch assigns its points to the nearest centroid at batch start and
    folds them in with a 1/count learning rate (a running mean, so the update
    is order-independent within a batch). Minibatches never span a segment
    boundary of segment_seconds * fps features.
    """
    if len(features) < cfg.k:
        raise ValidationError(
            f"need at least k={cfg.k} features to fit clusters, got {len(features)}"
        )
    variant = features[0].variant
    if any(f.variant != variant for f in features):
        raise ValidationError("feature stream mixes variants")
    points = np.stack([f.values for f in features]).astype(np.float64)
    if points.ndim != 2:
        raise ValidationError("feature vectors must share one dimension")

    rng = np.random.default_rng(seed)
    seg_len = max(1, round(cfg.segment_seconds * fps))
    batches: list[tuple[int, int]] = []
    for seg_start in range(0, len(points), seg_len):
        seg_end = min(seg_start + seg_len, len(points))
        for start in range(seg_start, seg_end, cfg.minibatch_size):
            batches.append((start, min(start + cfg.minibatch_size, seg_end)))

    # seeding needs at least k candidates even when the first batch is short
    init_end = max(batches[0][1], cfg.k)
    centroids = _kmeans_pp(points[:init_end], cfg.k, rng)

    counts = np.zeros(cfg.k, dtype=np.int64)
    for start, end in batches[1:]:
        batch = points[start:end]
        d2 = ((batch[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        assignments = d2.argmin(axis=1)
        for point, c in zip(batch, assignments):
            counts[c] += 1
            centroids[c] += (point - centroids[c]) / counts[c]

    return StateModel(
        centroids=centroids,
        variant=variant,
        n_samples=len(points),
        grid_rows=cfg.grid_rows,
        grid_cols=cfg.grid_cols,
        pixel_change_threshold=cfg.pixel_change_threshold,
        beta1=cfg.beta1,
        beta2=cfg.beta2,
    )


def get_state(model: StateModel, feature: StateFeature) -> int:
    """Index of the nearest centroid; ties resolve to the lowest index."""
    if feature.variant != model.variant:
        raise ValidationError(
            f"feature variant {feature.variant!r} does not match model {model.variant!r}"
        )
    if feature.values.shape[0] != model.feature_dim:
        raise ValidationError(
            f"feature dimension {feature.values.shape[0]} does not match model {model.feature_dim}"
        )
    d2 = ((model.centroids - feature.values) ** 2).sum(axis=1)
    return int(d2.argmin())


def pixel_feature(model: StateModel, prev: Frame, nxt: Frame) -> StateFeature:
    """Extract the pixel-difference feature matching the model's recipe."""
    if model.variant == VARIANT_CHUNK:
        return _pixel_diff(prev, nxt, model.grid_rows, model.grid_cols,
                           model.pixel_change_threshold, VARIANT_CHUNK)
    if model.variant == VARIANT_WHOLE:
        return _pixel_diff(prev, nxt, 1, 1, model.pixel_change_threshold, VARIANT_WHOLE)
    raise ValidationError(
        f"model variant {model.variant!r} requires detection data, not raw frames"
    )
