"""Detection data model and the JSON-Lines log format.

A detection log stores, per frame, the labeled and scored bounding boxes
produced by whatever detector annotated the video. It is the unit of
ground truth for every metric in the toolkit. On disk the format is one
JSON object per line::

    {"frame": 0, "detections": [{"bbox": [x1, y1, x2, y2], "class": "car", "score": 0.97}]}

Coordinates are pixels of the original (pre-downscale) frame. Frames with
no detections carry an explicit empty array so contiguity stays checkable.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import StorageError, ValidationError


@dataclass(frozen=True)
class BBox:
    """Axis-aligned box with float pixel corners, x1 < x2 and y1 < y2."""

    x1: float
    y1: float
    x2: float
    y2: float

    def __post_init__(self) -> None:
        for name in ("x1", "y1", "x2", "y2"):
            object.__setattr__(self, name, float(getattr(self, name)))
        coords = (self.x1, self.y1, self.x2, self.y2)
        if not all(math.isfinite(c) for c in coords):
            raise ValidationError(f"bbox coordinates must be finite, got {coords}")
        if not (self.x1 < self.x2 and self.y1 < self.y2):
            raise ValidationError(
                f"bbox requires x1 < x2 and y1 < y2, got {coords}"
            )

    @property
    def area(self) -> float:
        return (self.x2 - self.x1) * (self.y2 - self.y1)


@dataclass(frozen=True)
class Detection:
    bbox: BBox
    class_label: str
    score: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "score", float(self.score))
        if not self.class_label:
            raise ValidationError("detection class label must be non-empty")
        if not (0.0 <= self.score <= 1.0):
            raise ValidationError(f"detection score must be in [0, 1], got {self.score}")


class DetectionLog:
    """Per-frame detection lists covering a contiguous index range from 0."""

    def __init__(self, per_frame: Iterable[Sequence[Detection]]):
        self._frames: tuple[tuple[Detection, ...], ...] = tuple(
            tuple(dets) for dets in per_frame
        )

    def __len__(self) -> int:
        return len(self._frames)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DetectionLog):
            return NotImplemented
        return self._frames == other._frames

    def detections(self, index: int) -> tuple[Detection, ...]:
        if not 0 <= index < len(self._frames):
            raise ValidationError(
                f"frame index {index} outside log range [0, {len(self._frames)})"
            )
        return self._frames[index]

    def count(self, index: int) -> int:
        return len(self.detections(index))

    def slice(self, start: int, stop: int) -> "DetectionLog":
        """Contiguous sub-log re-indexed from 0."""
        if not (0 <= start <= stop <= len(self._frames)):
            raise ValidationError(f"invalid log slice [{start}, {stop})")
        return DetectionLog(self._frames[start:stop])


def _detection_to_obj(det: Detection) -> dict:
    return {
        "bbox": [det.bbox.x1, det.bbox.y1, det.bbox.x2, det.bbox.y2],
        "class": det.class_label,
        "score": det.score,
    }


def _detection_from_obj(obj: dict, where: str) -> Detection:
    try:
        raw_bbox = obj["bbox"]
        label = obj["class"]
        score = obj["score"]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"{where}: detection object missing field {exc}") from exc
    if not isinstance(raw_bbox, list) or len(raw_bbox) != 4:
        raise ValidationError(f"{where}: bbox must be a 4-element array")
    if not isinstance(label, str):
        raise ValidationError(f"{where}: class must be a string")
    if not isinstance(score, (int, float)) or isinstance(score, bool):
        raise ValidationError(f"{where}: score must be a number")
    try:
        bbox = BBox(*(float(c) for c in raw_bbox))
        return Detection(bbox=bbox, class_label=label, score=float(score))
    except ValidationError as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def read_detection_log(path: str | Path) -> DetectionLog:
    """Parse a JSON-Lines detection log, enforcing contiguity from frame 0."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise StorageError(f"cannot read detection log {path}: {exc}") from exc

    records: dict[int, tuple[Detection, ...]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        where = f"line {lineno}"
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{where}: invalid JSON: {exc}") from exc
        if not isinstance(obj, dict) or "frame" not in obj or "detections" not in obj:
            raise ValidationError(f"{where}: expected object with 'frame' and 'detections'")
        frame = obj["frame"]
        if not isinstance(frame, int) or isinstance(frame, bool) or frame < 0:
            raise ValidationError(f"{where}: frame must be a non-negative integer")
        if frame in records:
            raise ValidationError(f"{where}: duplicate frame index {frame}")
        dets = obj["detections"]
        if not isinstance(dets, list):
            raise ValidationError(f"{where}: detections must be an array")
        records[frame] = tuple(_detection_from_obj(d, where) for d in dets)

    if not records:
        raise ValidationError(f"detection log {path} contains no frames")
    for index in range(len(records)):
        if index not in records:
            raise ValidationError(
                f"detection log {path} has a gap: frame {index} missing"
            )
    return DetectionLog(records[i] for i in range(len(records)))


def write_detection_log(log: DetectionLog, path: str | Path) -> None:
    """Write a detection log as JSON Lines, frames in ascending index order."""
    lines = []
    for index in range(len(log)):
        obj = {
            "frame": index,
            "detections": [_detection_to_obj(d) for d in log.detections(index)],
        }
        lines.append(json.dumps(obj, ensure_ascii=False))
    try:
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise StorageError(f"cannot write detection log {path}: {exc}") from exc


def log_digest(log: DetectionLog) -> str:
    """SHA-256 over a canonical serialization of the log's data model."""
    hasher = hashlib.sha256()
    for index in range(len(log)):
        for det in log.detections(index):
            record = (
                index,
                det.bbox.x1.hex(),
                det.bbox.y1.hex(),
                det.bbox.x2.hex(),
                det.bbox.y2.hex(),
                det.class_label,
                det.score.hex(),
            )
            hasher.update(repr(record).encode("utf-8"))
        hasher.update(b"|")
    return hasher.hexdigest()
