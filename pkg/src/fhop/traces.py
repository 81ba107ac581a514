"""Skip traces: the ordered record of processed frames and chosen skip-lengths.

Every selection strategy (trained agent, oracle, baselines) produces a
SkipTrace, and every evaluation consumes one. On disk a trace is CSV with a
leading comment line carrying the covered frame count::

    # total_frames=600
    processed_index,skip_length
    0,30
    ...
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import StorageError, ValidationError


@dataclass(frozen=True)
class SkipTrace:
    """(processed_index, skip_length) pairs tiling [0, total_frames) exactly."""

    entries: tuple[tuple[int, int], ...]
    total_frames: int

    def __post_init__(self) -> None:
        if self.total_frames < 1:
            raise ValidationError("trace must cover at least one frame")
        if not self.entries:
            raise ValidationError("trace must contain at least one processed frame")
        expected = 0
        for index, skip in self.entries:
            if index != expected:
                raise ValidationError(
                    f"trace is not contiguous: expected processed index {expected}, got {index}"
                )
            if skip < 0:
                raise ValidationError(f"skip length must be >= 0, got {skip}")
            expected = index + skip + 1
        if expected != self.total_frames:
            raise ValidationError(
                f"trace covers [0, {expected}) but total_frames={self.total_frames}"
            )

    @property
    def frames_processed(self) -> int:
        return len(self.entries)

    @property
    def fraction_processed(self) -> float:
        return len(self.entries) / self.total_frames

    def processed_indices(self) -> list[int]:
        return [index for index, _ in self.entries]

    def surrogate_indices(self) -> np.ndarray:
        """For each frame, the processed frame standing in for it (itself if processed)."""
        surrogate = np.empty(self.total_frames, dtype=np.intp)
        for index, skip in self.entries:
            surrogate[index : index + skip + 1] = index
        return surrogate


def write_trace(trace: SkipTrace, path: str | Path) -> None:
    lines = [f"# total_frames={trace.total_frames}", "processed_index,skip_length"]
    lines.extend(f"{index},{skip}" for index, skip in trace.entries)
    try:
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise StorageError(f"cannot write trace {path}: {exc}") from exc


def read_trace(path: str | Path) -> SkipTrace:
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise StorageError(f"cannot read trace {path}: {exc}") from exc
    if not lines or not lines[0].startswith("# total_frames="):
        raise ValidationError(f"trace {path} missing '# total_frames=' header")
    try:
        total = int(lines[0].split("=", 1)[1])
    except ValueError as exc:
        raise ValidationError(f"trace {path}: bad total_frames header") from exc
    body = [ln for ln in lines[1:] if ln.strip()]
    if not body or body[0] != "processed_index,skip_length":
        raise ValidationError(f"trace {path} missing column header")
    entries = []
    for lineno, line in enumerate(body[1:], start=3):
        parts = line.split(",")
        if len(parts) != 2:
            raise ValidationError(f"trace {path} line {lineno}: expected two columns")
        try:
            entries.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            raise ValidationError(f"trace {path} line {lineno}: {exc}") from exc
    return SkipTrace(entries=tuple(entries), total_frames=total)
