"""Frame loading: grayscale rasters read from a directory of numbered images.

Filenames must be zero-padded decimal indices (lexicographic order equals
index order) and the sequence must be gap-free from 0. Color inputs are
reduced to grayscale with fixed luma weights so pixel-difference features
are reproducible regardless of the decoder.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import StorageError, ValidationError

SUPPORTED_EXTENSIONS = (".pgm", ".png", ".jpg", ".jpeg", ".bmp")

LUMA_WEIGHTS = (0.299, 0.587, 0.114)


@dataclass(frozen=True)
class Frame:
    """A single grayscale frame: index plus a read-only (height, width) raster."""

    index: int
    pixels: np.ndarray

    def __post_init__(self) -> None:
        if self.index < 0:
            raise ValidationError(f"frame index must be non-negative, got {self.index}")
        if self.pixels.ndim != 2 or self.pixels.dtype != np.uint8:
            raise ValidationError("frame pixels must be a 2-D uint8 array")
        self.pixels.setflags(write=False)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


def to_grayscale(image: Image.Image) -> np.ndarray:
    """Convert a PIL image to uint8 grayscale with the fixed luma weights."""
    if image.mode == "L":
        return np.asarray(image, dtype=np.uint8)
    rgb = np.asarray(image.convert("RGB"), dtype=np.float64)
    luma = rgb @ np.asarray(LUMA_WEIGHTS)
    return np.clip(np.round(luma), 0, 255).astype(np.uint8)


def downscale(pixels: np.ndarray, target: int) -> np.ndarray:
    """Nearest-neighbor resize so the longer side is at most ``target`` pixels."""
    if target < 1:
        raise ValidationError(f"downscale target must be >= 1, got {target}")
    h, w = pixels.shape
    longest = max(h, w)
    if longest <= target:
        return pixels
    scale = target / longest
    new_h = max(1, round(h * scale))
    new_w = max(1, round(w * scale))
    rows = np.floor((np.arange(new_h) + 0.5) * h / new_h).astype(np.intp)
    cols = np.floor((np.arange(new_w) + 0.5) * w / new_w).astype(np.intp)
    return np.ascontiguousarray(pixels[rows][:, cols])


def _indexed_paths(directory: Path) -> list[tuple[int, Path]]:
    entries: dict[int, Path] = {}
    for path in sorted(directory.iterdir()):
        if not path.is_file() or path.suffix.lower() not in SUPPORTED_EXTENSIONS:
            continue
        if not path.stem.isdigit():
            raise ValidationError(
                f"frame filename is not a zero-padded decimal index: {path.name}"
            )
        index = int(path.stem)
        if index in entries:
            raise ValidationError(
                f"duplicate frame index {index}: {entries[index].name} and {path.name}"
            )
        entries[index] = path
    return sorted(entries.items())


def load_frames(directory: str | Path, downscale_target: int | None = None) -> list[Frame]:
    """Load a frame sequence from ``directory`` in index order.

    Raises ValidationError on an empty directory or a gap in the index
    sequence, StorageError when a file cannot be decoded.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise StorageError(f"frame directory not found: {directory}")
    entries = _indexed_paths(directory)
    if not entries:
        raise ValidationError(f"no frames found in {directory}")
    for position, (index, _) in enumerate(entries):
        if index != position:
            raise ValidationError(
                f"frame sequence has a gap: index {position} missing in {directory}"
            )

    frames: list[Frame] = []
    dims: tuple[int, int] | None = None
    for index, path in entries:
        try:
            with Image.open(path) as image:
                pixels = to_grayscale(image)
        except OSError as exc:
            raise StorageError(f"cannot decode frame file {path.name}: {exc}") from exc
        if dims is None:
            dims = pixels.shape
        elif pixels.shape != dims:
            raise ValidationError(
                f"frame {path.name} has size {pixels.shape[::-1]}, expected {dims[::-1]}"
            )
        if downscale_target is not None:
            pixels = downscale(pixels, downscale_target)
        frames.append(Frame(index=index, pixels=pixels))
    return frames


def write_pgm(path: str | Path, pixels: np.ndarray) -> None:
    """Write a uint8 raster as a binary PGM (P5) file."""
    if pixels.ndim != 2 or pixels.dtype != np.uint8:
        raise ValidationError("PGM output requires a 2-D uint8 array")
    h, w = pixels.shape
    header = f"P5\n{w} {h}\n255\n".encode("ascii")
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(pixels.tobytes())
    except OSError as exc:
        raise StorageError(f"cannot write frame file {path}: {exc}") from exc
