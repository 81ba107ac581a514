"""Synthetic scenes: flat-background rasters with filled rectangles moving on
straight lines, plus the exact detection log implied by the geometry.

Rectangles make the ground truth exact by construction: every logged bbox is
the clipped raster region painted with the object's intensity. Presets cover
the regimes a skip policy must tell apart: nothing moving, slow drift, fast
drift, per-frame flicker, and long calm stretches with short fast events.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .detections import BBox, Detection, DetectionLog
from .errors import ValidationError
from .frames import Frame


@dataclass(frozen=True)
class ObjectSpec:
    class_label: str
    width: int
    height: int
    x: float
    y: float
    vx: float = 0.0
    vy: float = 0.0
    spawn_frame: int = 0
    despawn_frame: int | None = None
    intensity: int = 200

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValidationError("object size must be at least 1x1")
        if not 0 <= self.intensity <= 255:
            raise ValidationError(f"intensity must be in [0, 255], got {self.intensity}")
        if self.spawn_frame < 0:
            raise ValidationError("spawn_frame must be >= 0")
        if self.despawn_frame is not None and self.despawn_frame <= self.spawn_frame:
            raise ValidationError("despawn_frame must be after spawn_frame")


@dataclass(frozen=True)
class SceneSpec:
    width: int
    height: int
    n_frames: int
    objects: tuple[ObjectSpec, ...] = field(default_factory=tuple)
    fps: float = 30.0
    background: int = 40
    noise_amplitude: int = 0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValidationError("scene dimensions must be at least 1x1")
        if self.n_frames < 1:
            raise ValidationError(f"n_frames must be >= 1, got {self.n_frames}")
        if self.fps <= 0:
            raise ValidationError(f"fps must be positive, got {self.fps}")
        if not 0 <= self.background <= 255:
            raise ValidationError(f"background must be in [0, 255], got {self.background}")
        if self.noise_amplitude < 0:
            raise ValidationError("noise_amplitude must be >= 0")


def generate_scene(spec: SceneSpec) -> tuple[list[Frame], DetectionLog]:
    """Render every frame and its detections; deterministic per spec.seed.

    Objects fully outside the raster (or despawned) are dropped from that
    frame's log; partially visible ones are clipped to the raster.
    """
    rng = np.random.default_rng(spec.seed)
    frames: list[Frame] = []
    records: list[tuple[Detection, ...]] = []
    for t in range(spec.n_frames):
        canvas = np.full((spec.height, spec.width), spec.background, dtype=np.uint8)
        if spec.noise_amplitude > 0:
            noise = rng.integers(
                -spec.noise_amplitude,
                spec.noise_amplitude + 1,
                size=canvas.shape,
                dtype=np.int16,
            )
            canvas = np.clip(canvas.astype(np.int16) + noise, 0, 255).astype(np.uint8)
        dets = []
        for obj in spec.objects:
            if t < obj.spawn_frame:
                continue
            if obj.despawn_frame is not None and t >= obj.despawn_frame:
                continue
            dt = t - obj.spawn_frame
            x1 = int(round(obj.x + obj.vx * dt))
            y1 = int(round(obj.y + obj.vy * dt))
            cx1 = max(0, x1)
            cy1 = max(0, y1)
            cx2 = min(spec.width, x1 + obj.width)
            cy2 = min(spec.height, y1 + obj.height)
            if cx2 <= cx1 or cy2 <= cy1:
                continue
            canvas[cy1:cy2, cx1:cx2] = obj.intensity
            dets.append(
                Detection(
                    bbox=BBox(float(cx1), float(cy1), float(cx2), float(cy2)),
                    class_label=obj.class_label,
                    score=1.0,
                )
            )
        frames.append(Frame(index=t, pixels=canvas))
        records.append(tuple(dets))
    return frames, DetectionLog(records)


PRESET_NAMES = ("static", "drift-slow", "drift-fast", "strobe", "burst")

_W, _H, _N = 160, 120, 1200


def _relay(label: str, w: int, h: int, x: float, y: float, vx: float,
           segment: int, intensity: int) -> tuple[ObjectSpec, ...]:
    """Respawn a mover at its start every `segment` frames so it never exits."""
    out = []
    for s in range(0, _N, segment):
        out.append(
            ObjectSpec(
                class_label=label, width=w, height=h, x=x, y=y, vx=vx,
                spawn_frame=s, despawn_frame=s + segment, intensity=intensity,
            )
        )
    return tuple(out)


def preset(name: str) -> SceneSpec:
    """Named canonical scenes, all 160x120, 1200 frames, 30 fps, no noise."""
    statics = (
        ObjectSpec(class_label="car", width=30, height=20, x=20, y=30, intensity=200),
        ObjectSpec(class_label="truck", width=24, height=18, x=100, y=60, intensity=140),
    )
    if name == "static":
        objects = statics
    elif name == "drift-slow":
        # 40 px box at 1 px/frame: IoU(t, t+j) = (40-j)/(40+j) >= 0.5 up to j=13
        objects = (statics[0],) + _relay("truck", 40, 30, 4, 70, 1.0, 112, 160)
    elif name == "drift-fast":
        # 8 px box at 6 px/frame: consecutive IoU = 1/7, lost immediately
        objects = _relay("car", 8, 8, 2, 56, 6.0, 24, 220)
    elif name == "strobe":
        objects = tuple(
            ObjectSpec(
                class_label="car", width=30, height=30, x=65, y=45,
                spawn_frame=t, despawn_frame=t + 1, intensity=220,
            )
            for t in range(0, _N, 2)
        )
    elif name == "burst":
        # a 20-frame crosser every 90 frames over an otherwise static scene
        crossers = tuple(
            ObjectSpec(
                class_label="bike", width=10, height=10, x=5, y=95, vx=7.0,
                spawn_frame=s, despawn_frame=s + 20, intensity=250,
            )
            for s in range(45, _N - 20, 90)
        )
        objects = statics + crossers
    else:
        raise ValidationError(f"unknown preset {name!r}; choose from {PRESET_NAMES}")
    return SceneSpec(width=_W, height=_H, n_frames=_N, objects=objects)
