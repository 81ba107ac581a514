"""Shared fixtures and generators for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from fhop.detections import BBox, Detection, DetectionLog
from fhop.frames import Frame
from fhop.scenes import generate_scene, preset

CLASSES = ("car", "bike", "person")


def to_detections(plain_frame):
    """plain [(box, label), ...] -> tuple of Detection with score 1."""
    return tuple(
        Detection(bbox=BBox(*box), class_label=label, score=1.0)
        for box, label in plain_frame
    )


def to_log(plain_log):
    return DetectionLog(to_detections(frame) for frame in plain_log)


def random_plain_boxes(rng, max_boxes, extent=20.0, classes=CLASSES):
    out = []
    for _ in range(int(rng.integers(0, max_boxes + 1))):
        x1 = float(rng.uniform(0.0, extent - 1.0))
        y1 = float(rng.uniform(0.0, extent - 1.0))
        w = float(rng.uniform(0.5, 6.0))
        h = float(rng.uniform(0.5, 6.0))
        out.append(((x1, y1, x1 + w, y1 + h), str(rng.choice(classes))))
    return out


def random_walk_log(rng, n_frames, max_boxes=3, step=1.5, extent=20.0):
    """Temporally correlated plain log: boxes drift by a random step per frame.

    Correlation matters for oracle tests; independent frames would make
    every skip infeasible and the oracle trivial.
    """
    current = random_plain_boxes(rng, max_boxes, extent)
    frames = [list(current)]
    for _ in range(n_frames - 1):
        moved = []
        for (x1, y1, x2, y2), label in current:
            dx = float(rng.uniform(-step, step))
            dy = float(rng.uniform(-step, step))
            moved.append(((x1 + dx, y1 + dy, x2 + dx, y2 + dy), label))
        # occasionally drop or add an object so counts vary
        if moved and rng.random() < 0.15:
            moved.pop(int(rng.integers(len(moved))))
        if rng.random() < 0.15:
            moved.extend(random_plain_boxes(rng, 1, extent))
        current = moved
        frames.append(list(current))
    return frames


def gray_frame(index, values):
    return Frame(index=index, pixels=np.asarray(values, dtype=np.uint8))


def flat_frame(index, height, width, value):
    return Frame(index=index, pixels=np.full((height, width), value, dtype=np.uint8))


_PRESET_CACHE: dict[str, tuple] = {}


@pytest.fixture(scope="session")
def preset_scene():
    """Lazily generated (frames, log) per preset name, shared across tests."""

    def get(name):
        if name not in _PRESET_CACHE:
            _PRESET_CACHE[name] = generate_scene(preset(name))
        return _PRESET_CACHE[name]

    return get


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.ensure_newline()
        terminalreporter.section("acceptance criteria", sep="-")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
