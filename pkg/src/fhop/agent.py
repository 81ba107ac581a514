"""Skip-length agent: reward shaping, tabular SARSA training, greedy inference.

The agent's state is the cluster id of the difference feature between the
two most recently processed frames; its action is how many upcoming frames
to skip. Skips whose observed detection distance stays within the error
threshold earn a reward growing with the skip-length; skips that exceed it
are penalized in proportion to the frames lost. Training replays a recorded
video with its detection log; inference touches pixels only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .detections import DetectionLog
from .errors import ValidationError
from .frames import Frame
from .metrics import DEFAULT_IOU_THRESHOLD, frame_distance, skip_error
from .state import (
    VARIANT_DETECTION,
    StateModel,
    detection_state_features,
    get_state,
    pixel_feature,
)
from .traces import SkipTrace

if TYPE_CHECKING:
    from .artifacts import AgentArtifact

REWARD_MODES = ("max", "landed", "cumulative")
STATE_PAIRINGS = ("processed", "consecutive")


@dataclass(frozen=True)
class RLConfig:
    theta: float
    alpha: float = 0.1
    gamma: float = 0.9
    psi1: float = 1.0
    psi2: float = 1.0
    k_max: int = 30
    epochs: int = 20
    epsilon: float = 1.0
    reward_mode: str = "max"
    state_pairing: str = "processed"
    iou_threshold: float = DEFAULT_IOU_THRESHOLD

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha <= 1.0):
            raise ValidationError(f"alpha must be in (0, 1], got {self.alpha}")
        if not (0.0 <= self.gamma < 1.0):
            raise ValidationError(f"gamma must be in [0, 1), got {self.gamma}")
        if not (0.0 < self.theta < 1.0):
            raise ValidationError(f"theta must be in (0, 1), got {self.theta}")
        if self.k_max < 1:
            raise ValidationError(f"k_max must be >= 1, got {self.k_max}")
        if self.epochs < 1:
            raise ValidationError(f"epochs must be >= 1, got {self.epochs}")
        if not (0.0 <= self.epsilon <= 1.0):
            raise ValidationError(f"epsilon must be in [0, 1], got {self.epsilon}")
        if self.reward_mode not in REWARD_MODES:
            raise ValidationError(f"reward_mode must be one of {REWARD_MODES}")
        if self.state_pairing not in STATE_PAIRINGS:
            raise ValidationError(f"state_pairing must be one of {STATE_PAIRINGS}")


@dataclass(frozen=True)
class QTable:
    """Action-value table: one row per state, one column per skip-length 0..k_max."""

    values: np.ndarray

    def __post_init__(self) -> None:
        if self.values.ndim != 2:
            raise ValidationError("Q-table must be a 2-D matrix")

    @property
    def n_states(self) -> int:
        return self.values.shape[0]

    @property
    def k_max(self) -> int:
        return self.values.shape[1] - 1


def compute_reward(d: float, theta: float, k: int, psi1: float = 1.0, psi2: float = 1.0) -> float:
    """psi1 * (k + 1) while the skip error stays within theta, else -psi2 * k."""
    if d <= theta:
        return psi1 * (k + 1)
    return -psi2 * k


def skip_distance(
    log: DetectionLog,
    i: int,
    k: int,
    reward_mode: str = "max",
    iou_threshold: float = DEFAULT_IOU_THRESHOLD,
) -> float:
    """Distance summary over the k frames skipped after frame i.

    "max" takes the worst per-frame distance, "landed" the distance to the
    last skipped frame, "cumulative" the mean cumulative error per frame.
    All modes return 0 for k = 0.
    """
    if reward_mode not in REWARD_MODES:
        raise ValidationError(f"unknown reward mode {reward_mode!r}")
    if k < 0:
        raise ValidationError(f"skip length must be >= 0, got {k}")
    if i + k >= len(log):
        raise ValidationError(f"skip range [{i}, {i + k}] exceeds log length {len(log)}")
    if k == 0:
        return 0.0
    if reward_mode == "landed":
        return frame_distance(log, i, i + k, iou_threshold)
    if reward_mode == "cumulative":
        return skip_error(log, i, k, iou_threshold) / k
    return max(frame_distance(log, i, i + j, iou_threshold) for j in range(1, k + 1))


def sarsa_update(
    q: QTable,
    s: int,
    a: int,
    r: float,
    s_next: int,
    a_next: int,
    alpha: float,
    gamma: float,
) -> None:
    """In-place SARSA update of the single entry (s, a)."""
    values = q.values
    if not (0 <= s < values.shape[0] and 0 <= a < values.shape[1]):
        raise ValidationError(f"state-action ({s}, {a}) outside table {values.shape}")
    if not (0 <= s_next < values.shape[0] and 0 <= a_next < values.shape[1]):
        raise ValidationError(f"state-action ({s_next}, {a_next}) outside table {values.shape}")
    values[s, a] += alpha * (r + gamma * values[s_next, a_next] - values[s, a])


def choose_action(q: QTable, s: int) -> int:
    """Greedy action for state s; ties break toward the smallest skip."""
    if not 0 <= s < q.n_states:
        raise ValidationError(f"state {s} outside table with {q.n_states} rows")
    return int(q.values[s].argmax())


def _observe(
    model: StateModel,
    frames: Sequence[Frame],
    log: DetectionLog | None,
    prev: int,
    cur: int,
    iou_threshold: float,
) -> int:
    if model.variant == VARIANT_DETECTION:
        if log is None:
            raise ValidationError("detection-variant states require a detection log")
        cfg_like = model  # carries beta1/beta2
        feature = detection_state_features(log, prev, cur, cfg_like, iou_threshold)
    else:
        feature = pixel_feature(model, frames[prev], frames[cur])
    return get_state(model, feature)


def train(
    frames: Sequence[Frame],
    log: DetectionLog,
    state_model: StateModel,
    cfg: RLConfig,
    seed: int,
) -> QTable:
    """Train the skip policy by replaying the recorded frames with SARSA.

    Each epoch walks the range from frame 0: choose a skip by the epsilon
    schedule, score it against the detection log, land on the next processed
    frame, and update the table on-policy. An epoch ends when the chosen
    skip would land past the end of the range.
    """
    n = len(frames)
    if n == 0:
        raise ValidationError("training range is empty")
    if len(log) != n:
        raise ValidationError(f"frames ({n}) and log ({len(log)}) lengths differ")
    if cfg.k_max >= n:
        raise ValidationError(f"k_max={cfg.k_max} must be smaller than the training length {n}")

    q = QTable(values=np.zeros((state_model.k, cfg.k_max + 1), dtype=np.float64))
    rng = np.random.default_rng(seed)

    def policy(s: int) -> int:
        if rng.random() < cfg.epsilon:
            return int(rng.integers(0, cfg.k_max + 1))
        return choose_action(q, s)

    def observe(prev: int, cur: int) -> int:
        if cfg.state_pairing == "consecutive" and cur > 0:
            prev = cur - 1
        return _observe(state_model, frames, log, prev, cur, cfg.iou_threshold)

    for _ in range(cfg.epochs):
        i = 0
        s = observe(0, 0)
        a = policy(s)
        while True:
            j = i + a + 1
            if j >= n:
                break
            d = skip_distance(log, i, a, cfg.reward_mode, cfg.iou_threshold)
            r = compute_reward(d, cfg.theta, a, cfg.psi1, cfg.psi2)
            s_next = observe(i, j)
            a_next = policy(s_next)
            sarsa_update(q, s, a, r, s_next, a_next, cfg.alpha, cfg.gamma)
            i, s, a = j, s_next, a_next
    return q


def run_agent(frames: Sequence[Frame], artifact: "AgentArtifact") -> SkipTrace:
    """Greedy inference over a frame sequence; never consults detection data.

    Frame 0 is always processed (paired with itself, which yields the zero
    feature); after each processed frame the greedy skip is taken, truncated
    at the end of the sequence.
    """
    n = len(frames)
    if n == 0:
        raise ValidationError("cannot run the agent on an empty frame sequence")
    state_model = artifact.state_model
    q = artifact.q_table
    entries = []
    prev = 0
    i = 0
    while i < n:
        s = _observe(state_model, frames, None, prev, i, DEFAULT_IOU_THRESHOLD)
        a = choose_action(q, s)
        skip = min(a, n - 1 - i)
        entries.append((i, skip))
        prev = i
        i += skip + 1
    return SkipTrace(entries=tuple(entries), total_frames=n)
