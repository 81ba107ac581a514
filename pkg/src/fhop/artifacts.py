"""Persisted form of a trained agent: state model plus Q-table in one JSON file.

Values are stored as JSON numbers produced by Python's shortest round-trip
float repr, so centroids and Q-values survive save/load bit-exact.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import warnings
from pathlib import Path

import numpy as np

from .agent import QTable, RLConfig
from .errors import StorageError, ValidationError
from .state import StateConfig, StateModel

FORMAT_VERSION = 1


@dataclasses.dataclass(frozen=True)
class AgentArtifact:
    state_model: StateModel
    q_table: QTable
    config_fingerprint: str
    format_version: int = FORMAT_VERSION

    def __post_init__(self) -> None:
        if self.q_table.n_states != self.state_model.k:
            raise ValidationError(
                f"Q-table has {self.q_table.n_states} rows but the state model "
                f"has {self.state_model.k} clusters"
            )


def config_fingerprint(state_cfg: StateConfig, rl_cfg: RLConfig, seed: int) -> str:
    """Stable hash of everything that determines a training run."""
    payload = {
        "state": dataclasses.asdict(state_cfg),
        "rl": dataclasses.asdict(rl_cfg),
        "seed": seed,
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def verify_fingerprint(
    artifact: AgentArtifact, state_cfg: StateConfig, rl_cfg: RLConfig, seed: int
) -> bool:
    """Check an artifact against a run configuration.

    Returns True when the artifact was trained with exactly this
    configuration; otherwise emits a RuntimeWarning and returns False, so
    running a stale agent is visible but never fatal.
    """
    expected = config_fingerprint(state_cfg, rl_cfg, seed)
    if artifact.config_fingerprint == expected:
        return True
    warnings.warn(
        f"agent artifact fingerprint {artifact.config_fingerprint[:12]}... does "
        f"not match the supplied configuration ({expected[:12]}...); the agent "
        "was trained under different settings",
        RuntimeWarning,
        stacklevel=2,
    )
    return False


def save_agent(artifact: AgentArtifact, path: str | Path) -> None:
    model = artifact.state_model
    doc = {
        "format_version": artifact.format_version,
        "config_fingerprint": artifact.config_fingerprint,
        "state_model": {
            "variant": model.variant,
            "grid_rows": model.grid_rows,
            "grid_cols": model.grid_cols,
            "pixel_change_threshold": model.pixel_change_threshold,
            "beta1": model.beta1,
            "beta2": model.beta2,
            "n_samples": model.n_samples,
            "centroids": model.centroids.tolist(),
        },
        "q_table": {"values": artifact.q_table.values.tolist()},
    }
    try:
        Path(path).write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
    except OSError as exc:
        raise StorageError(f"cannot write agent artifact {path}: {exc}") from exc


def load_agent(path: str | Path) -> AgentArtifact:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise StorageError(f"cannot read agent artifact {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StorageError(f"agent artifact {path} is corrupt: {exc}") from exc
    if not isinstance(doc, dict):
        raise StorageError(f"agent artifact {path} is corrupt: not a JSON object")

    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ValidationError(
            f"unsupported agent artifact format_version {version!r}; "
            f"this reader supports {FORMAT_VERSION}"
        )
    try:
        m = doc["state_model"]
        model = StateModel(
            centroids=np.asarray(m["centroids"], dtype=np.float64),
            variant=m["variant"],
            n_samples=int(m["n_samples"]),
            grid_rows=int(m["grid_rows"]),
            grid_cols=int(m["grid_cols"]),
            pixel_change_threshold=int(m["pixel_change_threshold"]),
            beta1=float(m["beta1"]),
            beta2=float(m["beta2"]),
        )
        q = QTable(values=np.asarray(doc["q_table"]["values"], dtype=np.float64))
        fingerprint = str(doc["config_fingerprint"])
    except (KeyError, TypeError, ValueError) as exc:
        raise StorageError(f"agent artifact {path} is corrupt: {exc}") from exc
    return AgentArtifact(
        state_model=model,
        q_table=q,
        config_fingerprint=fingerprint,
        format_version=int(version),
    )
