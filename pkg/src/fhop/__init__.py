"""Detector-agnostic video frame skipping: a tabular SARSA agent decides how
many frames to skip after each processed frame, trained against a recorded
detection log and deployed on pixels alone. Ships with an exact oracle,
simple baselines, threshold selection, synthetic scenes, and an eval harness.
"""

__version__ = "0.1.0"

from .agent import QTable, RLConfig, choose_action, compute_reward, run_agent, train
from .artifacts import AgentArtifact, load_agent, save_agent, verify_fingerprint
from .detections import (
    BBox,
    Detection,
    DetectionLog,
    read_detection_log,
    write_detection_log,
)
from .errors import FhopError, StorageError, ValidationError
from .evaluation import EvalReport, RunConfig, evaluate, run_report, split, train_agent
from .frames import Frame, load_frames
from .metrics import count_accuracy, f1_score, frame_distance, iou, skip_error
from .scenes import ObjectSpec, SceneSpec, generate_scene, preset
from .state import StateConfig, StateModel, fit_clusters, get_state
from .strategies import OracleConfig, diff_threshold_baseline, fixed_skip, oracle_select
from .thresholds import SweepPoint, sweep_theta
from .traces import SkipTrace, read_trace, write_trace

__all__ = [
    "AgentArtifact",
    "BBox",
    "Detection",
    "DetectionLog",
    "EvalReport",
    "FhopError",
    "Frame",
    "ObjectSpec",
    "OracleConfig",
    "QTable",
    "RLConfig",
    "RunConfig",
    "SceneSpec",
    "SkipTrace",
    "StateConfig",
    "StateModel",
    "StorageError",
    "SweepPoint",
    "ValidationError",
    "choose_action",
    "compute_reward",
    "count_accuracy",
    "diff_threshold_baseline",
    "evaluate",
    "f1_score",
    "fit_clusters",
    "fixed_skip",
    "frame_distance",
    "generate_scene",
    "get_state",
    "iou",
    "load_agent",
    "load_frames",
    "oracle_select",
    "preset",
    "read_detection_log",
    "read_trace",
    "run_agent",
    "run_report",
    "save_agent",
    "verify_fingerprint",
    "skip_error",
    "split",
    "sweep_theta",
    "train",
    "train_agent",
    "write_detection_log",
    "write_trace",
]
