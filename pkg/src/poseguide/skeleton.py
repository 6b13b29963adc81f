"""Skeleton data model: keypoints, poses, and the ten scored body segments."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# COCO-style 17-keypoint schema, in canonical order.
KEYPOINT_NAMES = (
    "nose",
    "left_eye",
    "right_eye",
    "left_ear",
    "right_ear",
    "left_shoulder",
    "right_shoulder",
    "left_elbow",
    "right_elbow",
    "left_wrist",
    "right_wrist",
    "left_hip",
    "right_hip",
    "left_knee",
    "right_knee",
    "left_ankle",
    "right_ankle",
)

KEYPOINT_INDEX = {name: i for i, name in enumerate(KEYPOINT_NAMES)}

# Ten compared segments. Head keypoints (nose, eyes, ears) are deliberately
# absent: head orientation is not part of the error metric.
SEGMENTS = (
    ("shoulder_line", ("left_shoulder", "right_shoulder")),
    ("hip_line", ("left_hip", "right_hip")),
    ("upper_arm_l", ("left_shoulder", "left_elbow")),
    ("upper_arm_r", ("right_shoulder", "right_elbow")),
    ("lower_arm_l", ("left_elbow", "left_wrist")),
    ("lower_arm_r", ("right_elbow", "right_wrist")),
    ("upper_leg_l", ("left_hip", "left_knee")),
    ("upper_leg_r", ("right_hip", "right_knee")),
    ("lower_leg_l", ("left_knee", "left_ankle")),
    ("lower_leg_r", ("right_knee", "right_ankle")),
)

SEGMENT_IDS = tuple(seg_id for seg_id, _ in SEGMENTS)
SEGMENT_ENDPOINTS = {seg_id: endpoints for seg_id, endpoints in SEGMENTS}

# Endpoint keypoint indices per segment, in the fixed segment order.
SEGMENT_INDEX_PAIRS = tuple(
    (KEYPOINT_INDEX[a], KEYPOINT_INDEX[b]) for _, (a, b) in SEGMENTS
)

# left_* <-> right_* swap used when mirroring a pose.
MIRROR_MAP = {}
for _name in KEYPOINT_NAMES:
    if _name.startswith("left_"):
        MIRROR_MAP[_name] = "right_" + _name[len("left_"):]
    elif _name.startswith("right_"):
        MIRROR_MAP[_name] = "left_" + _name[len("right_"):]
    else:
        MIRROR_MAP[_name] = _name


@dataclass(frozen=True)
class Keypoint:
    """One named 2D landmark with normalized coordinates and a confidence."""

    name: str
    x: float
    y: float
    score: float

    def __post_init__(self):
        if self.name not in KEYPOINT_INDEX:
            raise ValueError(f"unknown keypoint name: {self.name!r}")
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"keypoint {self.name}: non-finite coordinates")
        if not (0.0 <= self.score <= 1.0):
            raise ValueError(f"keypoint {self.name}: score {self.score} outside [0, 1]")


@dataclass(frozen=True)
class Pose:
    """A full 17-keypoint body pose plus the frame geometry it was seen in."""

    keypoints: dict[str, Keypoint]
    frame_width: int
    frame_height: int

    def __post_init__(self):
        if set(self.keypoints) != set(KEYPOINT_NAMES):
            missing = set(KEYPOINT_NAMES) - set(self.keypoints)
            extra = set(self.keypoints) - set(KEYPOINT_NAMES)
            raise ValueError(f"pose keypoint schema mismatch: missing={sorted(missing)} extra={sorted(extra)}")
        for name, kp in self.keypoints.items():
            if kp.name != name:
                raise ValueError(f"keypoint stored under {name!r} is named {kp.name!r}")
        if self.frame_width <= 0 or self.frame_height <= 0:
            raise ValueError("frame dimensions must be positive")

    def __getitem__(self, name: str) -> Keypoint:
        return self.keypoints[name]


def make_pose(points, frame_width: int, frame_height: int, default_score: float = 1.0) -> Pose:
    """Build a Pose from a mapping name -> (x, y) or (x, y, score)."""
    kps = {}
    for name in KEYPOINT_NAMES:
        p = points[name]
        if len(p) == 2:
            x, y = p
            s = default_score
        else:
            x, y, s = p
        kps[name] = Keypoint(name, float(x), float(y), float(s))
    return Pose(kps, frame_width, frame_height)


def pose_to_array(pose: Pose, aspect_correct: bool) -> np.ndarray:
    """Pack a pose into a (17, 3) float64 array of (x, y, score) rows.

    With aspect correction the normalized coordinates are scaled by the frame
    dimensions so angles are measured in an undistorted space.
    """
    out = np.empty((17, 3), dtype=np.float64)
    sx = float(pose.frame_width) if aspect_correct else 1.0
    sy = float(pose.frame_height) if aspect_correct else 1.0
    for i, name in enumerate(KEYPOINT_NAMES):
        kp = pose.keypoints[name]
        out[i, 0] = kp.x * sx
        out[i, 1] = kp.y * sy
        out[i, 2] = kp.score
    return out


@dataclass(frozen=True)
class MetricConfig:
    """Knobs for the angular-error comparison."""

    confidence_threshold: float = 0.3
    mirror_user: bool = True
    aspect_correct: bool = True

    def __post_init__(self):
        if not (0.0 <= self.confidence_threshold <= 1.0):
            raise ValueError("confidence_threshold must be in [0, 1]")


@dataclass(frozen=True)
class FrameScore:
    """Per-segment angular errors for one aligned trainer/user frame pair.

    per_segment maps every segment id to an error in radians, or None when the
    segment could not be scored (low confidence or degenerate geometry).
    """

    per_segment: dict[str, float | None]
    valid_count: int
    mean_error: float | None = field(default=None)

    def __post_init__(self):
        if set(self.per_segment) != set(SEGMENT_IDS):
            raise ValueError("per_segment must cover exactly the ten segments")
        present = [v for v in self.per_segment.values() if v is not None]
        if len(present) != self.valid_count:
            raise ValueError("valid_count inconsistent with per_segment")
        if self.valid_count == 0:
            if self.mean_error is not None:
                raise ValueError("mean_error must be absent when no segment is valid")
        elif self.mean_error is None:
            raise ValueError("mean_error required when valid_count >= 1")
