"""Angular-error metric over the ten scored body segments.

Angles use the screen convention (y grows downward); both poses share it, so
the error itself is convention-independent. The head never contributes.
"""

from __future__ import annotations

import math

import numpy as np

from . import _kernels
from .skeleton import (
    FrameScore,
    Keypoint,
    MetricConfig,
    MIRROR_MAP,
    Pose,
    SEGMENT_ENDPOINTS,
    SEGMENT_IDS,
    pose_to_array,
)

TWO_PI = 2.0 * math.pi


def segment_angle(pose: Pose, segment_id: str, aspect_correct: bool = True) -> float | None:
    """Orientation in (-pi, pi] of the vector between a segment's endpoints.

    None when the endpoints coincide exactly (no defined direction). With
    aspect correction the vector is taken in pixel space, removing the
    distortion normalized coordinates have on non-square frames.
    """
    name_a, name_b = SEGMENT_ENDPOINTS[segment_id]
    a = pose.keypoints[name_a]
    b = pose.keypoints[name_b]
    sx = float(pose.frame_width) if aspect_correct else 1.0
    sy = float(pose.frame_height) if aspect_correct else 1.0
    dx = (b.x - a.x) * sx
    dy = (b.y - a.y) * sy
    if dx == 0.0 and dy == 0.0:
        return None
    angle = math.atan2(dy, dx)
    if angle == -math.pi:
        angle = math.pi
    return angle


def angle_diff(a: float, b: float) -> float:
    """Smallest absolute difference between two orientations, in [0, pi]."""
    d = math.fabs(a - b) % TWO_PI
    return TWO_PI - d if d > math.pi else d


def mirror_pose(pose: Pose) -> Pose:
    """Horizontal flip: x -> 1 - x, with left/right keypoint names swapped."""
    kps = {}
    for name, kp in pose.keypoints.items():
        new_name = MIRROR_MAP[name]
        kps[new_name] = Keypoint(new_name, 1.0 - kp.x, kp.y, kp.score)
    return Pose(kps, pose.frame_width, pose.frame_height)


def score_arrays(trainer: np.ndarray, user: np.ndarray, threshold: float) -> FrameScore:
    """Score two packed (17, 3) pose arrays (already aspect-corrected/mirrored)."""
    errors = np.empty(10, dtype=np.float64)
    valid = _kernels.score_pair(trainer, user, threshold, errors)
    per_segment: dict[str, float | None] = {}
    total = 0.0
    for i, seg_id in enumerate(SEGMENT_IDS):
        e = float(errors[i])
        if math.isnan(e):
            per_segment[seg_id] = None
        else:
            per_segment[seg_id] = e
            total += e
    mean = total / valid if valid else None
    return FrameScore(per_segment=per_segment, valid_count=valid, mean_error=mean)


def frame_error(trainer: Pose, user: Pose, cfg: MetricConfig = MetricConfig()) -> FrameScore:
    """Per-segment angular error between a trainer pose and a user pose.

    The user pose is mirrored first when cfg.mirror_user (the comparison then
    happens in the space the user sees on screen). A segment is scored only if
    all four endpoint confidences clear the threshold and both segments have a
    defined direction.
    """
    if cfg.mirror_user:
        user = mirror_pose(user)
    t = pose_to_array(trainer, cfg.aspect_correct)
    u = pose_to_array(user, cfg.aspect_correct)
    return score_arrays(t, u, cfg.confidence_threshold)
