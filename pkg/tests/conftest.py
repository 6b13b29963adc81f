"""Shared synthetic pose/track builders and the brute-force metric oracle."""

import math
import random

import pytest

from poseguide.skeleton import KEYPOINT_NAMES, MIRROR_MAP, SEGMENTS, Pose, make_pose
from poseguide.session import Track, TrackFrame
from poseguide.trackio import TrackMeta

HEAD_KEYPOINTS = ("nose", "left_eye", "right_eye", "left_ear", "right_ear")

# A plausible frontal stick figure in normalized coordinates.
STICK_POINTS = {
    "nose": (0.50, 0.10),
    "left_eye": (0.52, 0.08),
    "right_eye": (0.48, 0.08),
    "left_ear": (0.55, 0.09),
    "right_ear": (0.45, 0.09),
    "left_shoulder": (0.62, 0.25),
    "right_shoulder": (0.38, 0.25),
    "left_elbow": (0.70, 0.38),
    "right_elbow": (0.30, 0.38),
    "left_wrist": (0.74, 0.52),
    "right_wrist": (0.26, 0.52),
    "left_hip": (0.57, 0.55),
    "right_hip": (0.43, 0.55),
    "left_knee": (0.58, 0.72),
    "right_knee": (0.42, 0.72),
    "left_ankle": (0.59, 0.90),
    "right_ankle": (0.41, 0.90),
}


def stick_pose(width=640, height=360, score=1.0):
    return make_pose(STICK_POINTS, width, height, default_score=score)


def random_pose(rng: random.Random, width=640, height=360, min_score=1.0):
    pts = {}
    for name in KEYPOINT_NAMES:
        pts[name] = (
            rng.uniform(-0.1, 1.1),
            rng.uniform(-0.1, 1.1),
            rng.uniform(min_score, 1.0),
        )
    return make_pose(pts, width, height)


def transform_pose(pose: Pose, fn):
    """Apply (x, y) -> (x, y) in normalized space to every keypoint."""
    pts = {}
    for name, kp in pose.keypoints.items():
        x, y = fn(kp.x, kp.y)
        pts[name] = (x, y, kp.score)
    return make_pose(pts, pose.frame_width, pose.frame_height)


def translate_pose(pose: Pose, dx: float, dy: float):
    return transform_pose(pose, lambda x, y: (x + dx, y + dy))


def scale_pose(pose: Pose, s: float, cx: float = 0.5, cy: float = 0.5):
    return transform_pose(pose, lambda x, y: (cx + s * (x - cx), cy + s * (y - cy)))


def rotate_pose(pose: Pose, theta: float, cx: float = 0.5, cy: float = 0.5):
    """Rigid rotation in aspect-corrected (pixel) space about a pixel center."""
    w, h = pose.frame_width, pose.frame_height
    pcx, pcy = cx * w, cy * h
    c, s = math.cos(theta), math.sin(theta)

    def fn(x, y):
        px, py = x * w - pcx, y * h - pcy
        rx = c * px - s * py
        ry = s * px + c * py
        return (rx + pcx) / w, (ry + pcy) / h

    return transform_pose(pose, fn)


def perturb_head(pose: Pose, rng: random.Random):
    pts = {}
    for name, kp in pose.keypoints.items():
        if name in HEAD_KEYPOINTS:
            pts[name] = (rng.uniform(-1, 2), rng.uniform(-1, 2), rng.uniform(0, 1))
        else:
            pts[name] = (kp.x, kp.y, kp.score)
    return make_pose(pts, pose.frame_width, pose.frame_height)


def with_score(pose: Pose, name: str, score: float):
    pts = {n: (kp.x, kp.y, score if n == name else kp.score)
           for n, kp in pose.keypoints.items()}
    return make_pose(pts, pose.frame_width, pose.frame_height)


def oracle_frame_error(trainer: Pose, user: Pose, threshold=0.3, mirror_user=True,
                       aspect_correct=True):
    """Independent re-computation of the per-segment errors, no shared code paths.

    Returns (per_segment dict, valid_count, mean or None).
    """
    if mirror_user:
        pts = {}
        for name, kp in user.keypoints.items():
            pts[MIRROR_MAP[name]] = (1.0 - kp.x, kp.y, kp.score)
        user = make_pose(pts, user.frame_width, user.frame_height)

    def seg_angle(pose, a, b):
        ka, kb = pose.keypoints[a], pose.keypoints[b]
        sx = pose.frame_width if aspect_correct else 1.0
        sy = pose.frame_height if aspect_correct else 1.0
        dx, dy = (kb.x - ka.x) * sx, (kb.y - ka.y) * sy
        if dx == 0 and dy == 0:
            return None
        return math.atan2(dy, dx)

    per_segment = {}
    total, count = 0.0, 0
    for seg_id, (a, b) in SEGMENTS:
        ok = all(p.keypoints[n].score >= threshold for p in (trainer, user) for n in (a, b))
        ta = seg_angle(trainer, a, b) if ok else None
        ua = seg_angle(user, a, b) if ok else None
        if not ok or ta is None or ua is None:
            per_segment[seg_id] = None
            continue
        d = abs(ta - ua)
        while d > 2 * math.pi:
            d -= 2 * math.pi
        if d > math.pi:
            d = 2 * math.pi - d
        per_segment[seg_id] = d
        total += d
        count += 1
    return per_segment, count, (total / count if count else None)


def make_track(poses_times, kind="trainer", width=640, height=360, fps=30.0,
               condition=None, session=None, source_uri="synthetic"):
    meta = TrackMeta(kind=kind, frame_width=width, frame_height=height,
                     nominal_fps=fps, source_uri=source_uri,
                     created_at="2026-01-01T00:00:00+00:00",
                     condition=condition, session=session)
    frames = tuple(TrackFrame(t, pose) for t, pose in poses_times)
    return Track(meta=meta, frames=frames)


def swaying_pose(t: float, width=640, height=360):
    """A smooth synthetic motion: the stick figure leaning back and forth."""
    return rotate_pose(stick_pose(width, height), 0.3 * math.sin(0.7 * t), 0.5, 0.55)


def motion_track(duration=10.0, fps=30.0, kind="trainer", **kw):
    n = int(duration * fps) + 1
    frames = [(i / fps, swaying_pose(i / fps)) for i in range(n)]
    return make_track(frames, kind=kind, fps=fps, **kw)


@pytest.fixture
def rng():
    return random.Random(20260823)
