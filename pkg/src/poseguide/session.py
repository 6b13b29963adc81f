"""Session engine: trainer/user temporal alignment, smoothing, and trial scoring."""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, field
from functools import cached_property

from .metric import frame_error, mirror_pose, score_arrays
from .skeleton import (
    FrameScore,
    Keypoint,
    KEYPOINT_NAMES,
    MetricConfig,
    Pose,
    SEGMENT_IDS,
    pose_to_array,
)

DEFAULT_ALIGN_TOLERANCE = 0.1

CONDITIONS = ("C1", "C2", "C3", "C4")


class ClockError(RuntimeError):
    """Wall clock observed earlier than the playback reference clock."""


class EmptyTrialError(RuntimeError):
    """No scored frames to summarize."""


@dataclass(frozen=True)
class TrackFrame:
    t: float
    pose: Pose

    def __post_init__(self):
        if not math.isfinite(self.t) or self.t < 0:
            raise ValueError(f"frame timestamp must be finite and >= 0, got {self.t}")


@dataclass(frozen=True)
class Track:
    """Time-ordered pose sequence; meta is a persistence.TrackMeta."""

    meta: object
    frames: tuple[TrackFrame, ...]

    def __post_init__(self):
        if len(self.frames) == 0:
            raise ValueError("a track needs at least one frame")
        times = [f.t for f in self.frames]
        for i in range(1, len(times)):
            if times[i] <= times[i - 1]:
                raise ValueError(
                    f"track timestamps must be strictly increasing "
                    f"(frame {i}: {times[i]} after {times[i - 1]})"
                )

    @property
    def duration(self) -> float:
        return self.frames[-1].t

    @cached_property
    def times(self) -> list[float]:
        return [f.t for f in self.frames]


@dataclass(frozen=True)
class SessionConfig:
    condition: str = "C1"
    metric: MetricConfig = field(default_factory=MetricConfig)
    align_tolerance: float = DEFAULT_ALIGN_TOLERANCE
    smoothing_alpha: float = 1.0
    show_error_live: bool = False

    def __post_init__(self):
        if self.condition not in CONDITIONS:
            raise ValueError(f"condition must be one of {CONDITIONS}, got {self.condition!r}")
        if not (self.align_tolerance > 0):
            raise ValueError("align_tolerance must be > 0")
        if not (0.0 < self.smoothing_alpha <= 1.0):
            raise ValueError("smoothing_alpha must be in (0, 1]")


@dataclass(frozen=True)
class TrialSummary:
    mean_error: float
    frame_count: int
    unscored_count: int
    per_segment_means: dict[str, float | None]
    duration: float


def align_index(times: list[float], position: float, tolerance: float) -> int | None:
    """Index of the time nearest to position within tolerance, ties to earlier."""
    i = bisect_left(times, position)
    best = None
    best_dist = tolerance
    # Check earlier neighbor first so ties keep it.
    for j in (i - 1, i):
        if 0 <= j < len(times):
            d = abs(times[j] - position)
            if d < best_dist or (best is None and d == best_dist):
                best = j
                best_dist = d
    return best


def align(trainer: Track, position: float, tolerance: float) -> TrackFrame | None:
    """Trainer frame nearest to position, or None outside the tolerance window.

    A position exactly midway between two frames resolves to the earlier one.
    """
    i = align_index(trainer.times, position, tolerance)
    return None if i is None else trainer.frames[i]


def smooth(prev: Pose | None, nxt: Pose, alpha: float) -> Pose:
    """Exponential moving average of keypoint coordinates; scores come from nxt."""
    if prev is None or alpha == 1.0:
        return nxt
    kps = {}
    for name in KEYPOINT_NAMES:
        p = prev.keypoints[name]
        n = nxt.keypoints[name]
        kps[name] = Keypoint(
            name,
            alpha * n.x + (1.0 - alpha) * p.x,
            alpha * n.y + (1.0 - alpha) * p.y,
            n.score,
        )
    return Pose(kps, nxt.frame_width, nxt.frame_height)


class Session:
    """One live scoring session: single-writer, one frame stream in order.

    Playback is anchored on a caller-supplied wall clock; the trainer track is
    never mutated. Raw (unsmoothed) user frames are recorded as received.
    """

    def __init__(self, config: SessionConfig, trainer: Track):
        self.config = config
        self.trainer = trainer
        self.state = "paused"
        self.position_at_reference = 0.0
        self.reference_wall_clock: float | None = None
        self.smoothed_user: Pose | None = None
        self.scores: list[tuple[float, float, FrameScore]] = []
        self.recording: list[TrackFrame] = []
        self.unscored_count = 0

    def play(self, position: float, wall_clock: float) -> None:
        self.position_at_reference = max(0.0, position)
        self.reference_wall_clock = wall_clock
        self.state = "playing"

    def pause(self, position: float) -> None:
        self.position_at_reference = max(0.0, position)
        self.reference_wall_clock = None
        self.state = "paused"

    def seek(self, position: float, wall_clock: float | None = None) -> None:
        self.position_at_reference = max(0.0, position)
        if self.state == "playing":
            if wall_clock is None:
                raise ValueError("seek while playing needs a wall clock to re-anchor")
            self.reference_wall_clock = wall_clock

    def playback_position(self, wall_clock: float) -> float:
        if self.state == "paused":
            pos = self.position_at_reference
        else:
            if self.reference_wall_clock is None:
                raise RuntimeError("playing session has no clock anchor")
            if wall_clock < self.reference_wall_clock:
                raise ClockError(
                    f"clock went backwards: {wall_clock} < {self.reference_wall_clock}"
                )
            pos = self.position_at_reference + (wall_clock - self.reference_wall_clock)
        return min(max(pos, 0.0), self.trainer.duration)

    def process_frame(self, user_frame: TrackFrame, wall_clock: float) -> FrameScore | None:
        """Score one incoming user frame; None means the frame went unscored."""
        self.recording.append(user_frame)
        smoothed = smooth(self.smoothed_user, user_frame.pose, self.config.smoothing_alpha)
        self.smoothed_user = smoothed
        position = self.playback_position(wall_clock)
        trainer_frame = align(self.trainer, position, self.config.align_tolerance)
        if trainer_frame is None:
            self.unscored_count += 1
            return None
        score = frame_error(trainer_frame.pose, smoothed, self.config.metric)
        if score.valid_count == 0:
            self.unscored_count += 1
            return None
        self.scores.append((user_frame.t, trainer_frame.t, score))
        return score

    def trial_summary(self) -> TrialSummary:
        return summarize_scores(self.scores, self.unscored_count, self.recording)

    def reset_trial(self) -> None:
        """Clear accumulated scores/recording for a fresh trial on the same trainer."""
        self.smoothed_user = None
        self.scores = []
        self.recording = []
        self.unscored_count = 0


def summarize_scores(
    scores: list[tuple[float, float, FrameScore]],
    unscored_count: int,
    recording: list[TrackFrame] | None = None,
) -> TrialSummary:
    if not scores:
        raise EmptyTrialError("empty trial: no scored frames")
    mean_error = sum(s.mean_error for _, _, s in scores) / len(scores)
    per_segment_means: dict[str, float | None] = {}
    for seg_id in SEGMENT_IDS:
        vals = [s.per_segment[seg_id] for _, _, s in scores if s.per_segment[seg_id] is not None]
        per_segment_means[seg_id] = sum(vals) / len(vals) if vals else None
    if recording:
        duration = recording[-1].t - recording[0].t
    else:
        duration = scores[-1][0] - scores[0][0]
    return TrialSummary(
        mean_error=mean_error,
        frame_count=len(scores),
        unscored_count=unscored_count,
        per_segment_means=per_segment_means,
        duration=duration,
    )


def score_tracks(
    trainer: Track,
    user: Track,
    offset: float = 0.0,
    cfg: MetricConfig = MetricConfig(),
    tolerance: float = DEFAULT_ALIGN_TOLERANCE,
) -> tuple[list[tuple[float, float, FrameScore]], int]:
    """Offline trial scoring: user frame at t against trainer at t - offset.

    Returns (scores, unscored_count) in user frame order.
    """
    trainer_times = trainer.times
    trainer_arrays = [pose_to_array(f.pose, cfg.aspect_correct) for f in trainer.frames]
    scores: list[tuple[float, float, FrameScore]] = []
    unscored = 0
    for uf in user.frames:
        ti = align_index(trainer_times, uf.t - offset, tolerance)
        if ti is None:
            unscored += 1
            continue
        pose = mirror_pose(uf.pose) if cfg.mirror_user else uf.pose
        score = score_arrays(trainer_arrays[ti], pose_to_array(pose, cfg.aspect_correct),
                             cfg.confidence_threshold)
        if score.valid_count == 0:
            unscored += 1
            continue
        scores.append((uf.t, trainer_times[ti], score))
    return scores, unscored


def best_offset(
    trainer: Track,
    user: Track,
    search_min: float,
    search_max: float,
    step: float,
    cfg: MetricConfig = MetricConfig(),
    tolerance: float = DEFAULT_ALIGN_TOLERANCE,
) -> tuple[float, float]:
    """Exhaustive lag search: the offset minimizing mean angular error.

    User frame at time t is compared against the trainer at t - offset. Ties
    resolve to the smallest offset. Raises if no offset scores any frame.
    """
    if search_min > search_max:
        raise ValueError("search_min must be <= search_max")
    if step <= 0:
        raise ValueError("step must be > 0")

    trainer_times = trainer.times
    trainer_arrays = [pose_to_array(f.pose, cfg.aspect_correct) for f in trainer.frames]
    user_arrays = []
    for f in user.frames:
        pose = mirror_pose(f.pose) if cfg.mirror_user else f.pose
        user_arrays.append(pose_to_array(pose, cfg.aspect_correct))

    best: tuple[float, float] | None = None
    offset = search_min
    i = 0
    while offset <= search_max + 1e-12:
        total = 0.0
        count = 0
        for uf, ua in zip(user.frames, user_arrays):
            ti = align_index(trainer_times, uf.t - offset, tolerance)
            if ti is None:
                continue
            score = score_arrays(trainer_arrays[ti], ua, cfg.confidence_threshold)
            if score.valid_count:
                total += score.mean_error
                count += 1
        if count:
            mean = total / count
            if best is None or mean < best[1]:
                best = (offset, mean)
        i += 1
        offset = search_min + i * step
    if best is None:
        raise ValueError("no overlap: no offset in the search range scored any frame")
    return best
