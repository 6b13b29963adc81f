"""Session engine: playback clock, alignment, smoothing, scoring, lag search."""

import math

import pytest

from poseguide import (
    MetricConfig,
    Session,
    SessionConfig,
    TrackFrame,
    align,
    best_offset,
    make_pose,
    score_tracks,
    smooth,
    summarize_scores,
)
from poseguide.session import ClockError, EmptyTrialError, Track, align_index

from conftest import make_track, motion_track, rotate_pose, stick_pose, swaying_pose

NO_MIRROR_CFG = SessionConfig(metric=MetricConfig(mirror_user=False))


def simple_track(times):
    return make_track([(t, stick_pose()) for t in times])


class TestTrack:
    def test_needs_frames(self):
        with pytest.raises(ValueError, match="at least one frame"):
            Track(meta=None, frames=())

    def test_rejects_non_monotonic(self):
        with pytest.raises(ValueError, match="strictly increasing"):
            make_track([(0.0, stick_pose()), (0.0, stick_pose())])


class TestPlayback:
    def make_session(self, duration=60.0):
        track = simple_track([0.0, duration])
        return Session(NO_MIRROR_CFG, track)

    def test_paused_position_is_fixed(self):
        s = self.make_session()
        s.pause(3.0)
        assert s.playback_position(0.0) == 3.0
        assert s.playback_position(1e9) == 3.0

    def test_playing_advances_linearly(self):
        s = self.make_session()
        s.play(2.0, wall_clock=100.0)
        assert s.playback_position(101.5) == pytest.approx(3.5)

    def test_clamped_to_duration(self):
        s = self.make_session(duration=60.0)
        s.play(60.0, wall_clock=0.0)
        assert s.playback_position(50.0) == 60.0

    def test_clock_backwards_raises(self):
        s = self.make_session()
        s.play(0.0, wall_clock=100.0)
        with pytest.raises(ClockError, match="backwards"):
            s.playback_position(99.0)


class TestAlign:
    def test_nearest_within_tolerance(self):
        track = simple_track([0.0, 0.5, 1.0])
        assert align(track, 0.6, 0.1).t == 0.5

    def test_outside_window_is_none(self):
        track = simple_track([0.0, 0.5, 1.0])
        assert align(track, 0.3, 0.1) is None

    def test_tie_breaks_earlier(self):
        track = simple_track([0.0, 0.5])
        assert align(track, 0.25, 0.3).t == 0.0

    def test_align_index_at_boundary(self):
        assert align_index([0.0, 0.5], 0.6, 0.1) == 1
        assert align_index([0.0, 0.5], 0.61, 0.1) is None
        assert align_index([0.0, 0.5], 0.5999999, 0.1) == 1


class TestSmooth:
    def test_alpha_one_passthrough(self):
        pose = stick_pose()
        assert smooth(None, pose, 1.0) is pose
        assert smooth(stick_pose(), pose, 1.0) is pose

    def test_midpoint(self):
        a = make_pose({n: (0.0, 0.0) for n in stick_pose().keypoints}, 100, 100)
        b = make_pose({n: (1.0, 0.5) for n in stick_pose().keypoints}, 100, 100)
        out = smooth(a, b, 0.5)
        kp = out.keypoints["left_wrist"]
        assert kp.x == 0.5 and kp.y == 0.25

    def test_geometric_convergence(self):
        target = stick_pose()
        current = make_pose({n: (0.0, 0.0) for n in target.keypoints}, 640, 360)
        alpha = 0.4
        residuals = []
        for _ in range(5):
            current = smooth(current, target, alpha)
            residuals.append(abs(current.keypoints["nose"].x - target.keypoints["nose"].x))
        for r0, r1 in zip(residuals, residuals[1:]):
            assert r1 == pytest.approx(r0 * (1 - alpha), rel=1e-9)

    def test_scores_come_from_next(self):
        prev = stick_pose(score=0.2)
        nxt = stick_pose(score=0.9)
        out = smooth(prev, nxt, 0.5)
        assert out.keypoints["nose"].score == 0.9


class TestProcessFrame:
    def test_identical_frame_scores_zero(self):
        trainer = motion_track(duration=2.0)
        s = Session(NO_MIRROR_CFG, trainer)
        s.play(0.0, wall_clock=10.0)
        score = s.process_frame(TrackFrame(0.0, swaying_pose(1.0)), wall_clock=11.0)
        assert score is not None
        assert score.mean_error == pytest.approx(0.0, abs=1e-12)

    def test_beyond_duration_unscored(self):
        trainer = motion_track(duration=1.0)
        s = Session(NO_MIRROR_CFG, trainer)
        s.pause(0.0)
        # clamping pins position to duration, so overshoot beyond the tolerance
        # can only come from a paused/seeked position inside a sparse track
        sparse = simple_track([0.0, 5.0])
        s2 = Session(NO_MIRROR_CFG, sparse)
        s2.pause(2.0)
        assert s2.process_frame(TrackFrame(0.0, stick_pose()), wall_clock=0.0) is None
        assert s2.unscored_count == 1

    def test_rotated_stream_scores_theta(self):
        theta = 0.2
        trainer = motion_track(duration=3.0)
        s = Session(NO_MIRROR_CFG, trainer)
        s.play(0.0, wall_clock=0.0)
        for i in range(0, 90, 3):
            t = i / 30.0
            user_pose = rotate_pose(swaying_pose(t), theta)
            score = s.process_frame(TrackFrame(t, user_pose), wall_clock=t)
            assert score is not None
            assert score.mean_error == pytest.approx(theta, abs=1e-9)
        summary = s.trial_summary()
        assert summary.mean_error == pytest.approx(theta, abs=1e-9)
        assert summary.frame_count + summary.unscored_count == 30

    def test_counts_are_consistent(self):
        trainer = simple_track([0.0, 0.5, 1.0])
        s = Session(NO_MIRROR_CFG, trainer)
        s.pause(0.3)  # nothing within tolerance
        s.process_frame(TrackFrame(0.0, stick_pose()), 0.0)
        s.pause(0.5)
        s.process_frame(TrackFrame(0.1, stick_pose()), 0.1)
        assert s.unscored_count == 1
        assert len(s.scores) == 1
        assert len(s.recording) == 2

    def test_trainer_not_mutated(self):
        trainer = motion_track(duration=1.0)
        frames_before = trainer.frames
        s = Session(NO_MIRROR_CFG, trainer)
        s.play(0.0, 0.0)
        s.process_frame(TrackFrame(0.0, stick_pose()), 0.0)
        assert trainer.frames is frames_before


class TestTrialSummary:
    def test_mean_over_frames(self):
        trainer = motion_track(duration=2.0)
        s = Session(NO_MIRROR_CFG, trainer)
        s.play(0.0, 0.0)
        for t in (0.0, 0.1, 0.2):
            s.process_frame(TrackFrame(t, swaying_pose(t)), t)
        summary = s.trial_summary()
        assert summary.frame_count == 3
        assert summary.mean_error == pytest.approx(
            sum(sc.mean_error for _, _, sc in s.scores) / 3)

    def test_simple_mean_of_frame_means(self):
        # summarize_scores is also used directly by offline scoring
        from poseguide.skeleton import SEGMENT_IDS, FrameScore

        def fs(mean):
            per = {seg: mean for seg in SEGMENT_IDS}
            return FrameScore(per, 10, mean)

        summary = summarize_scores(
            [(0.0, 0.0, fs(0.1)), (0.1, 0.1, fs(0.2)), (0.2, 0.2, fs(0.3))], 0)
        assert summary.mean_error == pytest.approx(0.2)

    def test_single_frame_summary_equals_frame(self):
        trainer = motion_track(duration=1.0)
        s = Session(NO_MIRROR_CFG, trainer)
        s.pause(0.5)
        score = s.process_frame(TrackFrame(0.0, swaying_pose(0.5)), 0.0)
        summary = s.trial_summary()
        assert summary.mean_error == score.mean_error
        assert summary.frame_count == 1
        for seg, v in score.per_segment.items():
            assert summary.per_segment_means[seg] == v

    def test_empty_trial_raises(self):
        s = Session(NO_MIRROR_CFG, motion_track(duration=1.0))
        with pytest.raises(EmptyTrialError):
            s.trial_summary()


class TestBestOffset:
    def test_recovers_injected_delay(self):
        fps = 30.0
        trainer = motion_track(duration=8.0, fps=fps)
        delay = 0.5
        user_frames = [(f.t + delay, f.pose) for f in trainer.frames]
        user = make_track(user_frames, kind="user_session", condition="C1")
        offset, err = best_offset(trainer, user, 0.0, 2.0, 1.0 / fps,
                                  MetricConfig(mirror_user=False))
        assert offset == pytest.approx(delay, abs=1.0 / fps + 1e-9)
        assert err == pytest.approx(0.0, abs=1e-9)

    def test_zero_offset_for_identical_tracks(self):
        trainer = motion_track(duration=4.0)
        user = make_track([(f.t, f.pose) for f in trainer.frames],
                          kind="user_session", condition="C1")
        offset, err = best_offset(trainer, user, 0.0, 2.0, 0.5,
                                  MetricConfig(mirror_user=False))
        assert offset == 0.0
        assert err == pytest.approx(0.0, abs=1e-12)

    def test_disjoint_ranges_error(self):
        trainer = simple_track([0.0, 0.5])
        user = make_track([(100.0, stick_pose())], kind="user_session", condition="C1")
        with pytest.raises(ValueError, match="no overlap"):
            best_offset(trainer, user, 0.0, 2.0, 0.5, MetricConfig(mirror_user=False))


class TestScoreTracks:
    def test_identical_tracks_zero_error(self):
        trainer = motion_track(duration=3.0)
        user = make_track([(f.t, f.pose) for f in trainer.frames],
                          kind="user_session", condition="C1")
        scores, unscored = score_tracks(trainer, user, 0.0, MetricConfig(mirror_user=False))
        assert unscored == 0
        assert all(sc.mean_error == pytest.approx(0.0, abs=1e-12) for _, _, sc in scores)
        timestamps = [ut for ut, _, _ in scores]
        assert timestamps == sorted(timestamps)
