"""poseguide: movement-guidance engine for following tutorial videos.

Compares a user's 2D pose stream against a pre-extracted trainer pose track
using a ten-segment angular-error metric, serves live scores over a line-JSON
protocol, and ships the study-analysis toolchain (counterbalancing,
within-subject ANOVA, Tukey HSD, NASA-TLX, rank sums).
"""

from ._kernels import IMPLEMENTATION as KERNEL_IMPLEMENTATION
from .metric import angle_diff, frame_error, mirror_pose, segment_angle
from .session import (
    Session,
    SessionConfig,
    Track,
    TrackFrame,
    TrialSummary,
    align,
    best_offset,
    score_tracks,
    smooth,
    summarize_scores,
)
from .skeleton import (
    FrameScore,
    KEYPOINT_NAMES,
    Keypoint,
    MetricConfig,
    Pose,
    SEGMENT_IDS,
    SEGMENTS,
    make_pose,
)
from .trackio import (
    ScoreReportRow,
    TrackMeta,
    export_report,
    read_report,
    read_track,
    recorded_track,
    write_track,
)

__version__ = "0.1.0"

__all__ = [
    "KERNEL_IMPLEMENTATION",
    "angle_diff", "frame_error", "mirror_pose", "segment_angle",
    "Session", "SessionConfig", "Track", "TrackFrame", "TrialSummary",
    "align", "best_offset", "score_tracks", "smooth", "summarize_scores",
    "FrameScore", "KEYPOINT_NAMES", "Keypoint", "MetricConfig", "Pose",
    "SEGMENT_IDS", "SEGMENTS", "make_pose",
    "ScoreReportRow", "TrackMeta", "export_report", "read_report",
    "read_track", "recorded_track", "write_track",
    "__version__",
]
