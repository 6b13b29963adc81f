"""Line-oriented JSON message protocol between a UI and the scoring engine.

Wire format: UTF-8 newline-delimited JSON, one message per line, protocol
version 1. The client streams playback events and pose frames; the server is
the only party that computes errors. Playback is anchored on the client's
frame-capture clock, which makes a recorded session exactly replayable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .session import (
    ClockError,
    EmptyTrialError,
    MetricConfig,
    Session,
    SessionConfig,
    Track,
    TrackFrame,
    TrialSummary,
)
from .skeleton import SEGMENT_IDS
from .trackio import parse_frame_record, parse_track_lines, read_track

PROTOCOL_VERSION = 1

CLIENT_TYPES = ("hello", "configure", "load_trainer", "play", "pause", "seek",
                "frame", "end_trial")

CONFIG_FIELDS = ("condition", "confidence_threshold", "mirror_user", "aspect_correct",
                 "align_tolerance", "smoothing_alpha", "show_error_live")


class ProtocolError(Exception):
    def __init__(self, code: str, detail: str = ""):
        self.code = code
        self.detail = detail
        super().__init__(f"{code}: {detail}" if detail else code)

    def to_message(self) -> dict:
        return {"type": "error", "code": self.code, "detail": self.detail}


def decode_client(line: str | bytes) -> dict:
    """Parse and validate one client line into a typed message dict."""
    if isinstance(line, bytes):
        try:
            line = line.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ProtocolError("bad_message", f"invalid utf-8: {exc}") from exc
    try:
        msg = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ProtocolError("bad_message", f"invalid JSON: {exc.msg}") from exc
    if not isinstance(msg, dict) or "type" not in msg:
        raise ProtocolError("bad_message", "message must be an object with a 'type'")
    mtype = msg["type"]
    if mtype not in CLIENT_TYPES:
        raise ProtocolError("unknown_type", f"unknown message type {mtype!r}")
    try:
        _validate_payload(msg)
    except (KeyError, TypeError, ValueError) as exc:
        raise ProtocolError("bad_message", str(exc)) from exc
    return msg


def _require_number(msg: dict, key: str) -> float:
    v = msg[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValueError(f"field {key!r} must be a number")
    return float(v)


def _validate_payload(msg: dict) -> None:
    mtype = msg["type"]
    if mtype == "hello":
        version = msg["protocol_version"]
        if version != PROTOCOL_VERSION:
            raise ValueError(f"unsupported protocol_version {version}")
        for key in ("frame_width", "frame_height"):
            if not isinstance(msg[key], int) or msg[key] <= 0:
                raise ValueError(f"field {key!r} must be a positive integer")
    elif mtype == "configure":
        unknown = set(msg) - {"type"} - set(CONFIG_FIELDS)
        if unknown:
            raise ValueError(f"unknown configure fields: {sorted(unknown)}")
    elif mtype == "load_trainer":
        if ("path" in msg) == ("track" in msg):
            raise ValueError("load_trainer needs exactly one of 'path' or 'track'")
        if "track" in msg and not isinstance(msg["track"], list):
            raise ValueError("inline 'track' must be a list of record lines")
    elif mtype in ("play", "pause", "seek"):
        if _require_number(msg, "position") < 0:
            raise ValueError("position must be >= 0")
    elif mtype == "frame":
        _require_number(msg, "t_capture")
        if "keypoints" not in msg:
            raise ValueError("frame message missing 'keypoints'")
    # end_trial carries no payload


@dataclass
class SessionState:
    """Per-connection protocol state; messages are handled strictly in order."""

    trainer: Track | None = None
    trainer_uri: str = ""
    frame_width: int = 640
    frame_height: int = 360
    hello_done: bool = False
    config: dict = field(default_factory=dict)
    session: Session | None = None
    pending_play_position: float | None = None
    events: list[dict] = field(default_factory=list)

    def build_config(self) -> SessionConfig:
        c = self.config
        metric = MetricConfig(
            confidence_threshold=c.get("confidence_threshold", 0.3),
            mirror_user=c.get("mirror_user", True),
            aspect_correct=c.get("aspect_correct", True),
        )
        return SessionConfig(
            condition=c.get("condition", "C1"),
            metric=metric,
            align_tolerance=c.get("align_tolerance", 0.1),
            smoothing_alpha=c.get("smoothing_alpha", 1.0),
            show_error_live=c.get("show_error_live", False),
        )

    def start_session(self) -> None:
        self.session = Session(self.build_config(), self.trainer)
        self.pending_play_position = None
        self.events = []


def summary_message(summary: TrialSummary) -> dict:
    return {
        "type": "summary",
        "mean_error": summary.mean_error,
        "frame_count": summary.frame_count,
        "unscored_count": summary.unscored_count,
        "per_segment_means": {seg: summary.per_segment_means[seg] for seg in SEGMENT_IDS},
        "duration": summary.duration,
    }


def handle(state: SessionState, msg: dict, wall_clock: float = 0.0) -> list[dict]:
    """Apply one decoded client message; returns the server messages to send.

    wall_clock is the server receipt time; scoring itself is driven by client
    capture timestamps so that recorded sessions replay deterministically.
    """
    mtype = msg["type"]
    if not state.hello_done:
        if mtype != "hello":
            return [ProtocolError("protocol_order", "hello must be the first message").to_message()]
        state.hello_done = True
        state.frame_width = msg["frame_width"]
        state.frame_height = msg["frame_height"]
        if state.trainer is not None and state.session is None:
            state.start_session()
        return [{"type": "welcome", "protocol_version": PROTOCOL_VERSION}]

    if mtype == "hello":
        return [ProtocolError("protocol_order", "duplicate hello").to_message()]

    if mtype == "configure":
        for key in CONFIG_FIELDS:
            if key in msg:
                state.config[key] = msg[key]
        try:
            if state.trainer is not None:
                state.start_session()  # config change starts a fresh trial
            else:
                state.build_config()  # validate eagerly
        except ValueError as exc:
            return [ProtocolError("bad_message", str(exc)).to_message()]
        return [{"type": "ack", "of": "configure"}]

    if mtype == "load_trainer":
        try:
            if "path" in msg:
                track = read_track(msg["path"])
                state.trainer_uri = msg["path"]
            else:
                track = parse_track_lines(msg["track"])
                state.trainer_uri = ""
        except (OSError, ValueError) as exc:
            return [ProtocolError("bad_trainer", str(exc)).to_message()]
        state.trainer = track
        state.start_session()
        return [{"type": "ack", "of": "load_trainer"}]

    if state.session is None:
        return [ProtocolError("protocol_order", f"{mtype} before load_trainer").to_message()]

    if mtype == "play":
        # Anchor lazily on the next frame's capture clock.
        state.session.state = "playing"
        state.pending_play_position = msg["position"]
        state.events.append({"op": "play", "position": msg["position"],
                             "after_frames": len(state.session.recording)})
        return [{"type": "ack", "of": "play"}]

    if mtype == "pause":
        state.session.pause(msg["position"])
        state.pending_play_position = None
        state.events.append({"op": "pause", "position": msg["position"],
                             "after_frames": len(state.session.recording)})
        return [{"type": "ack", "of": "pause"}]

    if mtype == "seek":
        if state.session.state == "playing":
            state.pending_play_position = msg["position"]
        else:
            state.session.seek(msg["position"])
        state.events.append({"op": "seek", "position": msg["position"],
                             "after_frames": len(state.session.recording)})
        return [{"type": "ack", "of": "seek"}]

    if mtype == "frame":
        t = float(msg["t_capture"])
        try:
            frame = parse_frame_record(
                {"t": t, "keypoints": msg["keypoints"]},
                state.frame_width, state.frame_height,
            )
        except (ValueError, TypeError) as exc:
            return [ProtocolError("bad_message", f"bad frame: {exc}").to_message()]
        if state.pending_play_position is not None:
            state.session.play(state.pending_play_position, t)
            state.pending_play_position = None
        try:
            score = state.session.process_frame(frame, wall_clock=t)
        except ClockError as exc:
            return [ProtocolError("clock", str(exc)).to_message()]
        if score is None:
            return [{"type": "unscored", "user_t": t, "reason": "no_aligned_trainer_frame"}]
        if state.session.config.show_error_live:
            user_t, trainer_t, _ = state.session.scores[-1]
            return [{
                "type": "score",
                "user_t": user_t,
                "trainer_t": trainer_t,
                "per_segment": {seg: score.per_segment[seg] for seg in SEGMENT_IDS},
                "mean": score.mean_error,
                "valid_count": score.valid_count,
            }]
        return [{"type": "scored", "user_t": t}]

    if mtype == "end_trial":
        try:
            summary = state.session.trial_summary()
        except EmptyTrialError as exc:
            return [ProtocolError("empty_trial", str(exc)).to_message()]
        return [summary_message(summary)]

    return [ProtocolError("unknown_type", f"unhandled type {mtype!r}").to_message()]


def replay_track(recorded: Track, trainer: Track) -> tuple[Session, TrialSummary]:
    """Re-score a recorded user_session track against its trainer.

    Deterministic: playback is reconstructed from the recorded play/pause/seek
    events and the frames' own capture timestamps.
    """
    meta = recorded.meta
    extras = meta.session or {}
    metric = MetricConfig(
        confidence_threshold=extras.get("confidence_threshold", 0.3),
        mirror_user=extras.get("mirror_user", True),
        aspect_correct=extras.get("aspect_correct", True),
    )
    config = SessionConfig(
        condition=meta.condition or "C1",
        metric=metric,
        align_tolerance=extras.get("align_tolerance", 0.1),
        smoothing_alpha=extras.get("smoothing_alpha", 1.0),
    )
    session = Session(config, trainer)
    events = sorted(extras.get("events", []), key=lambda e: e.get("after_frames", 0))
    pending_play: float | None = None
    ei = 0
    for i, frame in enumerate(recorded.frames):
        while ei < len(events) and events[ei].get("after_frames", 0) <= i:
            ev = events[ei]
            if ev["op"] == "play":
                session.state = "playing"
                pending_play = ev["position"]
            elif ev["op"] == "pause":
                session.pause(ev["position"])
                pending_play = None
            elif ev["op"] == "seek":
                if session.state == "playing":
                    pending_play = ev["position"]
                else:
                    session.seek(ev["position"])
            ei += 1
        if pending_play is not None:
            session.play(pending_play, frame.t)
            pending_play = None
        session.process_frame(frame, wall_clock=frame.t)
    return session, session.trial_summary()
