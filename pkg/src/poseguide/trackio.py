"""File formats: .poses.jsonl pose tracks and the CSV score report.

Tracks are UTF-8 newline-delimited JSON: one meta record, then one record per
frame. Coordinates are stored normalized so tracks survive video re-scaling;
frame dimensions live in the meta for aspect correction. Numbers rely on
Python's shortest round-trip float representation, so write/read is an
identity up to 1e-12.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator

from .session import Session, Track, TrackFrame
from .skeleton import KEYPOINT_NAMES, Keypoint, Pose, SEGMENT_IDS

FORMAT_VERSION = 1
KEYPOINT_SCHEMA = "coco17"
TRACK_KINDS = ("trainer", "user_session")

TLX_SUBSCALES = ("mental", "physical", "temporal", "performance", "effort", "frustration")

REPORT_HEADER = (
    ["participant", "condition", "mean_error_rad", "frames_scored", "frames_unscored"]
    + list(SEGMENT_IDS)
    + ["tlx_" + s for s in TLX_SUBSCALES]
)


class TrackFormatError(ValueError):
    """Malformed or invariant-violating track file; carries a 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ReportFormatError(ValueError):
    """Malformed score report CSV."""


@dataclass(frozen=True)
class TrackMeta:
    kind: str
    frame_width: int
    frame_height: int
    nominal_fps: float
    source_uri: str = ""
    created_at: str = ""
    keypoint_schema: str = KEYPOINT_SCHEMA
    condition: str | None = None
    session: dict | None = None  # replay extras for user_session recordings
    format_version: int = FORMAT_VERSION

    def __post_init__(self):
        if self.format_version != FORMAT_VERSION:
            raise ValueError(f"unsupported format_version {self.format_version}")
        if self.kind not in TRACK_KINDS:
            raise ValueError(f"kind must be one of {TRACK_KINDS}, got {self.kind!r}")
        if self.frame_width <= 0 or self.frame_height <= 0:
            raise ValueError("frame dimensions must be positive")
        if not (self.nominal_fps > 0):
            raise ValueError("nominal_fps must be positive")
        if self.keypoint_schema != KEYPOINT_SCHEMA:
            raise ValueError(f"unsupported keypoint_schema {self.keypoint_schema!r}")


@dataclass(frozen=True)
class ScoreReportRow:
    participant: str
    condition: str
    mean_error: float
    frames_scored: int
    frames_unscored: int
    per_segment_means: dict[str, float | None]
    tlx: dict[str, float] | None = None

    def __post_init__(self):
        if self.condition not in ("C1", "C2", "C3", "C4"):
            raise ValueError(f"condition must be C1..C4, got {self.condition!r}")
        if not (0.0 <= self.mean_error <= math.pi):
            raise ValueError(f"mean_error {self.mean_error} outside [0, pi]")
        if set(self.per_segment_means) != set(SEGMENT_IDS):
            raise ValueError("per_segment_means must cover exactly the ten segments")
        if self.tlx is not None and set(self.tlx) != set(TLX_SUBSCALES):
            raise ValueError("tlx must carry exactly the six subscales")


# ---------------------------------------------------------------------------
# Track serialization


def _meta_record(meta: TrackMeta) -> dict:
    rec = {
        "format_version": meta.format_version,
        "kind": meta.kind,
        "frame_width": meta.frame_width,
        "frame_height": meta.frame_height,
        "nominal_fps": meta.nominal_fps,
        "source_uri": meta.source_uri,
        "created_at": meta.created_at,
        "keypoint_schema": meta.keypoint_schema,
    }
    if meta.condition is not None:
        rec["condition"] = meta.condition
    if meta.session is not None:
        rec["session"] = meta.session
    return rec


def track_to_lines(track: Track) -> Iterator[str]:
    """Yield the file's lines (without trailing newlines), meta first."""
    meta: TrackMeta = track.meta
    yield json.dumps(_meta_record(meta), separators=(",", ":"))
    for frame in track.frames:
        kps = [
            [name, frame.pose.keypoints[name].x, frame.pose.keypoints[name].y,
             frame.pose.keypoints[name].score]
            for name in KEYPOINT_NAMES
        ]
        yield json.dumps({"t": frame.t, "keypoints": kps}, separators=(",", ":"))


def write_track(track: Track, destination: str | Path | IO[str]) -> None:
    if isinstance(destination, (str, Path)):
        with open(destination, "w", encoding="utf-8", newline="\n") as fh:
            write_track(track, fh)
        return
    for line in track_to_lines(track):
        destination.write(line + "\n")


def _parse_meta(record: dict, line: int) -> TrackMeta:
    try:
        return TrackMeta(
            kind=record["kind"],
            frame_width=record["frame_width"],
            frame_height=record["frame_height"],
            nominal_fps=record["nominal_fps"],
            source_uri=record.get("source_uri", ""),
            created_at=record.get("created_at", ""),
            keypoint_schema=record.get("keypoint_schema", KEYPOINT_SCHEMA),
            condition=record.get("condition"),
            session=record.get("session"),
            format_version=record.get("format_version", 0),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise TrackFormatError(f"bad meta record: {exc}", line) from exc


def parse_frame_record(record: dict, frame_width: int, frame_height: int) -> TrackFrame:
    """Build a TrackFrame from a decoded frame record; raises ValueError on schema errors."""
    if not isinstance(record, dict) or "t" not in record or "keypoints" not in record:
        raise ValueError("frame record needs 't' and 'keypoints'")
    raw = record["keypoints"]
    if not isinstance(raw, list) or len(raw) != 17:
        raise ValueError(f"expected 17 keypoints, got {len(raw) if isinstance(raw, list) else 'non-list'}")
    kps = {}
    for entry in raw:
        if not isinstance(entry, list) or len(entry) != 4:
            raise ValueError("keypoint entry must be [name, x, y, score]")
        name, x, y, score = entry
        kps[name] = Keypoint(name, float(x), float(y), float(score))
    pose = Pose(kps, frame_width, frame_height)
    return TrackFrame(float(record["t"]), pose)


def parse_track_lines(lines: Iterable[str]) -> Track:
    meta: TrackMeta | None = None
    frames: list[TrackFrame] = []
    last_t: float | None = None
    n = 0
    for n, line in enumerate(iter(lines), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise TrackFormatError(f"invalid JSON: {exc.msg}", n) from exc
        if meta is None:
            meta = _parse_meta(record, n)
            continue
        try:
            frame = parse_frame_record(record, meta.frame_width, meta.frame_height)
        except (ValueError, TypeError) as exc:
            raise TrackFormatError(str(exc), n) from exc
        if last_t is not None and frame.t <= last_t:
            raise TrackFormatError(
                f"non-monotonic timestamp {frame.t} (previous {last_t})", n
            )
        last_t = frame.t
        frames.append(frame)
    if meta is None:
        raise TrackFormatError("empty file: missing meta record", max(n, 1))
    if not frames:
        raise TrackFormatError("track has no frames", n)
    return Track(meta=meta, frames=tuple(frames))


def read_track(source: str | Path | IO[str]) -> Track:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            return parse_track_lines(fh)
    return parse_track_lines(source)


def recorded_track(
    session: Session,
    trainer_uri: str,
    created_at: str = "",
    events: list[dict] | None = None,
) -> Track:
    """Package a finished session's raw recording as a replayable user_session track."""
    cfg = session.config
    meta = TrackMeta(
        kind="user_session",
        frame_width=session.recording[0].pose.frame_width if session.recording else session.trainer.frames[0].pose.frame_width,
        frame_height=session.recording[0].pose.frame_height if session.recording else session.trainer.frames[0].pose.frame_height,
        nominal_fps=session.trainer.meta.nominal_fps if isinstance(session.trainer.meta, TrackMeta) else 30.0,
        source_uri=trainer_uri,
        created_at=created_at,
        condition=cfg.condition,
        session={
            "trainer_uri": trainer_uri,
            "confidence_threshold": cfg.metric.confidence_threshold,
            "mirror_user": cfg.metric.mirror_user,
            "aspect_correct": cfg.metric.aspect_correct,
            "align_tolerance": cfg.align_tolerance,
            "smoothing_alpha": cfg.smoothing_alpha,
            "events": events if events is not None else [],
        },
    )
    return Track(meta=meta, frames=tuple(session.recording))


# ---------------------------------------------------------------------------
# Score report CSV


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def export_report(rows: list[ScoreReportRow], destination: str | Path | IO[str]) -> None:
    if not rows:
        raise ValueError("report needs at least one row")
    if isinstance(destination, (str, Path)):
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            export_report(rows, fh)
        return
    writer = csv.writer(destination, lineterminator="\n")
    writer.writerow(REPORT_HEADER)
    for row in rows:
        record = [row.participant, row.condition, _fmt(row.mean_error),
                  row.frames_scored, row.frames_unscored]
        record += [_fmt(row.per_segment_means[seg]) for seg in SEGMENT_IDS]
        if row.tlx is None:
            record += [""] * len(TLX_SUBSCALES)
        else:
            record += [_fmt(row.tlx[s]) for s in TLX_SUBSCALES]
        writer.writerow(record)


def read_report(source: str | Path | IO[str]) -> list[ScoreReportRow]:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as fh:
            return read_report(fh)
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise ReportFormatError("empty report") from None
    if header != REPORT_HEADER:
        raise ReportFormatError(f"unexpected header: {header}")
    rows = []
    for i, record in enumerate(reader, start=2):
        if not record:
            continue
        if len(record) != len(REPORT_HEADER):
            raise ReportFormatError(f"line {i}: expected {len(REPORT_HEADER)} fields, got {len(record)}")
        try:
            per_segment = {
                seg: (float(v) if v != "" else None)
                for seg, v in zip(SEGMENT_IDS, record[5:15])
            }
            tlx_fields = record[15:21]
            if all(v == "" for v in tlx_fields):
                tlx = None
            else:
                tlx = {s: float(v) for s, v in zip(TLX_SUBSCALES, tlx_fields)}
            rows.append(ScoreReportRow(
                participant=record[0],
                condition=record[1],
                mean_error=float(record[2]),
                frames_scored=int(record[3]),
                frames_unscored=int(record[4]),
                per_segment_means=per_segment,
                tlx=tlx,
            ))
        except ValueError as exc:
            raise ReportFormatError(f"line {i}: {exc}") from exc
    if not rows:
        raise ReportFormatError("report has no data rows")
    return rows
