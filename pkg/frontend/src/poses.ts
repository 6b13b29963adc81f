/** Codec for .poses.jsonl track files: one meta line, then one line per frame. */

import { KEYPOINT_NAMES, Pose, poseToEntries, posefromEntries } from "./skeleton.js";

export interface TrackMeta {
  kind: "trainer" | "user_session";
  frame_width: number;
  frame_height: number;
  nominal_fps: number;
  source_uri?: string;
  created_at?: string;
  keypoint_schema?: string;
  condition?: string;
  session?: Record<string, unknown>;
  format_version?: number;
}

export interface TrackFrame {
  t: number;
  pose: Pose;
}

export interface Track {
  meta: TrackMeta;
  frames: TrackFrame[];
}

export class TrackFormatError extends Error {
  constructor(message: string, readonly line?: number) {
    super(line === undefined ? message : `line ${line}: ${message}`);
    this.name = "TrackFormatError";
  }
}

export function encodeTrack(track: Track): string {
  const meta = {
    format_version: 1,
    keypoint_schema: "coco17",
    ...track.meta,
  };
  const lines = [JSON.stringify(meta)];
  for (const frame of track.frames) {
    lines.push(JSON.stringify({ t: frame.t, keypoints: poseToEntries(frame.pose) }));
  }
  return lines.join("\n") + "\n";
}

export function decodeTrack(text: string): Track {
  const lines = text.split("\n").filter((l, i, all) => l !== "" || i < all.length - 1);
  if (lines.length === 0 || lines[0] === "") {
    throw new TrackFormatError("empty track file");
  }
  let meta: TrackMeta;
  try {
    meta = JSON.parse(lines[0]!) as TrackMeta;
  } catch {
    throw new TrackFormatError("meta line is not valid JSON", 1);
  }
  for (const field of ["kind", "frame_width", "frame_height", "nominal_fps"]) {
    if (!(field in meta)) throw new TrackFormatError(`meta missing ${field}`, 1);
  }
  const frames: TrackFrame[] = [];
  let prev = -Infinity;
  for (let i = 1; i < lines.length; i++) {
    const raw = lines[i]!;
    if (raw === "") continue;
    let record: { t: number; keypoints: [string, number, number, number][] };
    try {
      record = JSON.parse(raw);
    } catch {
      throw new TrackFormatError("frame line is not valid JSON", i + 1);
    }
    if (typeof record.t !== "number" || !Array.isArray(record.keypoints)
        || record.keypoints.length !== KEYPOINT_NAMES.length) {
      throw new TrackFormatError("bad frame record", i + 1);
    }
    if (record.t <= prev) {
      throw new TrackFormatError("timestamps must be strictly increasing", i + 1);
    }
    prev = record.t;
    frames.push({ t: record.t, pose: posefromEntries(record.keypoints) });
  }
  return { meta, frames };
}

/** Nearest track frame to a playback position; how trainer skeletons pick a frame. */
export function nearestFrame(track: Track, position: number): TrackFrame | null {
  if (track.frames.length === 0) return null;
  let best = track.frames[0]!;
  let bestDist = Math.abs(best.t - position);
  for (const frame of track.frames) {
    const d = Math.abs(frame.t - position);
    if (d < bestDist) {
      best = frame;
      bestDist = d;
    }
  }
  return best;
}
