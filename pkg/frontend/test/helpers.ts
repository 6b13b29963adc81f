import { KEYPOINT_NAMES, Pose, posefromEntries } from "../src/skeleton.js";
import { StreamedFrame } from "../src/experiment.js";
import { Track } from "../src/poses.js";

const STICK: Record<string, [number, number]> = {
  nose: [0.50, 0.10],
  left_eye: [0.52, 0.08],
  right_eye: [0.48, 0.08],
  left_ear: [0.55, 0.09],
  right_ear: [0.45, 0.09],
  left_shoulder: [0.60, 0.25],
  right_shoulder: [0.40, 0.25],
  left_elbow: [0.68, 0.38],
  right_elbow: [0.32, 0.38],
  left_wrist: [0.72, 0.52],
  right_wrist: [0.28, 0.52],
  left_hip: [0.57, 0.55],
  right_hip: [0.43, 0.55],
  left_knee: [0.58, 0.75],
  right_knee: [0.42, 0.75],
  left_ankle: [0.59, 0.95],
  right_ankle: [0.41, 0.95],
};

export function stickPose(score = 0.9): Pose {
  return posefromEntries(
    KEYPOINT_NAMES.map((name) => {
      const [x, y] = STICK[name]!;
      return [name, x, y, score] as const;
    }),
  );
}

/** Gentle sway so consecutive frames differ: rotate about the hip center. */
export function swayingPose(t: number): Pose {
  const theta = 0.3 * Math.sin(0.7 * t);
  return rotatedStick(theta);
}

export function rotatedStick(theta: number, score = 0.9): Pose {
  const [cx, cy] = [0.5, 0.55];
  const cos = Math.cos(theta);
  const sin = Math.sin(theta);
  return posefromEntries(
    KEYPOINT_NAMES.map((name) => {
      const [x, y] = STICK[name]!;
      // rotate in pixel space of a 640x360 frame, like the engine's tests do
      const px = (x - cx) * 640;
      const py = (y - cy) * 360;
      const rx = (px * cos - py * sin) / 640 + cx;
      const ry = (px * sin + py * cos) / 360 + cy;
      return [name, rx, ry, score] as const;
    }),
  );
}

export function frameEntries(pose: Pose): [string, number, number, number][] {
  return KEYPOINT_NAMES.map((name) => {
    const kp = pose[name];
    return [name, kp.x, kp.y, kp.score];
  });
}

export function syntheticFrames(count: number, fps = 30, t0 = 0): StreamedFrame[] {
  return Array.from({ length: count }, (_, i) => {
    const t = t0 + i / fps;
    return { t, keypoints: frameEntries(swayingPose(t)) };
  });
}

export function trainerTrack(duration: number, fps = 30): Track {
  const frames = [];
  for (let i = 0; i * (1 / fps) <= duration; i++) {
    const t = i / fps;
    frames.push({ t, pose: swayingPose(t) });
  }
  return {
    meta: {
      kind: "trainer",
      frame_width: 640,
      frame_height: 360,
      nominal_fps: fps,
      source_uri: "synthetic://sway",
    },
    frames,
  };
}
