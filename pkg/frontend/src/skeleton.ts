/** Keypoint and segment tables shared with the scoring engine's wire format. */

export const KEYPOINT_NAMES = [
  "nose", "left_eye", "right_eye", "left_ear", "right_ear",
  "left_shoulder", "right_shoulder", "left_elbow", "right_elbow",
  "left_wrist", "right_wrist", "left_hip", "right_hip",
  "left_knee", "right_knee", "left_ankle", "right_ankle",
] as const;

export type KeypointName = (typeof KEYPOINT_NAMES)[number];

export interface Keypoint {
  name: KeypointName;
  /** Normalized [0, 1] coordinates, y growing downward. */
  x: number;
  y: number;
  score: number;
}

export type Pose = Record<KeypointName, Keypoint>;

/** The ten scored segments, in the engine's canonical order. Head excluded. */
export const SEGMENTS: ReadonlyArray<readonly [string, KeypointName, KeypointName]> = [
  ["shoulder_line", "left_shoulder", "right_shoulder"],
  ["hip_line", "left_hip", "right_hip"],
  ["upper_arm_l", "left_shoulder", "left_elbow"],
  ["upper_arm_r", "right_shoulder", "right_elbow"],
  ["lower_arm_l", "left_elbow", "left_wrist"],
  ["lower_arm_r", "right_elbow", "right_wrist"],
  ["upper_leg_l", "left_hip", "left_knee"],
  ["upper_leg_r", "right_hip", "right_knee"],
  ["lower_leg_l", "left_knee", "left_ankle"],
  ["lower_leg_r", "right_knee", "right_ankle"],
];

export function posefromEntries(
  entries: ReadonlyArray<readonly [string, number, number, number]>,
): Pose {
  const pose = {} as Pose;
  for (const [name, x, y, score] of entries) {
    pose[name as KeypointName] = { name: name as KeypointName, x, y, score };
  }
  for (const name of KEYPOINT_NAMES) {
    if (!(name in pose)) throw new Error(`pose missing keypoint ${name}`);
  }
  return pose;
}

export function poseToEntries(pose: Pose): [string, number, number, number][] {
  return KEYPOINT_NAMES.map((name) => {
    const kp = pose[name];
    return [name, kp.x, kp.y, kp.score];
  });
}
