/** Compositor: turns a ViewConfig plus current assets into ordered draw ops.
 *
 * The renderer is deliberately backend-agnostic: it emits a draw-op list that
 * a Canvas2D (or WebGL) adapter executes, which keeps the layer logic testable
 * without a DOM. Ops are emitted back-to-front.
 */

import { Layer, ViewConfig, FeedSettings } from "./conditions.js";
import { Pose, SEGMENTS } from "./skeleton.js";

export interface VideoFrameRef {
  /** Opaque handle (HTMLVideoElement, ImageBitmap, test stub...). */
  source: unknown;
  width: number;
  height: number;
}

export interface DrawVideoOp {
  kind: "video";
  layer: Layer;
  source: unknown;
  crop: { x: number; y: number; width: number; height: number };
  dest: { x: number; y: number; width: number; height: number };
  opacity: number;
  mirrored: boolean;
  chromaMatte: boolean;
}

export interface DrawSegmentOp {
  kind: "segment";
  layer: Layer;
  segmentId: string;
  from: { x: number; y: number };
  to: { x: number; y: number };
}

export interface DrawJointOp {
  kind: "joint";
  layer: Layer;
  at: { x: number; y: number };
}

export type DrawOp = DrawVideoOp | DrawSegmentOp | DrawJointOp;

export interface RenderAssets {
  trainerFrame?: VideoFrameRef;
  userFrame?: VideoFrameRef;
  trainerPose?: Pose;
  userPose?: Pose;
}

export interface RenderOptions {
  canvasWidth: number;
  canvasHeight: number;
  confidenceThreshold: number;
}

const DEFAULT_OPTIONS: RenderOptions = {
  canvasWidth: 640,
  canvasHeight: 360,
  confidenceThreshold: 0.3,
};

function videoOp(
  layer: Layer,
  frame: VideoFrameRef,
  feed: FeedSettings,
  opts: RenderOptions,
  mirrored: boolean,
  chromaMatte: boolean,
): DrawVideoOp {
  const crop = feed.crop ?? { x: 0, y: 0, width: frame.width, height: frame.height };
  return {
    kind: "video",
    layer,
    source: frame.source,
    crop,
    dest: {
      x: feed.position.x,
      y: feed.position.y,
      width: opts.canvasWidth * feed.scale,
      height: opts.canvasHeight * feed.scale,
    },
    opacity: feed.opacity,
    mirrored,
    chromaMatte,
  };
}

function skeletonOps(
  layer: Layer,
  pose: Pose,
  feed: FeedSettings,
  opts: RenderOptions,
  mirrored: boolean,
): DrawOp[] {
  const ops: DrawOp[] = [];
  const toCanvas = (x: number, y: number) => ({
    x: feed.position.x + (mirrored ? 1 - x : x) * opts.canvasWidth * feed.scale,
    y: feed.position.y + y * opts.canvasHeight * feed.scale,
  });
  const drawn = new Set<string>();
  for (const [segmentId, a, b] of SEGMENTS) {
    const kpA = pose[a];
    const kpB = pose[b];
    if (kpA.score < opts.confidenceThreshold || kpB.score < opts.confidenceThreshold) {
      continue;
    }
    ops.push({
      kind: "segment",
      layer,
      segmentId,
      from: toCanvas(kpA.x, kpA.y),
      to: toCanvas(kpB.x, kpB.y),
    });
    drawn.add(a).add(b);
  }
  for (const name of drawn) {
    const kp = pose[name as keyof Pose];
    ops.push({ kind: "joint", layer, at: toCanvas(kp.x, kp.y) });
  }
  return ops;
}

/** Compose one output frame. Layers with opacity 0 contribute no ops at all. */
export function render(
  view: ViewConfig,
  assets: RenderAssets,
  options: Partial<RenderOptions> = {},
): DrawOp[] {
  const opts = { ...DEFAULT_OPTIONS, ...options };
  const ops: DrawOp[] = [];
  if (view.trainer.videoVisible && view.trainer.opacity > 0 && assets.trainerFrame) {
    ops.push(videoOp("trainer_video", assets.trainerFrame, view.trainer, opts,
      false, view.trainer.backgroundRemoval === "chroma"));
  }
  if (view.user.videoVisible && view.user.opacity > 0 && assets.userFrame) {
    ops.push(videoOp("user_video", assets.userFrame, view.user, opts,
      view.mirrorUser, view.user.backgroundRemoval === "chroma"));
  }
  if (view.trainer.skeletonVisible && view.trainer.opacity > 0 && assets.trainerPose) {
    ops.push(...skeletonOps("trainer_skeleton", assets.trainerPose, view.trainer, opts, false));
  }
  if (view.user.skeletonVisible && view.user.opacity > 0 && assets.userPose) {
    ops.push(...skeletonOps("user_skeleton", assets.userPose, view.user, opts, view.mirrorUser));
  }
  return ops;
}
