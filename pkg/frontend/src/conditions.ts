/** Per-condition view configuration: which video and skeleton layers are shown. */

export type Condition = "C1" | "C2" | "C3" | "C4";

export interface CropRect {
  x: number;
  y: number;
  width: number;
  height: number;
}

export interface FeedSettings {
  videoVisible: boolean;
  skeletonVisible: boolean;
  opacity: number; // [0, 1]
  crop: CropRect | null;
  position: { x: number; y: number };
  scale: number;
  backgroundRemoval: "none" | "chroma";
}

export interface ChromaSettings {
  key: [number, number, number]; // RGB
  threshold: number;
  softness: number;
}

export interface ViewConfig {
  condition: Condition;
  trainer: FeedSettings;
  user: FeedSettings;
  mirrorUser: boolean;
  chroma: ChromaSettings;
}

function feed(videoVisible: boolean, skeletonVisible: boolean): FeedSettings {
  return {
    videoVisible,
    skeletonVisible,
    opacity: 1.0,
    crop: null,
    position: { x: 0, y: 0 },
    scale: 1.0,
    backgroundRemoval: "none",
  };
}

const DEFAULT_CHROMA: ChromaSettings = { key: [0, 177, 64], threshold: 30, softness: 20 };

/**
 * Default layer sets per condition:
 *   C1 both videos, no skeletons; C2 both videos plus user skeleton;
 *   C3 trainer video plus user skeleton (user video hidden);
 *   C4 trainer video plus both skeletons (user video hidden).
 * Every setting stays individually overridable afterwards.
 */
export function viewForCondition(condition: Condition): ViewConfig {
  const table: Record<Condition, [FeedSettings, FeedSettings]> = {
    C1: [feed(true, false), feed(true, false)],
    C2: [feed(true, false), feed(true, true)],
    C3: [feed(true, false), feed(false, true)],
    C4: [feed(true, true), feed(false, true)],
  };
  const [trainer, user] = table[condition];
  return { condition, trainer, user, mirrorUser: true, chroma: { ...DEFAULT_CHROMA } };
}

export type Layer = "trainer_video" | "user_video" | "trainer_skeleton" | "user_skeleton";

/** Visible layers in back-to-front draw order. */
export function layerSet(view: ViewConfig): Layer[] {
  const layers: Layer[] = [];
  if (view.trainer.videoVisible) layers.push("trainer_video");
  if (view.user.videoVisible) layers.push("user_video");
  if (view.trainer.skeletonVisible) layers.push("trainer_skeleton");
  if (view.user.skeletonVisible) layers.push("user_skeleton");
  return layers;
}
