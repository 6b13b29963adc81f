/** Chroma-key matting: alpha from distance to the key color in the CbCr plane. */

export type Rgb = readonly [number, number, number];

/** BT.601 chroma components; dropping luma makes the matte lighting-tolerant. */
function cbcr([r, g, b]: Rgb): [number, number] {
  const cb = -0.168736 * r - 0.331264 * g + 0.5 * b;
  const cr = 0.5 * r - 0.418688 * g - 0.081312 * b;
  return [cb, cr];
}

/**
 * Alpha for one pixel: 0 at or inside the key threshold (removed), 1 beyond
 * threshold + softness (kept), linear ramp between.
 */
export function chromaAlpha(
  pixel: Rgb,
  key: Rgb,
  threshold: number,
  softness: number,
): number {
  if (!(threshold >= 0)) throw new RangeError("threshold must be >= 0");
  if (!(softness > 0)) throw new RangeError("softness must be > 0");
  for (const c of [...pixel, ...key]) {
    if (!Number.isFinite(c)) throw new RangeError("color components must be finite");
  }
  const [pcb, pcr] = cbcr(pixel);
  const [kcb, kcr] = cbcr(key);
  const d = Math.hypot(pcb - kcb, pcr - kcr);
  if (d <= threshold) return 0;
  if (d >= threshold + softness) return 1;
  return (d - threshold) / softness;
}
