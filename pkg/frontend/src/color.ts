/** Color scales for adjacency heatmaps. */

const WHITE: [number, number, number] = [255, 255, 255];
const RED: [number, number, number] = [178, 24, 43];
const BLUE: [number, number, number] = [33, 102, 172];
const INK: [number, number, number] = [30, 41, 59];

function mix(a: [number, number, number], b: [number, number, number], t: number): string {
  const ch = a.map((av, k) => Math.round(av + (b[k] - av) * t));
  return `rgb(${ch[0]}, ${ch[1]}, ${ch[2]})`;
}

/** True when every entry is exactly 0 or 1. */
export function isBinaryMatrix(M: number[][]): boolean {
  for (const row of M) {
    for (const v of row) {
      if (v !== 0 && v !== 1) return false;
    }
  }
  return true;
}

/** Largest absolute entry over several matrices, floored away from zero. */
export function sharedMaxAbs(mats: (number[][] | null)[]): number {
  let best = 0;
  for (const M of mats) {
    if (!M) continue;
    for (const row of M) {
      for (const v of row) {
        const a = Math.abs(v);
        if (a > best) best = a;
      }
    }
  }
  return best > 0 ? best : 1;
}

/**
 * Diverging scale symmetric around zero: negative weights ramp to blue,
 * positive ones to red, with equal saturation for equal magnitude.
 */
export function divergingColor(v: number, scale: number): string {
  const t = Math.min(Math.abs(v) / scale, 1);
  return mix(WHITE, v < 0 ? BLUE : RED, t);
}

/** Two-tone palette for 0/1 matrices. */
export function binaryColor(v: number): string {
  return v === 0 ? mix(WHITE, INK, 0.04) : mix(WHITE, INK, 1);
}
