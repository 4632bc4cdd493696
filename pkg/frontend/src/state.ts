/** View state and the pure interaction rules.
 *
 * The invariants the UI maintains by construction: a probe pair is
 * always comparable (t is snapped into the up-set of s), a line is
 * always strictly monotone (drag deltas are clamped to a minimum
 * positive slope component), and eps stays inside [0, bound].
 */

export interface ViewState {
  zoom: number;
  panX: number;
  panY: number;
  probe: { s: number[]; t: number[] } | null;
  line: { a: number[]; b: number[] } | null;
  eps: number;
  showProminence: boolean;
  showDecorations: boolean;
  showSigns: boolean;
}

export function initialState(): ViewState {
  return {
    zoom: 1,
    panX: 0,
    panY: 0,
    probe: null,
    line: null,
    eps: 0,
    showProminence: false,
    showDecorations: true,
    showSigns: true,
  };
}

/** Smallest point of the up-set of s that dominates the clicked t. */
export function snapIntoUpset(s: number[], t: number[]): number[] {
  return t.map((v, i) => Math.max(v, s[i] ?? 0));
}

export function isComparable(s: number[], t: number[]): boolean {
  return s.length === t.length && s.every((v, i) => v <= (t[i] ?? -Infinity));
}

/** Nearest index pair to a real-coordinate click, clamped into the grid. */
export function nearestIndex(coords: number[][], point: number[]): number[] {
  return point.map((v, axis) => {
    const axisCoords = coords[axis] ?? [0];
    let best = 0;
    for (let j = 1; j < axisCoords.length; j++) {
      const cj = axisCoords[j] ?? 0;
      const cb = axisCoords[best] ?? 0;
      if (Math.abs(cj - v) < Math.abs(cb - v)) best = j;
    }
    return best;
  });
}

/**
 * Clamp a drag so the line stays strictly monotone: every coordinate of
 * b - a is forced up to minDelta.  The api rejects flat or reversed
 * lines, so prevention beats a 400 round trip.
 */
export function clampMonotone(a: number[], b: number[], minDelta: number): number[] {
  return b.map((v, i) => {
    const base = a[i] ?? 0;
    return v - base < minDelta ? base + minDelta : v;
  });
}

export function isStrictlyMonotone(a: number[], b: number[]): boolean {
  return a.length === b.length && a.every((v, i) => v < (b[i] ?? -Infinity));
}

export function clampEps(eps: number, bound: number): number {
  if (!Number.isFinite(eps) || eps < 0) return 0;
  return Math.min(eps, bound);
}

/** Slider bound: the largest real-coordinate extent over the axes. */
export function epsBound(coords: number[][]): number {
  let span = 0;
  for (const axis of coords) {
    if (axis.length > 1) {
      span = Math.max(span, (axis[axis.length - 1] ?? 0) - (axis[0] ?? 0));
    }
  }
  return span || 1;
}

/** A sensible minimum drag delta: a small fraction of the grid extent. */
export function minLineDelta(coords: number[][]): number {
  return epsBound(coords) / 200;
}
