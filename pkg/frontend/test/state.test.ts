import { describe, expect, it } from "vitest";

import {
  clampEps,
  clampMonotone,
  epsBound,
  initialState,
  isComparable,
  isStrictlyMonotone,
  minLineDelta,
  nearestIndex,
  snapIntoUpset,
} from "../src/state.js";

describe("probe snapping", () => {
  it("snaps t into the up-set of s componentwise", () => {
    expect(snapIntoUpset([1, 2], [0, 5])).toEqual([1, 5]);
    expect(snapIntoUpset([1, 2], [0, 0])).toEqual([1, 2]);
  });

  it("leaves an already comparable t alone", () => {
    expect(snapIntoUpset([1, 1], [2, 3])).toEqual([2, 3]);
  });

  it("always produces a comparable pair", () => {
    for (let k = 0; k < 50; k++) {
      const s = [k % 4, (k * 7) % 5];
      const t = [(k * 3) % 6, (k * 11) % 4];
      expect(isComparable(s, snapIntoUpset(s, t))).toBe(true);
    }
  });
});

describe("nearest index", () => {
  const coords = [
    [1, 2, 3, 4, 5],
    [0, 10, 20],
  ];

  it("picks the closest coordinate per axis", () => {
    expect(nearestIndex(coords, [2.4, 14])).toEqual([1, 1]);
    expect(nearestIndex(coords, [4.9, 16])).toEqual([4, 2]);
  });

  it("clamps clicks outside the grid window", () => {
    expect(nearestIndex(coords, [-10, 99])).toEqual([0, 2]);
  });
});

describe("line clamping", () => {
  it("keeps good drags unchanged", () => {
    expect(clampMonotone([0, 0], [2, 3], 0.01)).toEqual([2, 3]);
  });

  it("forces flat and reversed drags strictly monotone", () => {
    const a = [1, 1];
    for (const b of [
      [1, 5],
      [0, 5],
      [5, 1],
      [0, 0],
      [1, 1],
    ]) {
      const fixed = clampMonotone(a, b, 0.05);
      expect(isStrictlyMonotone(a, fixed)).toBe(true);
    }
  });

  it("moves the violating coordinate by exactly the minimum delta", () => {
    expect(clampMonotone([2, 2], [1, 9], 0.5)).toEqual([2.5, 9]);
  });
});

describe("eps handling", () => {
  it("clamps into [0, bound]", () => {
    expect(clampEps(-1, 10)).toBe(0);
    expect(clampEps(3, 10)).toBe(3);
    expect(clampEps(99, 10)).toBe(10);
    expect(clampEps(Number.NaN, 10)).toBe(0);
  });

  it("derives the bound from the widest axis extent", () => {
    expect(epsBound([[0, 3], [0, 7]])).toBe(7);
    expect(epsBound([[5]])).toBe(1);
    expect(minLineDelta([[0, 10]])).toBeCloseTo(0.05, 12);
  });
});

describe("initial state", () => {
  it("starts with no probe, no line, eps 0", () => {
    const s = initialState();
    expect(s.probe).toBeNull();
    expect(s.line).toBeNull();
    expect(s.eps).toBe(0);
    expect(s.showSigns).toBe(true);
  });
});
