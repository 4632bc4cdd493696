/** Payload to drawing primitives.
 *
 * Pure functions: a scene is a list of primitives later painted onto a
 * canvas.  The geometry (800x800 viewport, 70px margins, lane stacking
 * for one-axis grids, diagonal segments for two) mirrors the server's
 * SVG emitter so the export and the CLI render lay out identically.
 * Every number shown in a scene comes from a server payload; the only
 * arithmetic here is the data-to-pixel transform.
 */

import type { BarcodePayload, BarPayload, MetaPayload, ProminencePayload } from "./api.js";

export const WIDTH = 800;
export const HEIGHT = 800;
export const MARGIN = 70;
export const POS_COLOR = "#1a5fb4";
export const NEG_COLOR = "#c01c28";
export const GROUP_COLOR = "#e66100";
export const AXIS_COLOR = "#1c1c1c";
export const HILITE_DOWN = "rgba(26, 95, 180, 0.12)";
export const HILITE_UP = "rgba(192, 28, 40, 0.12)";

export type Prim =
  | { kind: "bg"; color: string }
  | { kind: "axisline"; x1: number; y1: number; x2: number; y2: number }
  | {
      kind: "label";
      x: number;
      y: number;
      text: string;
      color: string;
      size: number;
      anchor: "start" | "middle" | "end";
    }
  | { kind: "region"; x: number; y: number; w: number; h: number; color: string }
  | { kind: "outline"; x: number; y: number; w: number; h: number; group: number }
  | {
      kind: "bar";
      index: number;
      x1: number;
      y1: number;
      x2: number;
      y2: number;
      color: string;
      width: number;
      thickened: boolean;
      faded: boolean;
      sign: number;
      mult: number;
    }
  | { kind: "dot"; x: number; y: number; r: number; color: string; faded: boolean }
  | { kind: "overlayline"; x1: number; y1: number; x2: number; y2: number; color: string }
  | { kind: "banner"; text: string };

export interface Scene {
  width: number;
  height: number;
  prims: Prim[];
}

export class Frame {
  readonly x0: number;
  readonly y0: number;
  readonly sx: number;
  readonly sy: number;

  constructor(xRange: [number, number], yRange: [number, number]) {
    this.x0 = xRange[0];
    this.y0 = yRange[0];
    this.sx = (WIDTH - 2 * MARGIN) / (xRange[1] - xRange[0] || 1);
    this.sy = (HEIGHT - 2 * MARGIN) / (yRange[1] - yRange[0] || 1);
  }

  x(v: number): number {
    return MARGIN + (v - this.x0) * this.sx;
  }

  y(v: number): number {
    return HEIGHT - MARGIN - (v - this.y0) * this.sy;
  }
}

export interface SceneOptions {
  /** Indices (into payload order) of bars to thicken, e.g. rank witnesses. */
  witnesses?: ReadonlySet<number>;
  showSigns?: boolean;
  showDecorations?: boolean;
  /** Probe pair in real coordinates: shades the down-set of s and up-set of t. */
  probe?: { s: number[]; t: number[] };
  /** Line overlay in real coordinates. */
  line?: { a: number[]; b: number[] };
}

function axisTicks(frame: Frame, xs: readonly number[], ys: readonly number[]): Prim[] {
  const left = frame.x(frame.x0);
  const bottom = frame.y(frame.y0);
  const prims: Prim[] = [
    { kind: "bg", color: "#ffffff" },
    { kind: "axisline", x1: left, y1: MARGIN, x2: left, y2: bottom },
    { kind: "axisline", x1: left, y1: bottom, x2: WIDTH - MARGIN, y2: bottom },
  ];
  for (const v of xs) {
    const x = frame.x(v);
    prims.push({ kind: "axisline", x1: x, y1: bottom, x2: x, y2: bottom + 6 });
    prims.push({
      kind: "label",
      x,
      y: bottom + 22,
      text: fmt(v),
      color: AXIS_COLOR,
      size: 11,
      anchor: "middle",
    });
  }
  for (const v of ys) {
    const y = frame.y(v);
    prims.push({ kind: "axisline", x1: left - 6, y1: y, x2: left, y2: y });
    prims.push({
      kind: "label",
      x: left - 10,
      y: y + 4,
      text: fmt(v),
      color: AXIS_COLOR,
      size: 11,
      anchor: "end",
    });
  }
  return prims;
}

function barSegment(
  bar: BarPayload,
  frame: Frame,
  lane: number | null,
): [number, number, number, number] {
  if (lane === null) {
    return [frame.x(bar.lo[0] ?? 0), frame.y(bar.lo[1] ?? 0), frame.x(bar.hi[0] ?? 0), frame.y(bar.hi[1] ?? 0)];
  }
  const y = frame.y(lane);
  return [frame.x(bar.lo[0] ?? 0), y, frame.x(bar.hi[0] ?? 0), y];
}

export function barcodeFrame(meta: MetaPayload, barCount: number): { frame: Frame; lanes: boolean } {
  const xs = meta.real_coords[0] ?? [0];
  if (meta.sizes.length === 2) {
    const ys = meta.real_coords[1] ?? [0];
    return {
      frame: new Frame([xs[0] ?? 0, xs[xs.length - 1] ?? 0], [ys[0] ?? 0, ys[ys.length - 1] ?? 0]),
      lanes: false,
    };
  }
  const n = Math.max(barCount, 1);
  return {
    frame: new Frame([xs[0] ?? 0, xs[xs.length - 1] ?? 0], [0, n + 1]),
    lanes: true,
  };
}

export function barcodeScene(
  payload: BarcodePayload,
  meta: MetaPayload,
  opts: SceneOptions = {},
): Scene {
  if (meta.sizes.length > 2) {
    return errorScene(`rendering covers 1- and 2-axis grids, got ${meta.sizes.length}`);
  }
  const { frame, lanes } = barcodeFrame(meta, payload.bars.length);
  const xs = meta.real_coords[0] ?? [0];
  const ys = meta.sizes.length === 2 ? meta.real_coords[1] ?? [0] : [];
  const prims: Prim[] = axisTicks(frame, xs, ys);

  if (opts.probe && meta.sizes.length === 2) {
    const [sx, sy] = [frame.x(opts.probe.s[0] ?? 0), frame.y(opts.probe.s[1] ?? 0)];
    const [tx, ty] = [frame.x(opts.probe.t[0] ?? 0), frame.y(opts.probe.t[1] ?? 0)];
    const left = frame.x(frame.x0);
    const bottom = frame.y(frame.y0);
    // down-set of s: everything weakly below-left; up-set of t: above-right
    prims.push({ kind: "region", x: left, y: sy, w: Math.max(sx - left, 0), h: Math.max(bottom - sy, 0), color: HILITE_DOWN });
    prims.push({ kind: "region", x: tx, y: MARGIN, w: Math.max(WIDTH - MARGIN - tx, 0), h: Math.max(ty - MARGIN, 0), color: HILITE_UP });
  }

  const segments = payload.bars.map((bar, k) =>
    barSegment(bar, frame, lanes ? k + 1 : null),
  );

  if (opts.showDecorations !== false) {
    const groups = new Map<number, number[]>();
    payload.bars.forEach((bar, k) => {
      if (bar.group !== undefined) {
        const members = groups.get(bar.group) ?? [];
        members.push(k);
        groups.set(bar.group, members);
      }
    });
    for (const gid of [...groups.keys()].sort((a, b) => a - b)) {
      const members = groups.get(gid) ?? [];
      const gx = members.flatMap((k) => [segments[k]?.[0] ?? 0, segments[k]?.[2] ?? 0]);
      const gy = members.flatMap((k) => [segments[k]?.[1] ?? 0, segments[k]?.[3] ?? 0]);
      const pad = 8;
      prims.push({
        kind: "outline",
        x: Math.min(...gx) - pad,
        y: Math.min(...gy) - pad,
        w: Math.max(...gx) - Math.min(...gx) + 2 * pad,
        h: Math.max(...gy) - Math.min(...gy) + 2 * pad,
        group: gid,
      });
    }
  }

  payload.bars.forEach((bar, k) => {
    const seg = segments[k];
    if (!seg) return;
    const [x1, y1, x2, y2] = seg;
    const signColor = bar.sign > 0 ? POS_COLOR : NEG_COLOR;
    const color = opts.showSigns === false ? POS_COLOR : signColor;
    const thickened = opts.witnesses?.has(k) ?? false;
    const width = Math.min(2 + 2 * (bar.mult - 1), 12) + (thickened ? 4 : 0);
    prims.push({
      kind: "bar",
      index: k,
      x1,
      y1,
      x2,
      y2,
      color,
      width,
      thickened,
      faded: false,
      sign: bar.sign,
      mult: bar.mult,
    });
    prims.push({ kind: "dot", x: x1, y: y1, r: 3, color, faded: false });
    prims.push({ kind: "dot", x: x2, y: y2, r: 3, color, faded: false });
    if (bar.mult > 1) {
      prims.push({
        kind: "label",
        x: (x1 + x2) / 2 + 7,
        y: (y1 + y2) / 2 - 7,
        text: `x${bar.mult}`,
        color,
        size: 12,
        anchor: "start",
      });
    }
  });

  if (opts.line && meta.sizes.length === 2) {
    prims.push({
      kind: "overlayline",
      x1: frame.x(opts.line.a[0] ?? 0),
      y1: frame.y(opts.line.a[1] ?? 0),
      x2: frame.x(opts.line.b[0] ?? 0),
      y2: frame.y(opts.line.b[1] ?? 0),
      color: GROUP_COLOR,
    });
  }

  return { width: WIDTH, height: HEIGHT, prims };
}

/** Scatter of prominence vectors with the eps band shaded along the axes. */
export function prominenceScene(
  payload: ProminencePayload,
  eps: number,
  meta: MetaPayload,
): Scene {
  const values = payload.vectors.map((v) => v.map(Math.abs));
  const maxV = Math.max(1e-9, ...values.flat());
  const frame = new Frame([0, maxV], [0, maxV]);
  const twoD = meta.sizes.length >= 2;
  const prims: Prim[] = axisTicks(frame, [0, maxV], twoD ? [0, maxV] : []);
  if (eps > 0) {
    const e = frame.x(Math.min(eps, maxV)) - frame.x(0);
    const bottom = frame.y(0);
    prims.push({ kind: "region", x: MARGIN, y: bottom - e, w: WIDTH - 2 * MARGIN, h: e, color: HILITE_UP });
    if (twoD) {
      prims.push({ kind: "region", x: MARGIN, y: MARGIN, w: e, h: HEIGHT - 2 * MARGIN, color: HILITE_UP });
    }
  }
  values.forEach((v, k) => {
    const sign = payload.vectors[k]?.some((x) => x < 0) ? -1 : 1;
    const min = Math.min(...v);
    prims.push({
      kind: "dot",
      x: frame.x(v[0] ?? 0),
      y: twoD ? frame.y(v[1] ?? 0) : frame.y(0),
      r: 4,
      color: sign > 0 ? POS_COLOR : NEG_COLOR,
      faded: min < eps,
    });
  });
  return { width: WIDTH, height: HEIGHT, prims };
}

export function errorScene(message: string): Scene {
  return { width: WIDTH, height: HEIGHT, prims: [{ kind: "banner", text: message }] };
}

export function barPrims(scene: Scene) {
  return scene.prims.filter((p): p is Extract<Prim, { kind: "bar" }> => p.kind === "bar");
}

/** Short tick formatting, no client rounding beyond display. */
export function fmt(v: number): string {
  const s = Number(v.toPrecision(9)).toString();
  return s;
}

/** The scene's SVG twin: same elements, same order, same layout as the
 * server-side emitter, so exports can be diffed against CLI output. */
export function svgExport(payload: BarcodePayload, meta: MetaPayload): string {
  const scene = barcodeScene(payload, meta, { showSigns: true, showDecorations: true });
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
  ];
  for (const p of scene.prims) {
    switch (p.kind) {
      case "bg":
        parts.push(`<rect x="0" y="0" width="${WIDTH}" height="${HEIGHT}" fill="${p.color}"/>`);
        break;
      case "axisline":
        parts.push(
          `<line x1="${fmt(p.x1)}" y1="${fmt(p.y1)}" x2="${fmt(p.x2)}" y2="${fmt(p.y2)}" stroke="${AXIS_COLOR}" stroke-width="1"/>`,
        );
        break;
      case "label":
        parts.push(
          `<text x="${fmt(p.x)}" y="${fmt(p.y)}" font-size="${p.size}" text-anchor="${p.anchor}" fill="${p.color}">${p.text}</text>`,
        );
        break;
      case "outline":
        parts.push(
          `<rect x="${fmt(p.x)}" y="${fmt(p.y)}" width="${fmt(p.w)}" height="${fmt(p.h)}" fill="none" stroke="${GROUP_COLOR}" stroke-width="1.5"/>`,
        );
        break;
      case "bar":
        parts.push(
          `<line x1="${fmt(p.x1)}" y1="${fmt(p.y1)}" x2="${fmt(p.x2)}" y2="${fmt(p.y2)}" stroke="${p.color}" stroke-width="${fmt(p.width)}" class="bar"/>`,
        );
        break;
      case "dot":
        parts.push(`<circle cx="${fmt(p.x)}" cy="${fmt(p.y)}" r="${p.r}" fill="${p.color}"/>`);
        break;
      default:
        break;
    }
  }
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
