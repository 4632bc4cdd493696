/** Explorer wiring: DOM events in, api calls out, scenes onto canvas.
 *
 * All numbers on screen are echoed server payloads; the client only
 * transforms coordinates.  In-flight probe requests are aborted when a
 * newer interaction supersedes them.
 */

import { ApiClient, SchemaError, ServerError } from "./api.js";
import type { BarcodePayload, Fetched, MetaPayload, ProminencePayload, RestrictPayload } from "./api.js";
import { barcodeFrame, barcodeScene, errorScene, prominenceScene } from "./scene.js";
import type { Scene, SceneOptions } from "./scene.js";
import { paint, unproject } from "./render.js";
import type { Viewport } from "./render.js";
import {
  clampEps,
  clampMonotone,
  epsBound,
  initialState,
  minLineDelta,
  nearestIndex,
  snapIntoUpset,
} from "./state.js";
import type { ViewState } from "./state.js";

type Mode = "probe" | "line" | "pan";

interface App {
  api: ApiClient;
  state: ViewState;
  mode: Mode;
  meta: MetaPayload | null;
  barcode: Fetched<BarcodePayload> | null;
  smooth: Fetched<BarcodePayload> | null;
  prominence: ProminencePayload | null;
  rankReadout: string;
  witnesses: Set<number>;
  restrict: RestrictPayload | null;
  probeAnchor: number[] | null;
  dragAnchor: { x: number; y: number } | null;
  inflight: AbortController | null;
  debounce: number | null;
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function describeError(err: unknown): string {
  if (err instanceof ServerError) return `server: ${err.message}`;
  if (err instanceof SchemaError) return err.message;
  return err instanceof Error ? err.message : String(err);
}

function currentPayload(app: App): Fetched<BarcodePayload> | null {
  return app.state.eps > 0 ? app.smooth : app.barcode;
}

function realFromCanvas(app: App, px: number, py: number): number[] | null {
  if (!app.meta) return null;
  const payload = currentPayload(app);
  const { frame } = barcodeFrame(app.meta, payload ? payload.data.bars.length : 0);
  const scene = { width: 800, height: 800, prims: [] } as Scene;
  const view: Viewport = { zoom: app.state.zoom, panX: app.state.panX, panY: app.state.panY };
  const [sx, sy] = unproject(view, scene, px, py);
  const rx = (sx - 70) / frame.sx + frame.x0;
  if (app.meta.sizes.length === 1) return [rx];
  const ry = (800 - 70 - sy) / frame.sy + frame.y0;
  return [rx, ry];
}

function buildScene(app: App): Scene {
  if (!app.meta) return errorScene("no session loaded");
  if (app.state.showProminence) {
    if (!app.prominence) return errorScene("prominence payload missing");
    return prominenceScene(app.prominence, app.state.eps, app.meta);
  }
  const payload = currentPayload(app);
  if (!payload) return errorScene("no barcode payload");
  const opts: SceneOptions = {
    witnesses: app.witnesses,
    showSigns: app.state.showSigns,
    showDecorations: app.state.showDecorations,
  };
  if (app.state.probe && app.meta.sizes.length === 2) {
    const coords = app.meta.real_coords;
    opts.probe = {
      s: app.state.probe.s.map((i, ax) => coords[ax]?.[i] ?? 0),
      t: app.state.probe.t.map((i, ax) => coords[ax]?.[i] ?? 0),
    };
  }
  if (app.state.line) opts.line = app.state.line;
  return barcodeScene(payload.data, app.meta, opts);
}

function redraw(app: App): void {
  const canvas = el<HTMLCanvasElement>("view");
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const banner = paint(ctx, buildScene(app), {
    zoom: app.state.zoom,
    panX: app.state.panX,
    panY: app.state.panY,
  });
  showBanner(app, banner);
  el("readout").textContent = app.rankReadout;
  renderRestrictPanel(app);
}

function showBanner(_app: App, text: string | null): void {
  const banner = el("banner");
  banner.textContent = text ?? "";
  banner.style.display = text ? "block" : "none";
}

function renderMeta(app: App): void {
  if (!app.meta) return;
  const m = app.meta;
  el("meta").textContent =
    `grid ${m.sizes.join("x")} over GF(${m.prime}); ` +
    `${m.positive} positive / ${m.negative} negative bars`;
}

/** Signed bars that survive into the cancelled barcode keep their look;
 * the rest go gray, pairing equal bars within display tolerance. */
function cancelledFlags(payload: RestrictPayload): boolean[] {
  const left = payload.cancelled.bars.map((b) => [...b] as [number, number]);
  const tol = 1e-9;
  return payload.signed.bars.map((bar, k) => {
    const sign = payload.signed.signs?.[k] ?? 1;
    if (sign < 0) return true;
    const hit = left.findIndex(
      (c) => Math.abs(c[0] - bar[0]) <= tol && Math.abs(c[1] - bar[1]) <= tol,
    );
    if (hit >= 0) {
      left.splice(hit, 1);
      return false;
    }
    return true;
  });
}

function renderRestrictPanel(app: App): void {
  const panel = el("restrict-panel");
  panel.replaceChildren();
  if (!app.restrict) {
    panel.textContent = app.state.line ? "no bars on this line" : "";
    return;
  }
  const flags = cancelledFlags(app.restrict);
  const signedTitle = document.createElement("div");
  signedTitle.className = "panel-title";
  signedTitle.textContent = "signed restriction";
  panel.appendChild(signedTitle);
  app.restrict.signed.bars.forEach((bar, k) => {
    const row = document.createElement("div");
    const sign = app.restrict?.signed.signs?.[k] ?? 1;
    row.className = flags[k] ? "bar-row cancelled" : "bar-row";
    row.textContent = `${sign > 0 ? "+" : "-"} [${bar[0]}, ${bar[1]}]`;
    panel.appendChild(row);
  });
  const finalTitle = document.createElement("div");
  finalTitle.className = "panel-title";
  finalTitle.textContent = "fibered barcode";
  panel.appendChild(finalTitle);
  if (app.restrict.cancelled.bars.length === 0) {
    const row = document.createElement("div");
    row.className = "bar-row";
    row.textContent = "(empty)";
    panel.appendChild(row);
  }
  app.restrict.cancelled.bars.forEach((bar) => {
    const row = document.createElement("div");
    row.className = "bar-row surviving";
    row.textContent = `[${bar[0]}, ${bar[1]}]`;
    panel.appendChild(row);
  });
}

function supersede(app: App): AbortSignal {
  app.inflight?.abort();
  app.inflight = new AbortController();
  return app.inflight.signal;
}

async function runProbe(app: App, s: number[], t: number[]): Promise<void> {
  const signal = supersede(app);
  try {
    const got = await app.api.rank(s, t, signal);
    app.rankReadout = `rank(${s.join(",")} -> ${t.join(",")}) = ${got.data.rank}`;
    app.witnesses = new Set(got.data.witness_bars);
    showBanner(app, null);
  } catch (err) {
    if ((err as Error).name === "AbortError") return;
    app.rankReadout = "";
    app.witnesses = new Set();
    showBanner(app, describeError(err));
  }
  redraw(app);
}

function scheduleRestrict(app: App): void {
  if (app.debounce !== null) window.clearTimeout(app.debounce);
  app.debounce = window.setTimeout(() => {
    app.debounce = null;
    void runRestrict(app);
  }, 80);
}

async function runRestrict(app: App): Promise<void> {
  if (!app.state.line) return;
  const signal = supersede(app);
  try {
    const got = await app.api.restrict(app.state.line.a, app.state.line.b, signal);
    app.restrict = got.data;
    showBanner(app, null);
  } catch (err) {
    if ((err as Error).name === "AbortError") return;
    app.restrict = null;
    showBanner(app, describeError(err));
  }
  redraw(app);
}

async function refreshSmoothing(app: App): Promise<void> {
  if (app.state.eps <= 0) {
    app.smooth = null;
    redraw(app);
    return;
  }
  const signal = supersede(app);
  try {
    app.smooth = await app.api.smooth(app.state.eps, signal);
    showBanner(app, null);
  } catch (err) {
    if ((err as Error).name === "AbortError") return;
    showBanner(app, describeError(err));
  }
  redraw(app);
}

function onCanvasDown(app: App, ev: MouseEvent): void {
  const canvas = el<HTMLCanvasElement>("view");
  const rect = canvas.getBoundingClientRect();
  const px = ((ev.clientX - rect.left) / rect.width) * 800;
  const py = ((ev.clientY - rect.top) / rect.height) * 800;
  if (app.mode === "pan") {
    app.dragAnchor = { x: px - app.state.panX, y: py - app.state.panY };
    return;
  }
  const real = realFromCanvas(app, px, py);
  if (!real || !app.meta) return;
  if (app.mode === "probe") {
    const idx = nearestIndex(app.meta.real_coords, real);
    if (!app.probeAnchor) {
      app.probeAnchor = idx;
      app.rankReadout = `s = (${idx.join(",")}); pick t`;
      app.witnesses = new Set();
      app.state.probe = null;
      redraw(app);
    } else {
      const s = app.probeAnchor;
      const t = snapIntoUpset(s, idx);
      app.probeAnchor = null;
      app.state.probe = { s, t };
      void runProbe(app, s, t);
    }
  } else if (app.mode === "line" && app.meta.sizes.length === 2) {
    app.state.line = { a: real, b: clampMonotone(real, real, minLineDelta(app.meta.real_coords)) };
    app.dragAnchor = { x: px, y: py };
    scheduleRestrict(app);
    redraw(app);
  }
}

function onCanvasMove(app: App, ev: MouseEvent): void {
  if (!app.dragAnchor) return;
  const canvas = el<HTMLCanvasElement>("view");
  const rect = canvas.getBoundingClientRect();
  const px = ((ev.clientX - rect.left) / rect.width) * 800;
  const py = ((ev.clientY - rect.top) / rect.height) * 800;
  if (app.mode === "pan") {
    app.state.panX = px - app.dragAnchor.x;
    app.state.panY = py - app.dragAnchor.y;
    redraw(app);
    return;
  }
  if (app.mode === "line" && app.state.line && app.meta) {
    const real = realFromCanvas(app, px, py);
    if (!real) return;
    app.state.line = {
      a: app.state.line.a,
      b: clampMonotone(app.state.line.a, real, minLineDelta(app.meta.real_coords)),
    };
    scheduleRestrict(app);
    redraw(app);
  }
}

function onCanvasUp(app: App): void {
  app.dragAnchor = null;
}

function setMode(app: App, mode: Mode): void {
  app.mode = mode;
  app.probeAnchor = null;
  for (const m of ["probe", "line", "pan"] as const) {
    el(`mode-${m}`).classList.toggle("active", m === mode);
  }
}

function exportSvg(app: App): void {
  if (!app.meta) return;
  const payload = currentPayload(app);
  if (!payload) return;
  void import("./scene.js").then(({ svgExport }) => {
    const blob = new Blob([svgExport(payload.data, app.meta as MetaPayload)], {
      type: "image/svg+xml",
    });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "barcode.svg";
    a.click();
    URL.revokeObjectURL(a.href);
  });
}

export async function boot(base = ""): Promise<void> {
  const app: App = {
    api: new ApiClient(base),
    state: initialState(),
    mode: "probe",
    meta: null,
    barcode: null,
    smooth: null,
    prominence: null,
    rankReadout: "",
    witnesses: new Set(),
    restrict: null,
    probeAnchor: null,
    dragAnchor: null,
    inflight: null,
    debounce: null,
  };

  try {
    app.meta = (await app.api.meta()).data;
    app.barcode = await app.api.barcode();
    app.prominence = (await app.api.prominence()).data;
  } catch (err) {
    showBanner(app, describeError(err));
    return;
  }

  renderMeta(app);
  const slider = el<HTMLInputElement>("eps");
  const bound = epsBound(app.meta.real_coords);
  slider.max = String(bound);
  slider.step = String(bound / 200);

  slider.addEventListener("input", () => {
    app.state.eps = clampEps(Number(slider.value), bound);
    el("eps-val").textContent = app.state.eps.toFixed(3);
    void refreshSmoothing(app);
  });

  el("mode-probe").addEventListener("click", () => setMode(app, "probe"));
  el("mode-line").addEventListener("click", () => setMode(app, "line"));
  el("mode-pan").addEventListener("click", () => setMode(app, "pan"));
  if (app.meta.sizes.length !== 2) {
    (el("mode-line") as HTMLButtonElement).disabled = true;
  }

  for (const [id, key] of [
    ["toggle-signs", "showSigns"],
    ["toggle-decorations", "showDecorations"],
    ["toggle-prominence", "showProminence"],
  ] as const) {
    const box = el<HTMLInputElement>(id);
    box.checked = app.state[key];
    box.addEventListener("change", () => {
      app.state[key] = box.checked;
      redraw(app);
    });
  }

  el("export").addEventListener("click", () => exportSvg(app));

  const canvas = el<HTMLCanvasElement>("view");
  canvas.addEventListener("mousedown", (ev) => onCanvasDown(app, ev));
  canvas.addEventListener("mousemove", (ev) => onCanvasMove(app, ev));
  window.addEventListener("mouseup", () => onCanvasUp(app));
  canvas.addEventListener("wheel", (ev) => {
    ev.preventDefault();
    const factor = Math.exp(-ev.deltaY * 0.001);
    app.state.zoom = Math.min(8, Math.max(0.25, app.state.zoom * factor));
    redraw(app);
  });

  setMode(app, "probe");
  redraw(app);
}

if (typeof document !== "undefined" && document.getElementById("view")) {
  void boot();
}
