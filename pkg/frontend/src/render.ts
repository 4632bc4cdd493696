/** Paint a scene onto a canvas 2d context.
 *
 * The scene is in an 800x800 reference viewport; pan/zoom is applied
 * as a context transform so picking math can reuse the same numbers.
 */

import type { Prim, Scene } from "./scene.js";

export interface Viewport {
  zoom: number;
  panX: number;
  panY: number;
}

export function applyViewport(ctx: CanvasRenderingContext2D, view: Viewport, scene: Scene): void {
  const cx = scene.width / 2;
  const cy = scene.height / 2;
  ctx.setTransform(view.zoom, 0, 0, view.zoom, cx - view.zoom * cx + view.panX, cy - view.zoom * cy + view.panY);
}

/** Canvas pixel back to scene coordinates under the same viewport. */
export function unproject(view: Viewport, scene: Scene, px: number, py: number): [number, number] {
  const cx = scene.width / 2;
  const cy = scene.height / 2;
  return [(px - (cx - view.zoom * cx + view.panX)) / view.zoom, (py - (cy - view.zoom * cy + view.panY)) / view.zoom];
}

function paintPrim(ctx: CanvasRenderingContext2D, p: Prim): void {
  switch (p.kind) {
    case "bg":
      ctx.fillStyle = p.color;
      ctx.fillRect(-4000, -4000, 8000, 8000);
      break;
    case "axisline":
      ctx.strokeStyle = "#1c1c1c";
      ctx.lineWidth = 1;
      ctx.beginPath();
      ctx.moveTo(p.x1, p.y1);
      ctx.lineTo(p.x2, p.y2);
      ctx.stroke();
      break;
    case "label":
      ctx.fillStyle = p.color;
      ctx.font = `${p.size}px sans-serif`;
      ctx.textAlign = p.anchor === "middle" ? "center" : p.anchor === "end" ? "right" : "left";
      ctx.fillText(p.text, p.x, p.y);
      break;
    case "region":
      ctx.fillStyle = p.color;
      ctx.fillRect(p.x, p.y, p.w, p.h);
      break;
    case "outline":
      ctx.strokeStyle = "#e66100";
      ctx.lineWidth = 1.5;
      ctx.strokeRect(p.x, p.y, p.w, p.h);
      break;
    case "bar":
      ctx.globalAlpha = p.faded ? 0.25 : 1;
      ctx.strokeStyle = p.color;
      ctx.lineWidth = p.width;
      ctx.lineCap = "round";
      ctx.beginPath();
      ctx.moveTo(p.x1, p.y1);
      ctx.lineTo(p.x2, p.y2);
      ctx.stroke();
      ctx.globalAlpha = 1;
      break;
    case "dot":
      ctx.globalAlpha = p.faded ? 0.25 : 1;
      ctx.fillStyle = p.color;
      ctx.beginPath();
      ctx.arc(p.x, p.y, p.r, 0, 2 * Math.PI);
      ctx.fill();
      ctx.globalAlpha = 1;
      break;
    case "overlayline":
      ctx.strokeStyle = p.color;
      ctx.lineWidth = 1.5;
      ctx.setLineDash([6, 4]);
      ctx.beginPath();
      ctx.moveTo(p.x1, p.y1);
      ctx.lineTo(p.x2, p.y2);
      ctx.stroke();
      ctx.setLineDash([]);
      break;
    case "banner":
      break;
  }
}

export function paint(ctx: CanvasRenderingContext2D, scene: Scene, view: Viewport): string | null {
  ctx.setTransform(1, 0, 0, 1, 0, 0);
  ctx.clearRect(0, 0, scene.width, scene.height);
  applyViewport(ctx, view, scene);
  let banner: string | null = null;
  for (const p of scene.prims) {
    if (p.kind === "banner") {
      banner = p.text;
    } else {
      paintPrim(ctx, p);
    }
  }
  ctx.setTransform(1, 0, 0, 1, 0, 0);
  return banner;
}
