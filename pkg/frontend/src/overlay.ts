/**
 * Overlay rendering.  Everything drawn here came back from the service —
 * contour, hull, and defect points are in uploaded-frame coordinates and are
 * scaled up to the on-screen canvas, never recomputed locally, so the
 * overlay shows exactly what the classifier saw.
 */

import type { OverlayData, Point } from "./types.js";

const CONTOUR_STYLE = "#9ece6a";
const HULL_STYLE = "#7aa2f7";
const CHORD_STYLE = "rgba(255, 158, 100, 0.6)";
const FAR_STYLE = "#ff5555";

function tracePolyline(
  ctx: CanvasRenderingContext2D,
  points: Point[],
  sx: number,
  sy: number,
): void {
  ctx.beginPath();
  points.forEach(([x, y], i) => {
    if (i === 0) ctx.moveTo(x * sx, y * sy);
    else ctx.lineTo(x * sx, y * sy);
  });
  ctx.closePath();
  ctx.stroke();
}

/**
 * Draw the service-returned overlay, scaled from frame coordinates
 * (frameWidth × frameHeight) to the canvas size.  A null overlay just
 * clears the canvas.
 */
export function drawOverlay(
  canvas: HTMLCanvasElement,
  overlay: OverlayData | null,
  frameWidth: number,
  frameHeight: number,
): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (!overlay || !frameWidth || !frameHeight) return;
  const sx = canvas.width / frameWidth;
  const sy = canvas.height / frameHeight;

  if (overlay.contour.length > 1) {
    ctx.lineWidth = 2;
    ctx.strokeStyle = CONTOUR_STYLE;
    tracePolyline(ctx, overlay.contour, sx, sy);
  }
  if (overlay.hull.length > 1) {
    ctx.lineWidth = 1.5;
    ctx.strokeStyle = HULL_STYLE;
    tracePolyline(ctx, overlay.hull, sx, sy);
  }
  for (const defect of overlay.defects) {
    ctx.lineWidth = 1;
    ctx.strokeStyle = CHORD_STYLE;
    ctx.beginPath();
    ctx.moveTo(defect.start[0] * sx, defect.start[1] * sy);
    ctx.lineTo(defect.end[0] * sx, defect.end[1] * sy);
    ctx.stroke();

    ctx.fillStyle = FAR_STYLE;
    ctx.beginPath();
    ctx.arc(defect.far[0] * sx, defect.far[1] * sy, 4, 0, 2 * Math.PI);
    ctx.fill();
  }
}
