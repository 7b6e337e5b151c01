/**
 * 2D field map from a field-dump CSV: one colored cell per grid point,
 * optionally overlaid with velocity arrows read from companion u/w
 * dumps on the same grid, scaled so the fastest arrow spans most of a
 * subsampling block.
 *
 * Input schema: `i,k,x,z,value` rows with a `# quantity=... time=...`
 * comment header.
 */

import { parseTable, numberColumn } from "./csv.js";
import { linearScale, formatValue } from "./scale.js";
import { el, line, rect, text, svgDocument } from "./svg.js";

export interface FieldGrid {
  nx: number;
  nz: number;
  /** values[i][k], column-major to match the dump's i,k indexing. */
  values: number[][];
  quantity: string;
  time: number;
}

/** Reassemble a field dump into a dense nx-by-nz grid. */
export function parseFieldGrid(csvText: string, source = "field csv"): FieldGrid {
  const table = parseTable(csvText, source);
  const is = numberColumn(table, "i");
  const ks = numberColumn(table, "k");
  const vs = numberColumn(table, "value");
  if (vs.length === 0) throw new Error(`empty series: no field rows in ${source}`);
  const nx = Math.max(...is) + 1;
  const nz = Math.max(...ks) + 1;
  if (vs.length !== nx * nz) {
    throw new Error(`incomplete field in ${source}: ${vs.length} rows for ${nx}x${nz} grid`);
  }
  const values: number[][] = Array.from({ length: nx }, () => new Array<number>(nz).fill(NaN));
  for (let r = 0; r < vs.length; r += 1) {
    values[is[r]!]![ks[r]!] = vs[r]!;
  }
  return { nx, nz, values, quantity: table.meta["quantity"] ?? "value", time: Number(table.meta["time"] ?? NaN) };
}

/** Blue-white-red ramp over [0, 1]. */
export function rampColor(t: number): string {
  const clamped = Math.min(1, Math.max(0, t));
  const mix = (a: number, b: number, s: number) => Math.round(a + (b - a) * s);
  let r: number, g: number, b: number;
  if (clamped < 0.5) {
    const s = clamped * 2;
    [r, g, b] = [mix(33, 247, s), mix(102, 247, s), mix(172, 247, s)];
  } else {
    const s = clamped * 2 - 1;
    [r, g, b] = [mix(247, 178, s), mix(247, 24, s), mix(247, 43, s)];
  }
  return `rgb(${r},${g},${b})`;
}

export interface FieldMapOptions {
  /** Companion x-velocity dump (same grid) for arrow overlays. */
  uCsv?: string;
  /** Companion z-velocity dump (same grid) for arrow overlays. */
  wCsv?: string;
  /** Arrow subsampling stride in cells; default targets ~20 per axis. */
  arrowStride?: number;
}

const CELL = 12;
const MARGIN = { left: 50, right: 90, top: 34, bottom: 24 };

function arrows(
  scalar: FieldGrid,
  u: FieldGrid,
  w: FieldGrid,
  stride: number,
  xOf: (i: number) => number,
  yOf: (k: number) => number
): string {
  if (u.nx !== scalar.nx || u.nz !== scalar.nz || w.nx !== scalar.nx || w.nz !== scalar.nz) {
    throw new Error("velocity dumps are on a different grid than the scalar field");
  }
  let maxSpeed = 0;
  for (let i = 0; i < u.nx; i += 1) {
    for (let k = 0; k < u.nz; k += 1) {
      maxSpeed = Math.max(maxSpeed, Math.hypot(u.values[i]![k]!, w.values[i]![k]!));
    }
  }
  if (maxSpeed === 0) return "";
  // The fastest arrow spans 90% of one subsampling block.
  const pxPerSpeed = (0.9 * stride * CELL) / maxSpeed;
  const parts: string[] = [];
  const off = Math.floor(stride / 2);
  for (let i = off; i < u.nx; i += stride) {
    for (let k = off; k < u.nz; k += stride) {
      const du = u.values[i]![k]! * pxPerSpeed;
      const dw = w.values[i]![k]! * pxPerSpeed;
      const len = Math.hypot(du, dw);
      if (len < 0.5) continue;
      const cx = xOf(i) + CELL / 2;
      const cy = yOf(k) + CELL / 2;
      const x2 = cx + du / 2;
      const y2 = cy - dw / 2; // z increases upward, pixels downward
      parts.push(line(cx - du / 2, cy + dw / 2, x2, y2, { stroke: "#000", "stroke-width": 0.9 }));
      // Two short barbs form the arrow head.
      const ang = Math.atan2(-(dw), du);
      const headLen = Math.min(4, len / 2);
      for (const side of [Math.PI * 0.8, -Math.PI * 0.8]) {
        parts.push(
          line(
            x2,
            y2,
            x2 + headLen * Math.cos(ang + side),
            y2 + headLen * Math.sin(ang + side),
            { stroke: "#000", "stroke-width": 0.9 }
          )
        );
      }
    }
  }
  return el("g", {}, ...parts);
}

function colorbar(vMin: number, vMax: number, x: number, y0: number, y1: number): string {
  const parts: string[] = [];
  const steps = 40;
  const h = (y1 - y0) / steps;
  for (let s = 0; s < steps; s += 1) {
    parts.push(rect(x, y1 - (s + 1) * h, 14, h + 0.5, { fill: rampColor(s / (steps - 1)) }));
  }
  parts.push(rect(x, y0, 14, y1 - y0, { fill: "none", stroke: "#000", "stroke-width": 0.6 }));
  parts.push(text(x + 18, y1 + 4, formatValue(vMin)));
  parts.push(text(x + 18, y0 + 4, formatValue(vMax)));
  return parts.join("");
}

/** Render a heatmap (plus optional velocity arrows) from field CSV text. */
export function renderFieldMap(
  csvText: string,
  source = "field csv",
  options: FieldMapOptions = {}
): string {
  const field = parseFieldGrid(csvText, source);
  const width = MARGIN.left + field.nx * CELL + MARGIN.right;
  const height = MARGIN.top + field.nz * CELL + MARGIN.bottom;
  const xOf = (i: number) => MARGIN.left + i * CELL;
  const yOf = (k: number) => MARGIN.top + (field.nz - 1 - k) * CELL;

  const flat = field.values.flat();
  const vMin = Math.min(...flat);
  const vMax = Math.max(...flat);
  const parts: string[] = [];
  const title = `${field.quantity}${Number.isFinite(field.time) ? ` at t=${formatValue(field.time)} s` : ""}`;
  parts.push(text(MARGIN.left, MARGIN.top - 12, title, { "font-size": 13, "font-weight": "bold" }));

  const cells: string[] = [];
  for (let i = 0; i < field.nx; i += 1) {
    for (let k = 0; k < field.nz; k += 1) {
      const t = linearScale(field.values[i]![k]!, [vMin, vMax], [0, 1]);
      cells.push(rect(xOf(i), yOf(k), CELL, CELL, { fill: rampColor(vMin === vMax ? 0.5 : t) }));
    }
  }
  parts.push(el("g", { stroke: "none" }, ...cells));

  if (options.uCsv !== undefined || options.wCsv !== undefined) {
    if (options.uCsv === undefined || options.wCsv === undefined) {
      throw new Error("arrow overlay needs both u and w velocity dumps");
    }
    const u = parseFieldGrid(options.uCsv, "u velocity csv");
    const w = parseFieldGrid(options.wCsv, "w velocity csv");
    const stride = options.arrowStride ?? Math.max(1, Math.round(field.nx / 20));
    parts.push(arrows(field, u, w, stride, xOf, yOf));
  }

  parts.push(
    rect(xOf(0), yOf(field.nz - 1), field.nx * CELL, field.nz * CELL, {
      fill: "none",
      stroke: "#000",
      "stroke-width": 0.8,
    })
  );
  parts.push(colorbar(vMin, vMax, xOf(field.nx - 1) + CELL + 16, MARGIN.top, MARGIN.top + field.nz * CELL));
  return svgDocument(width, height, parts.join(""));
}
