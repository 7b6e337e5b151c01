/**
 * Energy-departure time series from a run's diagnostics CSV: |value|
 * against time on a log axis, with the line drawn solid where the
 * underlying value is positive and dashed where it is negative, so a
 * single curve shows both the magnitude and the sign of the drift.
 *
 * Input schema: the per-step diagnostics table
 * `step,time,E_P,E_I,E_K,E_total,dE_rel_from_IC,dE_RSF,...`.
 */

import { parseTable, numberColumn } from "./csv.js";
import { linearScale, niceTicks, formatValue } from "./scale.js";
import { line, polyline, text, svgDocument } from "./svg.js";

export interface EnergySeriesOptions {
  /** Diagnostics column to plot; default `dE_rel_from_IC`. */
  column?: string;
  /** Curve label; defaults to the column name. */
  label?: string;
}

interface SignSegment {
  positive: boolean;
  points: Array<[number, number]>; // [time, log10|value|]
}

/** Split a signed series into maximal runs of constant sign. */
export function signSegments(
  time: number[],
  values: number[],
  floorMag: number
): SignSegment[] {
  const segments: SignSegment[] = [];
  let current: SignSegment | null = null;
  let carry: [number, number] | null = null;
  for (let i = 0; i < values.length; i += 1) {
    const v = values[i]!;
    if (!Number.isFinite(v)) {
      current = null;
      carry = null; // gaps break the curve; sign flips below do not
      continue;
    }
    const positive = v >= 0;
    const mag = Math.max(Math.abs(v), floorMag);
    const pt: [number, number] = [time[i]!, Math.log10(mag)];
    if (!current || current.positive !== positive) {
      current = { positive, points: [] };
      // Carry the previous point over so sign flips keep a connected curve.
      if (carry) current.points.push(carry);
      segments.push(current);
    }
    current.points.push(pt);
    carry = pt;
  }
  return segments.filter((s) => s.points.length >= 2);
}

const WIDTH = 640;
const HEIGHT = 400;
const MARGIN = { left: 70, right: 24, top: 30, bottom: 44 };

/** Render the energy time-series figure from diagnostics CSV text. */
export function renderEnergySeries(
  csvText: string,
  source = "diagnostics csv",
  options: EnergySeriesOptions = {}
): string {
  const column = options.column ?? "dE_rel_from_IC";
  const table = parseTable(csvText, source);
  const time = numberColumn(table, "time");
  const values = numberColumn(table, column);
  const finite = values.filter((v) => Number.isFinite(v));
  if (finite.length === 0) {
    throw new Error(`empty series: column "${column}" of ${source} has no finite values`);
  }

  const maxMag = Math.max(...finite.map(Math.abs));
  const positiveMags = finite.map(Math.abs).filter((m) => m > 0);
  // Exact zeros are clamped to a floor one decade under the smallest
  // nonzero magnitude so they stay on the log axis.
  const floorMag =
    positiveMags.length > 0 ? Math.min(...positiveMags) / 10 : 1e-16;
  const segments = signSegments(time, values, floorMag);
  if (segments.length === 0) {
    throw new Error(`empty series: column "${column}" of ${source} has fewer than 2 points`);
  }

  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = MARGIN.top;
  const y1 = HEIGHT - MARGIN.bottom;
  const tMin = Math.min(...time);
  const tMax = Math.max(...time);
  const lLo = Math.log10(floorMag);
  const lHi = Math.log10(Math.max(maxMag, floorMag * 10));
  const xOf = (t: number) => linearScale(t, [tMin, tMax], [x0, x1]);
  const yOf = (l: number) => linearScale(l, [lLo, lHi], [y1, y0]);

  const parts: string[] = [];
  parts.push(
    text(x0, y0 - 12, `|${column}| vs time (solid: positive, dashed: negative)`, {
      "font-size": 13,
      "font-weight": "bold",
    })
  );
  parts.push(line(x0, y0, x0, y1));
  parts.push(line(x0, y1, x1, y1));
  for (const tick of niceTicks(tMin, tMax, 6)) {
    const x = xOf(tick);
    parts.push(line(x, y1, x, y1 + 4));
    parts.push(text(x, y1 + 16, formatValue(tick), { "text-anchor": "middle" }));
  }
  for (let e = Math.ceil(lLo); e <= Math.floor(lHi); e += 1) {
    const y = yOf(e);
    parts.push(line(x0 - 4, y, x0, y));
    parts.push(text(x0 - 7, y + 3, `1e${e}`, { "text-anchor": "end" }));
  }
  parts.push(text((x0 + x1) / 2, y1 + 34, "time (s)", { "text-anchor": "middle" }));

  for (const seg of segments) {
    parts.push(
      polyline(
        seg.points.map(([t, l]) => [xOf(t), yOf(l)]),
        seg.positive
          ? { stroke: "#1f77b4", "stroke-width": 1.6 }
          : { stroke: "#1f77b4", "stroke-width": 1.6, "stroke-dasharray": "6,4" }
      )
    );
  }
  return svgDocument(WIDTH, HEIGHT, parts.join(""));
}
