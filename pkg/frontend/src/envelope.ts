/**
 * Conservation-envelope plot: for every transfer scheme in the sweep
 * output, the per-timestep min/max of the relative momentum change
 * (top panel) and relative energy change (bottom panel), drawn on
 * signed-square-root axes so conserving schemes sit on a flat zero
 * line while non-conserving ones remain visible across many orders of
 * magnitude in either sign.
 *
 * Input schema: `scheme_id,dt,dF_min,dF_max,dE_min,dE_max`.
 */

import { Table, parseTable, numberColumn, stringColumn } from "./csv.js";
import { signedSqrt, linearScale, niceTicks, signedSqrtTicks, formatValue } from "./scale.js";
import { el, line, polyline, text, svgDocument, seriesColor } from "./svg.js";

export interface EnvelopeSeries {
  scheme: string;
  dt: number[];
  min: number[];
  max: number[];
}

/** Group one quantity's envelope columns by scheme, in file order. */
export function envelopeSeries(table: Table, quantity: "dF" | "dE"): EnvelopeSeries[] {
  const schemes = stringColumn(table, "scheme_id");
  const dt = numberColumn(table, "dt");
  const lo = numberColumn(table, `${quantity}_min`);
  const hi = numberColumn(table, `${quantity}_max`);
  const byScheme = new Map<string, EnvelopeSeries>();
  for (let i = 0; i < schemes.length; i += 1) {
    const id = schemes[i]!;
    let s = byScheme.get(id);
    if (!s) {
      s = { scheme: id, dt: [], min: [], max: [] };
      byScheme.set(id, s);
    }
    s.dt.push(dt[i]!);
    s.min.push(lo[i]!);
    s.max.push(hi[i]!);
  }
  return [...byScheme.values()];
}

const WIDTH = 760;
const PANEL_HEIGHT = 280;
const MARGIN = { left: 70, right: 150, top: 28, bottom: 40 };

interface PanelSpec {
  title: string;
  series: EnvelopeSeries[];
  yOffset: number;
}

function isNamedScheme(id: string): boolean {
  return /^scheme\d+$/.test(id);
}

function renderPanel(spec: PanelSpec): string {
  const { series, yOffset } = spec;
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = yOffset + MARGIN.top;
  const y1 = yOffset + PANEL_HEIGHT - MARGIN.bottom;

  const dtMax = Math.max(...series.flatMap((s) => s.dt));
  const values = series.flatMap((s) => [...s.min, ...s.max]);
  // Keep at least a +/-1e-10 span so conserving schemes plot as flat
  // zero lines instead of autoscaling onto their rounding noise.
  const tSpan = signedSqrt(1e-10);
  const tLo = Math.min(-tSpan, signedSqrt(Math.min(...values)));
  const tHi = Math.max(tSpan, signedSqrt(Math.max(...values)));
  const pad = (tHi - tLo || 1) * 0.05;
  const yDomain: [number, number] = [tLo - pad, tHi + pad];
  const xOf = (dt: number) => linearScale(dt, [0, dtMax], [x0, x1]);
  const yOf = (v: number) => linearScale(signedSqrt(v), yDomain, [y1, y0]);

  const parts: string[] = [];
  parts.push(text(x0, y0 - 10, spec.title, { "font-size": 13, "font-weight": "bold" }));

  // Frame and gridline at zero.
  parts.push(line(x0, y0, x0, y1));
  parts.push(line(x0, y1, x1, y1));
  parts.push(line(x0, yOf(0), x1, yOf(0), { stroke: "#999", "stroke-dasharray": "2,3" }));

  for (const tick of niceTicks(0, dtMax, 6)) {
    const x = xOf(tick);
    parts.push(line(x, y1, x, y1 + 4));
    parts.push(text(x, y1 + 16, formatValue(tick), { "text-anchor": "middle" }));
  }
  const vLo = Math.min(...values);
  const vHi = Math.max(...values);
  for (const tick of signedSqrtTicks(vLo, vHi)) {
    const y = yOf(tick);
    parts.push(line(x0 - 4, y, x0, y));
    parts.push(text(x0 - 7, y + 3, formatValue(tick), { "text-anchor": "end" }));
  }
  parts.push(text((x0 + x1) / 2, y1 + 32, "timestep dt (s)", { "text-anchor": "middle" }));

  // Background variants first, named schemes on top.
  const ordered = [...series].sort(
    (a, b) => Number(isNamedScheme(a.scheme)) - Number(isNamedScheme(b.scheme))
  );
  let colorIdx = 0;
  const legend: Array<[string, string]> = [];
  for (const s of ordered) {
    const named = isNamedScheme(s.scheme);
    const color = named ? seriesColor(colorIdx++) : "#c8c8c8";
    for (const bound of [s.min, s.max]) {
      parts.push(
        polyline(
          s.dt.map((dt, i) => [xOf(dt), yOf(bound[i]!)]),
          { stroke: color, "stroke-width": named ? 1.6 : 0.8 }
        )
      );
    }
    if (named) legend.push([s.scheme, color]);
  }

  legend.sort((a, b) => a[0].localeCompare(b[0], undefined, { numeric: true }));
  legend.forEach(([label, color], i) => {
    const ly = y0 + 14 * i;
    parts.push(line(x1 + 10, ly, x1 + 30, ly, { stroke: color, "stroke-width": 1.6 }));
    parts.push(text(x1 + 35, ly + 3, label));
  });
  if (series.some((s) => !isNamedScheme(s.scheme))) {
    const ly = y0 + 14 * legend.length;
    parts.push(line(x1 + 10, ly, x1 + 30, ly, { stroke: "#c8c8c8", "stroke-width": 0.8 }));
    parts.push(text(x1 + 35, ly + 3, "other variants"));
  }
  return parts.join("");
}

/** Render the two-panel envelope figure from sweep CSV text. */
export function renderEnvelope(csvText: string, source = "envelope csv"): string {
  const table = parseTable(csvText, source);
  const dF = envelopeSeries(table, "dF");
  const dE = envelopeSeries(table, "dE");
  if (dF.length === 0) throw new Error(`empty series in ${source}`);
  return svgDocument(
    WIDTH,
    2 * PANEL_HEIGHT,
    renderPanel({ title: "relative momentum change (signed-sqrt axis)", series: dF, yOffset: 0 }),
    renderPanel({ title: "relative energy change (signed-sqrt axis)", series: dE, yOffset: PANEL_HEIGHT })
  );
}
