/**
 * Tiny SVG string builder: enough structure for static line plots and
 * heatmaps without a DOM or a rendering dependency.
 */

export type Attrs = Record<string, string | number>;

function formatNumber(v: number): string {
  if (!Number.isFinite(v)) throw new Error(`non-finite coordinate: ${v}`);
  const s = v.toPrecision(8);
  return s.includes(".") ? s.replace(/\.?0+$/, "") : s;
}

function formatAttrs(attrs: Attrs): string {
  return Object.entries(attrs)
    .map(([k, v]) => ` ${k}="${typeof v === "number" ? formatNumber(v) : v}"`)
    .join("");
}

/** An SVG element with optional children (already-serialized strings). */
export function el(name: string, attrs: Attrs, ...children: string[]): string {
  const body = children.join("");
  return body === ""
    ? `<${name}${formatAttrs(attrs)}/>`
    : `<${name}${formatAttrs(attrs)}>${body}</${name}>`;
}

export function text(x: number, y: number, content: string, attrs: Attrs = {}): string {
  return el(
    "text",
    { x, y, "font-family": "sans-serif", "font-size": 11, ...attrs },
    escapeText(content)
  );
}

export function line(x1: number, y1: number, x2: number, y2: number, attrs: Attrs = {}): string {
  return el("line", { x1, y1, x2, y2, stroke: "#000", ...attrs });
}

/** Open polyline through the given pixel-space points. */
export function polyline(points: Array<[number, number]>, attrs: Attrs = {}): string {
  const pts = points.map(([x, y]) => `${formatNumber(x)},${formatNumber(y)}`).join(" ");
  return el("polyline", { points: pts, fill: "none", stroke: "#000", ...attrs });
}

export function rect(x: number, y: number, w: number, h: number, attrs: Attrs = {}): string {
  return el("rect", { x, y, width: w, height: h, ...attrs });
}

export function escapeText(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Complete standalone SVG document with a white background. */
export function svgDocument(width: number, height: number, ...children: string[]): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}"` +
    ` viewBox="0 0 ${width} ${height}">` +
    rect(0, 0, width, height, { fill: "#fff" }) +
    children.join("") +
    `</svg>`
  );
}

/** Qualitative color cycle for per-series strokes. */
export const SERIES_COLORS = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
  "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

export function seriesColor(index: number): string {
  return SERIES_COLORS[index % SERIES_COLORS.length]!;
}
