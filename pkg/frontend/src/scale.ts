/**
 * Axis scales and tick helpers shared by the renderers.
 */

/**
 * Signed square root, sign(v)·sqrt(|v|): a monotone transform that
 * compresses large magnitudes of either sign while keeping zero fixed,
 * used for the conservation-envelope axes where values span many
 * orders of magnitude in both directions.
 */
export function signedSqrt(v: number): number {
  return Math.sign(v) * Math.sqrt(Math.abs(v));
}

/** Map `value` from the data range onto the pixel range. */
export function linearScale(
  value: number,
  domain: [number, number],
  range: [number, number]
): number {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const t = d1 === d0 ? 0.5 : (value - d0) / (d1 - d0);
  return r0 + t * (r1 - r0);
}

/**
 * Evenly spaced "nice" tick values spanning [min, max]: the step is
 * the 1/2/5 multiple of a power of ten closest to range/targetTicks.
 */
export function niceTicks(min: number, max: number, targetTicks = 5): number[] {
  if (!(max > min)) return [min];
  const rough = (max - min) / targetTicks;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const normalized = rough / mag;
  let nice: number;
  if (normalized <= 1.5) nice = 1;
  else if (normalized <= 3) nice = 2;
  else if (normalized <= 7) nice = 5;
  else nice = 10;
  const step = nice * mag;
  const ticks: number[] = [];
  for (let t = Math.ceil(min / step) * step; t <= max + step * 1e-9; t += step) {
    ticks.push(Math.abs(t) < step * 1e-9 ? 0 : t);
  }
  return ticks;
}

/** Compact numeric label for axis ticks. */
export function formatValue(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e5 || a < 1e-3) return v.toExponential(0).replace("e+", "e");
  if (Number.isInteger(v)) return v.toString();
  return v.toPrecision(3).replace(/\.?0+$/, "");
}

/**
 * Tick values for a signed-sqrt axis over [min, max] in data space:
 * symmetric powers of ten plus zero, thinned to at most `maxTicks`.
 */
export function signedSqrtTicks(min: number, max: number, maxTicks = 9): number[] {
  const ticks: number[] = [];
  const top = Math.max(Math.abs(min), Math.abs(max));
  if (top === 0) return [0];
  const hi = Math.ceil(Math.log10(top));
  const decades: number[] = [];
  for (let e = hi; e > hi - 12 && Math.pow(10, e) >= top * 1e-10; e -= 1) {
    decades.push(Math.pow(10, e));
  }
  const stride = Math.max(1, Math.ceil((decades.length * 2 + 1) / maxTicks));
  const kept = decades.filter((_, i) => i % stride === 0);
  for (const d of kept) if (-d >= min) ticks.push(-d);
  ticks.sort((a, b) => a - b);
  if (min <= 0 && max >= 0) ticks.push(0);
  for (const d of [...kept].reverse()) if (d <= max) ticks.push(d);
  return ticks;
}
