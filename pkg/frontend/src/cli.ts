#!/usr/bin/env node
/**
 * Render a diagnostics CSV into an SVG figure.
 *
 * Usage:
 *   multifluid-plot <input.csv> <kind> <output.svg> [options]
 *
 * Kinds:
 *   envelope   sweep envelope CSV -> momentum/energy envelope panels
 *   energy     run diagnostics CSV -> |dE| vs time, sign-coded styles
 *   fieldmap   field dump CSV -> heatmap (+arrows with --u/--w)
 *
 * Options:
 *   --column NAME   diagnostics column for `energy` (default dE_rel_from_IC)
 *   --u FILE        x-velocity dump for `fieldmap` arrows
 *   --w FILE        z-velocity dump for `fieldmap` arrows
 */

import { readFileSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";

import { renderEnvelope } from "./envelope.js";
import { renderEnergySeries } from "./energySeries.js";
import { renderFieldMap } from "./fieldMap.js";

export const KINDS = ["envelope", "energy", "fieldmap"] as const;
export type Kind = (typeof KINDS)[number];

function usage(): string {
  return "usage: multifluid-plot <input.csv> <envelope|energy|fieldmap> <output.svg> [--column NAME] [--u FILE] [--w FILE]";
}

/** Run one render job; returns a process exit status. */
export function run(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        column: { type: "string" },
        u: { type: "string" },
        w: { type: "string" },
      },
    });
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    console.error(usage());
    return 2;
  }
  const [input, kind, output] = parsed.positionals;
  if (!input || !kind || !output || !KINDS.includes(kind as Kind)) {
    console.error(usage());
    return 2;
  }
  try {
    const csvText = readFileSync(input, "utf8");
    let svg: string;
    if (kind === "envelope") {
      svg = renderEnvelope(csvText, input);
    } else if (kind === "energy") {
      svg = renderEnergySeries(csvText, input, { column: parsed.values.column });
    } else {
      svg = renderFieldMap(csvText, input, {
        uCsv: parsed.values.u !== undefined ? readFileSync(parsed.values.u, "utf8") : undefined,
        wCsv: parsed.values.w !== undefined ? readFileSync(parsed.values.w, "utf8") : undefined,
      });
    }
    writeFileSync(output, svg);
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 1;
  }
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  process.exit(run(process.argv.slice(2)));
}
