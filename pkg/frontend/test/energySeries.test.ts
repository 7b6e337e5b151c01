import { readFileSync } from "node:fs";

import { describe, expect, it } from "vitest";

import { renderEnergySeries, signSegments } from "../src/energySeries.js";

const GOLDEN = new URL(
  "../testdata/half_bubble/scheme4/diagnostics.csv",
  import.meta.url
);
const csvText = readFileSync(GOLDEN, "utf8");

describe("signSegments", () => {
  it("splits at sign changes and carries the joining point", () => {
    const segs = signSegments([0, 1, 2, 3], [1, 2, -3, -4], 1e-16);
    expect(segs).toHaveLength(2);
    expect(segs[0]!.positive).toBe(true);
    expect(segs[1]!.positive).toBe(false);
    // The negative segment starts from the last positive point.
    expect(segs[1]!.points[0]).toEqual(segs[0]!.points[segs[0]!.points.length - 1]);
  });

  it("clamps zeros to the floor magnitude", () => {
    const segs = signSegments([0, 1], [0, 1], 1e-6);
    expect(segs[0]!.points[0]![1]).toBe(-6);
  });

  it("drops non-finite values", () => {
    const segs = signSegments([0, 1, 2, 3], [1, NaN, 1, 2], 1e-16);
    expect(segs).toHaveLength(1);
    expect(segs[0]!.points).toHaveLength(2);
  });
});

describe("renderEnergySeries", () => {
  it("renders the golden diagnostics to a well-formed SVG", () => {
    const svg = renderEnergySeries(csvText, "diagnostics.csv");
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg.endsWith("</svg>")).toBe(true);
    expect(svg).toContain("dE_rel_from_IC");
    expect(svg).toContain("<polyline");
  });

  it("draws dashed segments for negative stretches", () => {
    const csv =
      "step,time,dE_rel_from_IC\n0,0,1e-5\n1,10,2e-5\n2,20,-3e-5\n3,30,-4e-5\n";
    const svg = renderEnergySeries(csv, "mixed");
    expect(svg).toContain("stroke-dasharray");
    const solid = (svg.match(/<polyline(?![^>]*stroke-dasharray)[^>]*>/g) ?? []).length;
    expect(solid).toBeGreaterThan(0);
  });

  it("an all-positive series has no dashed curve", () => {
    const csv = "step,time,dE_rel_from_IC\n0,0,1e-6\n1,10,2e-6\n2,20,3e-6\n";
    const svg = renderEnergySeries(csv, "positive");
    expect(svg).not.toContain("stroke-dasharray");
  });

  it("supports selecting another diagnostics column", () => {
    const svg = renderEnergySeries(csvText, "diagnostics.csv", { column: "E_K" });
    expect(svg).toContain("E_K");
  });

  it("errors on an empty series, not an empty image", () => {
    const header =
      "step,time,E_P,E_I,E_K,E_total,dE_rel_from_IC,dE_RSF,min_eta_0,min_eta_1,max_abs_w\n";
    expect(() => renderEnergySeries(header, "empty.csv")).toThrow(/empty series/);
  });

  it("errors on an all-blank column naming it", () => {
    const csv = "step,time,dE_RSF\n0,0,\n1,10,\n";
    expect(() => renderEnergySeries(csv, "blank.csv", { column: "dE_RSF" })).toThrow(
      /empty series: column "dE_RSF"/
    );
  });

  it("names a missing column", () => {
    expect(() => renderEnergySeries("step,time\n0,0\n", "nocol.csv")).toThrow(
      'missing column "dE_rel_from_IC" in nocol.csv'
    );
  });
});
