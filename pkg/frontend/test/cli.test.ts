import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { run } from "../src/cli.js";

const TESTDATA = fileURLToPath(new URL("../testdata/", import.meta.url));
const outDir = mkdtempSync(join(tmpdir(), "multifluid-plots-"));

function report(criterion: string, ok: boolean, detail: string): void {
  console.log(`${criterion}: ${ok ? "PASS" : "FAIL"} (${detail})`);
  expect(ok).toBe(true);
}

describe("cli golden renders", () => {
  it("renders the sweep envelope figure", () => {
    const out = join(outDir, "envelope.svg");
    const status = run([join(TESTDATA, "envelope.csv"), "envelope", out]);
    const svg = status === 0 ? readFileSync(out, "utf8") : "";
    report("A9-envelope", status === 0 && svg.startsWith("<svg"), out);
  });

  it("renders the full-bubble energy series", () => {
    const out = join(outDir, "energy.svg");
    const status = run([
      join(TESTDATA, "full_bubble", "scheme4", "diagnostics.csv"),
      "energy",
      out,
      "--column",
      "dE_RSF",
    ]);
    const svg = status === 0 ? readFileSync(out, "utf8") : "";
    report("A9-energy", status === 0 && svg.startsWith("<svg"), out);
  });

  it("renders the half-bubble field map with arrows", () => {
    const fields = join(TESTDATA, "half_bubble", "scheme4", "fields");
    const out = join(outDir, "fieldmap.svg");
    const status = run([
      join(fields, "theta_1_00125.csv"),
      "fieldmap",
      out,
      "--u",
      join(fields, "u_1_00125.csv"),
      "--w",
      join(fields, "w_1_00125.csv"),
    ]);
    const svg = status === 0 ? readFileSync(out, "utf8") : "";
    report("A9-fieldmap", status === 0 && svg.includes("<line"), out);
  });
});

describe("cli error handling", () => {
  it("rejects a bad kind with usage", () => {
    expect(run(["x.csv", "scatter", "y.svg"])).toBe(2);
  });

  it("rejects missing positionals", () => {
    expect(run([])).toBe(2);
  });

  it("fails cleanly on an unreadable input", () => {
    expect(run([join(outDir, "nope.csv"), "energy", join(outDir, "x.svg")])).toBe(1);
  });

  it("fails cleanly on a malformed csv", () => {
    const bad = join(outDir, "bad.csv");
    writeFileSync(bad, "step,time\n0,0\n");
    expect(run([bad, "energy", join(outDir, "bad.svg")])).toBe(1);
  });
});
