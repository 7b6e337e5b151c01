import { describe, expect, it } from "vitest";

import {
  MissingColumnError,
  columnIndex,
  numberColumn,
  parseTable,
  stringColumn,
} from "../src/csv.js";

const SAMPLE = "a,b,c\n1,2,3\n4,,6\n";

describe("parseTable", () => {
  it("splits header and rows", () => {
    const t = parseTable(SAMPLE, "sample");
    expect(t.columns).toEqual(["a", "b", "c"]);
    expect(t.rows).toHaveLength(2);
  });

  it("captures key=value comment headers", () => {
    const t = parseTable("# quantity=theta_1 time=1000\ni,k\n0,0\n", "dump");
    expect(t.meta).toEqual({ quantity: "theta_1", time: "1000" });
    expect(t.columns).toEqual(["i", "k"]);
  });

  it("rejects headerless input", () => {
    expect(() => parseTable("", "empty")).toThrow(/no header row in empty/);
  });
});

describe("columns", () => {
  it("reads numbers and maps blank cells to NaN", () => {
    const t = parseTable(SAMPLE, "sample");
    expect(numberColumn(t, "a")).toEqual([1, 4]);
    expect(numberColumn(t, "b")).toEqual([2, NaN]);
  });

  it("reads strings verbatim", () => {
    const t = parseTable("scheme_id,x\nscheme1,0\n", "s");
    expect(stringColumn(t, "scheme_id")).toEqual(["scheme1"]);
  });

  it("names the missing column and the source in errors", () => {
    const t = parseTable(SAMPLE, "sweep.csv");
    expect(() => columnIndex(t, "dF_min")).toThrow(MissingColumnError);
    expect(() => columnIndex(t, "dF_min")).toThrow(
      'missing column "dF_min" in sweep.csv'
    );
  });
});
