import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { parseRecords, SchemaError } from "../src/csv.js";
import { schemeSeries, sweepValue, GroupingError } from "../src/series.js";

const here = dirname(fileURLToPath(import.meta.url));
const fixture = (name: string) =>
  readFileSync(join(here, "fixtures", name), "utf8");

describe("records parsing", () => {
  it("round-trips the golden file", () => {
    const records = parseRecords(fixture("golden_region.csv"));
    expect(records).toHaveLength(12);
    expect(records[0].scheme).toBe("fpa");
    expect(records[2].rc).toBeNull();
    expect(records[2].status).toBe("infeasible");
  });

  it("accepts a header-only file", () => {
    expect(parseRecords(fixture("header_only.csv"))).toHaveLength(0);
  });

  it("names the missing column", () => {
    const broken = fixture("golden_region.csv").replace("Rc_bits", "rc");
    expect(() => parseRecords(broken)).toThrow(SchemaError);
    expect(() => parseRecords(broken)).toThrow(/Rc_bits/);
  });
});

describe("series extraction", () => {
  it("matches independently computed means and deviations exactly", () => {
    const series = schemeSeries(parseRecords(fixture("golden_region.csv")));
    const ma = series.find((s) => s.label === "ma")!;
    const fpa = series.find((s) => s.label === "fpa")!;
    // means of {3,5}, {2,4} and {2,2.5}, {1,1.5}; stds of half-gaps
    expect(Math.abs(ma.points[0].mean - 4.0)).toBeLessThanOrEqual(1e-12);
    expect(Math.abs(ma.points[1].mean - 3.0)).toBeLessThanOrEqual(1e-12);
    expect(Math.abs(ma.points[0].std - 1.0)).toBeLessThanOrEqual(1e-12);
    expect(Math.abs(fpa.points[0].mean - 2.25)).toBeLessThanOrEqual(1e-12);
    expect(Math.abs(fpa.points[1].std - 0.25)).toBeLessThanOrEqual(1e-12);
    expect(ma.points.map((p) => p.n)).toEqual([2, 2]);
  });

  it("omits infeasible points", () => {
    const series = schemeSeries(parseRecords(fixture("golden_region.csv")));
    for (const s of series) {
      expect(s.points.map((p) => p.rMs)).toEqual([0.0, 1.0]);
    }
  });

  it("keeps the stronger scheme above pointwise", () => {
    const series = schemeSeries(parseRecords(fixture("golden_region.csv")));
    const ma = series.find((s) => s.label === "ma")!;
    const fpa = series.find((s) => s.label === "fpa")!;
    ma.points.forEach((p, k) => {
      expect(p.mean).toBeGreaterThan(fpa.points[k].mean);
    });
  });
});

describe("sweep grouping", () => {
  it("reads one axis value per file", () => {
    const { value, rest } = sweepValue(
      parseRecords(fixture("sweep_M10.csv")), "M", "sweep_M10.csv");
    expect(value).toBe(10);
    expect(rest).toBe("N=4,A=8");
  });

  it("rejects empty inputs", () => {
    expect(() => sweepValue([], "M", "x.csv")).toThrow(GroupingError);
  });
});
