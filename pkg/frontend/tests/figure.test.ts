import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { GroupingError, regionFigure, sweepFigure } from "../src/index.js";

const here = dirname(fileURLToPath(import.meta.url));
const fixture = (name: string) =>
  readFileSync(join(here, "fixtures", name), "utf8");

describe("region figure", () => {
  it("renders every series point and nothing else", () => {
    const svg = regionFigure(fixture("golden_region.csv"));
    expect(svg).toContain("<svg");
    expect(svg).toContain("</svg>");
    // 2 schemes x 2 feasible points, one marker each
    expect(svg.match(/<circle /g)).toHaveLength(4);
    expect(svg.match(/<polyline /g)).toHaveLength(2);
    expect(svg).toContain(">ma</text>");
    expect(svg).toContain(">fpa</text>");
  });

  it("is idempotent byte for byte", () => {
    const text = fixture("golden_region.csv");
    expect(regionFigure(text)).toBe(regionFigure(text));
  });

  it("renders a valid empty figure from a header-only file", () => {
    const svg = regionFigure(fixture("header_only.csv"));
    expect(svg).toContain("<svg");
    expect(svg).toContain("</svg>");
    expect(svg.match(/<circle /g)).toBeNull();
  });

  it("renders a single marker for a single point", () => {
    const header = fixture("header_only.csv").trim();
    const one = `${header}\nma,0,1,4,10,8.0,0.5,2.5,0.5,optimal,,\n`;
    const svg = regionFigure(one);
    expect(svg.match(/<circle /g)).toHaveLength(1);
  });
});

describe("sweep figure", () => {
  it("draws one curve per value in value order", () => {
    const svg = sweepFigure(
      [20, 5, 10].map((m) => ({
        path: `sweep_M${m}.csv`,
        text: fixture(`sweep_M${m}.csv`),
      })), "M");
    const labels = [...svg.matchAll(/>(ma M=\d+)<\/text>/g)].map((m) => m[1]);
    expect(labels).toEqual(["ma M=5", "ma M=10", "ma M=20"]);
    expect(svg).toContain("sweep over M");
  });

  it("reduces to a single family for one input", () => {
    const svg = sweepFigure(
      [{ path: "sweep_M5.csv", text: fixture("sweep_M5.csv") }], "M");
    expect(svg.match(/<polyline /g)).toHaveLength(1);
  });

  it("rejects inconsistent held-fixed metadata", () => {
    const inputs = [
      { path: "sweep_M5.csv", text: fixture("sweep_M5.csv") },
      { path: "sweep_badmeta.csv", text: fixture("sweep_badmeta.csv") },
    ];
    expect(() => sweepFigure(inputs, "M")).toThrow(GroupingError);
  });
});
