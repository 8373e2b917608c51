/** Figures from secrecy-region experiment records. */

import { readFileSync, writeFileSync } from "node:fs";

import { parseRecords, SchemaError, TrialRecord } from "./csv.js";
import { GroupingError, schemeSeries, Series, sweepValue } from "./series.js";
import { renderFigure } from "./svg.js";

export { parseRecords, SchemaError, GroupingError, schemeSeries, sweepValue,
         renderFigure };
export type { TrialRecord, Series };

const X_LABEL = "multicast rate requirement (bits/s/Hz)";
const Y_LABEL = "mean secrecy rate (bits/s/Hz)";

/** One curve per scheme from a single records file. */
export function regionFigure(csvText: string): string {
  return renderFigure(schemeSeries(parseRecords(csvText)), {
    xLabel: X_LABEL,
    yLabel: Y_LABEL,
  });
}

/** A curve family keyed by the sweep value, one input file per value. */
export function sweepFigure(inputs: { path: string; text: string }[],
                            axis: "M" | "A" | "N"): string {
  const family: Series[] = [];
  const rests = new Set<string>();
  const entries = inputs.map(({ path, text }) => {
    const records = parseRecords(text);
    const { value, rest } = sweepValue(records, axis, path);
    rests.add(rest);
    return { value, records };
  });
  if (rests.size > 1) {
    throw new GroupingError(
      `inputs differ in the held-fixed metadata: ${[...rests].join(" vs ")}`);
  }
  entries.sort((a, b) => a.value - b.value);
  for (const { value, records } of entries) {
    for (const series of schemeSeries(records)) {
      family.push({ ...series, label: `${series.label} ${axis}=${value}` });
    }
  }
  return renderFigure(family, {
    xLabel: X_LABEL,
    yLabel: Y_LABEL,
    caption: `sweep over ${axis}`,
  });
}

export function plotRegionFile(csvPath: string, outPath: string): void {
  writeFileSync(outPath, regionFigure(readFileSync(csvPath, "utf8")));
}

export function plotSweepFiles(csvPaths: string[], axis: "M" | "A" | "N",
                               outPath: string): void {
  const inputs = csvPaths.map((path) => ({
    path,
    text: readFileSync(path, "utf8"),
  }));
  writeFileSync(outPath, sweepFigure(inputs, axis));
}
