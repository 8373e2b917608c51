/** Aggregation of trial records into per-scheme plot series.
 *
 * Figures are built from the CSV alone: points are (requirement, mean rate)
 * with a one-standard-deviation band, averaging over trials at identical
 * requirement values and skipping infeasible records.  No rates are ever
 * recomputed here.
 */

import { TrialRecord } from "./csv.js";

export interface SeriesPoint {
  rMs: number;
  mean: number;
  std: number;
  n: number;
}

export interface Series {
  label: string;
  points: SeriesPoint[];
}

export class GroupingError extends Error {}

export function schemeSeries(records: TrialRecord[]): Series[] {
  const bySchemes = new Map<string, Map<number, number[]>>();
  for (const rec of records) {
    if (rec.status !== "optimal" || rec.rc === null) continue;
    let groups = bySchemes.get(rec.scheme);
    if (!groups) {
      groups = new Map();
      bySchemes.set(rec.scheme, groups);
    }
    const values = groups.get(rec.r_ms) ?? [];
    values.push(rec.rc);
    groups.set(rec.r_ms, values);
  }
  const out: Series[] = [];
  for (const scheme of [...bySchemes.keys()].sort()) {
    const groups = bySchemes.get(scheme)!;
    const points = [...groups.entries()]
      .sort((a, b) => a[0] - b[0])
      .map(([rMs, values]) => {
        const mean = values.reduce((s, v) => s + v, 0) / values.length;
        const varSum = values.reduce((s, v) => s + (v - mean) ** 2, 0);
        return {
          rMs,
          mean,
          std: Math.sqrt(varSum / values.length),
          n: values.length,
        };
      });
    out.push({ label: scheme, points });
  }
  return out;
}

/** Metadata of one sweep input: the axis value plus the held-fixed fields. */
export function sweepValue(records: TrialRecord[], axis: "M" | "A" | "N",
                           path: string): { value: number; rest: string } {
  if (records.length === 0) {
    throw new GroupingError(`${path}: no records to group`);
  }
  const pick = (r: TrialRecord): [number, string] => {
    switch (axis) {
      case "M":
        return [r.grid_points, `N=${r.n_antennas},A=${r.region_wavelengths}`];
      case "A":
        return [r.region_wavelengths, `N=${r.n_antennas}`];
      case "N":
        return [r.n_antennas, `A=${r.region_wavelengths}`];
    }
  };
  const [value, rest] = pick(records[0]);
  for (const rec of records) {
    const [v, q] = pick(rec);
    if (v !== value || q !== rest) {
      throw new GroupingError(
        `${path}: inconsistent ${axis} metadata (${v} vs ${value}; ${q} vs ${rest})`);
    }
  }
  return { value, rest };
}
