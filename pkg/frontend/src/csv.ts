/** Parsing and validation of the experiment records CSV. */

import Papa from "papaparse";

export const RECORD_COLUMNS = [
  "scheme", "trial", "seed", "N", "M", "A_over_lambda",
  "r_ms_bits", "Rc_bits", "R0_bits", "status", "elapsed_ms", "apv_json",
] as const;

export interface TrialRecord {
  scheme: string;
  trial: number;
  seed: number;
  n_antennas: number;
  grid_points: number;
  region_wavelengths: number;
  r_ms: number;
  rc: number | null;
  r0: number | null;
  status: string;
}

export class SchemaError extends Error {}

function numOrNull(value: string): number | null {
  if (value === undefined || value === null || value.trim() === "") return null;
  const x = Number(value);
  if (!Number.isFinite(x)) throw new SchemaError(`not a number: "${value}"`);
  return x;
}

function num(value: string, column: string): number {
  const x = numOrNull(value);
  if (x === null) throw new SchemaError(`missing value in column ${column}`);
  return x;
}

/** Parse records CSV text; header must carry every schema column. */
export function parseRecords(text: string): TrialRecord[] {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new SchemaError(`CSV parse error on row ${e.row}: ${e.message}`);
  }
  const fields = parsed.meta.fields ?? [];
  for (const column of RECORD_COLUMNS) {
    if (!fields.includes(column)) {
      throw new SchemaError(`records file lacks column ${column}`);
    }
  }
  return parsed.data.map((row) => ({
    scheme: row.scheme,
    trial: num(row.trial, "trial"),
    seed: num(row.seed, "seed"),
    n_antennas: num(row.N, "N"),
    grid_points: num(row.M, "M"),
    region_wavelengths: num(row.A_over_lambda, "A_over_lambda"),
    r_ms: num(row.r_ms_bits, "r_ms_bits"),
    rc: numOrNull(row.Rc_bits),
    r0: numOrNull(row.R0_bits),
    status: row.status,
  }));
}
