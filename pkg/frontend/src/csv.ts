/**
 * Loading and validation of the simulator's observables.csv contract.
 *
 * Scalar rows carry `value` and leave the momentum columns empty;
 * momentum-resolved rows carry `value_k_index`/`value_k` instead.  Any
 * missing header column, unparseable number or NaN cell is reported with
 * the offending column name.
 */

import fs from "node:fs";
import Papa from "papaparse";

export const REQUIRED_COLUMNS = [
  "kind", "N", "gamma", "h", "dh", "omega", "n",
  "value", "value_k_index", "value_k",
] as const;

export class DataError extends Error {}

export interface ObsRow {
  kind: string;
  N: number;
  gamma: number;
  h: number;
  dh: number;
  omega: number;
  n: number;
  value: number | null;
  kIndex: number | null;
  valueK: number | null;
}

function parseNumber(raw: string, column: string, line: number): number {
  const value = Number(raw);
  if (raw.trim() === "" || !Number.isFinite(value)) {
    throw new DataError(
      `column "${column}" has non-numeric value ${JSON.stringify(raw)} on data row ${line}`);
  }
  return value;
}

export function loadObservables(path: string): ObsRow[] {
  if (!fs.existsSync(path)) {
    throw new DataError(`input file not found: ${path}`);
  }
  const text = fs.readFileSync(path, "utf-8");
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new DataError(`CSV parse error: ${first.message} (row ${first.row})`);
  }
  const fields = parsed.meta.fields ?? [];
  const missing = REQUIRED_COLUMNS.filter((c) => !fields.includes(c));
  if (missing.length > 0) {
    throw new DataError(`missing required columns: ${missing.join(", ")}`);
  }
  if (parsed.data.length === 0) {
    throw new DataError("CSV contains a header but no data rows");
  }
  return parsed.data.map((raw, i) => {
    const line = i + 1;
    const scalarRaw = raw.value ?? "";
    const kIdxRaw = raw.value_k_index ?? "";
    const kValRaw = raw.value_k ?? "";
    const row: ObsRow = {
      kind: raw.kind,
      N: parseNumber(raw.N, "N", line),
      gamma: parseNumber(raw.gamma, "gamma", line),
      h: parseNumber(raw.h, "h", line),
      dh: parseNumber(raw.dh, "dh", line),
      omega: parseNumber(raw.omega, "omega", line),
      n: parseNumber(raw.n, "n", line),
      value: scalarRaw.trim() === "" ? null : parseNumber(scalarRaw, "value", line),
      kIndex: kIdxRaw.trim() === "" ? null : parseNumber(kIdxRaw, "value_k_index", line),
      valueK: kValRaw.trim() === "" ? null : parseNumber(kValRaw, "value_k", line),
    };
    if (row.value === null && row.valueK === null) {
      throw new DataError(
        `row ${line} fills neither "value" nor "value_k_index"/"value_k"`);
    }
    if (row.valueK !== null && row.kIndex === null) {
      throw new DataError(`row ${line} has "value_k" without "value_k_index"`);
    }
    return row;
  });
}

export interface Filter {
  kind: string;
  n?: number;
  N?: number;
  dh?: number;
}

function matches(row: ObsRow, f: Filter): boolean {
  if (row.kind !== f.kind) return false;
  if (f.n !== undefined && row.n !== f.n) return false;
  if (f.N !== undefined && row.N !== f.N) return false;
  if (f.dh !== undefined && Math.abs(row.dh - f.dh) > 1e-12) return false;
  return true;
}

/** Scalar rows matching the filter, sorted by (N, h, n). */
export function selectScalar(rows: ObsRow[], f: Filter): ObsRow[] {
  const out = rows.filter((r) => matches(r, f) && r.value !== null);
  out.sort((a, b) => a.N - b.N || a.h - b.h || a.n - b.n);
  return out;
}

/** Curves {N -> [h, value][]} for one scalar kind at a fixed n. */
export function curvesBySize(rows: ObsRow[], f: Filter): Map<number, Array<[number, number]>> {
  const map = new Map<number, Array<[number, number]>>();
  for (const row of selectScalar(rows, f)) {
    if (!map.has(row.N)) map.set(row.N, []);
    map.get(row.N)!.push([row.h, row.value!]);
  }
  for (const pts of map.values()) pts.sort((a, b) => a[0] - b[0]);
  if (map.size === 0) {
    throw new DataError(`no rows of kind "${f.kind}"${f.n !== undefined ? ` at n=${f.n}` : ""}`);
  }
  return map;
}

/** Momentum-resolved series [kIndex, value][] for one kind at a fixed n. */
export function kResolved(rows: ObsRow[], f: Filter): Array<[number, number]> {
  const out = rows
    .filter((r) => matches(r, f) && r.valueK !== null)
    .map((r) => [r.kIndex!, r.valueK!] as [number, number]);
  out.sort((a, b) => a[0] - b[0]);
  if (out.length === 0) {
    throw new DataError(`no momentum-resolved rows of kind "${f.kind}"`);
  }
  return out;
}

export function loadAnalysis(path: string): any {
  if (!fs.existsSync(path)) {
    throw new DataError(`input file not found: ${path}`);
  }
  try {
    return JSON.parse(fs.readFileSync(path, "utf-8"));
  } catch (err) {
    throw new DataError(`analysis JSON unreadable: ${(err as Error).message}`);
  }
}
