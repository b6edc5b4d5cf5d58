import { readFileSync } from 'node:fs';
import Papa from 'papaparse';

export class SchemaError extends Error {}

export interface Table {
  path: string;
  columns: string[];
  rows: Record<string, string>[];
}

/** Parse one of the simulator's CSV tables; empty cells stay as ''. */
export function loadCsv(path: string): Table {
  const text = readFileSync(path, 'utf8');
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new SchemaError(`${path}: CSV parse error: ${first.message}`);
  }
  const columns = parsed.meta.fields ?? [];
  if (parsed.data.length === 0) {
    throw new SchemaError(`${path}: CSV contains no data rows`);
  }
  return { path, columns, rows: parsed.data };
}

export function requireColumns(table: Table, needed: string[]): void {
  for (const column of needed) {
    if (!table.columns.includes(column)) {
      throw new SchemaError(`${table.path}: missing required column '${column}'`);
    }
  }
}

export function numbers(table: Table, column: string): number[] {
  return table.rows.map((row) => {
    const cell = row[column];
    return cell === '' || cell === undefined ? NaN : Number(cell);
  });
}

/** Stable unique values in first-appearance order. */
export function distinct(values: (string | number)[]): (string | number)[] {
  const seen = new Set<string | number>();
  const out: (string | number)[] = [];
  for (const v of values) {
    if (!seen.has(v)) {
      seen.add(v);
      out.push(v);
    }
  }
  return out;
}
