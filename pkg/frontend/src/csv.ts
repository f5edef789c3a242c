/**
 * Parser for the CSV format written by the `cvteleport` CLI.
 *
 * Files start with `#`-prefixed header lines carrying key = value
 * metadata (code version, units, seed, every physical parameter), then a
 * column-name row, then data rows.  The renderer never recomputes
 * physics: the `dataText` field captures the exact bytes of the column
 * and data rows so the plotted series can be hashed and verified against
 * the source file.
 */

import { readFileSync } from 'node:fs';

/** Physical parameter keys every CLI-produced CSV header must carry. */
export const PARAMETER_KEYS = [
  'gamma_i',
  'gamma_s',
  'gamma_A',
  'gamma_B',
  'eta',
  'omega_rabi',
  'lambda',
] as const;

export class CsvFormatError extends Error {
  readonly path: string;

  constructor(path: string, message: string) {
    super(`${path}: ${message}`);
    this.name = 'CsvFormatError';
    this.path = path;
  }
}

/** A parsed CSV with raw (string) cells; used for the manifest file. */
export interface RawTable {
  path: string;
  /** All `key = value` pairs from the `#` header lines. */
  meta: Map<string, string>;
  /** Verbatim units declaration from the `# units: ...` line. */
  units: string;
  seed: string;
  /** Physical parameters from the header, keyed per PARAMETER_KEYS. */
  parameters: Record<string, number>;
  columns: string[];
  rows: string[][];
  /** Column row plus data rows, byte-exact, newline-terminated. */
  dataText: string;
}

/** A data series CSV: same as RawTable but with numeric cells. */
export interface DataTable extends Omit<RawTable, 'rows'> {
  rows: number[][];
}

export function parseRawTable(path: string): RawTable {
  let text: string;
  try {
    text = readFileSync(path, 'utf8');
  } catch (err) {
    throw new CsvFormatError(path, `cannot read file: ${(err as Error).message}`);
  }

  const lines = text.split('\n');
  if (lines.at(-1) === '') lines.pop();

  const meta = new Map<string, string>();
  let units = '';
  let i = 0;
  for (; i < lines.length && lines[i].startsWith('#'); i += 1) {
    const body = lines[i].slice(1).trim();
    if (body.startsWith('units:')) {
      units = body.slice('units:'.length).trim();
      continue;
    }
    const eq = body.indexOf('=');
    if (eq >= 0) {
      meta.set(body.slice(0, eq).trim(), body.slice(eq + 1).trim());
    }
  }

  const missing: string[] = [];
  if (units === '') missing.push('units');
  if (!meta.has('seed')) missing.push('seed');
  const parameters: Record<string, number> = {};
  for (const key of PARAMETER_KEYS) {
    const raw = meta.get(key);
    if (raw === undefined) {
      missing.push(key);
      continue;
    }
    const value = Number(raw);
    if (!Number.isFinite(value)) {
      throw new CsvFormatError(path, `parameter ${key} is not a number: ${raw}`);
    }
    parameters[key] = value;
  }
  if (missing.length > 0) {
    throw new CsvFormatError(
      path,
      `header metadata is missing required keys: ${missing.join(', ')}`,
    );
  }

  if (i >= lines.length) {
    throw new CsvFormatError(path, 'no column row after the header');
  }
  const columns = lines[i].split(',').map((c) => c.trim());
  const dataLines = lines.slice(i);
  const rows = lines.slice(i + 1).map((line, j) => {
    const cells = line.split(',');
    if (cells.length !== columns.length) {
      throw new CsvFormatError(
        path,
        `row ${j + 1} has ${cells.length} cells, expected ${columns.length}`,
      );
    }
    return cells;
  });

  return {
    path,
    meta,
    units,
    seed: meta.get('seed') ?? '',
    parameters,
    columns,
    rows,
    dataText: dataLines.join('\n') + '\n',
  };
}

export function parseDataTable(path: string): DataTable {
  const raw = parseRawTable(path);
  const rows = raw.rows.map((cells, j) =>
    cells.map((cell, k) => {
      const value = Number(cell);
      if (cell.trim() === '' || !Number.isFinite(value)) {
        throw new CsvFormatError(
          path,
          `row ${j + 1}, column ${raw.columns[k]}: not a number: ${cell}`,
        );
      }
      return value;
    }),
  );
  return { ...raw, rows };
}

/** Pull one named column out of a data table. */
export function column(table: DataTable, name: string): number[] {
  const k = table.columns.indexOf(name);
  if (k < 0) {
    throw new CsvFormatError(
      table.path,
      `missing column ${name} (has: ${table.columns.join(', ')})`,
    );
  }
  return table.rows.map((row) => row[k]);
}
