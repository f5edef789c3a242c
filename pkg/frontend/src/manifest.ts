/**
 * Manifest loading: a sweep's manifest.csv maps data files to swept
 * parameter values.  Loading resolves every referenced CSV, parses it,
 * and enforces that all files in one panel agree on the units
 * declaration — the renderer refuses to overlay series quoted in
 * different units.
 */

import { dirname, join } from 'node:path';

import { CsvFormatError, DataTable, parseDataTable, parseRawTable } from './csv.js';

export class ManifestError extends Error {
  constructor(path: string, message: string) {
    super(`${path}: ${message}`);
    this.name = 'ManifestError';
  }
}

export interface ManifestEntry {
  /** File name as listed in the manifest (relative to it). */
  file: string;
  sweepParam: string;
  sweepValue: number | null;
  table: DataTable;
}

export interface Manifest {
  path: string;
  units: string;
  seed: string;
  /** Quantity declared by the manifest header (g2, spectrum, ...). */
  quantity: string;
  parameters: Record<string, number>;
  entries: ManifestEntry[];
}

export function loadManifest(path: string): Manifest {
  const raw = parseRawTable(path);

  const fileCol = raw.columns.indexOf('file');
  const paramCol = raw.columns.indexOf('sweep_param');
  const valueCol = raw.columns.indexOf('sweep_value');
  if (fileCol < 0 || paramCol < 0 || valueCol < 0) {
    throw new ManifestError(
      path,
      `not a manifest: expected columns file, sweep_param, sweep_value ` +
        `(has: ${raw.columns.join(', ')})`,
    );
  }
  if (raw.rows.length === 0) {
    throw new ManifestError(path, 'empty manifest: no data files to plot');
  }

  const dir = dirname(path);
  const entries = raw.rows.map((cells) => {
    const file = cells[fileCol].trim();
    const table = parseDataTable(join(dir, file));
    if (table.units !== raw.units) {
      throw new ManifestError(
        path,
        `unit mismatch: ${file} declares "${table.units}" ` +
          `but the manifest declares "${raw.units}"`,
      );
    }
    const rawValue = cells[valueCol].trim();
    const sweepValue = rawValue === '' ? null : Number(rawValue);
    if (sweepValue !== null && !Number.isFinite(sweepValue)) {
      throw new ManifestError(path, `sweep_value is not a number: ${rawValue}`);
    }
    return { file, sweepParam: cells[paramCol].trim(), sweepValue, table };
  });

  return {
    path,
    units: raw.units,
    seed: raw.seed,
    quantity: raw.meta.get('quantity') ?? '',
    parameters: raw.parameters,
    entries,
  };
}

export { CsvFormatError };
