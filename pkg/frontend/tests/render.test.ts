import { createHash } from 'node:crypto';
import { cpSync, existsSync, mkdtempSync, readFileSync, rmSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { fileURLToPath } from 'node:url';
import { afterAll, describe, expect, it } from 'vitest';

import { CsvFormatError, parseDataTable } from '../src/csv.js';
import { loadManifest, ManifestError } from '../src/manifest.js';
import { main, parseArgs, renderPanel, UsageError } from '../src/render.js';

const FIXTURES = fileURLToPath(new URL('./fixtures', import.meta.url));
const FIG5 = join(FIXTURES, 'fig5', 'manifest.csv');
const FIG3_0DB = join(FIXTURES, 'fig3_0db', 'manifest.csv');
const FIG3_25DB = join(FIXTURES, 'fig3_25db', 'manifest.csv');

const tmp = mkdtempSync(join(tmpdir(), 'cvteleport-figures-'));
afterAll(() => rmSync(tmp, { recursive: true, force: true }));

/** Hash of the column row + data rows, the convention the sidecar uses. */
function hashDataSection(path: string): string {
  const lines = readFileSync(path, 'utf8').split('\n').filter((l) => l !== '');
  const data = lines.filter((l) => !l.startsWith('#'));
  return createHash('sha256').update(data.join('\n') + '\n', 'utf8').digest('hex');
}

describe('csv parsing', () => {
  it('reads metadata, columns, and numeric rows', () => {
    const table = parseDataTable(join(FIXTURES, 'fig5', 'g2_000.csv'));
    expect(table.units).toContain('gamma_i');
    expect(table.seed).toBe('0');
    expect(table.parameters.gamma_B).toBe(20);
    expect(table.parameters.omega_rabi).toBe(6);
    expect(table.columns).toEqual(['tau', 'g2']);
    expect(table.rows.length).toBe(161);
    expect(table.rows[0][0]).toBe(0);
  });

  it('refuses files missing required metadata keys', () => {
    const source = readFileSync(join(FIXTURES, 'fig5', 'g2_000.csv'), 'utf8');
    const noSeed = source.split('\n').filter((l) => !l.startsWith('# seed')).join('\n');
    const path = join(tmp, 'no_seed.csv');
    writeFileSync(path, noSeed);
    expect(() => parseDataTable(path)).toThrowError(CsvFormatError);
    expect(() => parseDataTable(path)).toThrowError(/missing required keys: seed/);
  });

  it('refuses files missing the units declaration', () => {
    const source = readFileSync(join(FIXTURES, 'fig5', 'g2_000.csv'), 'utf8');
    const noUnits = source.split('\n').filter((l) => !l.startsWith('# units')).join('\n');
    const path = join(tmp, 'no_units.csv');
    writeFileSync(path, noUnits);
    expect(() => parseDataTable(path)).toThrowError(/missing required keys: units/);
  });

  it('rejects malformed numeric cells', () => {
    const source = readFileSync(join(FIXTURES, 'fig5', 'g2_000.csv'), 'utf8');
    const path = join(tmp, 'bad_cell.csv');
    writeFileSync(path, source.replace(/^0,/m, 'zero,'));
    expect(() => parseDataTable(path)).toThrowError(/not a number/);
  });
});

describe('manifest loading', () => {
  it('resolves every sweep entry with its table', () => {
    const manifest = loadManifest(FIG5);
    expect(manifest.quantity).toBe('g2');
    expect(manifest.entries.length).toBe(4);
    expect(manifest.entries.map((e) => e.sweepValue)).toEqual([0.1, 0.01, 0.001, 0.0001]);
    expect(manifest.entries[0].sweepParam).toBe('gamma_B_over_gamma_s');
  });

  it('rejects an empty manifest without producing an image', () => {
    const dir = join(tmp, 'empty');
    cpSync(join(FIXTURES, 'fig5'), dir, { recursive: true });
    const lines = readFileSync(join(dir, 'manifest.csv'), 'utf8').split('\n');
    const kept = lines.filter((l) => l.startsWith('#') || l.startsWith('file,'));
    writeFileSync(join(dir, 'manifest.csv'), kept.join('\n') + '\n');

    expect(() => loadManifest(join(dir, 'manifest.csv'))).toThrowError(/empty manifest/);
    const out = join(tmp, 'empty.svg');
    expect(main(['--manifest', join(dir, 'manifest.csv'), '--out', out])).toBe(1);
    expect(existsSync(out)).toBe(false);
    expect(existsSync(out + '.json')).toBe(false);
  });

  it('rejects a unit mismatch within one panel', () => {
    const dir = join(tmp, 'mismatch');
    cpSync(join(FIXTURES, 'fig5'), dir, { recursive: true });
    const member = join(dir, 'g2_001.csv');
    writeFileSync(
      member,
      readFileSync(member, 'utf8').replace(/^# units:.*$/m, '# units: rates in MHz'),
    );
    expect(() => loadManifest(join(dir, 'manifest.csv'))).toThrowError(ManifestError);
    expect(() => loadManifest(join(dir, 'manifest.csv'))).toThrowError(/unit mismatch/);
  });
});

describe('argument parsing', () => {
  it('requires --manifest and --out', () => {
    expect(() => parseArgs(['--out', 'x.svg'])).toThrowError(UsageError);
    expect(() => parseArgs(['--manifest', 'm.csv'])).toThrowError(UsageError);
    expect(() => parseArgs(['--manifest', 'm.csv', '--out', 'x.svg', '--bogus']))
      .toThrowError(/unknown argument/);
  });
});

describe('curve-family panel (g2 sweep)', () => {
  const out = join(tmp, 'fig5.svg');
  const code = main(['--manifest', FIG5, '--out', out]);

  it('renders one curve per sweep value with a legend', () => {
    expect(code).toBe(0);
    const svg = readFileSync(out, 'utf8');
    expect(svg.match(/class="curve"/g)?.length).toBe(4);
    expect(svg).toContain('γ_B/γ_s = 1e-4');
    expect(svg).toContain('γ_B/γ_s = 0.1');
    expect(svg).toContain('g⁽²⁾(τ)');
    expect(svg).toContain('seed 0');
  });

  it('writes a sidecar whose hashes match the CSV data sections', () => {
    const sidecar = JSON.parse(readFileSync(out + '.json', 'utf8'));
    expect(sidecar.panel).toBe('curve-family');
    expect(sidecar.series.length).toBe(4);
    for (const s of sidecar.series) {
      expect(s.sha256).toBe(hashDataSection(join(FIXTURES, 'fig5', s.file)));
    }
  });

  it('is deterministic: identical inputs give identical bytes', () => {
    const out2 = join(tmp, 'fig5_again.svg');
    expect(main(['--manifest', FIG5, '--out', out2])).toBe(0);
    expect(readFileSync(out2, 'utf8')).toBe(readFileSync(out, 'utf8'));
    const strip = (p: string) =>
      JSON.stringify({ ...JSON.parse(readFileSync(p, 'utf8')), image: '' });
    expect(strip(out2 + '.json')).toBe(strip(out + '.json'));
  });
});

describe('dual-surface panel (spectrum sweeps at two squeezing levels)', () => {
  const out = join(tmp, 'fig3.svg');
  const code = main(['--manifest', FIG3_0DB, '--manifest', FIG3_25DB, '--out', out]);

  it('overlays both surfaces with squeezing labels', () => {
    expect(code).toBe(0);
    const svg = readFileSync(out, 'utf8');
    expect(svg.match(/class="surface surface-0"/g)?.length).toBe(10);
    expect(svg.match(/class="surface surface-1"/g)?.length).toBe(10);
    expect(svg).toContain('0 dB');
    expect(svg).toContain('25 dB');
    expect(svg).toContain('ω (units of γ_i)');
  });

  it('sidecar covers every series from both manifests and hash-matches', () => {
    const sidecar = JSON.parse(readFileSync(out + '.json', 'utf8'));
    expect(sidecar.panel).toBe('surface');
    expect(sidecar.series.length).toBe(20);
    for (const s of sidecar.series) {
      const dir = s.manifest.includes('fig3_0db') ? 'fig3_0db' : 'fig3_25db';
      expect(s.sha256).toBe(hashDataSection(join(FIXTURES, dir, s.file)));
    }
  });

  it('panel type defaults from the manifest quantity', () => {
    const { sidecar } = renderPanel(parseArgs(['--manifest', FIG3_0DB, '--out', 'x.svg']));
    expect(sidecar.panel).toBe('surface');
  });

  it('refuses two manifests for a curve-family panel', () => {
    expect(main(['--manifest', FIG5, '--manifest', FIG5, '--out', join(tmp, 'nope.svg'),
                 '--panel', 'curve-family'])).toBe(1);
    expect(existsSync(join(tmp, 'nope.svg'))).toBe(false);
  });
});
