#!/usr/bin/env node
/**
 * Render cvteleport CLI CSV output into an SVG figure panel.
 *
 * Usage:
 *   render --manifest <manifest.csv> [--manifest <manifest.csv>] --out <img.svg>
 *          [--panel curve-family|surface] [--title T] [--xlabel L] [--ylabel L]
 *          [--xlog] [--ylog]
 *
 * The panel type defaults from the manifest's declared quantity: g2
 * sweeps become a curve-family panel, spectrum sweeps a (possibly dual)
 * waterfall-surface panel.  Next to the image a `<img>.json` sidecar
 * records a sha256 hash of each plotted data series, taken over the
 * column row and data rows of the source CSV, so the figure can be
 * verified against the files it was drawn from.
 */

import { createHash } from 'node:crypto';
import { writeFileSync } from 'node:fs';
import { basename } from 'node:path';
import { pathToFileURL } from 'node:url';

import { CsvFormatError, loadManifest, Manifest, ManifestError } from './manifest.js';
import { PanelOptions, renderCurveFamily, renderDualSurface } from './panels.js';

export const VERSION = '0.1.0';

export class UsageError extends Error {}

interface Args {
  manifests: string[];
  out: string;
  panel: 'curve-family' | 'surface' | null;
  options: PanelOptions;
}

export function parseArgs(argv: string[]): Args {
  const args: Args = { manifests: [], out: '', panel: null, options: {} };
  for (let i = 0; i < argv.length; i += 1) {
    const flag = argv[i];
    const needValue = () => {
      i += 1;
      if (i >= argv.length) throw new UsageError(`${flag} needs a value`);
      return argv[i];
    };
    switch (flag) {
      case '--manifest':
        args.manifests.push(needValue());
        break;
      case '--out':
        args.out = needValue();
        break;
      case '--panel': {
        const value = needValue();
        if (value !== 'curve-family' && value !== 'surface') {
          throw new UsageError(`--panel must be curve-family or surface, got ${value}`);
        }
        args.panel = value;
        break;
      }
      case '--title':
        args.options.title = needValue();
        break;
      case '--xlabel':
        args.options.xLabel = needValue();
        break;
      case '--ylabel':
        args.options.yLabel = needValue();
        break;
      case '--xlog':
        args.options.xLog = true;
        break;
      case '--ylog':
        args.options.yLog = true;
        break;
      default:
        throw new UsageError(`unknown argument ${flag}`);
    }
  }
  if (args.manifests.length === 0) throw new UsageError('--manifest is required');
  if (args.manifests.length > 2) throw new UsageError('at most two manifests per panel');
  if (!args.out) throw new UsageError('--out is required');
  return args;
}

function sha256(text: string): string {
  return createHash('sha256').update(text, 'utf8').digest('hex');
}

export interface SidecarSeries {
  manifest: string;
  file: string;
  sweep_param: string;
  sweep_value: number | null;
  sha256: string;
}

export interface Sidecar {
  generator: string;
  image: string;
  panel: string;
  units: string;
  series: SidecarSeries[];
}

export function buildSidecar(image: string, panel: string, manifests: Manifest[]): Sidecar {
  const series: SidecarSeries[] = [];
  for (const m of manifests) {
    for (const entry of m.entries) {
      series.push({
        manifest: m.path,
        file: entry.file,
        sweep_param: entry.sweepParam,
        sweep_value: entry.sweepValue,
        sha256: sha256(entry.table.dataText),
      });
    }
  }
  return {
    generator: `cvteleport-figures ${VERSION}`,
    image: basename(image),
    panel,
    units: manifests[0].units,
    series,
  };
}

/** Render one panel; returns the SVG and sidecar without touching disk. */
export function renderPanel(args: Args): { svg: string; sidecar: Sidecar } {
  const manifests = args.manifests.map(loadManifest);
  const panel = args.panel ?? (manifests[0].quantity === 'spectrum' ? 'surface' : 'curve-family');
  let svg: string;
  if (panel === 'curve-family') {
    if (manifests.length !== 1) {
      throw new UsageError('curve-family panels take exactly one manifest');
    }
    svg = renderCurveFamily(manifests[0], args.options);
  } else {
    svg = renderDualSurface(manifests, args.options);
  }
  return { svg, sidecar: buildSidecar(args.out, panel, manifests) };
}

export function main(argv: string[]): number {
  let rendered: { svg: string; sidecar: Sidecar };
  let out = '';
  try {
    const args = parseArgs(argv);
    out = args.out;
    rendered = renderPanel(args);
  } catch (err) {
    if (err instanceof UsageError || err instanceof ManifestError || err instanceof CsvFormatError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    throw err;
  }
  try {
    writeFileSync(out, rendered.svg);
    writeFileSync(`${out}.json`, JSON.stringify(rendered.sidecar, null, 2) + '\n');
  } catch (err) {
    console.error(`error: cannot write output: ${(err as Error).message}`);
    return 1;
  }
  console.log(`wrote ${out} and ${out}.json (${rendered.sidecar.series.length} series)`);
  return 0;
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
