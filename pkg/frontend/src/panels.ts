/**
 * Figure panels.
 *
 * Two layouts, matching the publication figures the CLI sweeps were
 * designed for: a curve family on shared axes (second-order coherence of
 * the teleported field for a family of filter ratios, with a legend) and
 * a waterfall of overlaid surfaces (output spectra over (omega, drive)
 * for two squeezing settings).  Rendering never recomputes physics:
 * every plotted point comes verbatim from the CSV rows, and the caption
 * is generated from the CSV header metadata.
 */

import { column } from './csv.js';
import { Manifest, ManifestEntry, ManifestError } from './manifest.js';
import {
  escapeXml,
  formatNumber,
  linearScale,
  makeAxis,
  polyline,
  px,
} from './svg.js';

export interface PanelOptions {
  title?: string;
  xLabel?: string;
  yLabel?: string;
  xLog?: boolean;
  yLog?: boolean;
}

const WIDTH = 760;
const HEIGHT = 540;
const MARGIN = { left: 78, right: 24, top: 46, bottom: 104 };
const PALETTE = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b'];
const SURFACE_COLORS = ['#4878cf', '#d65f5f'];

const PARAM_LABELS: Record<string, string> = {
  gamma_B_over_gamma_s: 'γ_B/γ_s',
  omega_rabi: 'Ω',
  squeezing_db: 'squeezing (dB)',
  lambda: 'λ',
  gamma_s: 'γ_s',
  gamma_A: 'γ_A',
  gamma_B: 'γ_B',
  eta: 'η',
};

function paramLabel(name: string): string {
  return PARAM_LABELS[name] ?? name;
}

/** Quantity-specific axis defaults; everything is in emitter-rate units. */
function axisDefaults(quantity: string): { x: string; y: string; xCol: string; yCol: string } {
  if (quantity === 'spectrum') {
    return { x: 'ω (units of γ_i)', y: 's_out(ω)', xCol: 'omega', yCol: 's_out' };
  }
  return { x: 'τ (units of 1/γ_i)', y: 'g⁽²⁾(τ)', xCol: 'tau', yCol: 'g2' };
}

/**
 * One caption line per manifest, generated from the CSV header.  The
 * swept parameter (and anything it rewrites) is omitted — its values are
 * already in the legend or on the depth axis.
 */
function captionLines(manifests: Manifest[]): string[] {
  return manifests.map((m) => {
    const sweep = m.entries[0]?.sweepParam ?? '';
    const hidden = new Set([sweep]);
    if (sweep === 'gamma_B_over_gamma_s') hidden.add('gamma_s');
    if (sweep === 'squeezing_db') hidden.add('lambda');
    const parts: string[] = [];
    for (const [key, label] of [
      ['omega_rabi', 'Ω'],
      ['gamma_B', 'γ_B'],
      ['gamma_A', 'γ_A'],
      ['eta', 'η'],
      ['lambda', 'λ'],
    ] as const) {
      if (!hidden.has(key)) parts.push(`${label} = ${formatNumber(m.parameters[key])}`);
    }
    parts.push(`seed ${m.seed}`);
    return parts.join(', ');
  });
}

function svgDocument(body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
    `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">\n` +
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>\n` +
    body +
    `</svg>\n`
  );
}

function titleAndCaption(title: string, lines: string[]): string {
  let out = `<text x="${WIDTH / 2}" y="26" text-anchor="middle" font-size="16">${escapeXml(title)}</text>\n`;
  lines.forEach((line, i) => {
    const y = HEIGHT - 34 + 16 * i;
    out += `<text x="${WIDTH / 2}" y="${y}" text-anchor="middle" font-size="11" fill="#444">${escapeXml(line)}</text>\n`;
  });
  return out;
}

function drawFrame(
  xAxis: { ticks: number[]; scale: (v: number) => number },
  yAxis: { ticks: number[]; scale: (v: number) => number },
  xLabel: string,
  yLabel: string,
): string {
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  let out = `<g stroke="#222" fill="none">` +
    `<path d="M${x0},${y1}L${x0},${y0}L${x1},${y0}"/></g>\n`;
  out += '<g font-size="11" fill="#222">\n';
  for (const t of xAxis.ticks) {
    const x = xAxis.scale(t);
    out += `<line x1="${px(x)}" y1="${y0}" x2="${px(x)}" y2="${y0 + 5}" stroke="#222"/>`;
    out += `<text x="${px(x)}" y="${y0 + 18}" text-anchor="middle">${escapeXml(formatNumber(t))}</text>\n`;
  }
  for (const t of yAxis.ticks) {
    const y = yAxis.scale(t);
    out += `<line x1="${x0 - 5}" y1="${px(y)}" x2="${x0}" y2="${px(y)}" stroke="#222"/>`;
    out += `<text x="${x0 - 9}" y="${px(y + 4)}" text-anchor="end">${escapeXml(formatNumber(t))}</text>\n`;
  }
  out += '</g>\n';
  out += `<text x="${(x0 + x1) / 2}" y="${y0 + 38}" text-anchor="middle" font-size="13">${escapeXml(xLabel)}</text>\n`;
  out += `<text x="22" y="${(y0 + y1) / 2}" text-anchor="middle" font-size="13" ` +
    `transform="rotate(-90 22 ${(y0 + y1) / 2})">${escapeXml(yLabel)}</text>\n`;
  return out;
}

function legendEntryLabel(entry: ManifestEntry): string {
  if (entry.sweepValue === null) return entry.file;
  return `${paramLabel(entry.sweepParam)} = ${formatNumber(entry.sweepValue)}`;
}

/** Fig. 5-style panel: one curve per sweep value on shared axes. */
export function renderCurveFamily(manifest: Manifest, options: PanelOptions = {}): string {
  const defaults = axisDefaults(manifest.quantity);
  const series = manifest.entries.map((entry) => ({
    entry,
    xs: column(entry.table, defaults.xCol),
    ys: column(entry.table, defaults.yCol),
  }));

  let xMin = Infinity;
  let xMax = -Infinity;
  let yMin = Infinity;
  let yMax = -Infinity;
  for (const s of series) {
    for (const v of s.xs) {
      xMin = Math.min(xMin, v);
      xMax = Math.max(xMax, v);
    }
    for (const v of s.ys) {
      yMin = Math.min(yMin, v);
      yMax = Math.max(yMax, v);
    }
  }
  if (options.yLog && yMin <= 0) {
    throw new ManifestError(manifest.path, 'log y-axis requested but data has values <= 0');
  }
  if (!options.yLog) {
    yMin = Math.min(0, yMin);
    yMax *= 1.05;
  }

  const xAxis = makeAxis(xMin, xMax, MARGIN.left, WIDTH - MARGIN.right, Boolean(options.xLog));
  const yAxis = makeAxis(yMin, yMax, HEIGHT - MARGIN.bottom, MARGIN.top, Boolean(options.yLog));

  let body = drawFrame(xAxis, yAxis, options.xLabel ?? defaults.x, options.yLabel ?? defaults.y);
  series.forEach((s, i) => {
    const d = polyline(s.xs.map(xAxis.scale), s.ys.map(yAxis.scale));
    body += `<path class="curve" d="${d}" fill="none" ` +
      `stroke="${PALETTE[i % PALETTE.length]}" stroke-width="1.8"/>\n`;
  });

  const lx = WIDTH - MARGIN.right - 190;
  let ly = MARGIN.top + 12;
  body += '<g class="legend" font-size="12">\n';
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    body += `<line x1="${lx}" y1="${ly - 4}" x2="${lx + 26}" y2="${ly - 4}" ` +
      `stroke="${color}" stroke-width="1.8"/>`;
    body += `<text x="${lx + 32}" y="${ly}">${escapeXml(legendEntryLabel(s.entry))}</text>\n`;
    ly += 18;
  });
  body += '</g>\n';

  const title = options.title ?? (manifest.quantity === 'g2'
    ? 'Teleported-field photon correlations'
    : 'Teleported-field spectra');
  body += titleAndCaption(title, captionLines([manifest]));
  return svgDocument(body);
}

/** Squeezing label for a surface, derived from the header's λ. */
function squeezingLabel(manifest: Manifest): string {
  const lam = manifest.parameters.lambda;
  const db = lam >= 1 ? Infinity : -20 * Math.log10((1 - lam) / (1 + lam));
  return `${formatNumber(Math.round(db * 100) / 100)} dB`;
}

/**
 * Fig. 3-style panel: one waterfall surface per manifest (sweep index as
 * the depth axis), overlaid with shared scales.
 */
export function renderDualSurface(manifests: Manifest[], options: PanelOptions = {}): string {
  const defaults = axisDefaults(manifests[0].quantity || 'spectrum');
  const units = manifests[0].units;
  for (const m of manifests) {
    if (m.units !== units) {
      throw new ManifestError(m.path, `unit mismatch between panel inputs: "${m.units}" vs "${units}"`);
    }
  }

  const surfaces = manifests.map((manifest) => ({
    manifest,
    series: manifest.entries.map((entry) => ({
      entry,
      xs: column(entry.table, defaults.xCol),
      ys: column(entry.table, defaults.yCol),
    })),
  }));

  let xMin = Infinity;
  let xMax = -Infinity;
  let yMax = 0;
  let depth = 0;
  for (const surf of surfaces) {
    depth = Math.max(depth, surf.series.length);
    for (const s of surf.series) {
      for (const v of s.xs) {
        xMin = Math.min(xMin, v);
        xMax = Math.max(xMax, v);
      }
      for (const v of s.ys) yMax = Math.max(yMax, v);
    }
  }
  if (yMax <= 0) yMax = 1;

  // Waterfall projection: sweep index k shifts each trace right and up.
  const stepX = 14;
  const stepY = 22;
  const plotW = WIDTH - MARGIN.left - MARGIN.right - stepX * (depth - 1);
  const baseY = HEIGHT - MARGIN.bottom;
  const traceH = baseY - MARGIN.top - stepY * (depth - 1);
  const xScale = linearScale(xMin, xMax, MARGIN.left, MARGIN.left + plotW);
  const zScale = (v: number) => (v / yMax) * traceH;

  let body = '';
  // Back-to-front painter's order so near traces occlude far ones.
  for (let k = depth - 1; k >= 0; k -= 1) {
    for (let j = surfaces.length - 1; j >= 0; j -= 1) {
      const surf = surfaces[j];
      if (k >= surf.series.length) continue;
      const s = surf.series[k];
      const y0 = baseY - stepY * k;
      const xs = s.xs.map((v) => xScale(v) + stepX * k);
      const ys = s.ys.map((v) => y0 - zScale(v));
      const d = polyline(xs, ys) +
        `L${px(xs[xs.length - 1])},${px(y0)}L${px(xs[0])},${px(y0)}Z`;
      const color = SURFACE_COLORS[j % SURFACE_COLORS.length];
      body += `<path class="surface surface-${j}" d="${d}" fill="${color}" ` +
        `fill-opacity="0.25" stroke="${color}" stroke-width="1.2"/>\n`;
    }
  }

  // Frequency axis along the front (k = 0) trace baseline.
  const xTicks = makeAxis(xMin, xMax, 0, 1, false).ticks;
  body += `<g stroke="#222" fill="none"><path d="M${MARGIN.left},${baseY}L${MARGIN.left + plotW},${baseY}"/></g>\n`;
  body += '<g font-size="11" fill="#222">\n';
  for (const t of xTicks) {
    const x = xScale(t);
    body += `<line x1="${px(x)}" y1="${baseY}" x2="${px(x)}" y2="${baseY + 5}" stroke="#222"/>`;
    body += `<text x="${px(x)}" y="${baseY + 18}" text-anchor="middle">${escapeXml(formatNumber(t))}</text>\n`;
  }
  body += '</g>\n';
  body += `<text x="${MARGIN.left + plotW / 2}" y="${baseY + 38}" text-anchor="middle" font-size="13">` +
    `${escapeXml(options.xLabel ?? defaults.x)}</text>\n`;

  // Depth-axis annotation along the waterfall direction.
  const sweepParam = surfaces[0].series[0].entry.sweepParam;
  const first = surfaces[0].series[0].entry.sweepValue;
  const last = surfaces[0].series[surfaces[0].series.length - 1].entry.sweepValue;
  const depthLabel = first === null || last === null
    ? paramLabel(sweepParam)
    : `${paramLabel(sweepParam)}: ${formatNumber(first)} … ${formatNumber(last)}`;
  body += `<text x="${MARGIN.left + plotW + stepX * (depth - 1) - 6}" ` +
    `y="${baseY - stepY * (depth - 1) - 8}" text-anchor="end" font-size="12" fill="#444">` +
    `${escapeXml(depthLabel)}</text>\n`;
  body += `<text x="22" y="${(baseY + MARGIN.top) / 2}" text-anchor="middle" font-size="13" ` +
    `transform="rotate(-90 22 ${(baseY + MARGIN.top) / 2})">${escapeXml(options.yLabel ?? defaults.y)}</text>\n`;

  const lx = MARGIN.left + 8;
  let ly = MARGIN.top + 12;
  body += '<g class="legend" font-size="12">\n';
  surfaces.forEach((surf, j) => {
    const color = SURFACE_COLORS[j % SURFACE_COLORS.length];
    body += `<rect x="${lx}" y="${ly - 10}" width="16" height="10" fill="${color}" fill-opacity="0.35" stroke="${color}"/>`;
    body += `<text x="${lx + 22}" y="${ly}">${escapeXml(squeezingLabel(surf.manifest))}</text>\n`;
    ly += 18;
  });
  body += '</g>\n';

  body += titleAndCaption(options.title ?? 'Teleported-field output spectra', captionLines(manifests));
  return svgDocument(body);
}
