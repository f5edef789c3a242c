/** Minimal deterministic SVG construction helpers: scales, ticks, paths. */

export type Scale = (v: number) => number;

export interface Axis {
  scale: Scale;
  ticks: number[];
  log: boolean;
}

/** Affine map from [lo, hi] to [a, b]. */
export function linearScale(lo: number, hi: number, a: number, b: number): Scale {
  const span = hi - lo || 1;
  return (v) => a + ((v - lo) / span) * (b - a);
}

export function logScale(lo: number, hi: number, a: number, b: number): Scale {
  const llo = Math.log10(lo);
  const span = Math.log10(hi) - llo || 1;
  return (v) => a + ((Math.log10(v) - llo) / span) * (b - a);
}

/** Round-valued ticks covering [lo, hi], roughly `count` of them. */
export function linearTicks(lo: number, hi: number, count = 6): number[] {
  const raw = (hi - lo) / Math.max(count, 1);
  const mag = 10 ** Math.floor(Math.log10(raw));
  const step = [1, 2, 2.5, 5, 10].map((m) => m * mag).find((s) => s >= raw) ?? mag;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

/** Decade ticks covering [lo, hi] for a log axis. */
export function logTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(lo) - 1e-9); 10 ** e <= hi * (1 + 1e-9); e += 1) {
    ticks.push(10 ** e);
  }
  return ticks;
}

export function makeAxis(lo: number, hi: number, a: number, b: number, log: boolean): Axis {
  return log
    ? { scale: logScale(lo, hi, a, b), ticks: logTicks(lo, hi), log: true }
    : { scale: linearScale(lo, hi, a, b), ticks: linearTicks(lo, hi), log: false };
}

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

/** Fixed-precision coordinate, so output bytes are deterministic. */
export function px(v: number): string {
  return v.toFixed(2);
}

/** Compact tick / legend label: 0.001 -> "1e-3" below 0.01, else plain. */
export function formatNumber(v: number): string {
  if (v === 0) return '0';
  const abs = Math.abs(v);
  if (abs >= 1e4 || abs < 1e-2) {
    return v.toExponential(Math.abs(Math.log10(abs) % 1) < 1e-9 ? 0 : 1).replace('e+', 'e');
  }
  return String(Number(v.toPrecision(6)));
}

export function polyline(xs: number[], ys: number[]): string {
  const parts: string[] = [];
  for (let i = 0; i < xs.length; i += 1) {
    parts.push(`${i === 0 ? 'M' : 'L'}${px(xs[i])},${px(ys[i])}`);
  }
  return parts.join('');
}
