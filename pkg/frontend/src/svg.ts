/**
 * Tiny deterministic SVG plotting toolkit: linear/log scales, axes,
 * polylines, markers and panel layout.  No timestamps, no randomness and
 * fixed number formatting, so identical inputs produce identical bytes.
 */

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                        "#8c564b", "#17becf", "#7f7f7f"];

export function fmt(x: number, digits = 2): string {
  if (!Number.isFinite(x)) return "0";
  const s = x.toFixed(digits);
  return s === "-0.00" ? "0.00" : s;
}

export function fmtTick(x: number): string {
  if (x === 0) return "0";
  const ax = Math.abs(x);
  if (ax >= 10000 || ax < 0.001) return x.toExponential(1).replace("e+", "e");
  if (ax >= 100) return x.toFixed(0);
  if (ax >= 1) return String(Number(x.toFixed(2)));
  return String(Number(x.toFixed(4)));
}

export interface Scale {
  map(x: number): number;
  domain: [number, number];
  range: [number, number];
  ticks(count: number): number[];
  log: boolean;
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  return {
    domain, range, log: false,
    map: (x) => r0 + ((x - d0) / span) * (r1 - r0),
    ticks: (count) => niceTicks(d0, d1, count),
  };
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const lo = Math.log10(Math.max(domain[0], 1e-300));
  const hi = Math.log10(Math.max(domain[1], 1e-300));
  const inner = linearScale([lo, hi], range);
  return {
    domain, range, log: true,
    map: (x) => inner.map(Math.log10(Math.max(x, 1e-300))),
    ticks: (count) => {
      const out: number[] = [];
      for (let p = Math.ceil(lo); p <= Math.floor(hi); p += 1) out.push(10 ** p);
      if (out.length >= 2) return out;
      return niceTicks(domain[0], domain[1], count);
    },
  };
}

export function niceTicks(lo: number, hi: number, count: number): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step0 = span / Math.max(count, 1);
  const mag = 10 ** Math.floor(Math.log10(step0));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (m * mag >= step0) { step = m * mag; break; }
  }
  const start = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let x = start; x <= hi + 1e-12 * span; x += step) {
    out.push(Math.abs(x) < 1e-12 * span ? 0 : x);
  }
  return out;
}

export function extent(values: number[], pad = 0.05): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (!Number.isFinite(v)) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!(hi >= lo)) return [0, 1];
  const span = hi - lo || Math.abs(hi) || 1;
  return [lo - pad * span, hi + pad * span];
}

export interface PanelSpec {
  x: number;
  y: number;
  width: number;
  height: number;
  title?: string;
}

export class Panel {
  private parts: string[] = [];

  constructor(public spec: PanelSpec, public xs: Scale, public ys: Scale) {}

  polyline(points: Array<[number, number]>, color: string, width = 1.2,
           dash?: string): void {
    const coords = points
      .filter(([x, y]) => Number.isFinite(x) && Number.isFinite(y))
      .map(([x, y]) => `${fmt(this.xs.map(x))},${fmt(this.ys.map(y))}`)
      .join(" ");
    const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<polyline fill="none" stroke="${color}" stroke-width="${width}"${dashAttr} points="${coords}"/>`);
  }

  markers(points: Array<[number, number]>, color: string, r = 2.4): void {
    for (const [x, y] of points) {
      if (!Number.isFinite(x) || !Number.isFinite(y)) continue;
      this.parts.push(
        `<circle cx="${fmt(this.xs.map(x))}" cy="${fmt(this.ys.map(y))}" r="${r}" fill="${color}"/>`);
    }
  }

  hline(y: number, color: string, dash = "4,3"): void {
    const [x0, x1] = this.xs.range;
    this.parts.push(
      `<line x1="${fmt(x0)}" x2="${fmt(x1)}" y1="${fmt(this.ys.map(y))}" ` +
      `y2="${fmt(this.ys.map(y))}" stroke="${color}" stroke-dasharray="${dash}" stroke-width="1"/>`);
  }

  vline(x: number, color: string, dash = "4,3"): void {
    const [y0, y1] = this.ys.range;
    this.parts.push(
      `<line x1="${fmt(this.xs.map(x))}" x2="${fmt(this.xs.map(x))}" y1="${fmt(y0)}" ` +
      `y2="${fmt(y1)}" stroke="${color}" stroke-dasharray="${dash}" stroke-width="1"/>`);
  }

  text(x: number, y: number, content: string, size = 9, anchor = "start"): void {
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" font-size="${size}" text-anchor="${anchor}" ` +
      `font-family="Helvetica,sans-serif">${escapeXml(content)}</text>`);
  }

  axes(xLabel: string, yLabel: string, tickCount = 5): void {
    const { width, height } = this.spec;
    const [xr0, xr1] = this.xs.range;
    const [yr0, yr1] = this.ys.range;
    const frame =
      `<rect x="${fmt(xr0)}" y="${fmt(yr1)}" width="${fmt(xr1 - xr0)}" ` +
      `height="${fmt(yr0 - yr1)}" fill="none" stroke="#333" stroke-width="1"/>`;
    const pieces = [frame];
    for (const t of this.xs.ticks(tickCount)) {
      const px = this.xs.map(t);
      pieces.push(`<line x1="${fmt(px)}" x2="${fmt(px)}" y1="${fmt(yr0)}" y2="${fmt(yr0 - 4)}" stroke="#333" stroke-width="1"/>`);
      pieces.push(`<text x="${fmt(px)}" y="${fmt(yr0 + 11)}" font-size="8" text-anchor="middle" font-family="Helvetica,sans-serif">${escapeXml(fmtTick(t))}</text>`);
    }
    for (const t of this.ys.ticks(tickCount)) {
      const py = this.ys.map(t);
      pieces.push(`<line x1="${fmt(xr0)}" x2="${fmt(xr0 + 4)}" y1="${fmt(py)}" y2="${fmt(py)}" stroke="#333" stroke-width="1"/>`);
      pieces.push(`<text x="${fmt(xr0 - 3)}" y="${fmt(py + 2.5)}" font-size="8" text-anchor="end" font-family="Helvetica,sans-serif">${escapeXml(fmtTick(t))}</text>`);
    }
    pieces.push(`<text x="${fmt((xr0 + xr1) / 2)}" y="${fmt(yr0 + 24)}" font-size="10" text-anchor="middle" font-family="Helvetica,sans-serif">${escapeXml(xLabel)}</text>`);
    pieces.push(`<text x="${fmt(xr0 - 34)}" y="${fmt((yr0 + yr1) / 2)}" font-size="10" text-anchor="middle" font-family="Helvetica,sans-serif" transform="rotate(-90 ${fmt(xr0 - 34)} ${fmt((yr0 + yr1) / 2)})">${escapeXml(yLabel)}</text>`);
    if (this.spec.title) {
      pieces.push(`<text x="${fmt((xr0 + xr1) / 2)}" y="${fmt(yr1 - 5)}" font-size="10" text-anchor="middle" font-weight="bold" font-family="Helvetica,sans-serif">${escapeXml(this.spec.title)}</text>`);
    }
    this.parts.unshift(...pieces);
  }

  legend(entries: Array<[string, string]>, x: number, y: number): void {
    entries.forEach(([label, color], i) => {
      const py = y + 11 * i;
      this.parts.push(`<line x1="${fmt(x)}" x2="${fmt(x + 14)}" y1="${fmt(py)}" y2="${fmt(py)}" stroke="${color}" stroke-width="1.6"/>`);
      this.parts.push(`<text x="${fmt(x + 18)}" y="${fmt(py + 2.5)}" font-size="8" font-family="Helvetica,sans-serif">${escapeXml(label)}</text>`);
    });
  }

  toString(): string {
    return `<g>${this.parts.join("")}</g>`;
  }
}

export function makePanel(spec: PanelSpec, xDomain: [number, number],
                          yDomain: [number, number],
                          opts: { logX?: boolean; logY?: boolean } = {}): Panel {
  const margin = { left: 44, right: 8, top: 18, bottom: 30 };
  const xRange: [number, number] = [spec.x + margin.left, spec.x + spec.width - margin.right];
  const yRange: [number, number] = [spec.y + spec.height - margin.bottom, spec.y + margin.top];
  const xs = opts.logX ? logScale(xDomain, xRange) : linearScale(xDomain, xRange);
  const ys = opts.logY ? logScale(yDomain, yRange) : linearScale(yDomain, yRange);
  return new Panel(spec, xs, ys);
}

export function assemble(width: number, height: number, panels: Panel[],
                         caption?: string): string {
  const body = panels.map((p) => p.toString()).join("\n");
  const cap = caption
    ? `<text x="${fmt(width / 2)}" y="${fmt(height - 6)}" font-size="9" text-anchor="middle" font-family="Helvetica,sans-serif" fill="#555">${escapeXml(caption)}</text>`
    : "";
  return `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">\n` +
    `<rect width="${width}" height="${height}" fill="white"/>\n${body}\n${cap}\n</svg>\n`;
}

function escapeXml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
