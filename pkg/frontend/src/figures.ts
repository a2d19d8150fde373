/**
 * Figure builders: each consumes observables.csv + analysis.json from a run
 * directory and returns a complete SVG document.
 */

import path from "node:path";

import { DataError, ObsRow, curvesBySize, kResolved, loadAnalysis,
         loadObservables, selectScalar } from "./csv.js";
import { PALETTE, Panel, assemble, extent, makePanel } from "./svg.js";

type Curve = Array<[number, number]>;

export interface FigureInputs {
  rows: ObsRow[];
  analysis: any;
  dir: string;
}

export function loadInputs(dir: string): FigureInputs {
  const rows = loadObservables(path.join(dir, "observables.csv"));
  const analysis = loadAnalysis(path.join(dir, "analysis.json"));
  return { rows, analysis, dir };
}

/** Peak location/value by a quadratic through the three highest samples. */
export function refinePeak(curve: Curve): { h: number; value: number } {
  let j = 0;
  curve.forEach((pt, i) => { if (pt[1] > curve[j][1]) j = i; });
  if (j === 0 || j === curve.length - 1) {
    throw new DataError("curve maximum sits on the grid boundary");
  }
  const [x0, y0] = curve[j - 1];
  const [x1, y1] = curve[j];
  const [x2, y2] = curve[j + 1];
  const d1 = (y1 - y0) / (x1 - x0);
  const d2 = (y2 - y1) / (x2 - x1);
  const a = (d2 - d1) / (x2 - x0);
  if (a >= 0) return { h: x1, value: y1 };
  const b = d1 - a * (x0 + x1);
  const hStar = -b / (2 * a);
  const c = y1 - a * x1 * x1 - b * x1;
  return { h: hStar, value: a * hStar * hStar + b * hStar + c };
}

function logRescale(curve: Curve, N: number, nu: number): Curve {
  const peak = refinePeak(curve);
  return curve.map(([h, v]) => [
    Math.pow(N, 1 / nu) * (h - peak.h),
    1 - Math.exp(v - peak.value),
  ]);
}

function fidelityRescale(curve: Curve, N: number, nu: number, r: number): Curve {
  const peak = refinePeak(curve);
  return curve.map(([h, v]) => {
    const dh = h - peak.h;
    const x = Math.pow(N, 1 / nu) * Math.sign(dh) * Math.pow(Math.abs(dh), r);
    return [x, (peak.value - v) / v];
  });
}

function sizesOf(curves: Map<number, Curve>): number[] {
  return [...curves.keys()].sort((a, b) => a - b);
}

function curvePanel(spec: { x: number; y: number; width: number; height: number; title?: string },
                    curves: Map<number, Curve>, xLabel: string, yLabel: string,
                    opts: { logY?: boolean } = {}): Panel {
  const xs: number[] = [];
  const ys: number[] = [];
  for (const pts of curves.values()) {
    for (const [x, y] of pts) { xs.push(x); ys.push(y); }
  }
  const panel = makePanel(spec, extent(xs, 0.02), extent(ys), { logY: opts.logY });
  const sizes = sizesOf(curves);
  sizes.forEach((N, i) => {
    panel.polyline(curves.get(N)!, PALETTE[i % PALETTE.length]);
  });
  panel.axes(xLabel, yLabel);
  panel.legend(sizes.map((N, i) => [`N=${N}`, PALETTE[i % PALETTE.length]]),
               spec.x + spec.width - 70, spec.y + 26);
  return panel;
}

// ---------------------------------------------------------------------------

function fig1({ rows, analysis }: FigureInputs): string {
  const nDriven = maxN(analysis);
  const curves = curvesBySize(rows, { kind: "dC_dh", n: nDriven });
  const main = curvePanel({ x: 0, y: 0, width: 360, height: 300,
                            title: `dC/dh after n=${nDriven} cycles` },
                          curves, "h", "dC/dh");

  const peaks: Curve = sizesOf(curves).map((N) => [N, refinePeak(curves.get(N)!).value]);
  const inset1 = makePanel({ x: 370, y: 0, width: 220, height: 140,
                             title: "peak vs ln N" },
                           extent(peaks.map((p) => p[0]), 0.2),
                           extent(peaks.map((p) => p[1])), { logX: true });
  inset1.markers(peaks, PALETTE[0]);
  const fit = analysis?.per_n?.[String(nDriven)]?.log_divergence;
  if (fit) {
    const [n0, n1] = [peaks[0][0] / 1.2, peaks[peaks.length - 1][0] * 1.2];
    inset1.polyline([[n0, fit.slope * Math.log(n0) + fit.intercept],
                     [n1, fit.slope * Math.log(n1) + fit.intercept]],
                    "#333", 1, "4,3");
    inset1.text(380 + 40, 28, `R2=${fit.r2.toFixed(4)}`, 8);
  }
  inset1.axes("N", "peak");

  const rescaled = new Map<number, Curve>();
  for (const N of sizesOf(curves)) rescaled.set(N, logRescale(curves.get(N)!, N, 1.0));
  const inset2 = curvePanel({ x: 370, y: 160, width: 220, height: 140,
                              title: "collapse, nu=1" },
                            rescaled, "N (h - h_c^N)", "1 - exp(y - y*)");
  return assemble(600, 330, [main, inset1, inset2],
                  "nearest-neighbor concurrence derivative: curves, log peaks, collapse");
}

function chiZ({ rows, analysis }: FigureInputs): string {
  const nDriven = maxN(analysis);
  const curves = curvesBySize(rows, { kind: "chi_z", n: nDriven });
  const main = curvePanel({ x: 0, y: 0, width: 360, height: 300,
                            title: `chi_z after n=${nDriven} cycles` },
                          curves, "h", "chi_z");
  const rescaled = new Map<number, Curve>();
  for (const N of sizesOf(curves)) rescaled.set(N, logRescale(curves.get(N)!, N, 1.0));
  const inset = curvePanel({ x: 370, y: 0, width: 220, height: 160,
                             title: "collapse, nu=1" },
                           rescaled, "N (h - h_c^N)", "1 - exp(y - y*)");
  return assemble(600, 330, [main, inset],
                  "transverse susceptibility under driving");
}

function fig2({ rows, analysis }: FigureInputs): string {
  const nLast = maxN(analysis);
  const curves = curvesBySize(rows, { kind: "chi_F", n: nLast });
  const rInfo = analysis?.per_n?.[String(nLast)]?.collapse;
  const r = rInfo && typeof rInfo.r === "number" ? rInfo.r : 1.0;
  const rescaled = new Map<number, Curve>();
  for (const N of sizesOf(curves)) {
    rescaled.set(N, fidelityRescale(curves.get(N)!, N, 1.0, r));
  }
  const main = curvePanel({ x: 0, y: 0, width: 340, height: 300,
                            title: `collapse at n=${nLast}, r=${r.toFixed(2)}` },
                          rescaled, "N sgn(dh)|dh|^r", "(y* - y)/y");

  const peaks: Curve = sizesOf(curves).map((N) => [N, refinePeak(curves.get(N)!).value]);
  const inset1 = makePanel({ x: 350, y: 0, width: 240, height: 140,
                             title: "peak vs N" },
                           extent(peaks.map((p) => p[0]), 0.15),
                           extent(peaks.map((p) => p[1])), { logX: true, logY: true });
  inset1.markers(peaks, PALETTE[1]);
  inset1.axes("N", "chi_F(h_c^N)");

  const rSeries: Curve = [];
  for (const [nStr, entry] of Object.entries<any>(analysis?.per_n ?? {})) {
    if (entry?.collapse && typeof entry.collapse.r === "number") {
      rSeries.push([Number(nStr), entry.collapse.r]);
    }
  }
  rSeries.sort((a, b) => a[0] - b[0]);
  if (rSeries.length === 0) throw new DataError("analysis lacks collapse exponents r(n)");
  const inset2 = makePanel({ x: 350, y: 160, width: 240, height: 140,
                             title: "exponent r(n)" },
                           extent(rSeries.map((p) => p[0]), 0.1),
                           extent(rSeries.map((p) => p[1]), 0.2));
  inset2.polyline(rSeries, PALETTE[2]);
  inset2.markers(rSeries, PALETTE[2]);
  inset2.axes("n", "r");
  return assemble(600, 330, [main, inset1, inset2],
                  "driven fidelity susceptibility: collapse, peak law, r(n)");
}

function fig3({ rows, analysis }: FigureInputs): string {
  const amplitudes = analysis?.amplitudes;
  if (!amplitudes || Object.keys(amplitudes).length === 0) {
    throw new DataError("analysis lacks breakdown amplitudes");
  }
  const dhs = Object.keys(amplitudes).map(Number).sort((a, b) => a - b);
  const sizes = (amplitudes[String(dhs[0])]?.taus ?? []).map((t: any) => t.N);
  const tauPts = new Map<number, Curve>();
  const trecByN = new Map<number, number>();
  for (const dh of dhs) {
    for (const rec of amplitudes[String(dh)].taus) {
      if (!tauPts.has(rec.N)) tauPts.set(rec.N, []);
      tauPts.get(rec.N)!.push([dh, rec.tau_time]);
      trecByN.set(rec.N, rec.t_rec);
    }
  }
  const allTau: number[] = [];
  for (const pts of tauPts.values()) allTau.push(...pts.map((p) => p[1]));
  allTau.push(...trecByN.values());
  const upperLeft = makePanel({ x: 0, y: 0, width: 300, height: 240,
                                title: "breakdown vs amplitude" },
                              extent(dhs, 0.1), extent(allTau), { logX: true });
  let ci = 0;
  for (const N of [...tauPts.keys()].sort((a, b) => a - b)) {
    const color = PALETTE[ci % PALETTE.length];
    upperLeft.polyline(tauPts.get(N)!, color);
    upperLeft.markers(tauPts.get(N)!, color);
    upperLeft.hline(trecByN.get(N)!, color);
    ci += 1;
  }
  upperLeft.axes("dh", "tau_bd, t_rec");
  upperLeft.legend([...tauPts.keys()].sort((a, b) => a - b)
    .map((N, i) => [`N=${N}`, PALETTE[i % PALETTE.length]]), 210, 30);

  const panelNs = Object.keys(amplitudes[String(dhs[dhs.length - 1])].panels ?? {})
    .map(Number).sort((a, b) => a - b);
  if (panelNs.length === 0) throw new DataError("analysis lacks strong-drive panels");
  const strongDh = dhs[dhs.length - 1];
  const panels: Panel[] = [upperLeft];
  panelNs.slice(0, 3).forEach((n, idx) => {
    const curves = curvesBySize(rows, { kind: "chi_z", n, dh: strongDh });
    const rescaled = new Map<number, Curve>();
    for (const N of sizesOf(curves)) {
      try {
        rescaled.set(N, logRescale(curves.get(N)!, N, 1.0));
      } catch {
        // peak lost: the departed curve is simply not drawable in scaled form
      }
    }
    if (rescaled.size === 0) throw new DataError(`no rescalable curves at n=${n}`);
    const pos = [{ x: 310, y: 0 }, { x: 0, y: 250 }, { x: 310, y: 250 }][idx];
    panels.push(curvePanel({ ...pos, width: 300, height: 240,
                             title: `dh=${strongDh}, n=${n}` },
                           rescaled, "N (h - h_c^N)", "1 - exp(y - y*)"));
  });
  return assemble(620, 520, panels,
                  `chi_z collapse breakdown at omega, sizes ${sizes.join(", ")}`);
}

function fig4({ rows, analysis }: FigureInputs): string {
  const nProfile = analysis?.n_profile;
  if (typeof nProfile !== "number") throw new DataError("analysis lacks n_profile");
  const W = kResolved(rows, { kind: "work_k", n: nProfile });
  const L = kResolved(rows, { kind: "loschmidt_k", n: nProfile });
  const mu = kResolved(rows, { kind: "floquet_mu", n: 0 });
  const M = mu.length;
  const toK = (j: number) => (Math.PI * (2 * (j + 1) - 1)) / (2 * M);
  const kOf = (pts: Curve): Curve => pts.map(([j, v]) => [toK(j), v]);

  const wPanel = makePanel({ x: 0, y: 0, width: 300, height: 230,
                             title: `work per mode, n=${nProfile}` },
                           [0, Math.PI], extent(W.map((p) => p[1])));
  wPanel.polyline(kOf(W), PALETTE[1]);
  overlaySpectrum(wPanel, kOf(mu), extent(W.map((p) => p[1])));
  wPanel.vline(analysis.k_resonance, "#555");
  wPanel.axes("k", "W_k");

  const lPanel = makePanel({ x: 310, y: 0, width: 300, height: 230,
                             title: `echo per mode, n=${nProfile}` },
                           [0, Math.PI], [0, 1.05]);
  lPanel.polyline(kOf(L), PALETTE[0]);
  overlaySpectrum(lPanel, kOf(mu), [0, 1.05]);
  lPanel.vline(analysis.k_resonance, "#555");
  lPanel.axes("k", "L_k");

  const series = selectScalar(rows, { kind: "loschmidt" })
    .map((r) => [r.n, Math.max(r.value!, 1e-300)] as [number, number])
    .filter(([n]) => n > 0);
  if (series.length === 0) throw new DataError("no Loschmidt time series rows");
  const decay = makePanel({ x: 0, y: 240, width: 300, height: 230,
                            title: "echo decay" },
                          extent(series.map((p) => p[0]), 0.05),
                          extent(series.map((p) => p[1]), 0.3), { logY: true });
  decay.polyline(series, PALETTE[2]);
  decay.markers(series, PALETTE[2]);
  decay.axes("n", "L(nT)");

  const lowK = kResolvedSeries(rows, "loschmidt_k", 3);
  const lowPanel = makePanel({ x: 310, y: 240, width: 300, height: 230,
                               title: "low-k echo vs n" },
                             extent(lowK.flat().map((p) => p[0]), 0.05), [0, 1.05]);
  lowK.forEach((pts, i) => lowPanel.polyline(pts, PALETTE[(3 + i) % PALETTE.length]));
  lowPanel.axes("n", "L_k(nT)");
  return assemble(620, 500, [wPanel, lPanel, decay, lowPanel],
                  "momentum-resolved absorption and echo over the driven spectrum");
}

function kResolvedSeries(rows: ObsRow[], kind: string, count: number): Curve[] {
  const byIndex = new Map<number, Curve>();
  for (const row of rows) {
    if (row.kind !== kind || row.valueK === null || row.kIndex === null) continue;
    if (row.kIndex >= count) continue;
    if (!byIndex.has(row.kIndex)) byIndex.set(row.kIndex, []);
    byIndex.get(row.kIndex)!.push([row.n, row.valueK]);
  }
  const out: Curve[] = [];
  for (const idx of [...byIndex.keys()].sort((a, b) => a - b)) {
    const pts = byIndex.get(idx)!;
    pts.sort((a, b) => a[0] - b[0]);
    if (pts.length > 1) out.push(pts);
  }
  if (out.length === 0) throw new DataError(`no per-cycle ${kind} series found`);
  return out;
}

function overlaySpectrum(panel: Panel, mu: Curve, yDomain: [number, number]): void {
  const muMax = Math.max(...mu.map((p) => p[1]));
  const span = yDomain[1] - yDomain[0];
  const scaled: Curve = mu.map(([k, m]) => [
    k, yDomain[0] + (muMax > 0 ? (m / muMax) * 0.9 * span : 0)]);
  panel.polyline(scaled, "#222", 0.8, "3,3");
}

function fsLinN({ rows, analysis }: FigureInputs): string {
  const linear = analysis?.linear;
  if (!linear) throw new DataError("analysis lacks linear-scaling fits");
  const ns = Object.keys(linear).map(Number).sort((a, b) => a - b);
  const panels: Panel[] = [];
  ns.slice(0, 2).forEach((n, idx) => {
    const pts = selectScalar(rows, { kind: "chi_F", n })
      .filter((r) => Math.abs(r.h - r.h) < 1e30)
      .map((r) => [r.N, r.value!] as [number, number]);
    const byN = new Map<number, number>();
    for (const [N, v] of pts) if (!byN.has(N)) byN.set(N, v);
    const series: Curve = [...byN.entries()].sort((a, b) => a[0] - b[0]);
    if (series.length < 2) throw new DataError(`need chi_F at several sizes for n=${n}`);
    const panel = makePanel({ x: 0, y: idx * 250, width: 420, height: 240,
                              title: `n=${n}: slope=${linear[String(n)].slope.toFixed(3)}, R2=${linear[String(n)].r2.toFixed(4)}` },
                            extent(series.map((p) => p[0]), 0.1),
                            extent(series.map((p) => p[1])));
    const fit = linear[String(n)];
    panel.polyline(series.map(([N]) => [N, fit.slope * N + fit.intercept]), "#333", 1, "4,3");
    panel.markers(series, PALETTE[idx]);
    panel.axes("N", "chi_F");
    panels.push(panel);
  });
  return assemble(440, 30 + 250 * Math.min(ns.length, 2), panels,
                  "extensive fidelity-susceptibility scaling away from criticality");
}

function fsXi({ rows, analysis }: FigureInputs): string {
  const xiFit = analysis?.xi_fit;
  if (!xiFit) throw new DataError("analysis lacks xi-scaling fits");
  const ns = Object.keys(xiFit).map(Number).sort((a, b) => a - b);
  const panels: Panel[] = [];
  ns.slice(0, 2).forEach((n, idx) => {
    const all = selectScalar(rows, { kind: "chi_F", n });
    const N = Math.max(...all.map((r) => r.N));
    const pts: Curve = all.filter((r) => r.N === N && Math.abs(r.h - 1) > 1e-6)
      .map((r) => [r.h, r.value!]);
    if (pts.length < 3) throw new DataError(`need a chi_F(h) scan for n=${n}`);
    const fit = xiFit[String(n)];
    const model: Curve = pts.map(([h]) => [h, fit.a + fit.b / Math.abs(Math.log(h))]);
    const panel = makePanel({ x: 0, y: idx * 250, width: 420, height: 240,
                              title: `n=${n}: window ${fit.window ? fit.window.map((v: number) => v.toFixed(2)).join("-") : "empty"}` },
                            extent(pts.map((p) => p[0]), 0.05),
                            extent([...pts, ...model].map((p) => p[1])));
    panel.markers(pts, PALETTE[idx]);
    panel.polyline(model, "#333", 1, "4,3");
    if (fit.window) {
      panel.vline(fit.window[0], "#2ca02c");
      panel.vline(fit.window[1], "#2ca02c");
    }
    panel.axes("h", "chi_F");
    panels.push(panel);
  });
  return assemble(440, 30 + 250 * Math.min(ns.length, 2),
                  panels, "fidelity susceptibility vs 1/ln h fit");
}

function lowOmega({ rows, analysis }: FigureInputs): string {
  const qualities = analysis?.qualities;
  if (!qualities) throw new DataError("analysis lacks collapse qualities");
  const panels: Panel[] = [];
  [0, 1].forEach((n, idx) => {
    const curves = curvesBySize(rows, { kind: "chi_z", n });
    const rescaled = new Map<number, Curve>();
    for (const N of sizesOf(curves)) {
      try {
        rescaled.set(N, logRescale(curves.get(N)!, N, 1.0));
      } catch { /* degenerate curve: skip */ }
    }
    if (rescaled.size === 0) throw new DataError(`no rescalable curves at n=${n}`);
    panels.push(curvePanel({ x: idx * 310, y: 0, width: 300, height: 260,
                             title: `n=${n}, quality=${fmtQuality(qualities[String(n)])}` },
                           rescaled, "N (h - h_c^N)", "1 - exp(y - y*)"));
  });
  return assemble(620, 300, panels,
                  `slow drive: collapse lost after one cycle (threshold ${fmtQuality(analysis.threshold)})`);
}

/** Collapse qualities may arrive as "inf" when the peak structure is lost. */
function fmtQuality(q: unknown): string {
  const value = Number(q);
  return Number.isFinite(value) ? value.toExponential(2) : String(q);
}

function maxN(analysis: any): number {
  const keys = Object.keys(analysis?.per_n ?? {}).map(Number);
  if (keys.length === 0) throw new DataError("analysis lacks per-n results");
  return Math.max(...keys);
}

export const FIGURES: Record<string, (inputs: FigureInputs) => string> = {
  fig1,
  "chi-z": chiZ,
  fig2,
  fig3,
  fig4,
  "fs-lin-n": fsLinN,
  "fs-xi": fsXi,
  "low-omega": lowOmega,
};

export function render(figure: string, dir: string): string {
  const builder = FIGURES[figure];
  if (!builder) {
    throw new DataError(
      `unknown figure "${figure}"; available: ${Object.keys(FIGURES).sort().join(", ")}`);
  }
  return builder(loadInputs(dir));
}
