// The five figure kinds, each a pure function from loaded artifacts to an
// SVG string. Nothing here recomputes physics: every curve is a direct
// transformation of the producer's documented columns.

import {
  ConvergenceRow,
  FieldSlice,
  FitSummary,
  PairingRow,
  sliceCharge,
  sliceGrowthNorm,
} from "./schema.js";
import { HEIGHT, LinearScale, MARGIN, Scene, WIDTH, extent, fmt, heatColor } from "./svg.js";

const PLOT = {
  x0: MARGIN.left,
  x1: WIDTH - MARGIN.right,
  y0: MARGIN.top,
  y1: HEIGHT - MARGIN.bottom,
};

function makeScales(xd: [number, number], yd: [number, number]): [LinearScale, LinearScale] {
  const padY = 0.05 * (yd[1] - yd[0] || 1);
  return [
    new LinearScale(xd[0], xd[1], PLOT.x0, PLOT.x1),
    new LinearScale(yd[0] - padY, yd[1] + padY, PLOT.y1, PLOT.y0),
  ];
}

export function renderPairing(rows: PairingRow[], fit: FitSummary): string {
  if (rows.length === 0) throw new Error("pairing table is empty");
  const xs = rows.map((r) => -Math.log(r.eps));
  const ys = rows.map((r) => r.pairing);
  const [sx, sy] = makeScales(extent(xs), extent([...ys, fit.intercept + fit.S0 * Math.max(...xs)]));
  const scene = new Scene();
  scene.text(WIDTH / 2, 18, "pairing vs -log(eps)", "middle", 14);
  scene.axes(sx, sy, "-log(eps)", "pairing", PLOT);

  const [x0, x1] = extent(xs);
  // fitted line
  scene.polyline(
    [
      [sx.map(x0), sy.map(fit.intercept + fit.slope * x0)],
      [sx.map(x1), sy.map(fit.intercept + fit.slope * x1)],
    ],
    "#d62728",
    'stroke-width="1.5"',
  );
  // reference slope S0 guide, anchored at the first pairing point
  const guide0 = ys[0];
  scene.polyline(
    [
      [sx.map(x0), sy.map(guide0)],
      [sx.map(x1), sy.map(guide0 + fit.S0 * (x1 - x0))],
    ],
    "#7f7f7f",
    'stroke-dasharray="6 4"',
  );
  scene.text(PLOT.x1 - 4, PLOT.y0 + 14, `slope ${fmt(fit.slope)}`, "end", 11);
  scene.text(PLOT.x1 - 4, PLOT.y0 + 28, `S0 guide ${fmt(fit.S0)}`, "end", 11);
  for (let i = 0; i < rows.length; i++) {
    scene.circle(sx.map(xs[i]), sy.map(ys[i]), 3.5, "#1f77b4");
  }
  return scene.render();
}

export function renderChargeDrift(slices: FieldSlice[]): string {
  if (slices.length === 0) throw new Error("no field slices");
  const q = slices.map(sliceCharge);
  const t = slices.map((s) => s.t);
  const drift = q.map((v) => Math.abs(v - q[0]));
  const [sx, sy] = makeScales(extent(t), extent(drift));
  const scene = new Scene();
  scene.text(WIDTH / 2, 18, "charge drift |Q(t) - Q(0)|", "middle", 14);
  scene.axes(sx, sy, "t", "drift", PLOT);
  scene.polyline(
    t.map((v, i) => [sx.map(v), sy.map(drift[i])] as [number, number]),
    "#1f77b4",
    'stroke-width="1.5"',
  );
  for (let i = 0; i < t.length; i++) {
    scene.circle(sx.map(t[i]), sy.map(drift[i]), 2.5, "#1f77b4");
  }
  return scene.render();
}

export function renderNormGrowth(slices: FieldSlice[]): string {
  if (slices.length < 2) throw new Error("need at least two slices for a growth curve");
  const t = slices.map((s) => Math.log1p(s.t));
  const y = slices.map((s) => {
    const v = sliceGrowthNorm(s);
    if (v <= 0) return NaN;
    return Math.log(v);
  });
  const keep = y.map((v, i) => [t[i], v] as [number, number]).filter(([, v]) => Number.isFinite(v));
  if (keep.length < 2) throw new Error("growth norms vanish on all slices");
  const [sx, sy] = makeScales(extent(keep.map((p) => p[0])), extent(keep.map((p) => p[1])));
  const scene = new Scene();
  scene.text(WIDTH / 2, 18, "potential norm growth (log-log)", "middle", 14);
  scene.axes(sx, sy, "log(1 + t)", "log norm", PLOT);
  scene.polyline(
    keep.map(([a, b]) => [sx.map(a), sy.map(b)] as [number, number]),
    "#2ca02c",
    'stroke-width="1.5"',
  );
  return scene.render();
}

export function renderHeatmap(slices: FieldSlice[]): string {
  if (slices.length === 0) throw new Error("no field slices");
  if (slices[0].V.length < 2) {
    throw new Error('heatmap needs the two-potential layout (missing column "V2")');
  }
  const panels: Array<{ label: string; value: (s: FieldSlice, i: number) => number }> = [
    { label: "|u|^2", value: (s, i) => s.u2[i] },
    { label: "|v|^2", value: (s, i) => s.v2[i] },
    { label: "A_-", value: (s, i) => s.V[0][i] - s.V[1][i] },
  ];
  const width = 900;
  const height = 340;
  const panelW = 270;
  const gap = 30;
  const scene = new Scene();
  const n = slices[0].x.length;
  const nt = slices.length;
  for (let p = 0; p < panels.length; p++) {
    const xOff = 30 + p * (panelW + gap);
    const vals: number[] = [];
    for (const s of slices) for (let i = 0; i < n; i++) vals.push(panels[p].value(s, i));
    const [lo, hi] = extent(vals);
    const span = hi - lo || 1;
    const cellW = panelW / n;
    const cellH = 260 / nt;
    for (let k = 0; k < nt; k++) {
      const s = slices[k];
      for (let i = 0; i < n; i++) {
        const c = (panels[p].value(s, i) - lo) / span;
        // rows from bottom (t = 0) up
        scene.rect(xOff + i * cellW, 290 - (k + 1) * cellH, cellW + 0.5, cellH + 0.5, heatColor(c));
      }
    }
    scene.text(xOff + panelW / 2, 20, panels[p].label, "middle", 14);
    scene.text(xOff, 310, fmt(slices[0].x[0]), "start", 10);
    scene.text(xOff + panelW, 310, fmt(slices[0].x[n - 1]), "end", 10);
    scene.text(xOff + panelW / 2, 326, "x", "middle", 11);
  }
  return scene.render(width, height);
}

export function renderConvergence(rows: ConvergenceRow[]): string {
  if (rows.length === 0) throw new Error("convergence table is empty");
  const xs = rows.map((r) => Math.log2(r.n_cells));
  const ys = rows.map((r) => Math.log10(r.l2_error));
  const [sx, sy] = makeScales(extent(xs), extent(ys));
  const scene = new Scene();
  scene.text(WIDTH / 2, 18, "lattice vs oracle error", "middle", 14);
  scene.axes(sx, sy, "log2(n_cells)", "log10(L2 error)", PLOT);
  scene.polyline(
    xs.map((v, i) => [sx.map(v), sy.map(ys[i])] as [number, number]),
    "#9467bd",
    'stroke-width="1.5"',
  );
  for (let i = 0; i < xs.length; i++) {
    scene.circle(sx.map(xs[i]), sy.map(ys[i]), 3.5, "#9467bd");
  }
  if (rows.length >= 2) {
    const k = rows.length - 1;
    const order = Math.log2(rows[k - 1].l2_error / rows[k].l2_error);
    scene.text(PLOT.x1 - 4, PLOT.y0 + 14, `last observed order ${fmt(order)}`, "end", 11);
  }
  return scene.render();
}
