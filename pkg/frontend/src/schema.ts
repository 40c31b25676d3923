// Artifact loading with strict column validation. Every loader names the
// file and the missing column on failure; nothing is silently reindexed.

import { readFileSync } from "fs";
import Papa from "papaparse";

export interface PairingRow {
  eps: number;
  pairing: number;
  err_estimate: number;
}

export interface FitSummary {
  slope: number;
  intercept: number;
  residual: number;
  S0: number;
}

export interface FieldSlice {
  t: number;
  x: number[];
  u2: number[];
  v2: number[];
  V: number[][]; // [component][node]
  Vdot: number[][];
}

export interface ConvergenceRow {
  n_cells: number;
  l2_error: number;
}

function parseCsv(path: string): { header: string[]; rows: number[][] } {
  const text = readFileSync(path, "utf-8");
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    throw new Error(`${path}: ${parsed.errors[0].message}`);
  }
  const data = parsed.data;
  if (data.length === 0) {
    throw new Error(`${path}: file is empty`);
  }
  const header = data[0];
  if (data.length === 1) {
    throw new Error(`${path}: no data rows`);
  }
  const rows = data.slice(1).map((r, i) => {
    const nums = r.map(Number);
    if (nums.some((v) => Number.isNaN(v))) {
      throw new Error(`${path}: non-numeric value in data row ${i + 1}`);
    }
    return nums;
  });
  return { header, rows };
}

function columnIndex(path: string, header: string[], name: string): number {
  const idx = header.indexOf(name);
  if (idx < 0) {
    throw new Error(`${path}: missing column "${name}" (found: ${header.join(", ")})`);
  }
  return idx;
}

export function loadPairing(path: string): PairingRow[] {
  const { header, rows } = parseCsv(path);
  const ie = columnIndex(path, header, "eps");
  const ip = columnIndex(path, header, "pairing");
  const ix = columnIndex(path, header, "err_estimate");
  return rows.map((r) => ({ eps: r[ie], pairing: r[ip], err_estimate: r[ix] }));
}

export function loadFit(path: string): FitSummary {
  const raw = JSON.parse(readFileSync(path, "utf-8"));
  for (const key of ["slope", "intercept", "residual", "S0"]) {
    if (typeof raw[key] !== "number") {
      throw new Error(`${path}: missing numeric field "${key}"`);
    }
  }
  return raw as FitSummary;
}

export function loadConvergence(path: string): ConvergenceRow[] {
  const { header, rows } = parseCsv(path);
  const iN = columnIndex(path, header, "n_cells");
  const ie = columnIndex(path, header, "l2_error");
  return rows.map((r) => ({ n_cells: r[iN], l2_error: r[ie] }));
}

// fields.csv is t-major; group rows into per-time slices
export function loadFields(path: string): FieldSlice[] {
  const { header, rows } = parseCsv(path);
  const it = columnIndex(path, header, "t");
  const ix = columnIndex(path, header, "x");
  const spinor = ["re_u", "im_u", "re_v", "im_v"].map((c) => columnIndex(path, header, c));
  const vCols: number[] = [];
  for (let j = 1; header.includes(`V${j}`); j++) {
    vCols.push(columnIndex(path, header, `V${j}`));
  }
  if (vCols.length === 0) {
    throw new Error(`${path}: missing column "V1"`);
  }
  const vdCols = vCols.map((_, j) => columnIndex(path, header, `Vdot${j + 1}`));

  const slices: FieldSlice[] = [];
  let current: FieldSlice | null = null;
  for (const r of rows) {
    if (current === null || r[it] !== current.t) {
      current = {
        t: r[it],
        x: [],
        u2: [],
        v2: [],
        V: vCols.map(() => []),
        Vdot: vdCols.map(() => []),
      };
      slices.push(current);
    }
    current.x.push(r[ix]);
    const [ru, iu, rv, iv] = spinor.map((c) => r[c]);
    current.u2.push(ru * ru + iu * iu);
    current.v2.push(rv * rv + iv * iv);
    vCols.forEach((c, j) => current!.V[j].push(r[c]));
    vdCols.forEach((c, j) => current!.Vdot[j].push(r[c]));
  }
  return slices;
}

// trapezoid charge of one slice, matching the producer's discrete norm
export function sliceCharge(s: FieldSlice): number {
  const n = s.x.length;
  if (n < 2) throw new Error("slice has fewer than two nodes");
  const dx = (s.x[n - 1] - s.x[0]) / (n - 1);
  let total = 0;
  for (let i = 0; i < n; i++) {
    const w = i === 0 || i === n - 1 ? 0.5 : 1.0;
    total += w * (s.u2[i] + s.v2[i]);
  }
  return dx * total;
}

// sum over components of (sup + total variation of V) + (L1 of Vdot)
export function sliceGrowthNorm(s: FieldSlice): number {
  const n = s.x.length;
  const dx = (s.x[n - 1] - s.x[0]) / (n - 1);
  let total = 0;
  for (let j = 0; j < s.V.length; j++) {
    const vj = s.V[j];
    let sup = 0;
    let tv = 0;
    let l1 = 0;
    for (let i = 0; i < n; i++) {
      sup = Math.max(sup, Math.abs(vj[i]));
      if (i > 0) tv += Math.abs(vj[i] - vj[i - 1]);
      const w = i === 0 || i === n - 1 ? 0.5 : 1.0;
      l1 += w * Math.abs(s.Vdot[j][i]);
    }
    total += sup + tv + dx * l1;
  }
  return total;
}
