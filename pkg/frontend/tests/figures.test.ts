import { mkdtempSync, readFileSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it } from "vitest";

import { main, renderKind } from "../src/cli.js";
import {
  renderChargeDrift,
  renderHeatmap,
  renderPairing,
} from "../src/figures.js";
import {
  loadConvergence,
  loadFields,
  loadFit,
  loadPairing,
  sliceCharge,
} from "../src/schema.js";

const FIXTURES = join(__dirname, "fixtures");
const SWEEP = join(FIXTURES, "sweep");
const SIM_EPS = join(FIXTURES, "sim_eps");
const SIM_GAUSS = join(FIXTURES, "sim_gauss");
const CONV = join(FIXTURES, "conv");

function tmpFile(name: string): string {
  return join(mkdtempSync(join(tmpdir(), "fig-")), name);
}

describe("schema loading", () => {
  it("parses the pairing table", () => {
    const rows = loadPairing(join(SWEEP, "pairing.csv"));
    expect(rows).toHaveLength(5);
    expect(rows[0].eps).toBeCloseTo(1e-2);
    expect(rows.every((r) => r.err_estimate >= 0)).toBe(true);
  });

  it("parses the fit summary", () => {
    const fit = loadFit(join(SWEEP, "fit.json"));
    expect(fit.S0).toBeGreaterThan(0);
    expect(fit.slope).toBeGreaterThanOrEqual(0.95 * fit.S0);
  });

  it("groups fields into time slices", () => {
    const slices = loadFields(join(SIM_EPS, "fields.csv"));
    expect(slices.length).toBeGreaterThan(1);
    expect(slices[0].t).toBe(0);
    expect(slices[0].V).toHaveLength(2);
    const n = slices[0].x.length;
    for (const s of slices) expect(s.x.length).toBe(n);
  });

  it("names a missing column", () => {
    const p = tmpFile("bad.csv");
    writeFileSync(p, "eps,value\n0.1,2\n");
    expect(() => loadPairing(p)).toThrow(/missing column "pairing"/);
  });

  it("names an empty file", () => {
    const p = tmpFile("empty.csv");
    writeFileSync(p, "");
    expect(() => loadPairing(p)).toThrow(/empty/);
  });

  it("rejects header-only tables", () => {
    const p = tmpFile("headers.csv");
    writeFileSync(p, "eps,pairing,err_estimate\n");
    expect(() => loadPairing(p)).toThrow(/no data rows/);
  });

  it("charge of a slice is stable across slices of a conservative run", () => {
    const slices = loadFields(join(SIM_GAUSS, "fields.csv"));
    const q = slices.map(sliceCharge);
    for (const v of q) expect(Math.abs(v - q[0]) / q[0]).toBeLessThan(1e-9);
  });
});

describe("figure rendering", () => {
  it("pairing figure has one marker per row, a fit line, and the S0 guide", () => {
    const rows = loadPairing(join(SWEEP, "pairing.csv"));
    const fit = loadFit(join(SWEEP, "fit.json"));
    const svg = renderPairing(rows, fit);
    expect((svg.match(/<circle/g) ?? []).length).toBe(rows.length);
    expect((svg.match(/<polyline/g) ?? []).length).toBe(2);
    expect(svg).toContain("S0 guide");
    expect(svg).toContain("stroke-dasharray");
  });

  it("rejects an empty pairing table", () => {
    const fit = loadFit(join(SWEEP, "fit.json"));
    expect(() => renderPairing([], fit)).toThrow(/empty/);
  });

  it("charge drift curve starts at zero", () => {
    const slices = loadFields(join(SIM_GAUSS, "fields.csv"));
    const svg = renderChargeDrift(slices);
    expect(svg).toContain("charge drift");
    expect((svg.match(/<circle/g) ?? []).length).toBe(slices.length);
  });

  it("heatmap demands the two-potential layout", () => {
    const slices = loadFields(join(SIM_EPS, "fields.csv"));
    const single = slices.map((s) => ({ ...s, V: s.V.slice(0, 1), Vdot: s.Vdot.slice(0, 1) }));
    expect(() => renderHeatmap(single)).toThrow(/"V2"/);
  });

  it("A_- heatmap minimum sits inside the wedge t > |x|", () => {
    const slices = loadFields(join(SIM_EPS, "fields.csv"));
    let best = { v: Infinity, t: 0, x: 0 };
    for (const s of slices) {
      for (let i = 0; i < s.x.length; i++) {
        const am = s.V[0][i] - s.V[1][i];
        if (am < best.v) best = { v: am, t: s.t, x: s.x[i] };
      }
    }
    expect(best.v).toBeLessThan(0);
    expect(best.t).toBeGreaterThan(Math.abs(best.x));
  });

  it("every kind renders from the fixture artifacts", () => {
    expect(renderKind("pairing-vs-logeps", SWEEP)).toContain("<svg");
    expect(renderKind("charge-drift", SIM_GAUSS)).toContain("<svg");
    expect(renderKind("norm-growth", SIM_GAUSS)).toContain("<svg");
    expect(renderKind("heatmap", SIM_EPS)).toContain("<svg");
    expect(renderKind("convergence", CONV)).toContain("<svg");
  });

  it("rendering is deterministic", () => {
    expect(renderKind("heatmap", SIM_EPS)).toBe(renderKind("heatmap", SIM_EPS));
  });

  it("convergence figure annotates the observed order", () => {
    const rows = loadConvergence(join(CONV, "convergence.csv"));
    expect(rows.length).toBeGreaterThanOrEqual(2);
    const svg = renderKind("convergence", CONV);
    expect(svg).toContain("observed order");
  });
});

describe("cli", () => {
  it("writes an svg file and exits 0", async () => {
    const out = tmpFile("fig.svg");
    const code = await main(["pairing-vs-logeps", SWEEP, out]);
    expect(code).toBe(0);
    expect(readFileSync(out, "utf-8")).toContain("<svg");
  });

  it("runs a multi-figure spec", async () => {
    const dir = mkdtempSync(join(tmpdir(), "figs-"));
    const spec = join(dir, "spec.json");
    writeFileSync(
      spec,
      JSON.stringify([
        { kind: "charge-drift", input: SIM_GAUSS, output: join(dir, "a.svg") },
        { kind: "convergence", input: CONV, output: join(dir, "b.svg") },
      ]),
    );
    const code = await main(["--spec", spec]);
    expect(code).toBe(0);
    expect(readFileSync(join(dir, "a.svg"), "utf-8")).toContain("<svg");
  });

  it("fails with a named error for a missing artifact", async () => {
    const code = await main(["heatmap", CONV, tmpFile("x.svg")]);
    expect(code).toBe(1);
  });

  it("rejects unknown kinds", async () => {
    const code = await main(["--spec", (() => {
      const p = tmpFile("spec.json");
      writeFileSync(p, JSON.stringify([{ kind: "pie", input: ".", output: "x.svg" }]));
      return p;
    })()]);
    expect(code).toBe(1);
  });
});
