// Minimal deterministic SVG scene builder: no DOM, no randomness, fixed
// number formatting so identical inputs yield identical bytes.

export const WIDTH = 640;
export const HEIGHT = 420;
export const MARGIN = { top: 30, right: 20, bottom: 48, left: 64 };

export function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(2);
  return parseFloat(v.toPrecision(6)).toString();
}

export class LinearScale {
  constructor(
    public d0: number,
    public d1: number,
    public r0: number,
    public r1: number,
  ) {
    if (d1 === d0) {
      // degenerate domain: widen symmetrically so the scale stays finite
      this.d0 -= 0.5;
      this.d1 += 0.5;
    }
  }

  map(v: number): number {
    return this.r0 + ((v - this.d0) / (this.d1 - this.d0)) * (this.r1 - this.r0);
  }

  ticks(count = 6): number[] {
    const span = this.d1 - this.d0;
    const step = Math.pow(10, Math.floor(Math.log10(span / count)));
    const err = (span / count) / step;
    const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
    const s = step * mult;
    const out: number[] = [];
    for (let v = Math.ceil(this.d0 / s) * s; v <= this.d1 + 1e-12 * Math.abs(s); v += s) {
      out.push(Math.abs(v) < 1e-12 * Math.abs(s) ? 0 : v);
    }
    return out;
  }
}

export function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!Number.isFinite(lo)) throw new Error("no finite values to scale");
  return [lo, hi];
}

export class Scene {
  private parts: string[] = [];

  add(part: string): void {
    this.parts.push(part);
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, extra = ""): void {
    this.add(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}" ${extra}/>`,
    );
  }

  circle(cx: number, cy: number, r: number, fill: string): void {
    this.add(`<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${r}" fill="${fill}"/>`);
  }

  rect(x: number, y: number, w: number, h: number, fill: string): void {
    this.add(`<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}"/>`);
  }

  text(x: number, y: number, s: string, anchor = "middle", size = 12): void {
    this.add(
      `<text x="${fmt(x)}" y="${fmt(y)}" text-anchor="${anchor}" font-size="${size}" font-family="sans-serif">${escapeXml(s)}</text>`,
    );
  }

  polyline(points: Array<[number, number]>, stroke: string, extra = ""): void {
    const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.add(`<polyline points="${pts}" fill="none" stroke="${stroke}" ${extra}/>`);
  }

  axes(
    xs: LinearScale,
    ys: LinearScale,
    xLabel: string,
    yLabel: string,
    plot: { x0: number; x1: number; y0: number; y1: number },
  ): void {
    this.line(plot.x0, plot.y1, plot.x1, plot.y1, "#000");
    this.line(plot.x0, plot.y0, plot.x0, plot.y1, "#000");
    for (const t of xs.ticks()) {
      const px = xs.map(t);
      this.line(px, plot.y1, px, plot.y1 + 5, "#000");
      this.text(px, plot.y1 + 18, fmt(t));
    }
    for (const t of ys.ticks()) {
      const py = ys.map(t);
      this.line(plot.x0 - 5, py, plot.x0, py, "#000");
      this.text(plot.x0 - 8, py + 4, fmt(t), "end", 11);
    }
    this.text((plot.x0 + plot.x1) / 2, plot.y1 + 38, xLabel);
    this.add(
      `<text x="16" y="${fmt((plot.y0 + plot.y1) / 2)}" text-anchor="middle" font-size="12" font-family="sans-serif" transform="rotate(-90 16 ${fmt((plot.y0 + plot.y1) / 2)})">${escapeXml(yLabel)}</text>`,
    );
  }

  render(width = WIDTH, height = HEIGHT): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">\n` +
      `<rect width="${width}" height="${height}" fill="#ffffff"/>\n` +
      this.parts.join("\n") +
      `\n</svg>\n`
    );
  }
}

function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

// piecewise-linear blue-to-yellow map on [0, 1]
export function heatColor(v: number): string {
  const c = Math.max(0, Math.min(1, v));
  const r = Math.round(255 * Math.min(1, 2 * c));
  const g = Math.round(255 * c);
  const b = Math.round(255 * (1 - c));
  return `rgb(${r},${g},${b})`;
}
