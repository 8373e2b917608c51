/** Deterministic SVG rendering of rate-region series.
 *
 * Hand-rolled markup: identical inputs give identical bytes, which keeps the
 * figures reviewable in diffs.  Every drawn coordinate comes from the series
 * data; nothing is interpolated or invented.
 */

import { Series } from "./series.js";

const WIDTH = 640;
const HEIGHT = 440;
const MARGIN = { left: 64, right: 16, top: 28, bottom: 48 };

const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

function fmt(x: number): string {
  if (!Number.isFinite(x)) throw new Error(`non-finite coordinate ${x}`);
  return Number(x.toPrecision(8)).toString();
}

interface Extent { lo: number; hi: number; }

function extent(values: number[]): Extent {
  if (values.length === 0) return { lo: 0, hi: 1 };
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const pad = 0.05 * (hi - lo);
  return { lo: Math.min(lo, 0), hi: hi + pad };
}

function ticks(e: Extent, count: number): number[] {
  const out: number[] = [];
  for (let k = 0; k <= count; k += 1) {
    out.push(e.lo + ((e.hi - e.lo) * k) / count);
  }
  return out;
}

export function renderFigure(seriesList: Series[], options: {
  xLabel: string;
  yLabel: string;
  caption?: string;
}): string {
  const xs = seriesList.flatMap((s) => s.points.map((p) => p.rMs));
  const ys = seriesList.flatMap((s) =>
    s.points.flatMap((p) => [p.mean - p.std, p.mean + p.std]));
  const ex = extent(xs);
  const ey = extent(ys);
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const px = (x: number) => MARGIN.left + ((x - ex.lo) / (ex.hi - ex.lo)) * plotW;
  const py = (y: number) => MARGIN.top + plotH - ((y - ey.lo) / (ey.hi - ey.lo)) * plotH;

  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" ` +
             `height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`);
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);

  // axes and ticks
  const axisY = MARGIN.top + plotH;
  parts.push(`<g stroke="#333" stroke-width="1">` +
    `<line x1="${MARGIN.left}" y1="${axisY}" x2="${MARGIN.left + plotW}" y2="${axisY}"/>` +
    `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" y2="${axisY}"/></g>`);
  for (const t of ticks(ex, 5)) {
    const x = px(t);
    parts.push(`<line x1="${fmt(x)}" y1="${axisY}" x2="${fmt(x)}" y2="${axisY + 5}" stroke="#333"/>`);
    parts.push(`<text x="${fmt(x)}" y="${axisY + 20}" font-size="11" ` +
               `text-anchor="middle" font-family="sans-serif">${fmt(Number(t.toFixed(3)))}</text>`);
  }
  for (const t of ticks(ey, 5)) {
    const y = py(t);
    parts.push(`<line x1="${MARGIN.left - 5}" y1="${fmt(y)}" x2="${MARGIN.left}" y2="${fmt(y)}" stroke="#333"/>`);
    parts.push(`<text x="${MARGIN.left - 9}" y="${fmt(y + 4)}" font-size="11" ` +
               `text-anchor="end" font-family="sans-serif">${fmt(Number(t.toFixed(3)))}</text>`);
  }
  parts.push(`<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 10}" font-size="13" ` +
             `text-anchor="middle" font-family="sans-serif">${options.xLabel}</text>`);
  parts.push(`<text transform="rotate(-90 16 ${MARGIN.top + plotH / 2})" x="16" ` +
             `y="${MARGIN.top + plotH / 2}" font-size="13" text-anchor="middle" ` +
             `font-family="sans-serif">${options.yLabel}</text>`);
  if (options.caption) {
    parts.push(`<text x="${MARGIN.left + plotW / 2}" y="${MARGIN.top - 10}" ` +
               `font-size="13" text-anchor="middle" font-family="sans-serif">` +
               `${options.caption}</text>`);
  }

  seriesList.forEach((series, idx) => {
    const color = PALETTE[idx % PALETTE.length];
    if (series.points.length === 0) return;
    const band = [
      ...series.points.map((p) => `${fmt(px(p.rMs))},${fmt(py(p.mean + p.std))}`),
      ...[...series.points].reverse().map((p) => `${fmt(px(p.rMs))},${fmt(py(p.mean - p.std))}`),
    ].join(" ");
    parts.push(`<polygon points="${band}" fill="${color}" opacity="0.15"/>`);
    const line = series.points
      .map((p) => `${fmt(px(p.rMs))},${fmt(py(p.mean))}`).join(" ");
    parts.push(`<polyline points="${line}" fill="none" stroke="${color}" stroke-width="1.8"/>`);
    for (const p of series.points) {
      parts.push(`<circle cx="${fmt(px(p.rMs))}" cy="${fmt(py(p.mean))}" r="2.6" fill="${color}"/>`);
    }
  });

  // legend, in series order
  seriesList.forEach((series, idx) => {
    const color = PALETTE[idx % PALETTE.length];
    const y = MARGIN.top + 14 + 16 * idx;
    const x = MARGIN.left + plotW - 130;
    parts.push(`<rect x="${x}" y="${y - 9}" width="12" height="4" fill="${color}"/>`);
    parts.push(`<text x="${x + 18}" y="${y - 3}" font-size="12" ` +
               `font-family="sans-serif">${series.label}</text>`);
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
