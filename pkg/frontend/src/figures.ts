/** The four figure renderers: drift, trajectories, kinetic, balance. */

import {
  DriftTable,
  SchemaError,
  Timeseries,
  particleKinetics,
  parseDriftTable,
  parseTimeseries,
} from "./csv.js";
import {
  Frame,
  LegendEntry,
  PALETTE,
  axes,
  document,
  el,
  legend,
  linearScale,
  logScale,
  padLinear,
  padLog,
  polyline,
  px,
  text,
} from "./svg.js";

const WIDTH = 640;
const HEIGHT = 420;
const FRAME: Frame = { x0: 70, y0: 36, x1: WIDTH - 24, y1: HEIGHT - 48 };

function positiveExtent(values: number[]): [number, number] | null {
  const pos = values.filter((v) => v > 0 && Number.isFinite(v));
  if (pos.length === 0) {
    return null;
  }
  return [Math.min(...pos), Math.max(...pos)];
}

function pointMarkers(
  pairs: [number, number][],
  color: string,
  cls: string,
): string {
  const dots = pairs.map(([x, y]) => el("circle", {
    cx: px(x), cy: px(y), r: "3.5", fill: color, stroke: "none",
  }));
  return el("g", { class: cls }, dots);
}

/** Kinetic-energy drift and energy drift vs epsilon, log ordinate,
 * with the fitted C*exp(-c/eps) curve overlaid when available. */
export function plotDrift(table: DriftTable): string {
  const rows = [...table.rows].sort((a, b) => a.eps - b.eps);
  const epsValues = rows.map((r) => r.eps);
  const yExtent = positiveExtent(rows.flatMap((r) => [r.deltaK, r.deltaE]));
  const yDomain = padLog(...(yExtent ?? [1e-16, 1e-12]), 5);
  const xDomain = padLinear(Math.min(...epsValues), Math.max(...epsValues));
  const xScale = linearScale(xDomain, [FRAME.x0, FRAME.x1]);
  const yScale = logScale(yDomain, [FRAME.y1, FRAME.y0]);

  const body: string[] = [axes(FRAME, xScale, yScale, "ε", "drift")];
  const first = rows[0];
  const hasFit = rows.length > 1 && first !== undefined
    && first.fitC > 0 && Number.isFinite(first.fitc);
  if (hasFit && first !== undefined) {
    const samples = new Set<number>(epsValues);
    const lo = Math.min(...epsValues);
    const hi = Math.max(...epsValues);
    for (let i = 0; i <= 240; i++) {
      samples.add(lo + ((hi - lo) * i) / 240);
    }
    const pts: [number, number][] = [...samples]
      .sort((a, b) => a - b)
      .map((e) => [e, first.fitC * Math.exp(-first.fitc / e)] as [number, number])
      .filter(([, v]) => v >= yDomain[0] && v <= yDomain[1])
      .map(([e, v]) => [xScale.map(e), yScale.map(v)]);
    body.push(polyline(pts, {
      class: "fit", stroke: "#000000", "stroke-width": "1.5",
      "stroke-dasharray": "6 3",
    }));
  }
  const dk: [number, number][] = rows
    .filter((r) => r.deltaK > 0)
    .map((r) => [xScale.map(r.eps), yScale.map(r.deltaK)]);
  const de: [number, number][] = rows
    .filter((r) => r.deltaE > 0)
    .map((r) => [xScale.map(r.eps), yScale.map(r.deltaE)]);
  body.push(pointMarkers(dk, PALETTE[0] as string, "dk"));
  body.push(pointMarkers(de, PALETTE[1] as string, "de"));

  const entries: LegendEntry[] = [
    { label: "ΔK", color: PALETTE[0] as string, marker: "point" },
    { label: "ΔE", color: PALETTE[1] as string, marker: "point" },
  ];
  if (hasFit && first !== undefined) {
    entries.push({
      label: `${first.fitC.toPrecision(3)}·exp(−${first.fitc.toPrecision(3)}/ε)`,
      color: "#000000",
      marker: "line",
    });
  }
  body.push(legend(FRAME.x0 + 16, FRAME.y0 + 18, entries));
  return document(WIDTH, HEIGHT, "Energy drift vs ε", body);
}

/** Particle paths in the x-y plane with start (*) and end (dot) markers. */
export function plotTrajectories(ts: Timeseries): string {
  const xs: number[] = [];
  const ys: number[] = [];
  for (const row of ts.q) {
    for (let i = 0; i < ts.particles; i++) {
      xs.push(row[2 * i] as number);
      ys.push(row[2 * i + 1] as number);
    }
  }
  const xScale = linearScale(
    padLinear(Math.min(...xs), Math.max(...xs)), [FRAME.x0, FRAME.x1]);
  const yScale = linearScale(
    padLinear(Math.min(...ys), Math.max(...ys)), [FRAME.y1, FRAME.y0]);

  const body: string[] = [axes(FRAME, xScale, yScale, "x", "y")];
  const entries = [];
  for (let i = 0; i < ts.particles; i++) {
    const color = PALETTE[i % PALETTE.length] as string;
    const pts: [number, number][] = ts.q.map((row) => [
      xScale.map(row[2 * i] as number),
      yScale.map(row[2 * i + 1] as number),
    ]);
    const path = pts.length > 1
      ? polyline(pts, { class: `path-${i + 1}`, stroke: color, "stroke-width": "1.5" })
      : "";
    const start = pts[0] as [number, number];
    const end = pts[pts.length - 1] as [number, number];
    const startMark = text("*", {
      x: px(start[0]), y: px(start[1] + 5), "font-size": "16",
      "text-anchor": "middle", "font-family": "sans-serif", fill: color,
    });
    const endMark = el("circle", {
      cx: px(end[0]), cy: px(end[1]), r: "3", fill: color, stroke: "none",
    });
    body.push(el("g", { class: `particle-${i + 1}` },
      path === "" ? [startMark, endMark] : [path, startMark, endMark]));
    entries.push({ label: `particle ${i + 1}`, color });
  }
  body.push(legend(FRAME.x0 + 16, FRAME.y0 + 18, entries));
  return document(WIDTH, HEIGHT, "Particle trajectories", body);
}

const KINETIC_CONSISTENCY_TOL = 1e-9;

/** Per-particle kinetic energies and their total over time. */
export function plotKinetic(ts: Timeseries): string {
  const perParticle = particleKinetics(ts);
  for (let s = 0; s < ts.tau.length; s++) {
    const sum = (perParticle[s] as number[]).reduce((a, b) => a + b, 0);
    const total = ts.kinetic[s] as number;
    const scale = Math.max(1, Math.abs(total), Math.abs(sum));
    if (Math.abs(sum - total) > KINETIC_CONSISTENCY_TOL * scale) {
      throw new SchemaError(
        `row ${s + 2}: K column (${total}) does not match the sum of `
        + `per-particle kinetic energies (${sum})`,
      );
    }
  }
  const allValues = ts.kinetic.concat(perParticle.flat());
  const xScale = linearScale(
    padLinear(Math.min(...ts.tau), Math.max(...ts.tau), 0.02),
    [FRAME.x0, FRAME.x1]);
  const yScale = linearScale(
    padLinear(0, Math.max(...allValues, 1e-300)), [FRAME.y1, FRAME.y0]);

  const body: string[] = [axes(FRAME, xScale, yScale, "τ", "kinetic energy")];
  const entries = [];
  for (let i = 0; i < ts.particles; i++) {
    const color = PALETTE[i % PALETTE.length] as string;
    const pts: [number, number][] = ts.tau.map((tau, s) => [
      xScale.map(tau),
      yScale.map((perParticle[s] as number[])[i] as number),
    ]);
    body.push(polyline(pts, {
      class: `k-${i + 1}`, stroke: color, "stroke-width": "1.5",
    }));
    entries.push({ label: `K_${i + 1}`, color });
  }
  const totalPts: [number, number][] = ts.tau.map((tau, s) => [
    xScale.map(tau), yScale.map(ts.kinetic[s] as number),
  ]);
  body.push(polyline(totalPts, {
    class: "k-total", stroke: "#000000", "stroke-width": "2",
  }));
  entries.push({ label: "K_total", color: "#000000" });
  body.push(legend(FRAME.x1 - 120, FRAME.y0 + 18, entries));
  return document(WIDTH, HEIGHT, "Kinetic energies", body);
}

/** Balance diagnostics on split axes: K and K_ag on top, relative
 * energy error below on a log ordinate. */
export function plotBalance(ts: Timeseries): string {
  if (ts.kineticAg === null) {
    throw new SchemaError("balance figure requires the K_ag column");
  }
  const kAg = ts.kineticAg;
  const top: Frame = { x0: 70, y0: 36, x1: WIDTH - 24, y1: 192 };
  const bottom: Frame = { x0: 70, y0: 236, x1: WIDTH - 24, y1: HEIGHT - 48 };
  const xDomain = padLinear(Math.min(...ts.tau), Math.max(...ts.tau), 0.02);

  const topValues = ts.kinetic.concat(kAg);
  const xTop = linearScale(xDomain, [top.x0, top.x1]);
  const yTop = linearScale(
    padLinear(Math.min(0, ...topValues), Math.max(...topValues, 1e-300)),
    [top.y1, top.y0]);
  const body: string[] = [axes(top, xTop, yTop, "τ", "kinetic energy")];
  body.push(polyline(
    ts.tau.map((t, s) => [xTop.map(t), yTop.map(ts.kinetic[s] as number)]),
    { class: "k", stroke: PALETTE[0] as string, "stroke-width": "1.5" }));
  body.push(polyline(
    ts.tau.map((t, s) => [xTop.map(t), yTop.map(kAg[s] as number)]),
    { class: "k-ag", stroke: PALETTE[1] as string, "stroke-width": "1.5" }));
  body.push(legend(top.x1 - 120, top.y0 + 14, [
    { label: "K", color: PALETTE[0] as string },
    { label: "K_ag", color: PALETTE[1] as string },
  ]));

  const h0 = ts.energy[0] as number;
  const denom = Math.max(Math.abs(h0), 1e-300);
  const relErr = ts.energy.map((h) => Math.abs(h - h0) / denom);
  const extent = positiveExtent(relErr);
  const yBottom = logScale(
    padLog(...(extent ?? [1e-16, 1e-12]), 5), [bottom.y1, bottom.y0]);
  const xBottom = linearScale(xDomain, [bottom.x0, bottom.x1]);
  body.push(axes(bottom, xBottom, yBottom, "τ", "|H−H(0)|/|H(0)|"));
  const errPts: [number, number][] = [];
  ts.tau.forEach((t, s) => {
    const e = relErr[s] as number;
    if (e > 0) {
      errPts.push([xBottom.map(t), yBottom.map(e)]);
    }
  });
  if (errPts.length > 1) {
    body.push(polyline(errPts, {
      class: "h-err", stroke: PALETTE[3] as string, "stroke-width": "1.5",
    }));
  } else if (errPts.length === 1) {
    body.push(pointMarkers(errPts, PALETTE[3] as string, "h-err"));
  }
  return document(WIDTH, HEIGHT, "Balance diagnostics", body);
}

export type FigureKind = "drift" | "trajectories" | "kinetic" | "balance";

export const FIGURE_KINDS: FigureKind[] = [
  "drift", "trajectories", "kinetic", "balance",
];

/** Render one figure kind from raw CSV text. */
export function renderFigure(
  kind: FigureKind,
  csvText: string,
  source = "<input>",
): string {
  switch (kind) {
    case "drift":
      return plotDrift(parseDriftTable(csvText, source));
    case "trajectories":
      return plotTrajectories(parseTimeseries(csvText, source));
    case "kinetic":
      return plotKinetic(parseTimeseries(csvText, source));
    case "balance":
      return plotBalance(parseTimeseries(csvText, source));
  }
}
