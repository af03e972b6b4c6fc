/** Deterministic SVG assembly: element builders, scales, axes, legends. */

export const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/** Pixel coordinate formatter: fixed two decimals, no negative zero. */
export function px(value: number): string {
  const s = value.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

/** Build one SVG element from tag, attributes, and child markup. */
export function el(
  tag: string,
  attrs: Record<string, string | number>,
  children: string[] = [],
): string {
  const parts = Object.entries(attrs).map(([k, v]) => ` ${k}="${v}"`);
  const open = `<${tag}${parts.join("")}`;
  if (children.length === 0) {
    return `${open}/>`;
  }
  return `${open}>${children.join("")}</${tag}>`;
}

export function text(
  content: string,
  attrs: Record<string, string | number>,
): string {
  return el("text", attrs, [content]);
}

export interface Scale {
  map(value: number): number;
  ticks(): { value: number; label: string }[];
  domain: [number, number];
}

function niceStep(span: number, target: number): number {
  const raw = span / Math.max(target, 1);
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  for (const m of [1, 2, 5, 10]) {
    if (m * mag >= raw) {
      return m * mag;
    }
  }
  return 10 * mag;
}

function tickLabel(value: number, step: number): string {
  if (value === 0) {
    return "0";
  }
  const decimals = Math.max(0, -Math.floor(Math.log10(step)) + 1);
  if (Math.abs(value) >= 1e4 || Math.abs(value) < 1e-3) {
    return value.toExponential(1);
  }
  return value.toFixed(Math.min(decimals, 6));
}

/** Affine scale from a data interval to a pixel interval. */
export function linearScale(
  domain: [number, number],
  range: [number, number],
  tickCount = 6,
): Scale {
  const [d0, d1] = domain;
  const span = d1 - d0 || 1;
  const map = (v: number) => range[0] + ((v - d0) / span) * (range[1] - range[0]);
  const ticks = () => {
    const step = niceStep(Math.abs(span), tickCount);
    const first = Math.ceil(Math.min(d0, d1) / step) * step;
    const last = Math.max(d0, d1);
    const out: { value: number; label: string }[] = [];
    for (let v = first; v <= last + 1e-9 * Math.abs(step); v += step) {
      const snapped = Math.abs(v) < 1e-12 * Math.abs(step) ? 0 : v;
      out.push({ value: snapped, label: tickLabel(snapped, step) });
    }
    return out;
  };
  return { map, ticks, domain };
}

/** Base-10 logarithmic scale; the domain must be positive. */
export function logScale(domain: [number, number], range: [number, number]): Scale {
  const l0 = Math.log10(domain[0]);
  const l1 = Math.log10(domain[1]);
  const span = l1 - l0 || 1;
  const map = (v: number) => range[0] + ((Math.log10(v) - l0) / span) * (range[1] - range[0]);
  const ticks = () => {
    const out: { value: number; label: string }[] = [];
    const kStep = Math.max(1, Math.round(span / 8));
    for (let k = Math.ceil(l0 - 1e-9); k <= Math.floor(l1 + 1e-9); k += kStep) {
      out.push({ value: Math.pow(10, k), label: `1e${k}` });
    }
    return out;
  };
  return { map, ticks, domain };
}

/** Pad [lo, hi] outward by a fraction of its width. */
export function padLinear(lo: number, hi: number, frac = 0.05): [number, number] {
  if (lo === hi) {
    const pad = Math.max(1e-12, Math.abs(lo) * frac, 0.5);
    return [lo - pad, hi + pad];
  }
  const pad = (hi - lo) * frac;
  return [lo - pad, hi + pad];
}

/** Pad a positive [lo, hi] by a multiplicative factor for log axes. */
export function padLog(lo: number, hi: number, factor = 2): [number, number] {
  if (lo === hi) {
    return [lo / 10, hi * 10];
  }
  return [lo / factor, hi * factor];
}

export interface Frame {
  x0: number;
  x1: number;
  y0: number;
  y1: number;
}

/** Axes with ticks along the bottom and left edges of a frame. */
export function axes(
  frame: Frame,
  xScale: Scale,
  yScale: Scale,
  xLabel: string,
  yLabel: string,
): string {
  const parts: string[] = [];
  parts.push(el("rect", {
    x: px(frame.x0), y: px(frame.y0),
    width: px(frame.x1 - frame.x0), height: px(frame.y1 - frame.y0),
    fill: "none", stroke: "#000000", "stroke-width": "1",
  }));
  for (const t of xScale.ticks()) {
    const x = xScale.map(t.value);
    if (x < frame.x0 - 0.5 || x > frame.x1 + 0.5) {
      continue;
    }
    parts.push(el("line", {
      x1: px(x), y1: px(frame.y1), x2: px(x), y2: px(frame.y1 + 5),
      stroke: "#000000", "stroke-width": "1",
    }));
    parts.push(text(t.label, {
      x: px(x), y: px(frame.y1 + 18), "font-size": "11",
      "text-anchor": "middle", "font-family": "sans-serif",
    }));
  }
  for (const t of yScale.ticks()) {
    const y = yScale.map(t.value);
    if (y < frame.y0 - 0.5 || y > frame.y1 + 0.5) {
      continue;
    }
    parts.push(el("line", {
      x1: px(frame.x0 - 5), y1: px(y), x2: px(frame.x0), y2: px(y),
      stroke: "#000000", "stroke-width": "1",
    }));
    parts.push(text(t.label, {
      x: px(frame.x0 - 8), y: px(y + 3.5), "font-size": "11",
      "text-anchor": "end", "font-family": "sans-serif",
    }));
  }
  parts.push(text(xLabel, {
    x: px((frame.x0 + frame.x1) / 2), y: px(frame.y1 + 34),
    "font-size": "12", "text-anchor": "middle", "font-family": "sans-serif",
  }));
  parts.push(text(yLabel, {
    x: px(frame.x0 - 44), y: px((frame.y0 + frame.y1) / 2),
    "font-size": "12", "text-anchor": "middle", "font-family": "sans-serif",
    transform: `rotate(-90 ${px(frame.x0 - 44)} ${px((frame.y0 + frame.y1) / 2)})`,
  }));
  return el("g", { class: "axes" }, parts);
}

/** Polyline through (x, y) pixel pairs. */
export function polyline(
  points: [number, number][],
  attrs: Record<string, string | number>,
): string {
  const d = points.map(([x, y]) => `${px(x)},${px(y)}`).join(" ");
  return el("polyline", { points: d, fill: "none", ...attrs });
}

export interface LegendEntry {
  label: string;
  color: string;
  marker?: "line" | "point";
}

/** A small legend box anchored at (x, y). */
export function legend(x: number, y: number, entries: LegendEntry[]): string {
  const parts: string[] = [];
  entries.forEach((entry, i) => {
    const rowY = y + 16 * i;
    if (entry.marker === "point") {
      parts.push(el("circle", {
        cx: px(x + 11), cy: px(rowY), r: "3.5",
        fill: entry.color, stroke: "none",
      }));
    } else {
      parts.push(el("line", {
        x1: px(x), y1: px(rowY), x2: px(x + 22), y2: px(rowY),
        stroke: entry.color, "stroke-width": "2",
      }));
    }
    parts.push(text(entry.label, {
      x: px(x + 28), y: px(rowY + 4), "font-size": "11",
      "font-family": "sans-serif",
    }));
  });
  return el("g", { class: "legend" }, parts);
}

/** Wrap figure content in a fixed-size SVG document. */
export function document(
  width: number,
  height: number,
  title: string,
  body: string[],
): string {
  const head = el("rect", {
    x: "0", y: "0", width: String(width), height: String(height),
    fill: "#ffffff",
  });
  const caption = text(title, {
    x: px(width / 2), y: "18", "font-size": "14",
    "text-anchor": "middle", "font-family": "sans-serif",
  });
  return [
    `<?xml version="1.0" encoding="UTF-8"?>`,
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" `
      + `viewBox="0 0 ${width} ${height}">`,
    head,
    caption,
    ...body,
    `</svg>`,
    ``,
  ].join("\n");
}
