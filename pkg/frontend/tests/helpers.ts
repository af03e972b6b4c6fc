import * as fs from "node:fs";
import * as path from "node:path";
import { fileURLToPath } from "node:url";

const here = path.dirname(fileURLToPath(import.meta.url));

export function fixturePath(name: string): string {
  return path.join(here, "fixtures", name);
}

export function readFixture(name: string): string {
  return fs.readFileSync(fixturePath(name), "utf8");
}

/** Extract the cx/cy pixel pairs of the circles inside a <g class=...>. */
export function circleCenters(svg: string, cls: string): [number, number][] {
  const group = svg.match(new RegExp(`<g class="${cls}">(.*?)</g>`, "s"));
  if (group === null) {
    return [];
  }
  const out: [number, number][] = [];
  for (const m of (group[1] as string).matchAll(
      /cx="(-?[\d.]+)" cy="(-?[\d.]+)"/g)) {
    out.push([Number(m[1]), Number(m[2])]);
  }
  return out;
}

/** Extract the vertex list of the polyline carrying a given class. */
export function polylinePoints(svg: string, cls: string): [number, number][] {
  const m = svg.match(new RegExp(
    `<polyline points="([^"]+)" fill="none" class="${cls}"`));
  if (m === null) {
    return [];
  }
  return (m[1] as string).split(" ").map((pair) => {
    const [x, y] = pair.split(",");
    return [Number(x), Number(y)] as [number, number];
  });
}

/** A minimal timeseries CSV with the given columns. */
export function timeseriesCsv(
  rows: number[][],
  { withAg = true, particles = 1 }: { withAg?: boolean; particles?: number } = {},
): string {
  const cols = ["tau", "K", "H"];
  if (withAg) {
    cols.push("K_ag");
  }
  for (const block of ["q", "p"]) {
    for (let i = 1; i <= particles; i++) {
      cols.push(`${block}${i}x`, `${block}${i}y`);
    }
  }
  return [cols.join(","), ...rows.map((r) => r.join(","))].join("\n") + "\n";
}
