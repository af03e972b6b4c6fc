import { describe, expect, it } from "vitest";

import { SchemaError, parseDriftTable, parseTimeseries } from "../src/csv.js";
import {
  FIGURE_KINDS,
  plotBalance,
  plotDrift,
  plotKinetic,
  plotTrajectories,
  renderFigure,
} from "../src/figures.js";
import {
  circleCenters,
  polylinePoints,
  readFixture,
  timeseriesCsv,
} from "./helpers.js";

const GOLDEN: Record<string, string> = {
  drift: "drift.csv",
  trajectories: "exchange.csv",
  kinetic: "exchange.csv",
  balance: "shear.csv",
};

describe("golden fixtures", () => {
  for (const kind of FIGURE_KINDS) {
    it(`renders ${kind} from its golden fixture`, () => {
      const svg = renderFigure(kind, readFixture(GOLDEN[kind] as string));
      expect(svg.startsWith(`<?xml version="1.0"`)).toBe(true);
      expect(svg).toContain("<svg ");
      expect(svg).toContain("</svg>");
    });

    it(`renders ${kind} byte-identically on rerun`, () => {
      const text = readFixture(GOLDEN[kind] as string);
      expect(renderFigure(kind, text)).toBe(renderFigure(kind, text));
    });

    it(`embeds no timestamp in ${kind}`, () => {
      const svg = renderFigure(kind, readFixture(GOLDEN[kind] as string));
      expect(svg).not.toMatch(/\d{4}-\d{2}-\d{2}/);
      expect(svg).not.toMatch(/\d{2}:\d{2}:\d{2}/);
    });
  }
});

describe("plotDrift", () => {
  it("overlays the fitted curve through exact-exponential data", () => {
    const svg = plotDrift(parseDriftTable(readFixture("drift_exact.csv")));
    const points = circleCenters(svg, "dk");
    const fit = polylinePoints(svg, "fit");
    expect(points.length).toBe(9);
    expect(fit.length).toBeGreaterThan(100);
    for (const [cx, cy] of points) {
      const gap = Math.min(...fit.map(
        ([x, y]) => Math.hypot(x - cx, y - cy)));
      expect(gap).toBeLessThan(0.011);
    }
  });

  it("places the energy-drift points below the kinetic-drift points", () => {
    const svg = plotDrift(parseDriftTable(readFixture("drift_exact.csv")));
    const dk = circleCenters(svg, "dk");
    const de = circleCenters(svg, "de");
    expect(de.length).toBe(dk.length);
    dk.forEach(([cx, cy], i) => {
      const [ex, ey] = de[i] as [number, number];
      expect(ex).toBeCloseTo(cx, 6);
      expect(ey).toBeGreaterThan(cy);
    });
  });

  it("omits the overlay for a single-row sweep", () => {
    const svg = plotDrift(parseDriftTable(readFixture("drift_single.csv")));
    expect(svg).not.toContain(`class="fit"`);
    expect(circleCenters(svg, "dk").length).toBe(1);
  });

  it("draws the overlay for the golden sweep", () => {
    const svg = plotDrift(parseDriftTable(readFixture("drift.csv")));
    expect(svg).toContain(`class="fit"`);
    expect(svg).toContain("exp(");
  });
});

describe("plotTrajectories", () => {
  it("draws one path and one legend entry per particle", () => {
    const svg = plotTrajectories(parseTimeseries(readFixture("exchange.csv")));
    expect(svg).toContain(`class="path-1"`);
    expect(svg).toContain(`class="path-2"`);
    expect(svg).not.toContain(`class="path-3"`);
    expect(svg.match(/particle \d+/g)).toEqual(["particle 1", "particle 2"]);
  });

  it("marks start and end of each path", () => {
    const svg = plotTrajectories(parseTimeseries(readFixture("exchange.csv")));
    expect((svg.match(/>\*<\/text>/g) ?? []).length).toBe(2);
  });

  it("renders markers only for a single-sample file", () => {
    const ts = parseTimeseries(timeseriesCsv([[0, 0.5, 0.5, 0, 1, 2, 1, 0]]));
    const svg = plotTrajectories(ts);
    expect(svg).not.toContain("path-1");
    expect(svg).toContain(">*</text>");
    expect(svg.match(/particle \d+/g)).toEqual(["particle 1"]);
  });
});

describe("plotKinetic", () => {
  it("draws per-particle and total lines from the golden fixture", () => {
    const svg = plotKinetic(parseTimeseries(readFixture("exchange.csv")));
    expect(polylinePoints(svg, "k-1").length).toBeGreaterThan(2);
    expect(polylinePoints(svg, "k-2").length).toBeGreaterThan(2);
    expect(polylinePoints(svg, "k-total").length).toBeGreaterThan(2);
  });

  it("draws flat lines for constant kinetic energy", () => {
    const rows = [0, 1, 2].map((t) => [t, 0.5, 0.5, 0, t, 0, 1, 0]);
    const svg = plotKinetic(parseTimeseries(timeseriesCsv(rows)));
    const ys = polylinePoints(svg, "k-1").map(([, y]) => y);
    expect(new Set(ys).size).toBe(1);
  });

  it("rejects a K column inconsistent with the momenta", () => {
    const csv = timeseriesCsv([[0, 0.9, 0.9, 0, 0, 0, 1, 0]]);
    expect(() => plotKinetic(parseTimeseries(csv))).toThrow(SchemaError);
  });

  it("tolerates a missing K_ag column", () => {
    const csv = timeseriesCsv([[0, 0.5, 0.5, 0, 0, 1, 0],
                               [1, 0.5, 0.5, 1, 1, 1, 0]], { withAg: false });
    const svg = plotKinetic(parseTimeseries(csv));
    expect(svg).toContain("k-total");
  });
});

describe("plotBalance", () => {
  it("renders split axes from the golden shear fixture", () => {
    const svg = plotBalance(parseTimeseries(readFixture("shear.csv")));
    expect(polylinePoints(svg, "k").length).toBeGreaterThan(2);
    expect(polylinePoints(svg, "k-ag").length).toBeGreaterThan(2);
    expect(svg).toContain("|H−H(0)|/|H(0)|");
  });

  it("requires the K_ag column", () => {
    const csv = timeseriesCsv([[0, 0.5, 0.5, 0, 0, 1, 0]], { withAg: false });
    expect(() => plotBalance(parseTimeseries(csv))).toThrow(/K_ag/);
  });

  it("draws an identically-zero K_ag as a flat line", () => {
    const rows = [0, 1, 2].map((t) => [t, 0.5, 0.5, 0, t, 0, 1, 0]);
    const svg = plotBalance(parseTimeseries(timeseriesCsv(rows)));
    const ys = polylinePoints(svg, "k-ag").map(([, y]) => y);
    expect(ys.length).toBe(3);
    expect(new Set(ys).size).toBe(1);
  });
});
