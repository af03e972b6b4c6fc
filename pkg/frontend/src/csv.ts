/** Parsing and validation of the two CSV schemas produced by geobalance. */

/** Raised when an input file does not match the expected schema. */
export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

/** Accepts ordinary floats plus the "nan"/"inf" spellings used upstream. */
function parseField(field: string): number | null {
  const lower = field.toLowerCase();
  if (lower === "nan") {
    return NaN;
  }
  if (lower === "inf" || lower === "+inf") {
    return Infinity;
  }
  if (lower === "-inf") {
    return -Infinity;
  }
  if (field === "") {
    return null;
  }
  const value = Number(field);
  return Number.isNaN(value) ? null : value;
}

export interface RawTable {
  header: string[];
  rows: number[][];
}

/** Split a strict numeric CSV (header line + numeric rows, no quoting). */
export function parseCsv(text: string, source = "<input>"): RawTable {
  const lines = text.split(/\r?\n/).filter((line) => line.trim() !== "");
  if (lines.length < 2) {
    throw new SchemaError(`${source}: expected a header line and at least one data row`);
  }
  const header = (lines[0] as string).split(",").map((s) => s.trim());
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const fields = (lines[i] as string).split(",");
    if (fields.length !== header.length) {
      throw new SchemaError(
        `${source}:${i + 1}: expected ${header.length} fields, got ${fields.length}`,
      );
    }
    const row: number[] = [];
    for (let j = 0; j < fields.length; j++) {
      const value = parseField((fields[j] as string).trim());
      if (value === null) {
        throw new SchemaError(`${source}:${i + 1}: field ${j + 1} is not a number`);
      }
      row.push(value);
    }
    rows.push(row);
  }
  return { header, rows };
}

export interface DriftRow {
  eps: number;
  deltaK: number;
  deltaE: number;
  fitC: number;
  fitc: number;
}

export interface DriftTable {
  rows: DriftRow[];
}

const DRIFT_HEADER = ["eps", "delta_K", "delta_E", "fit_C", "fit_c"];

/** Validate a drift-sweep table: eps, delta_K, delta_E, fit_C, fit_c. */
export function parseDriftTable(text: string, source = "<input>"): DriftTable {
  const { header, rows } = parseCsv(text, source);
  if (header.length !== DRIFT_HEADER.length
      || DRIFT_HEADER.some((name, i) => header[i] !== name)) {
    throw new SchemaError(
      `${source}: drift header must be "${DRIFT_HEADER.join(",")}", got "${header.join(",")}"`,
    );
  }
  return {
    rows: rows.map((r) => ({
      eps: r[0] as number,
      deltaK: r[1] as number,
      deltaE: r[2] as number,
      fitC: r[3] as number,
      fitc: r[4] as number,
    })),
  };
}

export interface Timeseries {
  tau: number[];
  kinetic: number[];
  energy: number[];
  /** Null when the optional K_ag column is absent. */
  kineticAg: number[] | null;
  /** Positions per sample, flattened (x1, y1, x2, y2, ...). */
  q: number[][];
  /** Momenta per sample, flattened like q. */
  p: number[][];
  particles: number;
}

function expectedParticleColumns(particles: number): string[] {
  const names: string[] = [];
  for (const block of ["q", "p"]) {
    for (let i = 1; i <= particles; i++) {
      names.push(`${block}${i}x`, `${block}${i}y`);
    }
  }
  return names;
}

/**
 * Validate a trajectory table: tau, K, H, optionally K_ag, then the
 * interleaved q1x..qNy, p1x..pNy particle columns.
 */
export function parseTimeseries(text: string, source = "<input>"): Timeseries {
  const { header, rows } = parseCsv(text, source);
  if (header[0] !== "tau" || header[1] !== "K" || header[2] !== "H") {
    throw new SchemaError(
      `${source}: timeseries header must start with "tau,K,H", got "${header.slice(0, 3).join(",")}"`,
    );
  }
  const hasAg = header[3] === "K_ag";
  const metaCols = hasAg ? 4 : 3;
  const particleCols = header.length - metaCols;
  if (particleCols <= 0 || particleCols % 4 !== 0) {
    throw new SchemaError(
      `${source}: expected 4 columns per particle after the scalar columns, got ${particleCols}`,
    );
  }
  const particles = particleCols / 4;
  const expected = expectedParticleColumns(particles);
  for (let i = 0; i < expected.length; i++) {
    if (header[metaCols + i] !== expected[i]) {
      throw new SchemaError(
        `${source}: column ${metaCols + i + 1} should be "${expected[i]}", got "${header[metaCols + i]}"`,
      );
    }
  }
  const width = 2 * particles;
  return {
    tau: rows.map((r) => r[0] as number),
    kinetic: rows.map((r) => r[1] as number),
    energy: rows.map((r) => r[2] as number),
    kineticAg: hasAg ? rows.map((r) => r[3] as number) : null,
    q: rows.map((r) => r.slice(metaCols, metaCols + width)),
    p: rows.map((r) => r.slice(metaCols + width, metaCols + 2 * width)),
    particles,
  };
}

/** Per-particle kinetic energies K_i = |p_i|^2 / 2 for each sample. */
export function particleKinetics(ts: Timeseries): number[][] {
  return ts.p.map((row) => {
    const ks: number[] = [];
    for (let i = 0; i < ts.particles; i++) {
      const px = row[2 * i] as number;
      const py = row[2 * i + 1] as number;
      ks.push(0.5 * (px * px + py * py));
    }
    return ks;
  });
}
