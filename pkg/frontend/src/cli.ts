/** Command-line entry: figures <kind> <input.csv> -o <out.svg>. */

import * as fs from "node:fs";
import * as path from "node:path";

import { SchemaError } from "./csv.js";
import { FIGURE_KINDS, FigureKind, renderFigure } from "./figures.js";

export const USAGE = [
  "usage: figures <kind> <input.csv> -o <out.svg>",
  `  kind: ${FIGURE_KINDS.join(" | ")}`,
].join("\n");

interface Job {
  kind: FigureKind;
  input: string;
  output: string;
}

class UsageError extends Error {}

function parseArgs(argv: string[]): Job {
  const positional: string[] = [];
  let output: string | null = null;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i] as string;
    if (arg === "-o" || arg === "--out") {
      const value = argv[i + 1];
      if (value === undefined) {
        throw new UsageError(`missing value for ${arg}`);
      }
      output = value;
      i++;
    } else if (arg.startsWith("-")) {
      throw new UsageError(`unknown option: ${arg}`);
    } else {
      positional.push(arg);
    }
  }
  if (positional.length === 0) {
    throw new UsageError("missing figure kind");
  }
  const kind = positional[0] as string;
  if (!(FIGURE_KINDS as string[]).includes(kind)) {
    throw new UsageError(`unknown figure kind: ${kind}`);
  }
  if (positional.length < 2) {
    throw new UsageError("missing input CSV path");
  }
  if (positional.length > 2) {
    throw new UsageError(`unexpected argument: ${positional[2]}`);
  }
  if (output === null) {
    throw new UsageError("missing -o <out.svg>");
  }
  return { kind: kind as FigureKind, input: positional[1] as string, output };
}

export interface Io {
  stderr(line: string): void;
}

const defaultIo: Io = {
  stderr: (line) => process.stderr.write(line + "\n"),
};

/** Run the CLI; returns the process exit code (0 ok, 1 usage, 2 runtime). */
export function main(argv: string[], io: Io = defaultIo): number {
  let job: Job;
  try {
    job = parseArgs(argv);
  } catch (err) {
    io.stderr(`figures: ${(err as Error).message}`);
    io.stderr(USAGE);
    return 1;
  }
  try {
    const csvText = fs.readFileSync(job.input, "utf8");
    const svg = renderFigure(job.kind, csvText, path.basename(job.input));
    fs.writeFileSync(job.output, svg, "utf8");
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      io.stderr(`figures: schema error: ${err.message}`);
    } else {
      io.stderr(`figures: ${(err as Error).message}`);
    }
    return 2;
  }
}
