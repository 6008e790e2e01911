// render --kind <k> --in <csv...> --out <img.svg> [--delay n]
//
// Exit codes: 0 success, 1 bad arguments, 2 schema mismatch (the offending
// column is named on stderr), 3 read/write failure.

import { readFileSync, writeFileSync } from "node:fs";
import { basename } from "node:path";
import { SchemaError } from "./csv.js";
import { FIGURE_KINDS, FigureKind, PlotJob, render } from "./render.js";

interface Args {
  kind: FigureKind;
  inputs: string[];
  out: string;
  delay?: number;
}

function parseArgs(argv: string[]): Args {
  if (argv[0] !== "render") {
    throw new UsageError("usage: render --kind <kind> --in <csv...> --out <svg> [--delay n]");
  }
  let kind: string | undefined;
  let out: string | undefined;
  let delay: number | undefined;
  const inputs: string[] = [];
  for (let i = 1; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--kind") {
      kind = argv[++i];
    } else if (arg === "--out") {
      out = argv[++i];
    } else if (arg === "--delay") {
      delay = Number(argv[++i]);
      if (!Number.isInteger(delay) || delay < 1) {
        throw new UsageError(`--delay must be a positive integer, got '${argv[i]}'`);
      }
    } else if (arg === "--in") {
      while (i + 1 < argv.length && !argv[i + 1].startsWith("--")) {
        inputs.push(argv[++i]);
      }
    } else {
      throw new UsageError(`unknown argument '${arg}'`);
    }
  }
  if (!kind || !(FIGURE_KINDS as readonly string[]).includes(kind)) {
    throw new UsageError(
      `--kind must be one of ${FIGURE_KINDS.join(", ")}, got '${kind}'`,
    );
  }
  if (inputs.length === 0) throw new UsageError("--in needs at least one CSV path");
  if (!out) throw new UsageError("--out is required");
  return { kind: kind as FigureKind, inputs, out, delay };
}

class UsageError extends Error {}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (error) {
    console.error((error as Error).message);
    return 1;
  }
  let job: PlotJob;
  try {
    job = {
      kind: args.kind,
      delay: args.delay,
      inputs: args.inputs.map((path) => ({
        name: basename(path).replace(/\.csv$/, ""),
        text: readFileSync(path, "utf-8"),
      })),
    };
  } catch (error) {
    console.error(`cannot read input: ${(error as Error).message}`);
    return 3;
  }
  let svg: string;
  try {
    svg = render(job);
  } catch (error) {
    if (error instanceof SchemaError) {
      console.error(`schema mismatch in column '${error.column}': ${error.message}`);
      return 2;
    }
    console.error((error as Error).message);
    return 2;
  }
  try {
    writeFileSync(args.out, svg, "utf-8");
  } catch (error) {
    console.error(`cannot write output: ${(error as Error).message}`);
    return 3;
  }
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
