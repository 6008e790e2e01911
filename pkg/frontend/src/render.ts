// Figure-kind dispatch: a PlotJob names the kind, input CSV text(s), and an
// optional embedding delay; the result is one SVG document string.

import { parseCsv } from "./csv.js";
import {
  renderCapacity,
  renderClassify,
  renderPhase,
  renderSurface,
  renderTrajectory,
} from "./charts.js";

export const FIGURE_KINDS = [
  "surface",
  "classify",
  "trajectory",
  "phase",
  "capacity",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface PlotJob {
  kind: FigureKind;
  /** CSV file contents, keyed by a display name (usually the basename). */
  inputs: Array<{ name: string; text: string }>;
  /** Embedding delay in steps; phase diagrams only. */
  delay?: number;
}

export function render(job: PlotJob): string {
  if (job.inputs.length === 0) {
    throw new Error("render needs at least one input CSV");
  }
  const tables = job.inputs.map(({ name, text }) => ({
    name,
    table: parseCsv(text),
  }));
  switch (job.kind) {
    case "surface":
      return renderSurface(tables[0].table);
    case "classify":
      return renderClassify(tables[0].table);
    case "trajectory":
      return renderTrajectory(tables[0].table);
    case "phase":
      return renderPhase(tables[0].table, job.delay ?? 1);
    case "capacity":
      return renderCapacity(tables);
    default: {
      const exhaustive: never = job.kind;
      throw new Error(`unknown figure kind ${exhaustive}`);
    }
  }
}
