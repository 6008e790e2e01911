// One renderer per figure kind. Each takes already-parsed CSV tables and
// returns a complete SVG document string; no I/O, no global state.

import { numericColumns, requireColumns, Table } from "./csv.js";
import {
  axes,
  diverging,
  document,
  el,
  extent,
  Extent,
  makeFrame,
  polyline,
  SERIES_COLORS,
} from "./svg.js";

const WIDTH = 640;
const HEIGHT = 420;

const UNIT: Extent = { min: -0.02, max: 1.02 };

/** Heatmap of a scalar readout over the unit square (surface.csv). */
export function renderSurface(table: Table): string {
  const cols = numericColumns(table, ["x0", "x1", "z"]);
  const xs = [...new Set(cols.x0)].sort((a, b) => a - b);
  const ys = [...new Set(cols.x1)].sort((a, b) => a - b);
  const frame = makeFrame(WIDTH, HEIGHT, UNIT, UNIT);
  const parts: string[] = [];
  const zLo = Math.min(-1e-9, ...cols.z);
  const zHi = Math.max(1e-9, ...cols.z);
  const cellW = xs.length > 1 ? (frame.x(xs[1]) - frame.x(xs[0])) : 10;
  const cellH = ys.length > 1 ? (frame.y(ys[0]) - frame.y(ys[1])) : 10;
  for (let i = 0; i < cols.z.length; i++) {
    parts.push(
      el("rect", {
        x: (frame.x(cols.x0[i]) - cellW / 2).toFixed(2),
        y: (frame.y(cols.x1[i]) - cellH / 2).toFixed(2),
        width: Math.abs(cellW).toFixed(2),
        height: Math.abs(cellH).toFixed(2),
        fill: diverging(cols.z[i], zLo, zHi),
      }),
    );
  }
  parts.push(...axes(frame, UNIT, UNIT, "x0", "x1", "readout over the input square"));
  return document(WIDTH, HEIGHT, parts);
}

/** Three panels: true labels, raw readout, thresholded prediction. */
export function renderClassify(table: Table): string {
  const cols = numericColumns(table, ["x0", "x1", "label", "readout", "prediction"]);
  const panelWidth = 340;
  const width = panelWidth * 3;
  const height = 390;
  const parts: string[] = [];
  const panels: Array<{ title: string; color: (i: number) => string }> = [
    {
      title: "true labels",
      color: (i) => (cols.label[i] > 0.5 ? "#d62728" : "#1f77b4"),
    },
    {
      title: "readout",
      color: (i) => diverging(cols.readout[i], 0, 1),
    },
    {
      title: "prediction (threshold 0.5)",
      color: (i) => (cols.prediction[i] > 0.5 ? "#d62728" : "#1f77b4"),
    },
  ];
  panels.forEach((panel, p) => {
    const left = p * panelWidth + 46;
    const right = (p + 1) * panelWidth - 14;
    const top = 28;
    const bottom = height - 40;
    const local = {
      width: panelWidth,
      height,
      left,
      right,
      top,
      bottom,
      x: (v: number) => left + ((v - UNIT.min) / (UNIT.max - UNIT.min)) * (right - left),
      y: (v: number) => bottom + ((v - UNIT.min) / (UNIT.max - UNIT.min)) * (top - bottom),
    };
    for (let i = 0; i < cols.x0.length; i++) {
      parts.push(
        el("circle", {
          cx: local.x(cols.x0[i]).toFixed(2),
          cy: local.y(cols.x1[i]).toFixed(2),
          r: 2.4,
          fill: panel.color(i),
          "fill-opacity": 0.85,
        }),
      );
    }
    parts.push(...axes(local, UNIT, UNIT, "x0", p === 0 ? "x1" : "", panel.title));
  });
  return document(width, height, parts);
}

interface TrajectoryData {
  step: number[];
  target: number[];
  prediction: number[];
  mode: string[];
  switchStep: number | null;
}

function trajectoryData(table: Table): TrajectoryData {
  const idx = requireColumns(table, ["step", "input", "target", "prediction", "mode"]);
  const step: number[] = [];
  const target: number[] = [];
  const prediction: number[] = [];
  const mode: string[] = [];
  let switchStep: number | null = null;
  for (const row of table.rows) {
    const m = row[idx.mode];
    step.push(Number(row[idx.step]));
    prediction.push(Number(row[idx.prediction]));
    target.push(row[idx.target] === "" ? NaN : Number(row[idx.target]));
    mode.push(m);
    if (m === "autonomous" && switchStep === null) {
      switchStep = Number(row[idx.step]);
    }
  }
  return { step, target, prediction, mode, switchStep };
}

/** Target and prediction over time with the teacher->autonomous switch marked. */
export function renderTrajectory(table: Table, tailSteps = 600): string {
  const data = trajectoryData(table);
  const from = Math.max(0, data.step.length - tailSteps);
  const step = data.step.slice(from);
  const target = data.target.slice(from);
  const prediction = data.prediction.slice(from);
  const finite = target.filter(Number.isFinite);
  const yDomain = extent([...finite, ...prediction]);
  const xDomain = extent(step, 0.0);
  const frame = makeFrame(WIDTH, HEIGHT, xDomain, yDomain);
  const parts: string[] = [];
  const targetPairs = step.filter((_, i) => Number.isFinite(target[i]));
  parts.push(
    polyline(
      targetPairs,
      target.filter(Number.isFinite),
      frame,
      SERIES_COLORS[0],
    ),
    polyline(step, prediction, frame, SERIES_COLORS[1]),
  );
  if (data.switchStep !== null && data.switchStep >= step[0]) {
    const px = frame.x(data.switchStep);
    parts.push(
      el("line", {
        x1: px.toFixed(2), y1: frame.top, x2: px.toFixed(2), y2: frame.bottom,
        stroke: "#555", "stroke-dasharray": "4 3", "stroke-width": 1.2,
        class: "switch-marker",
      }),
      el(
        "text",
        {
          x: px + 4, y: frame.top + 12, "font-size": 10, fill: "#555",
        },
        [],
        "autonomous",
      ),
    );
  }
  parts.push(
    el(
      "text",
      { x: frame.right - 150, y: frame.top + 12, "font-size": 10, fill: SERIES_COLORS[0] },
      [],
      "target",
    ),
    el(
      "text",
      { x: frame.right - 150, y: frame.top + 24, "font-size": 10, fill: SERIES_COLORS[1] },
      [],
      "prediction",
    ),
    ...axes(frame, xDomain, yDomain, "step", "value", "teacher-forced and autonomous trajectory"),
  );
  return document(WIDTH, HEIGHT, parts);
}

/** Delayed phase diagram (v_t, v_{t+delay}) of truth and autonomous output. */
export function renderPhase(table: Table, delay: number): string {
  if (!Number.isInteger(delay) || delay < 1) {
    throw new Error(`phase delay must be a positive integer, got ${delay}`);
  }
  const data = trajectoryData(table);
  const truth = data.target.filter(Number.isFinite);
  const autonomous = data.prediction.filter((_, i) => data.mode[i] === "autonomous");
  const values = [...truth, ...autonomous];
  const domain = extent(values);
  const frame = makeFrame(WIDTH, HEIGHT, domain, domain);
  const parts: string[] = [];
  const scatter = (series: number[], color: string, r: number) => {
    for (let i = 0; i + delay < series.length; i++) {
      parts.push(
        el("circle", {
          cx: frame.x(series[i]).toFixed(2),
          cy: frame.y(series[i + delay]).toFixed(2),
          r,
          fill: color,
          "fill-opacity": 0.6,
        }),
      );
    }
  };
  scatter(truth, "#bbbbbb", 1.6);
  scatter(autonomous, SERIES_COLORS[1], 2.0);
  parts.push(
    el(
      "text",
      { x: frame.right - 170, y: frame.top + 12, "font-size": 10, fill: "#888" },
      [],
      "ground truth",
    ),
    el(
      "text",
      { x: frame.right - 170, y: frame.top + 24, "font-size": 10, fill: SERIES_COLORS[1] },
      [],
      "autonomous output",
    ),
    ...axes(
      frame,
      domain,
      domain,
      "value(t)",
      `value(t+${delay})`,
      `delayed phase diagram (delay ${delay})`,
    ),
  );
  return document(WIDTH, HEIGHT, parts);
}

/** Capacity-vs-delay curves, one per input CSV. */
export function renderCapacity(tables: Array<{ name: string; table: Table }>): string {
  const frame0Domain: Extent = { min: 0, max: 1 };
  let xDomain: Extent = frame0Domain;
  let yMax = 1.0;
  const series: Array<{ name: string; delay: number[]; capacity: number[] }> = [];
  for (const { name, table } of tables) {
    const cols = numericColumns(table, ["delay", "capacity"]);
    series.push({ name, delay: cols.delay, capacity: cols.capacity });
    if (cols.delay.length > 0) {
      xDomain = extent([0, Math.max(...cols.delay)], 0.02);
      yMax = Math.max(yMax, ...cols.capacity);
    }
  }
  const yDomain: Extent = { min: -0.02, max: yMax * 1.05 };
  const frame = makeFrame(WIDTH, HEIGHT, xDomain, yDomain);
  const parts: string[] = [];
  series.forEach((s, i) => {
    if (s.delay.length === 0) return;
    const color = SERIES_COLORS[i % SERIES_COLORS.length];
    parts.push(polyline(s.delay, s.capacity, frame, color));
    for (let k = 0; k < s.delay.length; k++) {
      parts.push(
        el("circle", {
          cx: frame.x(s.delay[k]).toFixed(2),
          cy: frame.y(s.capacity[k]).toFixed(2),
          r: 2.5,
          fill: color,
        }),
      );
    }
    parts.push(
      el(
        "text",
        {
          x: frame.right - 150,
          y: frame.top + 12 + 12 * i,
          "font-size": 10,
          fill: color,
        },
        [],
        s.name,
      ),
    );
  });
  parts.push(
    ...axes(frame, xDomain, yDomain, "delay", "capacity", "memory capacity vs delay"),
  );
  return document(WIDTH, HEIGHT, parts);
}
