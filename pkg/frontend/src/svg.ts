// Minimal deterministic SVG scene building: fixed styles, no timestamps, no
// randomness, so renders are pure functions of their inputs.

export interface Extent {
  min: number;
  max: number;
}

export function extent(values: number[], pad = 0.05): Extent {
  if (values.length === 0) {
    return { min: 0, max: 1 };
  }
  let min = Math.min(...values);
  let max = Math.max(...values);
  if (min === max) {
    min -= 0.5;
    max += 0.5;
  }
  const span = max - min;
  return { min: min - pad * span, max: max + pad * span };
}

/** Linear map from a data extent onto a pixel range. */
export function scale(domain: Extent, rangeMin: number, rangeMax: number) {
  const span = domain.max - domain.min;
  return (value: number) =>
    rangeMin + ((value - domain.min) / span) * (rangeMax - rangeMin);
}

export function ticks(domain: Extent, count = 5): number[] {
  const span = domain.max - domain.min;
  const rawStep = span / count;
  const magnitude = 10 ** Math.floor(Math.log10(rawStep));
  const residual = rawStep / magnitude;
  const step =
    residual >= 5 ? 5 * magnitude : residual >= 2 ? 2 * magnitude : magnitude;
  const first = Math.ceil(domain.min / step) * step;
  const out: number[] = [];
  for (let v = first; v <= domain.max + 1e-12; v += step) {
    out.push(Number(v.toPrecision(12)));
  }
  return out;
}

export function formatTick(value: number): string {
  if (value === 0) return "0";
  const abs = Math.abs(value);
  if (abs >= 1000 || abs < 0.01) return value.toExponential(1);
  return Number(value.toPrecision(4)).toString();
}

const esc = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

export function el(
  tag: string,
  attrs: Record<string, string | number>,
  children: string[] = [],
  text?: string,
): string {
  const attrText = Object.entries(attrs)
    .map(([key, value]) => ` ${key}="${value}"`)
    .join("");
  if (children.length === 0 && text === undefined) {
    return `<${tag}${attrText}/>`;
  }
  const body = text !== undefined ? esc(text) : children.join("");
  return `<${tag}${attrText}>${body}</${tag}>`;
}

export interface Frame {
  width: number;
  height: number;
  left: number;
  right: number;
  top: number;
  bottom: number;
  x: (value: number) => number;
  y: (value: number) => number;
}

/** Plot frame with margins; y axis points up (data max at the top). */
export function makeFrame(
  width: number,
  height: number,
  xDomain: Extent,
  yDomain: Extent,
  margin = { left: 52, right: 16, top: 28, bottom: 40 },
): Frame {
  return {
    width,
    height,
    left: margin.left,
    right: width - margin.right,
    top: margin.top,
    bottom: height - margin.bottom,
    x: scale(xDomain, margin.left, width - margin.right),
    y: scale(yDomain, height - margin.bottom, margin.top),
  };
}

export function axes(
  frame: Frame,
  xDomain: Extent,
  yDomain: Extent,
  xLabel: string,
  yLabel: string,
  title: string,
): string[] {
  const parts: string[] = [];
  parts.push(
    el("rect", {
      x: frame.left,
      y: frame.top,
      width: frame.right - frame.left,
      height: frame.bottom - frame.top,
      fill: "none",
      stroke: "#333",
      "stroke-width": 1,
    }),
  );
  for (const t of ticks(xDomain)) {
    const px = frame.x(t);
    parts.push(
      el("line", {
        x1: px, y1: frame.bottom, x2: px, y2: frame.bottom + 4,
        stroke: "#333",
      }),
      el(
        "text",
        {
          x: px, y: frame.bottom + 16, "text-anchor": "middle",
          "font-size": 10, fill: "#333",
        },
        [],
        formatTick(t),
      ),
    );
  }
  for (const t of ticks(yDomain)) {
    const py = frame.y(t);
    parts.push(
      el("line", {
        x1: frame.left - 4, y1: py, x2: frame.left, y2: py, stroke: "#333",
      }),
      el(
        "text",
        {
          x: frame.left - 7, y: py + 3, "text-anchor": "end",
          "font-size": 10, fill: "#333",
        },
        [],
        formatTick(t),
      ),
    );
  }
  parts.push(
    el(
      "text",
      {
        x: (frame.left + frame.right) / 2, y: frame.bottom + 31,
        "text-anchor": "middle", "font-size": 11, fill: "#333",
      },
      [],
      xLabel,
    ),
    el(
      "text",
      {
        x: 14, y: (frame.top + frame.bottom) / 2, "text-anchor": "middle",
        "font-size": 11, fill: "#333",
        transform: `rotate(-90 14 ${(frame.top + frame.bottom) / 2})`,
      },
      [],
      yLabel,
    ),
    el(
      "text",
      {
        x: (frame.left + frame.right) / 2, y: 16, "text-anchor": "middle",
        "font-size": 12, "font-weight": "bold", fill: "#111",
      },
      [],
      title,
    ),
  );
  return parts;
}

export function polyline(
  xs: number[],
  ys: number[],
  frame: Frame,
  stroke: string,
  dash?: string,
): string {
  const points = xs
    .map((x, i) => `${frame.x(x).toFixed(2)},${frame.y(ys[i]).toFixed(2)}`)
    .join(" ");
  const attrs: Record<string, string | number> = {
    points,
    fill: "none",
    stroke,
    "stroke-width": 1.2,
  };
  if (dash) attrs["stroke-dasharray"] = dash;
  return el("polyline", attrs);
}

export function document(width: number, height: number, parts: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    el("rect", { x: 0, y: 0, width, height, fill: "white" }),
    ...parts,
    "</svg>",
  ].join("\n");
}

/** Blue-white-red diverging color for values in [-1, 1]-ish ranges. */
export function diverging(value: number, lo: number, hi: number): string {
  const t = Math.max(0, Math.min(1, (value - lo) / (hi - lo)));
  // below midpoint: blue -> white; above: white -> red
  if (t < 0.5) {
    const u = t / 0.5;
    const m = (a: number, b: number) => Math.round(a + (b - a) * u);
    return `rgb(${m(33, 247)},${m(102, 247)},${m(172, 247)})`;
  }
  const u = (t - 0.5) / 0.5;
  const m = (a: number, b: number) => Math.round(a + (b - a) * u);
  return `rgb(${m(247, 178)},${m(247, 24)},${m(247, 43)})`;
}

export const SERIES_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];
