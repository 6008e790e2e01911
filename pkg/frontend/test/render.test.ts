// Every figure kind renders its golden CSV; schema errors name the column;
// renders are pure (identical strings on repeat calls).

import { mkdtempSync, readFileSync, writeFileSync, existsSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { parseCsv, requireColumns, SchemaError } from "../src/csv.js";
import { render, FIGURE_KINDS, PlotJob } from "../src/render.js";
import { main as cliMain } from "../src/cli.js";

const golden = (name: string) =>
  readFileSync(join(__dirname, "..", "golden", name), "utf-8");

const jobFor = (kind: PlotJob["kind"]): PlotJob => {
  switch (kind) {
    case "surface":
      return { kind, inputs: [{ name: "surface", text: golden("surface.csv") }] };
    case "classify":
      return { kind, inputs: [{ name: "classify", text: golden("classify.csv") }] };
    case "trajectory":
      return { kind, inputs: [{ name: "trajectory", text: golden("trajectory.csv") }] };
    case "phase":
      return {
        kind,
        delay: 1,
        inputs: [{ name: "trajectory", text: golden("trajectory.csv") }],
      };
    case "capacity":
      return {
        kind,
        inputs: [
          { name: "qrc", text: golden("capacity_qrc.csv") },
          { name: "esn", text: golden("capacity_esn.csv") },
        ],
      };
  }
};

describe("golden renders", () => {
  for (const kind of FIGURE_KINDS) {
    it(`renders ${kind} from its golden CSV`, () => {
      const svg = render(jobFor(kind));
      expect(svg.startsWith("<svg")).toBe(true);
      expect(svg.endsWith("</svg>")).toBe(true);
      expect(svg).toContain("<rect");
    });
  }

  it("is a pure function of its inputs", () => {
    const a = render(jobFor("trajectory"));
    const b = render(jobFor("trajectory"));
    expect(a).toBe(b);
  });
});

describe("trajectory specifics", () => {
  it("marks the teacher-to-autonomous switch", () => {
    const svg = render(jobFor("trajectory"));
    expect(svg).toContain('class="switch-marker"');
    expect(svg).toContain("autonomous");
  });

  it("golden trajectory really contains both modes", () => {
    const table = parseCsv(golden("trajectory.csv"));
    const idx = requireColumns(table, ["mode"]);
    const modes = new Set(table.rows.map((r) => r[idx.mode]));
    expect(modes.has("teacher")).toBe(true);
    expect(modes.has("autonomous")).toBe(true);
  });
});

describe("schema checks", () => {
  it("names the offending column", () => {
    const bad = "x0,x1,zeta\n0.1,0.2,0.3\n";
    try {
      render({ kind: "surface", inputs: [{ name: "bad", text: bad }] });
      throw new Error("should have thrown");
    } catch (error) {
      expect(error).toBeInstanceOf(SchemaError);
      expect((error as SchemaError).column).toBe("z");
      expect((error as Error).message).toContain("'z'");
    }
  });

  it("empty-but-valid CSV renders empty axes", () => {
    const empty = "delay,capacity\n";
    const svg = render({
      kind: "capacity",
      inputs: [{ name: "empty", text: empty }],
    });
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg).not.toContain("<circle");
  });

  it("phase rejects a non-positive delay", () => {
    expect(() =>
      render({ kind: "phase", delay: 0, inputs: jobFor("phase").inputs }),
    ).toThrow(/delay/);
  });
});

describe("cli", () => {
  it("renders a file end to end", () => {
    const dir = mkdtempSync(join(tmpdir(), "qres-plots-"));
    const input = join(dir, "trajectory.csv");
    writeFileSync(input, golden("trajectory.csv"));
    const out = join(dir, "out.svg");
    const code = cliMain(["render", "--kind", "trajectory", "--in", input, "--out", out]);
    expect(code).toBe(0);
    expect(existsSync(out)).toBe(true);
    expect(readFileSync(out, "utf-8")).toContain("</svg>");
  });

  it("exits 2 on schema mismatch and names the column", () => {
    const dir = mkdtempSync(join(tmpdir(), "qres-plots-"));
    const input = join(dir, "bad.csv");
    writeFileSync(input, "a,b\n1,2\n");
    const code = cliMain(["render", "--kind", "surface", "--in", input, "--out", join(dir, "x.svg")]);
    expect(code).toBe(2);
  });

  it("exits 1 on usage errors", () => {
    expect(cliMain(["render", "--kind", "nope", "--in", "x.csv", "--out", "y.svg"])).toBe(1);
    expect(cliMain(["frobnicate"])).toBe(1);
  });

  it("exits 3 on missing input file", () => {
    expect(
      cliMain(["render", "--kind", "surface", "--in", "/nope.csv", "--out", "/tmp/x.svg"]),
    ).toBe(3);
  });
});
