// CSV loading with schema checks against the columns the primary component
// publishes. A mismatch throws SchemaError naming the offending column so the
// CLI can exit nonzero with a useful message.

import Papa from "papaparse";

export class SchemaError extends Error {
  readonly column: string;

  constructor(column: string, message: string) {
    super(message);
    this.column = column;
    this.name = "SchemaError";
  }
}

export interface Table {
  header: string[];
  rows: string[][];
}

export function parseCsv(text: string): Table {
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new Error(`CSV parse error: ${first.message} (row ${first.row})`);
  }
  const data = parsed.data;
  if (data.length === 0) {
    throw new Error("CSV has no header row");
  }
  return { header: data[0], rows: data.slice(1) };
}

/** Check the header contains every required column; returns their indices. */
export function requireColumns(
  table: Table,
  required: string[],
): Record<string, number> {
  const indices: Record<string, number> = {};
  for (const column of required) {
    const at = table.header.indexOf(column);
    if (at < 0) {
      throw new SchemaError(
        column,
        `missing required column '${column}' (header: ${table.header.join(",")})`,
      );
    }
    indices[column] = at;
  }
  return indices;
}

export function numberAt(row: string[], index: number): number {
  const value = Number(row[index]);
  if (!Number.isFinite(value)) {
    throw new Error(`expected a finite number, got '${row[index]}'`);
  }
  return value;
}

/** Extract numeric columns; rows with blank cells in any column are skipped. */
export function numericColumns(
  table: Table,
  columns: string[],
): Record<string, number[]> {
  const indices = requireColumns(table, columns);
  const out: Record<string, number[]> = {};
  for (const column of columns) {
    out[column] = [];
  }
  for (const row of table.rows) {
    if (columns.some((column) => row[indices[column]] === "")) {
      continue;
    }
    for (const column of columns) {
      out[column].push(numberAt(row, indices[column]));
    }
  }
  return out;
}
