/**
 * Minimal CSV reader for the solver's diagnostics outputs.
 *
 * All consumed files are plain comma-separated numeric tables with a
 * single header row naming the columns. Field dumps additionally carry
 * one leading comment line of the form `# quantity=<name> time=<t>`,
 * which is parsed into the table metadata.
 */

/** Raised when a requested column is absent from a parsed table. */
export class MissingColumnError extends Error {
  constructor(column: string, source: string) {
    super(`missing column "${column}" in ${source}`);
    this.name = "MissingColumnError";
  }
}

export interface Table {
  /** Column names from the header row, in file order. */
  columns: string[];
  /** One entry per data row; strings are kept verbatim. */
  rows: string[][];
  /** Key/value pairs from leading `# key=value ...` comment lines. */
  meta: Record<string, string>;
  /** Label used in error messages (normally the file path). */
  source: string;
}

/** Parse CSV text into a table, capturing `# key=value` comment lines. */
export function parseTable(text: string, source = "csv input"): Table {
  const meta: Record<string, string> = {};
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  let headerIndex = 0;
  while (headerIndex < lines.length && lines[headerIndex]!.startsWith("#")) {
    for (const pair of lines[headerIndex]!.slice(1).trim().split(/\s+/)) {
      const eq = pair.indexOf("=");
      if (eq > 0) meta[pair.slice(0, eq)] = pair.slice(eq + 1);
    }
    headerIndex += 1;
  }
  if (headerIndex >= lines.length) {
    throw new Error(`no header row in ${source}`);
  }
  const columns = lines[headerIndex]!.split(",").map((c) => c.trim());
  const rows = lines.slice(headerIndex + 1).map((line) => line.split(","));
  return { columns, rows, meta, source };
}

/** Index of a named column; throws MissingColumnError when absent. */
export function columnIndex(table: Table, name: string): number {
  const idx = table.columns.indexOf(name);
  if (idx < 0) throw new MissingColumnError(name, table.source);
  return idx;
}

/**
 * A named column as numbers. Empty cells become NaN (diagnostics files
 * leave reference-relative columns blank when no reference exists).
 */
export function numberColumn(table: Table, name: string): number[] {
  const idx = columnIndex(table, name);
  return table.rows.map((row) => {
    const cell = row[idx];
    return cell === undefined || cell === "" ? NaN : Number(cell);
  });
}

/** A named column as verbatim strings. */
export function stringColumn(table: Table, name: string): string[] {
  const idx = columnIndex(table, name);
  return table.rows.map((row) => row[idx] ?? "");
}
