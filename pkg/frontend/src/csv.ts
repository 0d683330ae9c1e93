import Papa from "papaparse";

export interface Table {
    columns: string[];
    rows: Record<string, string>[];
}

/** Parse a results/figure CSV; `#` lines (seed + schema stamps) are skipped. */
export function parseCsv(text: string): Table {
    const parsed = Papa.parse<Record<string, string>>(text.trim(), {
        header: true,
        comments: "#",
        skipEmptyLines: true,
    });
    if (parsed.errors.length > 0) {
        const first = parsed.errors[0];
        throw new Error(`CSV parse error: ${first.message} (row ${first.row})`);
    }
    const columns = parsed.meta.fields ?? [];
    if (columns.length === 0) {
        throw new Error("CSV has no header row");
    }
    return { columns, rows: parsed.data };
}

export function requireColumns(table: Table, names: string[]): void {
    const missing = names.filter(c => !table.columns.includes(c));
    if (missing.length > 0) {
        throw new Error(`CSV is missing columns: ${missing.join(", ")}`);
    }
}

export function numeric(row: Record<string, string>, column: string): number {
    const value = Number(row[column]);
    if (!Number.isFinite(value)) {
        throw new Error(`column ${column} holds non-numeric value ${row[column]!}`);
    }
    return value;
}
