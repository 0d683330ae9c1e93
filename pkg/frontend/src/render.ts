import { Table, numeric, parseCsv, requireColumns } from "./csv.js";
import { FigureSpec } from "./figspec.js";
import { Scale, linearScale, logScale, px } from "./scale.js";
import * as svg from "./svg.js";

interface Series {
    name: string;
    points: { x: number; y: number }[];
}

/** Rows -> named series: one per y column, split further by the group column. */
function collectSeries(table: Table, spec: FigureSpec): Series[] {
    const xCol = spec.x!;
    requireColumns(table, [xCol, ...(spec.y ?? [])]);
    if (spec.seriesBy) requireColumns(table, [spec.seriesBy]);
    const out: Series[] = [];
    for (const yCol of spec.y ?? []) {
        const groups = new Map<string, Series>();
        for (const row of table.rows) {
            if (row[yCol] === "" || row[xCol] === "") continue;
            const key = spec.seriesBy ? row[spec.seriesBy]! : "";
            const name = key === "" ? yCol
                : (spec.y!.length > 1 ? `${yCol} ${key}` : key);
            if (!groups.has(key)) groups.set(key, { name, points: [] });
            groups.get(key)!.points.push(
                { x: numeric(row, xCol), y: numeric(row, yCol) });
        }
        out.push(...[...groups.entries()]
            .sort((a, b) => a[0].localeCompare(b[0]))
            .map(([, series]) => series));
    }
    for (const series of out) {
        series.points.sort((a, b) => a.x - b.x);
    }
    return out;
}

function xyScales(series: Series[], logX: boolean): { xs: Scale; ys: Scale } {
    const area = svg.plotArea();
    const xs = series.flatMap(s => s.points.map(p => p.x));
    const ys = series.flatMap(s => s.points.map(p => p.y));
    return {
        xs: logX ? logScale(xs, [area.x0, area.x1])
                 : linearScale(xs, [area.x0, area.x1]),
        ys: linearScale(ys, [area.y0, area.y1]),
    };
}

function renderLines(table: Table, spec: FigureSpec, withSegments: boolean): string {
    const series = collectSeries(table, spec);
    if (series.every(s => s.points.length === 0)) {
        return emptyFigure(spec);
    }
    const { xs, ys } = xyScales(series, spec.logX ?? false);
    const parts: string[] = [svg.axes(xs, ys, spec.xLabel, spec.yLabel)];
    series.forEach((s, i) => {
        const style = svg.seriesStyle(i);
        if (withSegments && s.points.length > 1) {
            const d = s.points
                .map((p, k) => `${k === 0 ? "M" : "L"}${px(xs.map(p.x))} ${px(ys.map(p.y))}`)
                .join("");
            parts.push(`<path d="${d}" fill="none" stroke="${style.color}" stroke-width="1.5"/>`);
        }
        for (const p of s.points) {
            parts.push(svg.marker(style.marker, xs.map(p.x), ys.map(p.y), style.color));
        }
    });
    parts.push(svg.legend(series.map(s => s.name)));
    return svg.document(parts.join("\n"));
}

function renderBars(table: Table, spec: FigureSpec): string {
    const label = spec.barLabel ?? "word";
    requireColumns(table, [label]);
    const valueCols = table.columns.filter(
        c => c.startsWith(spec.barPrefix ?? "mode_"));
    if (valueCols.length === 0) {
        throw new Error(`CSV has no ${spec.barPrefix ?? "mode_"}* columns`);
    }
    if (table.rows.length === 0) {
        return emptyFigure(spec);
    }
    const area = svg.plotArea();
    const values = table.rows.flatMap(r => valueCols.map(c => numeric(r, c)));
    const ys = linearScale([0, ...values], [area.y0, area.y1]);
    // one group of bars per mode; within a group, one bar per codeword
    const nGroups = valueCols.length;
    const nBars = table.rows.length;
    const groupWidth = (area.x1 - area.x0) / nGroups;
    const barWidth = (groupWidth * 0.8) / nBars;
    const parts: string[] = [];
    const tickLabels = new Map<number, string>();
    valueCols.forEach((col, g) => {
        const center = area.x0 + groupWidth * (g + 0.5);
        tickLabels.set(center, col.slice((spec.barPrefix ?? "mode_").length));
        table.rows.forEach((row, b) => {
            const v = numeric(row, col);
            const x = center - (groupWidth * 0.8) / 2 + b * barWidth;
            const y = ys.map(v);
            const h = ys.map(0) - y;
            parts.push(
                `<rect class="bar" x="${px(x)}" y="${px(y)}" width="${px(barWidth)}" `
                + `height="${px(Math.max(h, 0))}" fill="${svg.seriesStyle(b).color}"/>`);
        });
    });
    const xTicks: Scale = {
        domain: [area.x0, area.x1],
        range: [area.x0, area.x1],
        map: (v: number) => v,
        ticks: [...tickLabels.keys()],
    };
    parts.unshift(svg.axes(xTicks, ys, spec.xLabel, spec.yLabel, tickLabels));
    parts.push(svg.legend(table.rows.map(r => r[label]!)));
    return svg.document(parts.join("\n"));
}

function emptyFigure(spec: FigureSpec): string {
    const area = svg.plotArea();
    const xs = linearScale([0, 1], [area.x0, area.x1]);
    const ys = linearScale([0, 1], [area.y0, area.y1]);
    return svg.document(
        svg.axes(xs, ys, spec.xLabel, spec.yLabel)
        + `\n<text x="${px((area.x0 + area.x1) / 2)}" y="${px((area.y0 + area.y1) / 2)}"`
        + ` text-anchor="middle" font-size="12" fill="#888">no data</text>`);
}

/** Render one figure CSV to a complete SVG string (pure; no recomputation). */
export function renderFigure(spec: FigureSpec, csvText: string): string {
    const table = parseCsv(csvText);
    switch (spec.kind) {
        case "lines":
            return renderLines(table, spec, true);
        case "scatter":
            return renderLines(table, spec, false);
        case "bars":
            return renderBars(table, spec);
    }
}
