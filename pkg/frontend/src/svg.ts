import { Scale, formatTick, px } from "./scale.js";

export const WIDTH = 640;
export const HEIGHT = 420;
export const MARGIN = { top: 24, right: 24, bottom: 52, left: 64 };

/** One shared palette + marker cycle so every figure reads the same way. */
export const SERIES_STYLE = [
    { color: "#1f77b4", marker: "circle" },
    { color: "#d62728", marker: "square" },
    { color: "#2ca02c", marker: "diamond" },
    { color: "#9467bd", marker: "triangle" },
    { color: "#ff7f0e", marker: "circle" },
    { color: "#8c564b", marker: "square" },
    { color: "#17becf", marker: "diamond" },
    { color: "#7f7f7f", marker: "triangle" },
] as const;

export function seriesStyle(index: number) {
    return SERIES_STYLE[index % SERIES_STYLE.length];
}

export function plotArea(): { x0: number; x1: number; y0: number; y1: number } {
    return {
        x0: MARGIN.left,
        x1: WIDTH - MARGIN.right,
        y0: HEIGHT - MARGIN.bottom,   // SVG y grows downward
        y1: MARGIN.top,
    };
}

const esc = (s: string) =>
    s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

export function marker(kind: string, x: number, y: number, color: string): string {
    const r = 3.2;
    switch (kind) {
        case "square":
            return `<rect x="${px(x - r)}" y="${px(y - r)}" width="${px(2 * r)}" height="${px(2 * r)}" fill="${color}"/>`;
        case "diamond":
            return `<path d="M${px(x)} ${px(y - r)}L${px(x + r)} ${px(y)}L${px(x)} ${px(y + r)}L${px(x - r)} ${px(y)}Z" fill="${color}"/>`;
        case "triangle":
            return `<path d="M${px(x)} ${px(y - r)}L${px(x + r)} ${px(y + r)}L${px(x - r)} ${px(y + r)}Z" fill="${color}"/>`;
        default:
            return `<circle cx="${px(x)}" cy="${px(y)}" r="${px(r)}" fill="${color}"/>`;
    }
}

export function axes(xScale: Scale, yScale: Scale,
                     xLabel: string, yLabel: string,
                     xTickLabels?: Map<number, string>): string {
    const a = plotArea();
    const parts: string[] = [];
    parts.push(`<line x1="${px(a.x0)}" y1="${px(a.y0)}" x2="${px(a.x1)}" y2="${px(a.y0)}" stroke="#000"/>`);
    parts.push(`<line x1="${px(a.x0)}" y1="${px(a.y0)}" x2="${px(a.x0)}" y2="${px(a.y1)}" stroke="#000"/>`);
    for (const t of xScale.ticks) {
        const x = xScale.map(t);
        if (x < a.x0 - 0.5 || x > a.x1 + 0.5) continue;
        const label = xTickLabels ? (xTickLabels.get(t) ?? "") : formatTick(t);
        parts.push(`<line x1="${px(x)}" y1="${px(a.y0)}" x2="${px(x)}" y2="${px(a.y0 + 5)}" stroke="#000"/>`);
        parts.push(`<text x="${px(x)}" y="${px(a.y0 + 18)}" text-anchor="middle" font-size="11">${esc(label)}</text>`);
    }
    for (const t of yScale.ticks) {
        const y = yScale.map(t);
        if (y > a.y0 + 0.5 || y < a.y1 - 0.5) continue;
        parts.push(`<line x1="${px(a.x0 - 5)}" y1="${px(y)}" x2="${px(a.x0)}" y2="${px(y)}" stroke="#000"/>`);
        parts.push(`<text x="${px(a.x0 - 8)}" y="${px(y + 3.5)}" text-anchor="end" font-size="11">${esc(formatTick(t))}</text>`);
    }
    const cx = (a.x0 + a.x1) / 2;
    const cy = (a.y0 + a.y1) / 2;
    parts.push(`<text x="${px(cx)}" y="${px(HEIGHT - 12)}" text-anchor="middle" font-size="13">${esc(xLabel)}</text>`);
    parts.push(`<text x="16" y="${px(cy)}" text-anchor="middle" font-size="13" transform="rotate(-90 16 ${px(cy)})">${esc(yLabel)}</text>`);
    return parts.join("\n");
}

export function legend(names: string[]): string {
    const a = plotArea();
    return names.map((name, i) => {
        const y = a.y1 + 14 + 16 * i;
        const style = seriesStyle(i);
        return `${marker(style.marker, a.x1 - 150, y, style.color)}` +
            `<text x="${px(a.x1 - 142)}" y="${px(y + 4)}" font-size="11">${esc(name)}</text>`;
    }).join("\n");
}

export function document(body: string): string {
    return [
        `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
        `<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`,
        body,
        `</svg>`,
        ``,
    ].join("\n");
}
