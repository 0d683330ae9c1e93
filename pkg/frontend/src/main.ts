import { readFileSync, mkdirSync, writeFileSync } from "node:fs";
import { dirname, join } from "node:path";
import process from "node:process";

import { FIGURE_SPECS, FigureSpec, builtinSpec } from "./figspec.js";
import { renderFigure } from "./render.js";

const USAGE = `usage: render --spec <fig2..fig7 | spec.json | all> [--data DIR] [--out DIR]

Reads the figure CSVs produced by the training pipeline (default ./figures)
and writes deterministic SVG files (default alongside the CSVs).`;

interface CliArgs {
    spec: string;
    data: string;
    out: string | null;
}

export function parseArgs(argv: string[]): CliArgs {
    const args: CliArgs = { spec: "", data: "figures", out: null };
    for (let i = 0; i < argv.length; i++) {
        const flag = argv[i];
        const next = () => {
            const v = argv[++i];
            if (v === undefined) throw new Error(`missing value for ${flag}`);
            return v;
        };
        if (flag === "--spec") args.spec = next();
        else if (flag === "--data") args.data = next();
        else if (flag === "--out") args.out = next();
        else if (flag === "--help" || flag === "-h") {
            console.log(USAGE);
            process.exit(0);
        } else throw new Error(`unknown flag ${flag}`);
    }
    if (!args.spec) throw new Error("--spec is required");
    return args;
}

function loadSpec(name: string): FigureSpec {
    if (name.endsWith(".json")) {
        return JSON.parse(readFileSync(name, "utf8")) as FigureSpec;
    }
    return builtinSpec(name);
}

export function renderToFile(spec: FigureSpec, dataDir: string, outDir: string): string {
    const csvText = readFileSync(join(dataDir, spec.input), "utf8");
    const svgText = renderFigure(spec, csvText);
    const target = join(outDir, spec.output);
    mkdirSync(dirname(target), { recursive: true });
    writeFileSync(target, svgText);
    return target;
}

export function main(argv: string[]): number {
    let args: CliArgs;
    try {
        args = parseArgs(argv);
    } catch (err) {
        console.error(String(err instanceof Error ? err.message : err));
        console.error(USAGE);
        return 2;
    }
    const outDir = args.out ?? args.data;
    const specs = args.spec === "all"
        ? Object.keys(FIGURE_SPECS).map(builtinSpec)
        : [loadSpec(args.spec)];
    try {
        for (const spec of specs) {
            console.log(renderToFile(spec, args.data, outDir));
        }
    } catch (err) {
        console.error(String(err instanceof Error ? err.message : err));
        return 1;
    }
    return 0;
}

if (process.argv[1] && process.argv[1].endsWith("main.js")) {
    process.exit(main(process.argv.slice(2)));
}
