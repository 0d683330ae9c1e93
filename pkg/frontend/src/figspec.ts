export type FigureKind = "lines" | "scatter" | "bars";

export interface FigureSpec {
    /** Identifier, also the default output stem (fig2 .. fig7). */
    id: string;
    /** Input CSV, relative to the data directory. */
    input: string;
    kind: FigureKind;
    xLabel: string;
    yLabel: string;
    /** x column (lines/scatter). */
    x?: string;
    /** y columns; one plotted series per column (lines/scatter). */
    y?: string[];
    /** Optional column whose distinct values split rows into series. */
    seriesBy?: string;
    /** Plot x on a log10 axis. */
    logX?: boolean;
    /** bars: the label column; numeric columns matching barPrefix become groups. */
    barLabel?: string;
    barPrefix?: string;
    /** Output image, relative to the output directory. */
    output: string;
}

/** The six built-in figure styles, one per figure CSV of the pipeline. */
export const FIGURE_SPECS: Record<string, FigureSpec> = {
    fig2: {
        id: "fig2",
        input: "fig2.csv",
        kind: "lines",
        x: "n",
        y: ["psucc_best", "psucc_avg", "psucc_srm_lower", "psucc_helstrom",
            "psucc_kennedy", "psucc_homodyne", "psucc_ppm"],
        xLabel: "signal modes",
        yLabel: "success probability",
        output: "fig2.svg",
    },
    fig3: {
        id: "fig3",
        input: "fig3.csv",
        kind: "lines",
        x: "n",
        y: ["psucc_best"],
        seriesBy: "variant",
        xLabel: "signal modes",
        yLabel: "success probability",
        output: "fig3.svg",
    },
    fig4: {
        id: "fig4",
        input: "fig4.csv",
        kind: "scatter",
        x: "die",
        y: ["pie"],
        seriesBy: "n",
        xLabel: "decoded bits per mode",
        yLabel: "decoded bits per photon",
        output: "fig4.svg",
    },
    fig5: {
        id: "fig5",
        input: "fig5.csv",
        kind: "lines",
        x: "blocklength",
        y: ["rate_second_order"],
        seriesBy: "receiver",
        logX: true,
        xLabel: "blocklength",
        yLabel: "second-order rate (bits/mode)",
        output: "fig5.svg",
    },
    fig6: {
        id: "fig6",
        input: "fig6.csv",
        kind: "lines",
        x: "n",
        y: ["psucc_best", "psucc_helstrom", "psucc_ppm"],
        seriesBy: "code_type",
        xLabel: "signal modes",
        yLabel: "success probability",
        output: "fig6.svg",
    },
    fig7: {
        id: "fig7",
        input: "fig7.csv",
        kind: "bars",
        barLabel: "word",
        barPrefix: "mode_",
        xLabel: "output mode",
        yLabel: "mean photon number",
        output: "fig7.svg",
    },
};

export function builtinSpec(id: string): FigureSpec {
    const spec = FIGURE_SPECS[id];
    if (!spec) {
        const known = Object.keys(FIGURE_SPECS).join(", ");
        throw new Error(`unknown figure spec ${id}; built-ins: ${known}`);
    }
    return spec;
}
