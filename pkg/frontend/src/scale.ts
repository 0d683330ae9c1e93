export interface Scale {
    domain: [number, number];
    range: [number, number];
    map(value: number): number;
    ticks: number[];
}

/** Round the raw span to a 1/2/5 decade step, like every plotting library. */
export function niceStep(span: number, targetTicks: number): number {
    const raw = span / Math.max(targetTicks, 1);
    const power = Math.pow(10, Math.floor(Math.log10(raw)));
    for (const mult of [1, 2, 5, 10]) {
        if (raw <= mult * power) return mult * power;
    }
    return 10 * power;
}

export function linearScale(
    values: number[], range: [number, number], targetTicks = 5,
): Scale {
    let lo = Math.min(...values);
    let hi = Math.max(...values);
    if (!Number.isFinite(lo) || !Number.isFinite(hi)) {
        lo = 0; hi = 1;
    }
    if (lo === hi) {
        lo -= 0.5; hi += 0.5;
    }
    const step = niceStep(hi - lo, targetTicks);
    const start = Math.floor(lo / step) * step;
    const end = Math.ceil(hi / step) * step;
    const ticks: number[] = [];
    // avoid drift: ticks come from integer multiples of the step
    for (let k = Math.round(start / step); k * step <= end + step / 2; k++) {
        ticks.push(k * step);
    }
    const scale = (end - start) === 0 ? 0 : (range[1] - range[0]) / (end - start);
    return {
        domain: [start, end],
        range,
        map: (v: number) => range[0] + (v - start) * scale,
        ticks,
    };
}

export function logScale(values: number[], range: [number, number]): Scale {
    const positive = values.filter(v => v > 0);
    const logs = positive.length > 0 ? positive.map(Math.log10) : [0, 1];
    const inner = linearScale(logs, range, 5);
    return {
        domain: [Math.pow(10, inner.domain[0]), Math.pow(10, inner.domain[1])],
        range,
        map: (v: number) => inner.map(Math.log10(v)),
        ticks: inner.ticks.filter(Number.isInteger).map(t => Math.pow(10, t)),
    };
}

/** Fixed-precision coordinate so rendered files are byte-stable. */
export function px(value: number): string {
    const rounded = value.toFixed(2);
    return rounded === "-0.00" ? "0.00" : rounded;
}

export function formatTick(value: number): string {
    if (value !== 0 && (Math.abs(value) >= 1e5 || Math.abs(value) < 1e-3)) {
        return value.toExponential(0).replace("+", "");
    }
    return String(Number(value.toPrecision(10)));
}
