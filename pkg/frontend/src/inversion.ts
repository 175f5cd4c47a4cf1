/** Piecewise-monotone reading between the value/position pairs a sheet
 * carries for each scale.  The viewer never re-implements the scale
 * formulas; between adjacent ticks it interpolates linearly, which is the
 * honest reading precision a human gets from the engraving. */

import type { SheetScale, Tick } from './sheet.js';

/** Value under a strip position (mm), or null when off the drawn ticks. */
export function valueAtPosition(scale: SheetScale, posMm: number): number | null {
    const ticks = scale.ticks;
    if (ticks.length < 2) {
        return null;
    }
    const first = ticks[0], last = ticks[ticks.length - 1];
    const eps = 1e-9;
    if (posMm < first.pos_mm - eps || posMm > last.pos_mm + eps) {
        return null;
    }
    let lo = 0, hi = ticks.length - 1;
    while (hi - lo > 1) {
        const mid = (lo + hi) >> 1;
        if (ticks[mid].pos_mm <= posMm) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return interpolate(ticks[lo], ticks[hi], posMm);
}

function interpolate(a: Tick, b: Tick, posMm: number): number {
    const span = b.pos_mm - a.pos_mm;
    if (span <= 0) {
        return a.value;
    }
    const t = Math.min(1, Math.max(0, (posMm - a.pos_mm) / span));
    return a.value + t * (b.value - a.value);
}

/** Strip position of a value (mm), or null when outside the drawn ticks. */
export function positionOfValue(scale: SheetScale, value: number): number | null {
    const ticks = scale.ticks;
    if (ticks.length < 2) {
        return null;
    }
    const increasing = ticks[ticks.length - 1].value >= ticks[0].value;
    const vFirst = ticks[0].value, vLast = ticks[ticks.length - 1].value;
    const vMin = Math.min(vFirst, vLast), vMax = Math.max(vFirst, vLast);
    if (value < vMin - 1e-12 || value > vMax + 1e-12) {
        return null;
    }
    let lo = 0, hi = ticks.length - 1;
    while (hi - lo > 1) {
        const mid = (lo + hi) >> 1;
        const before = increasing ? ticks[mid].value <= value : ticks[mid].value >= value;
        if (before) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const a = ticks[lo], b = ticks[hi];
    const span = b.value - a.value;
    if (span === 0) {
        return a.pos_mm;
    }
    const t = Math.min(1, Math.max(0, (value - a.value) / span));
    return a.pos_mm + t * (b.pos_mm - a.pos_mm);
}

/** Nearest tick within `radiusMm`, for snap assist. */
export function nearestTick(scale: SheetScale, posMm: number, radiusMm: number): Tick | null {
    let best: Tick | null = null;
    let bestDist = radiusMm;
    for (const tick of scale.ticks) {
        const d = Math.abs(tick.pos_mm - posMm);
        if (d <= bestDist) {
            best = tick;
            bestDist = d;
        }
    }
    return best;
}
