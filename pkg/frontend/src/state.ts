/** Pure view-state for the virtual slide rule.
 *
 * Positions live on the stator axis in whole pixels: dragging quantizes to
 * the pixel grid, which is the viewer's reading resolution.  Every
 * transition returns a fresh state; readouts are recomputed from positions
 * on demand, never cached.
 */

import { parseSheet, ScaleSheet, SheetError, SheetRule, SheetScale } from './sheet.js';
import { positionOfValue, nearestTick, valueAtPosition } from './inversion.js';

export interface HistoryEntry {
    label: string;
    x: number | null; // stator value under the slide origin
    y: number | null; // slide value under the hairline
    z: number;        // result value under the hairline
}

export interface ViewState {
    readonly sheet: ScaleSheet;
    readonly activeRule: number;
    readonly slideOffsetPx: number;
    readonly cursorPosPx: number;
    readonly pxPerMm: number;
    readonly snap: boolean;
    readonly history: readonly HistoryEntry[];
}

export interface Readout {
    setting: number | null; // stator value at the slide origin
    slide: number | null;   // slide value under the hairline
    result: number | null;  // result-scale value under the hairline
    perScale: Array<{ ref: string; role: string; value: number | null }>;
}

const SNAP_RADIUS_PX = 3;

export function loadSheet(doc: unknown, pxPerMm = 8): ViewState {
    const sheet = parseSheet(doc);
    return {
        sheet,
        activeRule: 0,
        slideOffsetPx: 0,
        cursorPosPx: 0,
        pxPerMm,
        snap: false,
        history: [],
    };
}

export function isEmpty(state: ViewState): boolean {
    return state.sheet.rules.length === 0;
}

export function activeRule(state: ViewState): SheetRule | null {
    return state.sheet.rules[state.activeRule] ?? null;
}

function findScale(rule: SheetRule, roles: string[]): SheetScale | null {
    for (const role of roles) {
        const hit = rule.scales.find((s) => s.role === role);
        if (hit) {
            return hit;
        }
    }
    return null;
}

export function settingScale(rule: SheetRule): SheetScale | null {
    return findScale(rule, ['stator', 'stator_f']);
}

export function resultScale(rule: SheetRule): SheetScale | null {
    return findScale(rule, ['stator', 'stator_F']);
}

export function slideScale(rule: SheetRule): SheetScale | null {
    return findScale(rule, ['slide']);
}

/** Drawn extent of the active rule along the stator axis, in mm. */
export function extentMm(state: ViewState): number {
    const rule = activeRule(state);
    if (!rule) {
        return 0;
    }
    return Math.max(...rule.scales.map((s) => s.mount_mm + s.length_mm), state.sheet.length_mm);
}

function clampRound(value: number, lo: number, hi: number): number {
    return Math.round(Math.min(hi, Math.max(lo, value)));
}

export function selectRule(state: ViewState, index: number): ViewState {
    if (index < 0 || index >= state.sheet.rules.length) {
        return state;
    }
    return { ...state, activeRule: index, slideOffsetPx: 0, cursorPosPx: 0 };
}

export function setSlidePx(state: ViewState, px: number): ViewState {
    const rule = activeRule(state);
    const slide = rule ? slideScale(rule) : null;
    const slideLenPx = slide ? slide.length_mm * state.pxPerMm : 0;
    const offset = clampRound(px, -slideLenPx, extentMm(state) * state.pxPerMm);
    return { ...state, slideOffsetPx: offset };
}

export function setCursorPx(state: ViewState, px: number): ViewState {
    let target = Math.min(extentMm(state) * state.pxPerMm, Math.max(0, px));
    if (state.snap) {
        const snapped = snapTarget(state, target);
        if (snapped !== null) {
            target = snapped;
        }
    }
    return { ...state, cursorPosPx: Math.round(target) };
}

function snapTarget(state: ViewState, axisPx: number): number | null {
    const rule = activeRule(state);
    if (!rule) {
        return null;
    }
    let best: number | null = null;
    let bestDist = SNAP_RADIUS_PX;
    for (const scale of rule.scales) {
        const originPx = scale.role === 'slide'
            ? state.slideOffsetPx
            : scale.mount_mm * state.pxPerMm;
        const hit = nearestTick(scale, (axisPx - originPx) / state.pxPerMm,
                                SNAP_RADIUS_PX / state.pxPerMm);
        if (hit) {
            const px = originPx + hit.pos_mm * state.pxPerMm;
            const d = Math.abs(px - axisPx);
            if (d <= bestDist) {
                best = px;
                bestDist = d;
            }
        }
    }
    return best;
}

export function dragSlide(state: ViewState, dxPx: number): ViewState {
    return setSlidePx(state, state.slideOffsetPx + dxPx);
}

export function dragCursor(state: ViewState, dxPx: number): ViewState {
    return setCursorPx(state, state.cursorPosPx + dxPx);
}

export function toggleSnap(state: ViewState): ViewState {
    return { ...state, snap: !state.snap };
}

export function setZoom(state: ViewState, pxPerMm: number): ViewState {
    if (!(pxPerMm > 0)) {
        return state;
    }
    const ratio = pxPerMm / state.pxPerMm;
    return {
        ...state,
        pxPerMm,
        slideOffsetPx: Math.round(state.slideOffsetPx * ratio),
        cursorPosPx: Math.round(state.cursorPosPx * ratio),
    };
}

function scaleValueAtAxis(state: ViewState, scale: SheetScale, axisPx: number): number | null {
    const originPx = scale.role === 'slide'
        ? state.slideOffsetPx
        : scale.mount_mm * state.pxPerMm;
    return valueAtPosition(scale, (axisPx - originPx) / state.pxPerMm);
}

export function readout(state: ViewState): Readout {
    const rule = activeRule(state);
    if (!rule) {
        return { setting: null, slide: null, result: null, perScale: [] };
    }
    const perScale = rule.scales.map((scale) => ({
        ref: scale.scale_ref,
        role: scale.role,
        value: scaleValueAtAxis(state, scale, state.cursorPosPx),
    }));
    const setting = settingScale(rule);
    const result = resultScale(rule);
    const slide = slideScale(rule);
    return {
        setting: setting ? scaleValueAtAxis(state, setting, state.slideOffsetPx) : null,
        slide: slide ? perScale.find((p) => p.ref === slide.scale_ref)?.value ?? null : null,
        result: result ? perScale.find((p) => p.ref === result.scale_ref)?.value ?? null : null,
        perScale,
    };
}

/** Value change across one pixel at the hairline, on the result scale. */
export function pixelStep(state: ViewState): number | null {
    const rule = activeRule(state);
    const result = rule ? resultScale(rule) : null;
    if (!rule || !result) {
        return null;
    }
    const originPx = result.mount_mm * state.pxPerMm;
    const posMm = (state.cursorPosPx - originPx) / state.pxPerMm;
    const stepMm = 1 / state.pxPerMm;
    const a = valueAtPosition(result, posMm - stepMm);
    const b = valueAtPosition(result, posMm + stepMm);
    if (a === null || b === null) {
        return null;
    }
    return Math.abs(b - a) / 2;
}

export function logStep(state: ViewState, label = ''): ViewState {
    const r = readout(state);
    if (r.result === null) {
        return state;
    }
    const entry: HistoryEntry = { label, x: r.setting, y: r.slide, z: r.result };
    return { ...state, history: [...state.history, entry] };
}

export function canCarry(state: ViewState): boolean {
    const rule = activeRule(state);
    if (!rule || state.history.length === 0) {
        return false;
    }
    const setting = settingScale(rule);
    if (!setting) {
        return false;
    }
    const z = state.history[state.history.length - 1].z;
    return positionOfValue(setting, z) !== null;
}

/** Re-align the slide origin to the mark of the last logged result. */
export function carry(state: ViewState): ViewState {
    if (!canCarry(state)) {
        return state;
    }
    const rule = activeRule(state)!;
    const setting = settingScale(rule)!;
    const z = state.history[state.history.length - 1].z;
    const posMm = positionOfValue(setting, z)!;
    return setSlidePx(state, (setting.mount_mm + posMm) * state.pxPerMm);
}

export function clearHistory(state: ViewState): ViewState {
    return { ...state, history: [] };
}

export { SheetError };
