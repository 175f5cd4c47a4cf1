/** SVG rendering of the active rule: stator strips fixed, slide strip
 * translated by the state's offset, hairline on top. */

import type { SheetScale } from './sheet.js';
import { activeRule, extentMm, readout, ViewState } from './state.js';

const SVG_NS = 'http://www.w3.org/2000/svg';
const ROW_PX = 64;
const STRIP_PAD_PX = 10;
const TICK_PX = { 0: 22, 1: 14, 2: 8 } as const;

function el<K extends keyof SVGElementTagNameMap>(
    tag: K, attrs: Record<string, string | number>): SVGElementTagNameMap[K] {
    const node = document.createElementNS(SVG_NS, tag);
    for (const [key, value] of Object.entries(attrs)) {
        node.setAttribute(key, String(value));
    }
    return node;
}

function renderScale(state: ViewState, scale: SheetScale, top: number): SVGGElement {
    const px = state.pxPerMm;
    const flip = scale.role === 'slide';
    const group = el('g', { class: `strip ${scale.role}` });
    const x0 = scale.role === 'slide' ? 0 : scale.mount_mm * px;
    const base = flip ? top + ROW_PX - STRIP_PAD_PX : top + STRIP_PAD_PX;
    const dir = flip ? -1 : 1;
    group.appendChild(el('rect', {
        x: x0, y: top, width: scale.length_mm * px, height: ROW_PX,
        class: 'strip-bg',
    }));
    group.appendChild(el('line', {
        x1: x0, y1: base, x2: x0 + scale.length_mm * px, y2: base, class: 'baseline',
    }));
    for (const tick of scale.ticks) {
        const x = x0 + tick.pos_mm * px;
        group.appendChild(el('line', {
            x1: x, y1: base, x2: x, y2: base + dir * TICK_PX[tick.level], class: 'tick',
        }));
        if (tick.label !== null) {
            const text = el('text', {
                x, y: base + dir * (TICK_PX[0] + 12) + (flip ? 0 : 4),
                'text-anchor': 'middle', class: 'tick-label',
            });
            text.textContent = tick.label;
            group.appendChild(text);
        }
    }
    if (scale.origin_label !== null && scale.origin_pos_mm !== null) {
        const text = el('text', {
            x: x0 + scale.origin_pos_mm * px,
            y: base + dir * (TICK_PX[0] + 12) + (flip ? 0 : 4),
            'text-anchor': 'middle', class: 'origin-label',
        });
        text.textContent = scale.origin_label;
        group.appendChild(text);
    }
    for (const mark of scale.gauge_marks) {
        const x = x0 + mark.pos_mm * px;
        group.appendChild(el('line', {
            x1: x, y1: base, x2: x, y2: base + dir * (TICK_PX[0] + 4), class: 'gauge',
        }));
        const text = el('text', {
            x, y: base + dir * (TICK_PX[0] + 26) + (flip ? 0 : 4),
            'text-anchor': 'middle', class: 'gauge-label',
        });
        text.textContent = mark.label;
        group.appendChild(text);
    }
    return group;
}

export function renderRule(state: ViewState, svg: SVGSVGElement): void {
    svg.replaceChildren();
    const rule = activeRule(state);
    if (!rule) {
        return;
    }
    const px = state.pxPerMm;
    const width = extentMm(state) * px;
    const stators = rule.scales.filter((s) => s.role !== 'slide');
    const slides = rule.scales.filter((s) => s.role === 'slide');
    const height = (stators.length + slides.length) * ROW_PX + 20;
    svg.setAttribute('viewBox', `0 0 ${width} ${height}`);
    svg.setAttribute('width', String(width));
    svg.setAttribute('height', String(height));

    let top = 10;
    for (const scale of stators) {
        svg.appendChild(renderScale(state, scale, top));
        top += ROW_PX;
    }
    const slideGroup = el('g', {
        class: 'slide-carrier',
        transform: `translate(${state.slideOffsetPx} 0)`,
    });
    for (const scale of slides) {
        slideGroup.appendChild(renderScale(state, scale, top));
        top += ROW_PX;
    }
    svg.appendChild(slideGroup);
    svg.appendChild(el('line', {
        x1: state.cursorPosPx, y1: 0, x2: state.cursorPosPx, y2: height, class: 'hairline',
    }));
}

export function formatReading(value: number | null): string {
    if (value === null) {
        return '—';
    }
    return Number(value.toPrecision(6)).toString();
}

export function renderReadout(state: ViewState, box: HTMLElement): void {
    const r = readout(state);
    const rows = [
        `slide set at: ${formatReading(r.setting)}`,
        ...r.perScale.map((p) => `${p.ref} (${p.role}): ${formatReading(p.value)}`),
    ];
    box.textContent = rows.join('\n');
}
