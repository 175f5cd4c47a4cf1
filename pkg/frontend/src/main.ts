/** Application wiring: load a sheet, drag the slide and hairline with
 * pointer events, keep the history log. */

import { formatReading, renderReadout, renderRule } from './render.js';
import { SheetError } from './sheet.js';
import {
    activeRule, canCarry, carry, clearHistory, dragCursor, dragSlide,
    isEmpty, loadSheet, logStep, readout, selectRule, setCursorPx, setZoom,
    toggleSnap, ViewState,
} from './state.js';

let state: ViewState | null = null;

const $ = (id: string) => document.getElementById(id)!;
const svg = () => $('rule-canvas') as unknown as SVGSVGElement;

function banner(message: string): void {
    const box = $('banner');
    box.textContent = message;
    box.classList.toggle('hidden', message === '');
}

function refresh(): void {
    if (!state) {
        return;
    }
    if (isEmpty(state)) {
        banner('The sheet defines no rules.');
        svg().replaceChildren();
        return;
    }
    const picker = $('rule-picker') as HTMLSelectElement;
    if (picker.options.length !== state.sheet.rules.length) {
        picker.replaceChildren(...state.sheet.rules.map((rule, i) => {
            const option = document.createElement('option');
            option.value = String(i);
            option.textContent = rule.name;
            return option;
        }));
    }
    picker.value = String(state.activeRule);
    $('rule-description').textContent = activeRule(state)?.description ?? '';
    renderRule(state, svg());
    renderReadout(state, $('readout'));
    ($('carry') as HTMLButtonElement).disabled = !canCarry(state);
    $('history').textContent = state.history
        .map((h, i) => `${i + 1}. ${h.label || 'read'}  x=${formatReading(h.x)}  ` +
                       `y=${formatReading(h.y)}  z=${formatReading(h.z)}`)
        .join('\n');
}

function apply(next: ViewState): void {
    state = next;
    refresh();
}

function loadDocument(doc: unknown): void {
    try {
        apply(loadSheet(doc, Number(($('zoom') as HTMLInputElement).value)));
        banner('');
    } catch (err) {
        state = null;
        svg().replaceChildren();
        banner(err instanceof SheetError ? `Cannot load sheet: ${err.message}`
                                         : `Unexpected error: ${err}`);
    }
}

function wirePointer(): void {
    let mode: 'slide' | 'cursor' | null = null;
    let lastX = 0;
    const canvas = svg();
    canvas.addEventListener('pointerdown', (ev) => {
        mode = ev.shiftKey || ev.button === 2 ? 'slide'
            : (ev.target as Element).closest('.slide-carrier') ? 'slide' : 'cursor';
        lastX = ev.clientX;
        canvas.setPointerCapture(ev.pointerId);
        if (state && mode === 'cursor') {
            const box = canvas.getBoundingClientRect();
            apply(setCursorPx(state, ev.clientX - box.left));
        }
        ev.preventDefault();
    });
    canvas.addEventListener('pointermove', (ev) => {
        if (!state || mode === null) {
            return;
        }
        const dx = ev.clientX - lastX;
        lastX = ev.clientX;
        apply(mode === 'slide' ? dragSlide(state, dx) : dragCursor(state, dx));
    });
    const stop = () => { mode = null; };
    canvas.addEventListener('pointerup', stop);
    canvas.addEventListener('pointercancel', stop);
    canvas.addEventListener('contextmenu', (ev) => ev.preventDefault());
}

function wireControls(): void {
    ($('sheet-file') as HTMLInputElement).addEventListener('change', async (ev) => {
        const file = (ev.target as HTMLInputElement).files?.[0];
        if (!file) {
            return;
        }
        try {
            loadDocument(JSON.parse(await file.text()));
        } catch {
            banner('Cannot load sheet: the file is not valid JSON.');
        }
    });
    ($('rule-picker') as HTMLSelectElement).addEventListener('change', (ev) => {
        if (state) {
            apply(selectRule(state, Number((ev.target as HTMLSelectElement).value)));
        }
    });
    $('log').addEventListener('click', () => {
        if (state && readout(state).result !== null) {
            apply(logStep(state));
        }
    });
    $('carry').addEventListener('click', () => state && apply(carry(state)));
    $('clear').addEventListener('click', () => state && apply(clearHistory(state)));
    ($('snap') as HTMLInputElement).addEventListener('change', () => {
        if (state) {
            apply(toggleSnap(state));
        }
    });
    ($('zoom') as HTMLInputElement).addEventListener('change', (ev) => {
        if (state) {
            apply(setZoom(state, Number((ev.target as HTMLInputElement).value)));
        }
    });
}

async function boot(): Promise<void> {
    wirePointer();
    wireControls();
    try {
        const res = await fetch('./fixtures/default-sheet.json');
        if (res.ok) {
            loadDocument(await res.json());
        } else {
            banner('Load a sheet JSON exported with: sliderule export -o sheet.json');
        }
    } catch {
        banner('Load a sheet JSON exported with: sliderule export -o sheet.json');
    }
}

boot();
