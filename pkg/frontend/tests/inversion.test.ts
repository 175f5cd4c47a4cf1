import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';
import { describe, expect, it } from 'vitest';

import { nearestTick, positionOfValue, valueAtPosition } from '../src/inversion.js';
import { parseSheet, SheetScale } from '../src/sheet.js';

const here = dirname(fileURLToPath(import.meta.url));
const doc = JSON.parse(readFileSync(join(here, '..', 'fixtures', 'default-sheet.json'), 'utf-8'));
const sheet = parseSheet(doc);
const quadStator = sheet.rules[1].scales[0];
const replusStator = sheet.rules[0].scales[0];

describe('valueAtPosition', () => {
    it('reads tick positions back exactly', () => {
        for (const tick of quadStator.ticks) {
            expect(valueAtPosition(quadStator, tick.pos_mm)).toBeCloseTo(tick.value, 9);
        }
    });

    it('is monotone: moving right never decreases an increasing scale', () => {
        let prev = -Infinity;
        for (let pos = 0; pos <= quadStator.length_mm; pos += 0.05) {
            const v = valueAtPosition(quadStator, pos);
            expect(v).not.toBeNull();
            expect(v!).toBeGreaterThanOrEqual(prev);
            prev = v!;
        }
    });

    it('is monotone decreasing on the reciprocal scale', () => {
        const first = replusStator.ticks[0].pos_mm;
        let prev = Infinity;
        for (let pos = first; pos <= replusStator.length_mm; pos += 0.05) {
            const v = valueAtPosition(replusStator, pos);
            expect(v).not.toBeNull();
            expect(v!).toBeLessThanOrEqual(prev);
            prev = v!;
        }
    });

    it('returns null off the drawn ticks', () => {
        expect(valueAtPosition(quadStator, -1)).toBeNull();
        expect(valueAtPosition(quadStator, quadStator.length_mm + 1)).toBeNull();
        // the reciprocal scale has no ticks between the origin glyph and
        // the last drawn decade
        expect(valueAtPosition(replusStator, 0.1)).toBeNull();
    });

    it('interpolates between ticks with small error where ticks are dense', () => {
        // true value at 27.75 mm on the square scale is sqrt(27.75/250)*15
        const exact = Math.sqrt((27.75 / 250.0)) * 15.0;
        const read = valueAtPosition(quadStator, 27.75)!;
        expect(Math.abs(read - exact)).toBeLessThan(0.005);
    });
});

describe('positionOfValue', () => {
    it('round-trips with valueAtPosition', () => {
        for (const v of [0.5, 1.0, 2.5, 5.0, 9.9, 14.0]) {
            const pos = positionOfValue(quadStator, v)!;
            expect(valueAtPosition(quadStator, pos)!).toBeCloseTo(v, 9);
        }
    });

    it('handles decreasing scales', () => {
        const pos2 = positionOfValue(replusStator, 2.0)!;
        expect(pos2).toBeCloseTo(125.0, 3);
        expect(positionOfValue(replusStator, 1.0)!).toBeCloseTo(250.0, 3);
    });

    it('returns null outside the drawn values', () => {
        expect(positionOfValue(quadStator, 99.0)).toBeNull();
        expect(positionOfValue(replusStator, 0.5)).toBeNull();
    });
});

describe('nearestTick', () => {
    it('finds a tick within the radius and rejects beyond it', () => {
        const tick = quadStator.ticks.find((t) => t.value === 5.0)!;
        expect(nearestTick(quadStator, tick.pos_mm + 0.2, 0.5)).toEqual(tick);
        expect(nearestTick(quadStator, tick.pos_mm + 0.2, 0.05)).toBeNull();
    });

    it('ignores sparse regions', () => {
        const synthetic: SheetScale = {
            ...replusStator,
            ticks: replusStator.ticks.filter((t) => t.pos_mm > 20),
        };
        expect(nearestTick(synthetic, 1.0, 3.0)).toBeNull();
    });
});
