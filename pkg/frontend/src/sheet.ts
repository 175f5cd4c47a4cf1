/** Scale-sheet document contract, as exported by the sliderule CLI. */

export const SUPPORTED_VERSION = 1;

export interface Tick {
    pos_mm: number;
    level: 0 | 1 | 2;
    value: number;
    label: string | null;
}

export interface GaugeMark {
    label: string;
    value: number;
    pos_mm: number;
}

export interface SheetScale {
    role: 'stator' | 'stator_f' | 'stator_F' | 'slide';
    scale_ref: string;
    length_mm: number;
    mount_mm: number;
    reversed: boolean;
    origin_label: string | null;
    origin_pos_mm: number | null;
    ticks: Tick[];
    gauge_marks: GaugeMark[];
}

export interface SheetRule {
    name: string;
    description: string;
    op: 'plus' | 'minus';
    shares_F_f: boolean;
    scales: SheetScale[];
}

export interface ScaleSheet {
    version: number;
    length_mm: number;
    rules: SheetRule[];
}

export class SheetError extends Error {}

function fail(message: string): never {
    throw new SheetError(message);
}

/** Validate a parsed JSON document against the sheet contract. */
export function parseSheet(doc: unknown): ScaleSheet {
    if (typeof doc !== 'object' || doc === null) {
        fail('sheet document is not an object');
    }
    const sheet = doc as Record<string, unknown>;
    if (typeof sheet.version !== 'number') {
        fail('sheet document has no version field');
    }
    if (sheet.version !== SUPPORTED_VERSION) {
        fail(`unsupported sheet version ${sheet.version} (viewer speaks ${SUPPORTED_VERSION})`);
    }
    if (typeof sheet.length_mm !== 'number' || !Array.isArray(sheet.rules)) {
        fail('sheet document is missing length_mm or rules');
    }
    for (const rule of sheet.rules as Array<Record<string, unknown>>) {
        if (typeof rule.name !== 'string' || !Array.isArray(rule.scales)) {
            fail('malformed rule entry');
        }
        for (const scale of rule.scales as Array<Record<string, unknown>>) {
            if (typeof scale.length_mm !== 'number' || !Array.isArray(scale.ticks)) {
                fail(`malformed scale entry in rule ${rule.name}`);
            }
            for (const tick of scale.ticks as Array<Record<string, unknown>>) {
                if (typeof tick.pos_mm !== 'number' || typeof tick.value !== 'number') {
                    fail(`malformed tick in rule ${rule.name}`);
                }
            }
        }
    }
    return doc as ScaleSheet;
}
