"""Deterministic SVG rendering of scale sheets.

Two identical sheets render to byte-identical documents: coordinates are
formatted to exactly three decimals, element order is fixed, and nothing
time- or environment-dependent is written.  Geometry is worked out in
millimetres and scaled by ``mm_to_px`` at the end; the root element
carries the margin and scale factor as data attributes so a consumer can
map text positions back to millimetre positions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .sheet import ScaleSheet, SheetScale

__all__ = ["SvgStyle", "render_svg"]

MARGIN_MM = 14.0
HEADER_MM = 7.0
ROW_MM = 11.0
BLOCK_GAP_MM = 6.0
TICK_LEN_MM = {0: 3.4, 1: 2.3, 2: 1.4}
LABEL_DY_MM = 2.9
FONT_MM = 2.6


@dataclass(frozen=True)
class SvgStyle:
    mm_to_px: float = 4.0
    font: str = "Helvetica, Arial, sans-serif"
    ink: str = "#1f1f1f"
    accent: str = "#b03030"
    frame: str = "#888888"
    background: str = "#ffffff"


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def render_svg(sheet: ScaleSheet, style: SvgStyle = SvgStyle()) -> str:
    px = style.mm_to_px

    def c(mm: float) -> str:
        v = mm * px
        return f"{v + 0.0:.3f}"  # +0.0 folds -0 into 0

    extent_mm = 0.0
    rows = 0
    for rule in sheet.rules:
        rows += len(rule.scales)
        for sc in rule.scales:
            extent_mm = max(extent_mm, sc.mount_mm + sc.length_mm)
    width_mm = 2 * MARGIN_MM + max(extent_mm, sheet.length_mm)
    height_mm = MARGIN_MM + len(sheet.rules) * (HEADER_MM + BLOCK_GAP_MM) + rows * ROW_MM + MARGIN_MM

    out: list[str] = []
    out.append('<?xml version="1.0" encoding="UTF-8"?>')
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{c(width_mm)}" height="{c(height_mm)}" '
        f'viewBox="0 0 {c(width_mm)} {c(height_mm)}" '
        f'data-margin-mm="{MARGIN_MM:.3f}" data-mm-to-px="{px:.3f}">')
    out.append(f'<rect x="0" y="0" width="{c(width_mm)}" height="{c(height_mm)}" '
               f'fill="{style.background}"/>')
    out.append(f'<rect x="{c(2.0)}" y="{c(2.0)}" width="{c(width_mm - 4.0)}" '
               f'height="{c(height_mm - 4.0)}" fill="none" stroke="{style.frame}" '
               f'stroke-width="{c(0.15)}"/>')

    y_mm = MARGIN_MM
    for rule in sheet.rules:
        y_mm += HEADER_MM
        out.append(
            f'<text class="rule-name" x="{c(MARGIN_MM)}" y="{c(y_mm - 2.5)}" '
            f'font-family="{style.font}" font-size="{c(FONT_MM * 1.25)}" '
            f'fill="{style.ink}">{_esc(rule.name)}</text>')
        for sc in rule.scales:
            flip = sc.role == "slide"  # slide ticks face the stator above
            out.append(_render_scale(sc, y_mm, flip, style, c))
            y_mm += ROW_MM
        y_mm += BLOCK_GAP_MM
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _render_scale(sc: SheetScale, top_mm: float, flip: bool, style: SvgStyle, c) -> str:
    x0 = MARGIN_MM + sc.mount_mm
    base = top_mm + (ROW_MM - 2.5 if flip else 2.5)
    sign = -1.0 if flip else 1.0
    parts = [f'<g class="scale" data-role="{sc.role}" data-ref="{_esc(sc.scale_ref)}" '
             f'data-mount-mm="{sc.mount_mm:.4f}">']
    parts.append(f'<line x1="{c(x0)}" y1="{c(base)}" x2="{c(x0 + sc.length_mm)}" '
                 f'y2="{c(base)}" stroke="{style.ink}" stroke-width="{c(0.12)}"/>')
    for tick in sc.ticks:
        x = x0 + tick.pos_mm
        tip = base + sign * TICK_LEN_MM[tick.level]
        parts.append(f'<line class="tick" x1="{c(x)}" y1="{c(base)}" x2="{c(x)}" '
                     f'y2="{c(tip)}" stroke="{style.ink}" stroke-width="{c(0.1)}"/>')
        if tick.label is not None:
            ly = base + sign * (TICK_LEN_MM[0] + LABEL_DY_MM) + (0.0 if flip else FONT_MM * 0.2)
            parts.append(
                f'<text class="tick-label" x="{c(x)}" y="{c(ly)}" '
                f'text-anchor="middle" font-family="{style.font}" '
                f'font-size="{c(FONT_MM)}" fill="{style.ink}">{_esc(tick.label)}</text>')
    if sc.origin_label is not None and sc.origin_pos_mm is not None:
        x = x0 + sc.origin_pos_mm
        ly = base + sign * (TICK_LEN_MM[0] + LABEL_DY_MM) + (0.0 if flip else FONT_MM * 0.2)
        parts.append(
            f'<text class="origin-label" x="{c(x)}" y="{c(ly)}" '
            f'text-anchor="middle" font-family="{style.font}" '
            f'font-size="{c(FONT_MM * 1.15)}" fill="{style.ink}">{_esc(sc.origin_label)}</text>')
    for mark in sc.gauge_marks:
        x = x0 + mark.pos_mm
        tip = base + sign * (TICK_LEN_MM[0] + 0.6)
        parts.append(f'<line class="gauge" x1="{c(x)}" y1="{c(base)}" x2="{c(x)}" '
                     f'y2="{c(tip)}" stroke="{style.accent}" stroke-width="{c(0.14)}"/>')
        ly = tip + sign * LABEL_DY_MM + (0.0 if flip else FONT_MM * 0.2)
        parts.append(
            f'<text class="gauge-label" x="{c(x)}" y="{c(ly)}" '
            f'text-anchor="middle" font-family="{style.font}" '
            f'font-size="{c(FONT_MM * 0.95)}" fill="{style.accent}">{_esc(mark.label)}</text>')
    parts.append("</g>")
    return "\n".join(parts)
