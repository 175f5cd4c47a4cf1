"""Place tick marks and labels on a physical scale.

Subdivision happens in value space so ticks land on round numbers, the
way rules are actually engraved: start from decade or step anchors, then
split every gap through the nice-step ladder (halves, fifths, tenths)
while the physical spacing allows.  Labels go on level-0 ticks and are
thinned, decade-anchored, until they respect the label spacing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import DegenerateScale
from .scales import Scale, position_of

__all__ = ["TickPolicy", "Tick", "TickLayout", "generate_ticks"]

_LATTICE_CAP = 4096     # more candidate marks than this can never fit a strip
_DECADE_RATIO = 30.0    # hi/lo beyond this switches to decade-structured anchors


@dataclass(frozen=True)
class TickPolicy:
    min_tick_spacing_mm: float = 0.6
    min_label_spacing_mm: float = 3.0
    label_format: str = "auto"  # "auto" = shortest decimal; else a %-pattern

    def __post_init__(self):
        if self.min_tick_spacing_mm <= 0 or self.min_label_spacing_mm <= 0:
            raise ValueError("spacings must be positive")


@dataclass(frozen=True)
class Tick:
    pos_mm: float
    level: int  # 0 major, 1 minor, 2 fine
    value: float
    label: Optional[str] = None


@dataclass(frozen=True)
class TickLayout:
    scale_ref: str
    ticks: tuple[Tick, ...]  # sorted by pos_mm


def _nice_floor(x: float) -> float:
    k = math.floor(math.log10(x))
    for m in (5.0, 2.0, 1.0):
        s = m * 10.0 ** k
        if s <= x * (1.0 + 1e-12):
            return s
    return 10.0 ** k


def _nice_up(s: float) -> float:
    k = math.floor(math.log10(s) + 1e-12)
    m = round(s / 10.0 ** k)
    return {1: 2.0, 2: 5.0, 5: 10.0}[int(m)] * 10.0 ** k


def _child_steps(step: float) -> list[float]:
    """Finer nice steps dividing ``step``, finest first."""
    k = math.floor(math.log10(step) + 1e-12)
    m = int(round(step / 10.0 ** k))
    if m == 1:
        divisors = (10.0, 5.0, 2.0)
    elif m == 2:
        divisors = (10.0, 2.0)
    else:  # m == 5
        divisors = (10.0, 5.0)
    return [step / d for d in divisors]


def _lattice(a: float, b: float, step: float) -> list[float]:
    """Multiples of ``step`` strictly inside (a, b)."""
    if (b - a) / step > _LATTICE_CAP:
        return []
    pad = 1e-6 * step
    i = math.floor((a + pad) / step) + 1
    out = []
    while True:
        v = i * step
        if v >= b - pad:
            return out
        out.append(v)
        i += 1


class _Builder:
    def __init__(self, scale: Scale, policy: TickPolicy):
        self.scale = scale
        self.policy = policy
        self.marks: list[tuple[float, int]] = []  # (value, level)

    def pos(self, v: float) -> float:
        return position_of(self.scale, v)

    def fits(self, bounds: list[float]) -> bool:
        ps = [self.pos(v) for v in bounds]
        return all(abs(ps[i + 1] - ps[i]) >= self.policy.min_tick_spacing_mm - 1e-9
                   for i in range(len(ps) - 1))

    def subdivide(self, a: float, b: float, context: float, depth: int,
                  level_of) -> None:
        for step in _child_steps(context):
            inner = _lattice(a, b, step)
            if not inner:
                break  # coarser candidates have even fewer lattice points
            if self.fits([a] + inner + [b]):
                lvl = level_of(depth)
                for v in inner:
                    self.marks.append((v, lvl))
                walls = [a] + inner + [b]
                for lo, hi in zip(walls, walls[1:]):
                    self.subdivide(lo, hi, step, depth + 1, level_of)
                return


def generate_ticks(scale: Scale, policy: TickPolicy = TickPolicy(),
                   scale_ref: str = "") -> TickLayout:
    """Lay out ticks and labels for one scale; deterministic.

    Raises DegenerateScale when fewer than two ticks fit.
    """
    fn = scale.function
    a, b = fn.domain.numeric_lo, fn.domain.numeric_hi
    builder = _Builder(scale, policy)
    decade_mode = a > 0.0 and b / a >= _DECADE_RATIO

    if decade_mode:
        anchors = _decade_anchors(builder, a, b)
        # units inside a decade segment are majors too; deeper cuts are minor
        def level_of(depth: int) -> int:
            return min(max(depth - 1, 0), 2)
        for lo, hi in zip(anchors, anchors[1:]):
            builder.subdivide(lo, hi, 10.0 ** (math.floor(math.log10(lo)) + 1),
                              1, level_of)
        segment_bounds = anchors
    else:
        anchors = _linear_anchors(builder, a, b)
        def level_of(depth: int) -> int:
            return min(depth, 2)
        for lo, hi in zip(anchors, anchors[1:]):
            builder.subdivide(lo, hi, anchors.step, 1, level_of)
        segment_bounds = [anchors[0], anchors[-1]]

    for v in anchors:
        builder.marks.append((v, 0))

    ticks = _assemble(builder, segment_bounds)
    if len(ticks) < 2:
        raise DegenerateScale(
            f"only {len(ticks)} tick(s) fit a {scale.length_mm:g} mm strip "
            f"at {policy.min_tick_spacing_mm:g} mm spacing")
    return TickLayout(scale_ref=scale_ref, ticks=tuple(ticks))


class _Anchors(list):
    step: float = 0.0


def _linear_anchors(builder: _Builder, a: float, b: float) -> _Anchors:
    """Step-lattice anchors aimed at roughly nine major intervals,
    coarsened until they fit physically."""
    span = b - a
    step = _nice_floor(span / 9.0)
    while True:
        values = [a] + [v for v in _lattice(a, b, step)] + [b]
        if builder.fits(values) or step > span:
            out = _Anchors(values if step <= span else [a, b])
            out.step = step
            return out
        step = _nice_up(step)


def _decade_anchors(builder: _Builder, a: float, b: float) -> _Anchors:
    """Powers of ten inside the domain, walked from the low end and pruned
    where they physically crowd; finite domain ends join in.  An infinite
    end gets no end tick (the origin glyph stands for it)."""
    from .scales import HUGE
    values: list[float] = []
    if a > -HUGE * 0.999:
        values.append(a)
    k = math.ceil(math.log10(a) - 1e-12)
    while True:
        d = 10.0 ** k
        if d >= b * (1.0 - 1e-12):
            break
        if not values:
            values.append(d)
        elif d > values[-1] * (1.0 + 1e-12):
            # drop decades that crowd the last kept one; later decades may
            # still fit where the scale stretches out again
            if abs(builder.pos(d) - builder.pos(values[-1])) >= builder.policy.min_tick_spacing_mm:
                values.append(d)
        k += 1
    if b < HUGE * 0.999 and (not values or b > values[-1] * (1.0 + 1e-12)):
        values.append(b)
    out = _Anchors(values)
    out.step = 0.0
    return out


def _assemble(builder: _Builder, segment_bounds: list[float]) -> list[Tick]:
    policy = builder.policy
    # dedupe marks landing on the same physical spot; the lower level wins
    by_pos: list[tuple[float, float, int]] = sorted(
        (builder.pos(v), v, lvl) for v, lvl in builder.marks)
    merged: list[tuple[float, float, int]] = []
    for p, v, lvl in by_pos:
        if merged and abs(p - merged[-1][0]) < 1e-6:
            if lvl < merged[-1][2]:
                merged[-1] = (p, v, lvl)
        else:
            merged.append((p, v, lvl))
    # enforce the tick-spacing invariant outright: on collision the finer
    # (higher-level, later) tick goes
    spaced: list[tuple[float, float, int]] = []
    for p, v, lvl in merged:
        if spaced and p - spaced[-1][0] < policy.min_tick_spacing_mm - 1e-9:
            if lvl < spaced[-1][2]:
                spaced[-1] = (p, v, lvl)
            continue
        spaced.append((p, v, lvl))

    labels = _label_positions(builder, spaced, segment_bounds)
    return [Tick(pos_mm=round(p, 4), level=lvl, value=v, label=labels.get(v))
            for p, v, lvl in spaced]


def _label_positions(builder: _Builder, spaced: list[tuple[float, float, int]],
                     segment_bounds: list[float]) -> dict[float, str]:
    policy = builder.policy
    majors = sorted((v for p, v, lvl in spaced if lvl == 0))
    if not majors:
        return {}

    # thin per decade segment, keeping every k-th from the segment anchor
    kept: list[float] = []
    for lo, hi in zip(segment_bounds, segment_bounds[1:]):
        last = hi >= segment_bounds[-1]
        seg = [v for v in majors
               if lo <= v < hi or (last and math.isclose(v, hi, rel_tol=1e-12))]
        if not seg:
            continue
        for k in range(1, len(seg) + 1):
            chosen = seg[::k]
            ps = sorted(builder.pos(v) for v in chosen)
            if all(q - p >= policy.min_label_spacing_mm - 1e-9
                   for p, q in zip(ps, ps[1:])):
                kept.extend(chosen)
                break
        else:
            kept.append(seg[0])
    # cross-segment sweep in position order; later label loses
    final: list[float] = []
    last_pos = None
    for v in sorted(set(kept), key=builder.pos):
        p = builder.pos(v)
        if last_pos is not None and p - last_pos < policy.min_label_spacing_mm - 1e-9:
            continue
        final.append(v)
        last_pos = p

    ordered = sorted(final)
    out: dict[float, str] = {}
    for i, v in enumerate(ordered):
        gaps = []
        if i > 0:
            gaps.append(abs(v - ordered[i - 1]))
        if i + 1 < len(ordered):
            gaps.append(abs(ordered[i + 1] - v))
        tol = (min(gaps) / 2.0) if gaps else max(1e-9, abs(v) * 1e-9)
        out[v] = _format_label(v, tol, policy.label_format)
    return out


def _format_label(v: float, tol: float, pattern: str) -> str:
    if pattern != "auto":
        return pattern % v
    for nd in range(0, 13):
        s = f"{v:.{nd}f}"
        if abs(float(s) - v) <= tol:
            if "." in s:
                s = s.rstrip("0").rstrip(".")
            return "0" if s in ("-0", "") else s
    return repr(v)
