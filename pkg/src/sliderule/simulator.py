"""Simulate the physical slide-rule act, exactly or with quantized reading.

A rule is assembled at a physical length: all of its scales share one
millimetre-per-function-unit factor (the longest scale spans the full
length), so sliding really does add function values.  Setting the slide
and reading the result are two separate physical acts; under a reading
model with resolution r both acted positions are rounded to the nearest
multiple of r before the result scale is inverted.

States are immutable values; ``slide_set`` returns a new one.  Everything
here is pure and thread-safe.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .errors import ChainUnsupported, OffScale, RangeError, ZeroAlpha
from .scales import RuleSpec, Scale, ScaleFunction, Interval, invert_scale_fn, position_of
from .compiler import compile_power_rule

__all__ = [
    "ReadingModel", "IDEAL", "RuleState", "assemble", "slide_set",
    "read_result", "chain", "power_mean", "error_profile",
    "ProfileRow", "ProfileTable",
]

DEFAULT_LENGTH_MM = 250.0


@dataclass(frozen=True)
class ReadingModel:
    """Physical reading precision; resolution 0 reads exactly.
    Rounding is always to the nearest multiple of the resolution."""

    resolution_mm: float = 0.0

    def __post_init__(self):
        if self.resolution_mm < 0:
            raise ValueError("resolution_mm must be >= 0")

    def quantize(self, pos_mm: float) -> float:
        r = self.resolution_mm
        if r == 0.0:
            return pos_mm
        return math.floor(pos_mm / r + 0.5) * r


IDEAL = ReadingModel(0.0)


def _origin_label_for(fn: ScaleFunction) -> Optional[str]:
    """The infinity glyph when the domain end sitting at position 0 is a
    finite-limit infinity (the reciprocal scale's origin)."""
    end = fn.domain.lo if fn.direction == "increasing" else fn.domain.hi
    return "∞" if math.isinf(end) else None


@dataclass(frozen=True)
class RuleState:
    """An assembled rule plus the slide displacement.

    ``stator`` carries the result scale F (and, for two-scale rules, f as
    well); ``stator_f`` is the setting scale on the body (the same object
    when the rule shares F and f); ``slide`` carries g.  ``offset_mm`` is
    the signed displacement of the slide origin from the stator origin.
    """

    rule: RuleSpec
    stator: Scale
    stator_f: Scale
    slide: Scale
    unit_mm: float  # common mm per function-value unit
    offset_mm: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.offset_mm):
            raise ValueError("offset_mm must be finite")


def assemble(rule: RuleSpec, length_mm: float = DEFAULT_LENGTH_MM) -> RuleState:
    """Build the physical scales for ``rule``.

    The scale with the widest function-value span gets the full length;
    the others share its mm-per-unit factor so positions add up.
    """
    if length_mm <= 0:
        raise ValueError("length_mm must be positive")
    spans = {}
    for tag, fn in (("F", rule.F), ("f", rule.f), ("g", rule.g)):
        umin, umax = fn.value_range()
        spans[tag] = umax - umin
    unit = length_mm / max(spans.values())

    def build(fn: ScaleFunction, tag: str) -> Scale:
        return Scale(fn, length_mm=spans[tag] * unit,
                     origin_label=_origin_label_for(fn))

    stator = build(rule.F, "F")
    stator_f = stator if rule.shares_F_f else build(rule.f, "f")
    slide = build(rule.g, "g")
    return RuleState(rule=rule, stator=stator, stator_f=stator_f,
                     slide=slide, unit_mm=unit)


def slide_set(state: RuleState, x: float) -> RuleState:
    """Slip the slide origin to the mark ``x`` on the body's setting scale.

    The offset is the exact mark position, positive for op plus and
    negative for op minus (the subtraction convention: the slide walks
    backwards and the result scale is read mirrored)."""
    pos = position_of(state.stator_f, x)
    return replace(state, offset_mm=pos if state.rule.op == "plus" else -pos)


def _implied_value(state: RuleState, hairline_mm: float) -> float:
    """F-value implied by a hairline position on the common axis."""
    rule = state.rule
    f_min, _ = rule.f.value_range()
    g_min, _ = rule.g.value_range()
    if rule.op == "plus":
        return hairline_mm / state.unit_mm + f_min + g_min
    return -hairline_mm / state.unit_mm + f_min - g_min


def _result_extent(state: RuleState) -> tuple[float, float]:
    """Axis interval [lo, hi] covered by the result scale."""
    rule = state.rule
    F_min, F_max = rule.F.value_range()
    f_min, _ = rule.f.value_range()
    g_min, _ = rule.g.value_range()
    if rule.op == "plus":
        return (F_min - f_min - g_min) * state.unit_mm, (F_max - f_min - g_min) * state.unit_mm
    return (f_min - g_min - F_max) * state.unit_mm, (f_min - g_min - F_min) * state.unit_mm


def read_result(state: RuleState, y: float, model: ReadingModel = IDEAL) -> float:
    """Move the hairline to the slide mark ``y`` and read the stator.

    With resolution 0 this returns exactly F-inverse of f(x) op g(y), to
    inversion tolerance.  With a positive resolution both the slide
    setting and the hairline reading are quantized first.  Raises
    OffScale when the combined position leaves the drawn result scale.
    """
    offset = model.quantize(state.offset_mm)
    hairline = model.quantize(offset + position_of(state.slide, y))
    try:
        return invert_scale_fn(state.rule.F, _implied_value(state, hairline))
    except RangeError:
        lo, hi = _result_extent(state)
        raise OffScale(hairline, lo if hairline < lo else hi) from None


def chain(rule: RuleSpec, xs: Sequence[float], model: ReadingModel = IDEAL,
          length_mm: float = DEFAULT_LENGTH_MM) -> float:
    """Fold repeated movements left to right: each reading becomes the
    next setting.  Needs op plus and a shared F = f scale so the result
    mark exists on the setting scale."""
    if len(xs) < 2:
        raise ValueError("chain needs at least two values")
    if rule.op != "plus" or not rule.shares_F_f:
        raise ChainUnsupported(
            f"rule {rule.name!r} has op={rule.op} and shares_F_f={rule.shares_F_f}; "
            "chaining needs op plus and F = f")
    state = assemble(rule, length_mm)
    z = xs[0]
    for step, x in enumerate(xs[1:], start=1):
        state = slide_set(state, z)
        try:
            z = read_result(state, x, model)
        except OffScale as exc:
            raise OffScale(exc.needed_mm, exc.available_mm, step=step) from None
    return z


def power_mean(xs: Sequence[float], alpha: float, model: ReadingModel = IDEAL,
               length_mm: float = DEFAULT_LENGTH_MM) -> float:
    """General mean ((sum of x^alpha)/n)^(1/alpha) via chained movements.

    The x^alpha rule is sized to cover the inputs and every intermediate
    accumulation; the final division by n^(1/alpha) is applied
    analytically rather than with a gauge mark.
    """
    if alpha == 0.0:
        raise ZeroAlpha("power mean needs alpha != 0")
    if not xs:
        raise ValueError("power mean needs at least one value")
    if any(x <= 0 for x in xs):
        raise ValueError("power mean needs positive values")
    if len(xs) == 1:
        return float(xs[0])
    acc = 0.0
    partials = []
    for x in xs:
        acc += x ** alpha
        partials.append(acc ** (1.0 / alpha))
    visited = list(xs) + partials
    domain = Interval(min(visited) * 0.9, max(visited) * 1.1)
    rule = compile_power_rule(alpha, "plus", domain=domain, name=f"power({alpha:g})")
    z = chain(rule, xs, model, length_mm)
    return z * len(xs) ** (-1.0 / alpha)


@dataclass(frozen=True)
class ProfileRow:
    x: float
    y: float
    z_exact: Optional[float]
    z_read: Optional[float]
    rel_err: Optional[float]

    @property
    def off_scale(self) -> bool:
        return self.z_read is None


@dataclass(frozen=True)
class ProfileTable:
    rows: tuple[ProfileRow, ...]
    max_rel_err: float
    mean_rel_err: float

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["x", "y", "z_exact", "z_read", "rel_err"])
        for row in self.rows:
            writer.writerow([
                repr(row.x), repr(row.y),
                "OFF_SCALE" if row.z_exact is None else repr(row.z_exact),
                "OFF_SCALE" if row.z_read is None else repr(row.z_read),
                "" if row.rel_err is None else repr(row.rel_err),
            ])
        return buf.getvalue()


def error_profile(rule: RuleSpec, grid: tuple[Sequence[float], Sequence[float]],
                  model: ReadingModel, length_mm: float = DEFAULT_LENGTH_MM) -> ProfileTable:
    """Compare quantized readings against ideal ones over a grid.

    Grid points whose reading leaves the scale are recorded with an
    OFF_SCALE sentinel and excluded from the summary.  The error is
    relative to the ideal result (absolute when that result is zero).
    Deterministic: same inputs, same table.
    """
    xs, ys = grid
    state0 = assemble(rule, length_mm)
    rows: list[ProfileRow] = []
    errs: list[float] = []
    for x in xs:
        state = slide_set(state0, x)
        for y in ys:
            try:
                z_exact = read_result(state, y, IDEAL)
            except OffScale:
                rows.append(ProfileRow(x, y, None, None, None))
                continue
            try:
                z_read = read_result(state, y, model)
            except OffScale:
                rows.append(ProfileRow(x, y, z_exact, None, None))
                continue
            err = abs(z_read - z_exact) / (abs(z_exact) if z_exact != 0.0 else 1.0)
            rows.append(ProfileRow(x, y, z_exact, z_read, err))
            errs.append(err)
    return ProfileTable(
        rows=tuple(rows),
        max_rel_err=max(errs) if errs else 0.0,
        mean_rel_err=sum(errs) / len(errs) if errs else 0.0)
