"""The scale-sheet document: laid-out rules ready for rendering or for the
web viewer.

A sheet is self-contained: every scale carries its tick value/position
pairs, physical length, mount offset on the common axis, and optional
origin glyph and gauge marks.  The JSON serialization is the contract
consumed by the viewer; positions are stored rounded to 4 decimals so a
sheet round-trips its serialization exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

from .errors import SheetFormatError
from .layout import Tick, TickLayout, TickPolicy, generate_ticks
from .scales import RuleSpec, Scale, position_of
from .simulator import DEFAULT_LENGTH_MM, _result_extent, assemble, _origin_label_for

__all__ = ["GaugeMark", "SheetScale", "SheetRule", "ScaleSheet",
           "export_sheet", "serialize_sheet", "parse_sheet"]

SHEET_VERSION = 1
SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class GaugeMark:
    label: str
    value: float
    pos_mm: float


@dataclass(frozen=True)
class SheetScale:
    role: str               # stator | stator_f | stator_F | slide
    scale_ref: str
    length_mm: float
    mount_mm: float         # displacement of the strip on the rule's axis
    reversed: bool
    origin_label: Optional[str]
    origin_pos_mm: Optional[float]
    ticks: tuple[Tick, ...]
    gauge_marks: tuple[GaugeMark, ...] = ()


@dataclass(frozen=True)
class SheetRule:
    name: str
    description: str
    op: str
    shares_F_f: bool
    scales: tuple[SheetScale, ...]


@dataclass(frozen=True)
class ScaleSheet:
    version: int
    length_mm: float
    rules: tuple[SheetRule, ...]


def _round(x: float) -> float:
    return round(x, 4)


def _gauges(rule: RuleSpec, scale: Scale) -> tuple[GaugeMark, ...]:
    # square scales carry the sqrt(2) constant used when halving a sum of
    # two equal squares (quadratic mean of a pair)
    if rule.alpha == 2 and scale.function.domain.contains(SQRT2):
        return (GaugeMark("√2", SQRT2, _round(position_of(scale, SQRT2))),)
    return ()


def _sheet_scale(rule: RuleSpec, scale: Scale, role: str, ref: str,
                 mount_mm: float, policy: TickPolicy) -> SheetScale:
    layout: TickLayout = generate_ticks(scale, policy, scale_ref=ref)
    origin_pos = None
    if scale.origin_label is not None:
        fn = scale.function
        end = fn.domain.numeric_lo if math.isinf(fn.domain.lo) else fn.domain.numeric_hi
        origin_pos = _round(position_of(scale, end))
    return SheetScale(
        role=role, scale_ref=ref, length_mm=_round(scale.length_mm),
        mount_mm=_round(mount_mm), reversed=scale.reversed,
        origin_label=scale.origin_label, origin_pos_mm=origin_pos,
        ticks=layout.ticks, gauge_marks=_gauges(rule, scale))


def export_sheet(rules: Sequence[RuleSpec], length_mm: float = DEFAULT_LENGTH_MM,
                 policy: TickPolicy = TickPolicy()) -> ScaleSheet:
    """Lay out every scale of every rule on a common axis.

    Scales of one rule share the assembly's mm-per-unit factor; the result
    scale of an op-minus rule is mounted reversed, mirroring how it is
    read.  Stator scales come first, the slide last.
    """
    sheet_rules = []
    for rule in rules:
        state = assemble(rule, length_mm)
        ext_lo, _ = _result_extent(state)
        entries = []
        if rule.shares_F_f:
            entries.append(_sheet_scale(rule, state.stator, "stator",
                                        f"{rule.name}/Ff", 0.0, policy))
        else:
            entries.append(_sheet_scale(rule, state.stator_f, "stator_f",
                                        f"{rule.name}/f", 0.0, policy))
            F_scale = Scale(rule.F, state.stator.length_mm,
                            reversed=(rule.op == "minus"),
                            origin_label=_origin_label_for(rule.F))
            entries.append(_sheet_scale(rule, F_scale, "stator_F",
                                        f"{rule.name}/F", ext_lo, policy))
        entries.append(_sheet_scale(rule, state.slide, "slide",
                                    f"{rule.name}/g", 0.0, policy))
        sheet_rules.append(SheetRule(
            name=rule.name, description=rule.description, op=rule.op,
            shares_F_f=rule.shares_F_f, scales=tuple(entries)))
    return ScaleSheet(version=SHEET_VERSION, length_mm=_round(length_mm),
                      rules=tuple(sheet_rules))


def serialize_sheet(sheet: ScaleSheet) -> str:
    """Stable JSON text (UTF-8, 2-space indent, keys in declaration order)."""
    return json.dumps(asdict(sheet), indent=2, ensure_ascii=False) + "\n"


def parse_sheet(text: str) -> ScaleSheet:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SheetFormatError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or "version" not in doc:
        raise SheetFormatError("missing version field")
    if doc["version"] != SHEET_VERSION:
        raise SheetFormatError(
            f"unsupported sheet version {doc['version']!r} (expected {SHEET_VERSION})")
    try:
        rules = tuple(
            SheetRule(
                name=r["name"], description=r["description"], op=r["op"],
                shares_F_f=r["shares_F_f"],
                scales=tuple(
                    SheetScale(
                        role=s["role"], scale_ref=s["scale_ref"],
                        length_mm=s["length_mm"], mount_mm=s["mount_mm"],
                        reversed=s["reversed"], origin_label=s["origin_label"],
                        origin_pos_mm=s["origin_pos_mm"],
                        ticks=tuple(Tick(**t) for t in s["ticks"]),
                        gauge_marks=tuple(GaugeMark(**g) for g in s["gauge_marks"]))
                    for s in r["scales"]))
            for r in doc["rules"])
    except (KeyError, TypeError) as exc:
        raise SheetFormatError(f"malformed sheet document: {exc!r}") from None
    return ScaleSheet(version=doc["version"], length_mm=doc["length_mm"], rules=rules)
