"""Strictly monotone scale functions and their physical strips.

A ``ScaleFunction`` is a formula over one variable on a declared interval,
verified strictly monotone at construction.  A ``Scale`` binds one to a
strip of a given length: value -> millimetre position is the affine image
of the function value onto [0, length].  A ``RuleSpec`` is a complete rule
of three such functions with F(z) = f(x) op g(y).

Everything here is immutable after construction and safe to share across
threads; all operations are pure functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Mapping, Optional

from . import expressions as ex
from .errors import DomainError, EvalError, NoConvergence, NotMonotone, RangeError

__all__ = [
    "Interval", "MonotoneReport", "ScaleFunction", "Scale", "RuleSpec",
    "eval_scale_fn", "invert_scale_fn", "position_of", "value_at", "check_monotone",
]

#: Relative tolerance of every "equal within tol" contract in this package.
REL_TOL = 1e-9

#: Numeric stand-in for an infinite domain end.  Large enough that the
#: affine position map absorbs it exactly in double precision.
HUGE = 1e300

_INVERT_REL_TOL = 1e-12
_INVERT_MAX_ITER = 100
_MONOTONE_SAMPLES = 1025


@dataclass(frozen=True)
class Interval:
    """A closed-or-open real interval; infinite ends must be open."""

    lo: float
    hi: float
    lo_open: bool = False
    hi_open: bool = False

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")
        if math.isinf(self.lo) and not self.lo_open:
            raise ValueError("an infinite lower end must be open")
        if math.isinf(self.hi) and not self.hi_open:
            raise ValueError("an infinite upper end must be open")

    def contains(self, x: float) -> bool:
        if not math.isfinite(x):
            return False
        above = x > self.lo if self.lo_open else x >= self.lo
        below = x < self.hi if self.hi_open else x <= self.hi
        return above and below

    @property
    def numeric_lo(self) -> float:
        """Computable stand-in for the lower end (inset when open)."""
        if math.isinf(self.lo):
            return -HUGE
        if self.lo_open:
            return self.lo + self._inset()
        return self.lo

    @property
    def numeric_hi(self) -> float:
        if math.isinf(self.hi):
            return HUGE
        if self.hi_open:
            return self.hi - self._inset()
        return self.hi

    def _inset(self) -> float:
        # open ends are realised a hair inside the interval; relative to the
        # span when finite, to the end's own magnitude when the span is not
        if math.isfinite(self.lo) and math.isfinite(self.hi):
            return 1e-9 * (self.hi - self.lo)
        finite = self.lo if math.isfinite(self.lo) else self.hi
        return 1e-9 * max(1.0, abs(finite))

    def __str__(self) -> str:
        left = "(" if self.lo_open else "["
        right = ")" if self.hi_open else "]"
        return f"{left}{self.lo:g}, {self.hi:g}{right}"


@dataclass(frozen=True)
class MonotoneReport:
    ok: bool
    direction: Literal["increasing", "decreasing"]
    first_violation: Optional[tuple[float, float]] = None


def _sample_monotone(evalf, lo: float, hi: float, samples: int) -> MonotoneReport:
    if samples < 2:
        raise ValueError("need at least 2 samples")
    step = (hi - lo) / (samples - 1)
    xs = [lo + k * step for k in range(samples - 1)] + [hi]
    prev_x = xs[0]
    prev_v = evalf(prev_x)
    if not math.isfinite(prev_v):
        raise EvalError("non-finite scale value", at=prev_x)
    direction: Optional[str] = None
    for x in xs[1:]:
        if x == prev_x:  # spacing below float resolution; skip duplicate
            continue
        v = evalf(x)
        if not math.isfinite(v):
            raise EvalError("non-finite scale value", at=x)
        if v == prev_v:
            return MonotoneReport(False, direction or "increasing", (prev_x, x))
        step_dir = "increasing" if v > prev_v else "decreasing"
        if direction is None:
            direction = step_dir
        elif step_dir != direction:
            return MonotoneReport(False, direction, (prev_x, x))
        prev_x, prev_v = x, v
    return MonotoneReport(True, direction or "increasing")


@dataclass(frozen=True)
class ScaleFunction:
    """One strictly monotone formula on an explicit domain.

    ``expr`` may be given as text (parsed here) or as a prebuilt tree.  All
    identifiers other than ``var`` must be bound in ``params``.  Strict
    monotonicity and finiteness are verified on a sampled grid at
    construction; pass ``validate=False`` only when deliberately building a
    broken function for diagnostic tests.
    """

    expr: ex.Expr
    domain: Interval
    var: str = "x"
    params: Mapping[str, float] = field(default_factory=dict)
    validate: bool = True
    # derived, filled in __post_init__
    direction: str = field(default="", compare=False)

    def __post_init__(self):
        if isinstance(self.expr, str):
            object.__setattr__(self, "expr", ex.parse_expression(self.expr))
        object.__setattr__(self, "params", dict(self.params))
        stray = ex.names_in(self.expr) - {self.var} - set(self.params)
        if stray:
            raise ValueError(f"unbound identifier(s) in scale expression: {', '.join(sorted(stray))}")
        if self.validate:
            report = _sample_monotone(self._eval_raw, self.domain.numeric_lo,
                                      self.domain.numeric_hi, _MONOTONE_SAMPLES)
            if not report.ok:
                raise NotMonotone(
                    f"{ex.to_text(self.expr)} is not strictly monotone on "
                    f"{self.domain}; first violation near {report.first_violation}",
                    report=report)
            object.__setattr__(self, "direction", report.direction)
        elif not self.direction:
            object.__setattr__(self, "direction", "increasing")
        object.__setattr__(self, "_vlo", self._eval_raw(self.domain.numeric_lo))
        object.__setattr__(self, "_vhi", self._eval_raw(self.domain.numeric_hi))

    def _eval_raw(self, x: float) -> float:
        try:
            return ex.evaluate(self.expr, {**self.params, self.var: x})
        except EvalError as exc:
            raise EvalError(str(exc), at=x) from None

    def eval(self, x: float) -> float:
        if not self.domain.contains(x):
            raise DomainError(f"{x!r} outside domain {self.domain} of variable {self.var!r}")
        return self._eval_raw(x)

    @property
    def value_lo(self) -> float:
        """Function value at the numeric lower end of the domain."""
        return self._vlo

    @property
    def value_hi(self) -> float:
        return self._vhi

    def value_range(self) -> tuple[float, float]:
        """(min, max) of the function over the domain."""
        a, b = self.value_lo, self.value_hi
        return (a, b) if a <= b else (b, a)

    def text(self) -> str:
        return ex.to_text(self.expr)


def eval_scale_fn(fn: ScaleFunction, x: float) -> float:
    """Evaluate ``fn`` at ``x`` with parameters substituted."""
    return fn.eval(x)


def check_monotone(fn: ScaleFunction, samples: int = _MONOTONE_SAMPLES) -> MonotoneReport:
    """Probe monotonicity of ``fn`` on a uniform ``samples``-point grid.

    Sampled, not symbolic: a function that wiggles strictly between grid
    points can slip through.  Grid endpoints are the numeric (inset)
    domain ends, so open ends are never evaluated.
    """
    return _sample_monotone(fn._eval_raw, fn.domain.numeric_lo, fn.domain.numeric_hi, samples)


def invert_scale_fn(fn: ScaleFunction, u: float) -> float:
    """Return x in dom(fn) with fn(x) = u, unique by strict monotonicity.

    Bracketed bisection on the declared domain: derivative-free, never
    evaluates outside the domain.  Brackets that span many orders of
    magnitude (infinite ends are realised at 1e300) use the geometric
    midpoint until they are tame, otherwise plain halving; at most 100
    iterations or relative x-width 1e-12, whichever comes first.
    """
    lo, hi = fn.domain.numeric_lo, fn.domain.numeric_hi
    vlo, vhi = fn.value_lo, fn.value_hi
    umin, umax = (vlo, vhi) if vlo <= vhi else (vhi, vlo)
    slack = REL_TOL * max(1.0, abs(umin), abs(umax))
    if u < umin - slack or u > umax + slack:
        raise RangeError(f"{u!r} outside the range [{umin!r}, {umax!r}] of {fn.text()}")
    u = min(max(u, umin), umax)
    if u == vlo:
        return lo
    if u == vhi:
        return hi

    increasing = vhi > vlo
    flo = vlo - u
    for _ in range(_INVERT_MAX_ITER):
        if hi - lo <= _INVERT_REL_TOL * max(1.0, abs(lo), abs(hi)):
            break
        if lo > 0.0 and hi / lo > 1e4:
            mid = math.sqrt(lo) * math.sqrt(hi)  # factored to dodge overflow
        elif hi < 0.0 and lo / hi > 1e4:
            mid = -math.sqrt(-lo) * math.sqrt(-hi)
        else:
            mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):  # float exhaustion
            break
        fmid = fn._eval_raw(mid) - u
        if fmid == 0.0:
            return mid
        same_side = (fmid < 0.0) == (flo < 0.0)
        if same_side:
            lo, flo = mid, fmid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    if lo > 0.0 and hi / lo > 2.0:
        x = math.sqrt(lo) * math.sqrt(hi)
    residual = fn._eval_raw(x) - u
    if abs(residual) > REL_TOL * max(1.0, abs(u)):
        raise NoConvergence(
            f"inverting {fn.text()} at {u!r}: residual {residual!r} after "
            f"{_INVERT_MAX_ITER} iterations; check the declared domain {fn.domain}")
    return x


@dataclass(frozen=True)
class Scale:
    """A scale function bound to a physical strip."""

    function: ScaleFunction
    length_mm: float
    reversed: bool = False
    origin_label: Optional[str] = None

    def __post_init__(self):
        if not self.length_mm > 0:
            raise ValueError(f"length_mm must be positive, got {self.length_mm!r}")


def position_of(scale: Scale, x: float) -> float:
    """Millimetre position of the mark for value ``x``.

    Affine image of the function value onto [0, length]: the domain ends
    land exactly on 0 and length.  Position grows with the function value
    unless ``reversed``.
    """
    u = scale.function.eval(x)
    umin, umax = scale.function.value_range()
    pos = scale.length_mm * (u - umin) / (umax - umin)
    return scale.length_mm - pos if scale.reversed else pos


def value_at(scale: Scale, pos_mm: float) -> float:
    """Value of the mark at ``pos_mm``; inverse of :func:`position_of`."""
    if not 0.0 <= pos_mm <= scale.length_mm:
        raise RangeError(f"position {pos_mm!r} outside [0, {scale.length_mm}] mm")
    if scale.reversed:
        pos_mm = scale.length_mm - pos_mm
    umin, umax = scale.function.value_range()
    u = umin + (pos_mm / scale.length_mm) * (umax - umin)
    return invert_scale_fn(scale.function, u)


@dataclass(frozen=True)
class RuleSpec:
    """A compiled rule: F(z) = f(x) op g(y), plus bookkeeping.

    ``result_domain`` is the interval of z actually reachable from the
    declared x and y domains (intersected with the range of F).  When
    ``shares_F_f`` the rule needs only two physical scales.  ``alpha`` is
    set for pure power rules (F = f = g = x^alpha) and drives the square
    gauge marks on rendered sheets.  ``provenance`` keeps the bilinear or
    product form a rule was compiled from so validation can re-check the
    transform's positivity brackets.
    """

    name: str
    F: ScaleFunction
    f: ScaleFunction
    g: ScaleFunction
    op: Literal["plus", "minus"]
    shares_F_f: bool = False
    description: str = ""
    result_domain: Optional[Interval] = None
    alpha: Optional[float] = None
    provenance: object = None

    def __post_init__(self):
        if self.op not in ("plus", "minus"):
            raise ValueError(f"op must be 'plus' or 'minus', got {self.op!r}")
        if self.shares_F_f and (self.F.expr != self.f.expr or self.F.domain != self.f.domain
                                or self.F.params != self.f.params):
            raise ValueError("shares_F_f requires F and f to be the same function and domain")
