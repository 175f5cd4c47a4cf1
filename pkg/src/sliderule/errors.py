"""Exception hierarchy shared by all sliderule modules."""

from __future__ import annotations


class SlideRuleError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SlideRuleError):
    """A value lies outside the declared domain of a scale function."""


class EvalError(SlideRuleError):
    """An expression is undefined at the evaluation point (log of a
    non-positive number, arccos outside [-1, 1], overflow, ...)."""

    def __init__(self, message: str, at: float | None = None):
        super().__init__(message if at is None else f"{message} (at x={at!r})")
        self.at = at


class RangeError(SlideRuleError):
    """A target value lies outside the range of a scale function, or a
    physical position lies outside the strip."""


class NoConvergence(SlideRuleError):
    """Inversion failed to meet tolerance within the iteration budget.
    Usually the sign of a mis-declared domain."""


class ParseError(SlideRuleError):
    """Text did not match the expression or DSL grammar."""

    def __init__(self, message: str, offset: int = 0, expected: tuple[str, ...] = (),
                 line: int | None = None):
        loc = f" at offset {offset}" if line is None else f" at line {line}, column {offset + 1}"
        hint = f" (expected {', '.join(expected)})" if expected else ""
        super().__init__(f"{message}{loc}{hint}")
        self.offset = offset
        self.expected = expected
        self.line = line


class NotMonotone(SlideRuleError):
    """A scale function failed the strict-monotonicity check."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class EmptyRule(SlideRuleError):
    """The reachable set of f(x) op g(y) misses the range of F entirely."""


class PositivityViolation(SlideRuleError):
    """A log-transform bracket is non-positive somewhere on the declared
    domain; carries which bracket and a witness point."""

    def __init__(self, bracket: str, where: float, value: float):
        super().__init__(f"bracket {bracket} is {value!r} <= 0 at {where!r}")
        self.bracket = bracket
        self.where = where
        self.value = value


class ZeroA(SlideRuleError):
    """The leading coefficient of a bilinear relation is zero."""


class ZeroAlpha(SlideRuleError):
    """A power rule needs a nonzero exponent."""


class ChainUnsupported(SlideRuleError):
    """Chaining needs op '+' and a shared F = f scale so results feed back."""


class OffScale(SlideRuleError):
    """The combined reading position leaves the drawn result scale."""

    def __init__(self, needed_mm: float, available_mm: float, step: int | None = None):
        at = "" if step is None else f" at chain step {step}"
        super().__init__(
            f"reading{at} needs position {needed_mm:.3f} mm but the scale "
            f"ends at {available_mm:.3f} mm (overshoot {needed_mm - available_mm:+.3f} mm)")
        self.needed_mm = needed_mm
        self.available_mm = available_mm
        self.step = step


class DegenerateScale(SlideRuleError):
    """Fewer than two ticks fit the strip under the layout policy."""


class UnknownEntry(SlideRuleError):
    """Catalog lookup with a name that is not registered."""

    def __init__(self, name: str, valid: tuple[str, ...]):
        super().__init__(f"unknown catalog entry {name!r}; valid names: {', '.join(valid)}")
        self.valid = valid


class SheetFormatError(SlideRuleError):
    """A scale-sheet document is malformed or has an unsupported version."""
