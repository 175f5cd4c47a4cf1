"""Named, pre-validated rules ready to assemble and read.

Every entry is built from the compiler paths and re-validated at load
time; parameterized entries (power, x_pow_a_y_pow_b, horizon, ...) accept
bindings.  Each entry carries a worked example (inputs and the exact
expected reading) that the test suite replays through the simulator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .compiler import (BilinearForm, compile_bilinear, compile_direct,
                       compile_power_rule, validate_rule)
from .errors import SlideRuleError, UnknownEntry
from .expressions import loggamma
from .scales import Interval, RuleSpec, ScaleFunction

__all__ = ["CatalogEntry", "builtin", "list_builtins"]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    rule: RuleSpec
    description: str
    parameters: dict[str, float]
    example: Optional[tuple[tuple[float, float], float]]


@dataclass(frozen=True)
class _Entry:
    description: str
    schema: dict[str, Optional[float]]  # None marks a required parameter
    build: Callable[[dict[str, float]], RuleSpec]
    example: Optional[tuple[tuple[float, float], float]]


def _replus(p: dict) -> RuleSpec:
    return compile_power_rule(-1.0, "plus", name="replus",
                              description=_REGISTRY["replus"].description)


def _quadplus(p: dict) -> RuleSpec:
    return compile_power_rule(2.0, "plus", name="quadplus",
                              description=_REGISTRY["quadplus"].description)


def _power(p: dict) -> RuleSpec:
    return compile_power_rule(p["alpha"], "plus", name=f"power({p['alpha']:g})",
                              description=_REGISTRY["power"].description)


def _tangent_circles(p: dict) -> RuleSpec:
    return compile_power_rule(
        -0.5, "plus", domain=Interval(0.25, math.inf, hi_open=True),
        name="tangent_circles", description=_REGISTRY["tangent_circles"].description)


def _quadratic_solver(p: dict) -> RuleSpec:
    return compile_direct(
        ScaleFunction("z^2", Interval(0.0, 5.0), var="z"),
        ScaleFunction("p^2/4", Interval(0.0, 10.0), var="p"),
        ScaleFunction("q", Interval(0.0, 10.0), var="q"),
        "minus", name="quadratic_solver",
        description=_REGISTRY["quadratic_solver"].description)


def _cubic_solver(p: dict) -> RuleSpec:
    return compile_direct(
        ScaleFunction("z^2", Interval(0.0, math.sqrt(17.0)), var="z"),
        ScaleFunction("p^3/27", Interval(-6.0, 6.0), var="p"),
        ScaleFunction("q^2/4", Interval(0.0, 6.0), var="q"),
        "plus", name="cubic_solver",
        description=_REGISTRY["cubic_solver"].description)


def _lorentz(p: dict) -> RuleSpec:
    c = p["c"]
    z_hi = 10.0 / math.sqrt(1.0 - 0.99 ** 2)
    return compile_direct(
        ScaleFunction("ln(z)", Interval(0.1, z_hi), var="z"),
        ScaleFunction("ln(M)", Interval(0.1, 10.0), var="M"),
        ScaleFunction("-0.5*ln(1 - v^2/c^2)", Interval(0.0, 0.99 * c),
                      var="v", params={"c": c}),
        "plus", name="lorentz", description=_REGISTRY["lorentz"].description)


def _log_factorial(var: str) -> ScaleFunction:
    return ScaleFunction(f"loggamma({var} + 1)", Interval(1.0, 20.0), var=var)


def _factorial_product(p: dict) -> RuleSpec:
    z_hi = math.exp(2.0 * loggamma(21.0))  # (20!)^2
    return compile_direct(
        ScaleFunction("ln(z)", Interval(1.0, z_hi), var="z"),
        _log_factorial("n"), _log_factorial("k"),
        "plus", name="factorial_product",
        description=_REGISTRY["factorial_product"].description)


def _factorial_quotient(p: dict) -> RuleSpec:
    z_hi = math.exp(loggamma(21.0))  # 20!
    return compile_direct(
        ScaleFunction("ln(z)", Interval(1.0, z_hi), var="z"),
        _log_factorial("n"), _log_factorial("k"),
        "minus", name="factorial_quotient",
        description=_REGISTRY["factorial_quotient"].description)


def _horizon(p: dict) -> RuleSpec:
    R = p["R"]
    reach = R * math.acos(R / (R + 100.0))
    return compile_direct(
        ScaleFunction("z", Interval(0.0, 2.0 * reach), var="z"),
        ScaleFunction("R*arccos(R/(R + h))", Interval(0.0, 100.0), var="h", params={"R": R}),
        ScaleFunction("R*arccos(R/(R + t))", Interval(0.0, 100.0), var="t", params={"R": R}),
        "plus", name="horizon", description=_REGISTRY["horizon"].description)


def _power_tower(p: dict) -> RuleSpec:
    loglog = ScaleFunction("ln(ln(x))",
                           Interval(math.exp(0.05), math.exp(10.0), lo_open=True),
                           var="x")
    return compile_direct(
        loglog, loglog,
        ScaleFunction("ln(y)", Interval(0.5, 10.0), var="y"),
        "plus", name="power_tower", description=_REGISTRY["power_tower"].description)


def _product_xy(p: dict) -> RuleSpec:
    return compile_direct(
        ScaleFunction("ln(z)", Interval(1.0, 100.0), var="z"),
        ScaleFunction("ln(x)", Interval(1.0, 10.0), var="x"),
        ScaleFunction("ln(y)", Interval(1.0, 10.0), var="y"),
        "plus", name="product_xy", description=_REGISTRY["product_xy"].description)


def _x_pow_a_y_pow_b(p: dict) -> RuleSpec:
    a, b = p["a"], p["b"]
    if a == 0.0 or b == 0.0:
        raise ValueError("x_pow_a_y_pow_b needs nonzero exponents")
    corners = [xa * yb for xa in (1.0, 10.0 ** a) for yb in (1.0, 10.0 ** b)]
    form = BilinearForm(
        1.0, 0.0, 0.0, -1.0, 0.0,
        u=ScaleFunction("x^a", Interval(1.0, 10.0), var="x", params={"a": a}),
        v=ScaleFunction("y^b", Interval(1.0, 10.0), var="y", params={"b": b}),
        w=ScaleFunction("z", Interval(min(corners), max(corners)), var="z"))
    return compile_bilinear(form, name="x_pow_a_y_pow_b",
                            description=_REGISTRY["x_pow_a_y_pow_b"].description)


def _snell(p: dict) -> RuleSpec:
    log_sin = ScaleFunction("ln(sin(deg*t))", Interval(1.0, 90.0), var="t",
                            params={"deg": math.pi / 180.0})
    sin1 = math.sin(math.radians(1.0))
    return compile_direct(
        ScaleFunction("ln(z)", Interval(sin1, 1.0 / sin1), var="z"),
        log_sin, log_sin,
        "minus", name="snell", description=_REGISTRY["snell"].description)


def _log_base(p: dict) -> RuleSpec:
    z_lo = math.log(1.5) / math.log(100.0)
    z_hi = math.log(10000.0) / math.log(1.5)
    return compile_direct(
        ScaleFunction("ln(z)", Interval(z_lo, z_hi), var="z"),
        ScaleFunction("ln(ln(b))", Interval(1.5, 10000.0), var="b"),
        ScaleFunction("ln(ln(a))", Interval(1.5, 100.0), var="a"),
        "minus", name="log_base", description=_REGISTRY["log_base"].description)


def _cone_volume(p: dict) -> RuleSpec:
    third_pi = math.pi / 3.0
    form = BilinearForm(
        third_pi, 0.0, 0.0, -1.0, 0.0,
        u=ScaleFunction("r^2", Interval(0.1, 10.0), var="r"),
        v=ScaleFunction("m", Interval(0.1, 10.0), var="m"),
        w=ScaleFunction("V", Interval(third_pi * 1e-3, third_pi * 1e3), var="V"))
    return compile_bilinear(form, name="cone_volume",
                            description=_REGISTRY["cone_volume"].description)


def _t_rule(p: dict) -> RuleSpec:
    a, b, c, d, pp, q = (p[k] for k in ("a", "b", "c", "d", "p", "q"))
    corners = [(a * x + b) ** pp * (c * y + d) ** q for x in (0.0, 10.0) for y in (0.0, 10.0)]
    return compile_direct(
        ScaleFunction("ln(z)", Interval(min(corners), max(corners)), var="z"),
        ScaleFunction("p*ln(a*x + b)", Interval(0.0, 10.0), var="x",
                      params={"a": a, "b": b, "p": pp}),
        ScaleFunction("q*ln(c*y + d)", Interval(0.0, 10.0), var="y",
                      params={"c": c, "d": d, "q": q}),
        "plus", name="t_rule", description=_REGISTRY["t_rule"].description)


_R_EARTH = 6371.0
_HORIZON_EXAMPLE = _R_EARTH * (math.acos(_R_EARTH / (_R_EARTH + 0.004))
                               + math.acos(_R_EARTH / (_R_EARTH + 0.030)))

_REGISTRY: dict[str, _Entry] = {
    "replus": _Entry(
        "Reciprocal addition z = x*y/(x + y): optical power of combined lenses, "
        "parallel resistors, workers sharing a job, triangle incircles, and "
        "harmonic means (multiply by n afterwards).",
        {}, _replus, ((3.0, 6.0), 2.0)),
    "quadplus": _Entry(
        "Pythagorean addition z = sqrt(x^2 + y^2); chain it for diagonals in "
        "higher dimensions or the quadratic mean.",
        {}, _quadplus, ((3.0, 4.0), 5.0)),
    "power": _Entry(
        "One x^alpha scale computing z^alpha = x^alpha + y^alpha for any "
        "nonzero alpha; the building block of general power means.",
        {"alpha": None}, _power, None),
    "tangent_circles": _Entry(
        "Radii of three circles tangent to each other and to a line: "
        "1/sqrt(r1) = 1/sqrt(r2) + 1/sqrt(r3), the power rule at alpha = -1/2.",
        {}, _tangent_circles, ((4.0, 4.0), 1.0)),
    "quadratic_solver": _Entry(
        "Radical half sqrt(p^2/4 - q) of the quadratic-equation solution; "
        "combine with -p/2 by hand to finish the roots.",
        {}, _quadratic_solver, ((5.0, 6.0), 0.5)),
    "cubic_solver": _Entry(
        "Radical half sqrt(p^3/27 + q^2/4) of the depressed-cubic solution.",
        {}, _cubic_solver, ((3.0, 2.0), math.sqrt(2.0))),
    "lorentz": _Entry(
        "Relativistic magnification M / sqrt(1 - v^2/c^2); v is measured in "
        "units of c unless c is rebound to an SI value.",
        {"c": 1.0}, _lorentz, ((1.0, 0.6), 1.25)),
    "factorial_product": _Entry(
        "n! * k! on log-factorial scales; non-integer arguments read "
        "log Gamma(x + 1).",
        {}, _factorial_product, ((5.0, 3.0), 720.0)),
    "factorial_quotient": _Entry(
        "n!/k! on the same log-factorial scales, sliding backwards; n >= k "
        "keeps the result on scale.",
        {}, _factorial_quotient, ((5.0, 3.0), 20.0)),
    "horizon": _Entry(
        "Sight distance over the globe between an observer at height h and a "
        "target at height t: R*arccos(R/(R + h)) per side. Heights and the "
        "answer share R's unit (default km).",
        {"R": _R_EARTH}, _horizon, ((0.004, 0.030), _HORIZON_EXAMPLE)),
    "power_tower": _Entry(
        "z = x^y in one movement: a log-log scale read against the ordinary "
        "log scale.",
        {}, _power_tower, ((2.0, 3.0), 8.0)),
    "product_xy": _Entry(
        "Plain multiplication z = x*y on log scales; the result scale spans "
        "two decades so full-scale products stay on the rule.",
        {}, _product_xy, ((2.0, 3.0), 6.0)),
    "x_pow_a_y_pow_b": _Entry(
        "z = x^a * y^b for fixed exponents, a shape many physics formulas take.",
        {"a": 2.0, "b": 3.0}, _x_pow_a_y_pow_b, ((2.0, 2.0), 32.0)),
    "snell": _Entry(
        "Refraction ratio sin(t1)/sin(t2) = n2/n1 on log-sine scales; angles "
        "in degrees.",
        {}, _snell, ((30.0, 90.0), 0.5)),
    "log_base": _Entry(
        "z = log_a(b), read as a difference of log-log marks against a log "
        "result scale.",
        {}, _log_base, ((8.0, 2.0), 3.0)),
    "cone_volume": _Entry(
        "Cone volume V = pi*r^2*m/3 from radius and height.",
        {}, _cone_volume, ((2.0, 3.0), 4.0 * math.pi)),
    "t_rule": _Entry(
        "T = (a*S + b)^p * (c*R + d)^q with coefficients and exponents kept "
        "independent.",
        {"a": 2.0, "b": 1.0, "c": 1.0, "d": 2.0, "p": 1.0, "q": 1.0},
        _t_rule, ((1.0, 2.0), 12.0)),
}


def builtin(name: str, **bindings: float) -> CatalogEntry:
    """Look up a catalog entry, optionally rebinding its parameters."""
    try:
        entry = _REGISTRY[name]
    except KeyError:
        raise UnknownEntry(name, tuple(_REGISTRY)) from None
    stray = set(bindings) - set(entry.schema)
    if stray:
        raise ValueError(f"{name} takes no parameter(s) {', '.join(sorted(stray))}")
    params = {**{k: v for k, v in entry.schema.items() if v is not None}, **bindings}
    missing = [k for k, v in entry.schema.items() if v is None and k not in params]
    if missing:
        raise ValueError(f"{name} needs parameter(s) {', '.join(missing)}")
    rule = entry.build(params)
    findings = validate_rule(rule)
    if findings:
        raise SlideRuleError(
            f"catalog entry {name!r} failed validation: "
            + "; ".join(str(f) for f in findings))
    example = entry.example if not bindings else None
    return CatalogEntry(name=name, rule=rule, description=entry.description,
                        parameters=params, example=example)


def list_builtins() -> list[dict]:
    """Stable-ordered listing of every entry with its parameter schema."""
    return [{"name": name, "description": entry.description,
             "parameters": dict(entry.schema)}
            for name, entry in _REGISTRY.items()]
