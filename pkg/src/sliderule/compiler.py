"""Compile functional relations into rules of the additive form
F(z) = f(x) op g(y).

Four paths are supported: the direct form (three monotone functions given
as-is), the bilinear relation a*u(x)*v(y) + b*u(x) + c*v(y) + d*w(z) + e = 0
factored through logs, the symmetric product relation
u*v*w + u + v + w = 0, and pure power rules z^alpha = x^alpha +- y^alpha.
A small line-oriented DSL drives the same paths from text files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Optional

from . import expressions as ex
from .errors import (EmptyRule, EvalError, NotMonotone, ParseError,
                     PositivityViolation, SlideRuleError, ZeroA, ZeroAlpha)
from .scales import Interval, RuleSpec, ScaleFunction, check_monotone, invert_scale_fn

__all__ = [
    "BilinearForm", "ProductForm", "Finding", "Program", "DslValidationError",
    "compile_direct", "compile_bilinear", "compile_product_form",
    "compile_power_rule", "validate_rule", "default_power_domain", "load_dsl",
]

_GRID = 1025  # sample count for positivity checks, matching the monotone probe


@dataclass(frozen=True)
class BilinearForm:
    """Coefficients and monotone carriers of
    a*u(x)*v(y) + b*u(x) + c*v(y) + d*w(z) + e = 0."""

    a: float
    b: float
    c: float
    d: float
    e: float
    u: ScaleFunction
    v: ScaleFunction
    w: ScaleFunction


@dataclass(frozen=True)
class ProductForm:
    """Carriers of u(x)*v(y)*w(z) + u(x) + v(y) + w(z) = 0."""

    u: ScaleFunction
    v: ScaleFunction
    w: ScaleFunction


@dataclass(frozen=True)
class Finding:
    kind: str
    message: str
    where: Optional[float] = None

    def __str__(self) -> str:
        at = "" if self.where is None else f" (near {self.where!r})"
        return f"{self.kind}: {self.message}{at}"


def _grid_points(fn: ScaleFunction, n: int = _GRID) -> list[float]:
    lo, hi = fn.domain.numeric_lo, fn.domain.numeric_hi
    step = (hi - lo) / (n - 1)
    return [lo + k * step for k in range(n - 1)] + [hi]


def _check_positive(fn: ScaleFunction, transform, bracket: str) -> None:
    for x in _grid_points(fn):
        val = transform(fn._eval_raw(x))
        if not val > 0.0:
            raise PositivityViolation(bracket, x, val)


def _reachable(f: ScaleFunction, g: ScaleFunction, op: str) -> tuple[float, float]:
    fmin, fmax = f.value_range()
    gmin, gmax = g.value_range()
    if op == "plus":
        return fmin + gmin, fmax + gmax
    return fmin - gmax, fmax - gmin


def _result_domain(F: ScaleFunction, f: ScaleFunction, g: ScaleFunction,
                   op: str, name: str) -> Interval:
    """F-inverse image of the reachable f op g set, clipped to range(F)."""
    rlo, rhi = _reachable(f, g, op)
    Fmin, Fmax = F.value_range()
    lo, hi = max(rlo, Fmin), min(rhi, Fmax)
    if not lo < hi:
        raise EmptyRule(
            f"rule {name!r}: reachable values [{rlo:g}, {rhi:g}] miss the "
            f"range [{Fmin:g}, {Fmax:g}] of F")
    za, zb = invert_scale_fn(F, lo), invert_scale_fn(F, hi)
    if za > zb:
        za, zb = zb, za
    if not za < zb:
        raise EmptyRule(f"rule {name!r}: result interval collapses at z={za!r}")
    return Interval(za, zb)


def _recheck_monotone(name: str, tag: str, fn: ScaleFunction) -> None:
    report = check_monotone(fn)
    if not report.ok:
        raise NotMonotone(
            f"rule {name!r}: {tag} = {fn.text()} is not strictly monotone on "
            f"{fn.domain}; first violation near {report.first_violation}",
            report=report)


def compile_direct(F: ScaleFunction, f: ScaleFunction, g: ScaleFunction,
                   op: Literal["plus", "minus"], name: str = "rule",
                   description: str = "", alpha: float | None = None) -> RuleSpec:
    """Assemble a rule from three ready-made monotone functions."""
    for tag, fn in (("F", F), ("f", f), ("g", g)):
        _recheck_monotone(name, tag, fn)
    shares = (F.expr == f.expr and F.domain == f.domain and F.params == f.params)
    return RuleSpec(
        name=name, F=F, f=f, g=g, op=op, shares_F_f=shares,
        description=description, alpha=alpha,
        result_domain=_result_domain(F, f, g, op, name))


def _ln(arg: ex.Expr) -> ex.Expr:
    return ex.Call("ln", (arg,))


def _shifted(expr: ex.Expr, k: float) -> ex.Expr:
    if k == 0.0:
        return expr
    if k < 0.0:
        return ex.BinOp("-", expr, ex.Const(-k))
    return ex.BinOp("+", expr, ex.Const(k))


def compile_bilinear(form: BilinearForm, name: str = "bilinear",
                     description: str = "") -> RuleSpec:
    """Factor the bilinear relation into additive-log form.

    (u + c/a)(v + b/a) = bc/a^2 - (d*w + e)/a, so with all three brackets
    positive on the declared domains the logs of the brackets are the
    scale functions and the operator is plus.
    """
    if form.a == 0.0:
        raise ZeroA("bilinear relation needs a != 0")
    a, b, c, d, e = form.a, form.b, form.c, form.d, form.e
    _check_positive(form.u, lambda t: t + c / a, "u(x) + c/a")
    _check_positive(form.v, lambda t: t + b / a, "v(y) + b/a")
    k = b * c / (a * a) - e / a
    _check_positive(form.w, lambda t: k - (d / a) * t, "bc/a^2 - (d*w(z) + e)/a")

    f = ScaleFunction(_ln(_shifted(form.u.expr, c / a)),
                      form.u.domain, form.u.var, form.u.params)
    g = ScaleFunction(_ln(_shifted(form.v.expr, b / a)),
                      form.v.domain, form.v.var, form.v.params)
    F_expr = _ln(ex.BinOp("-", ex.Const(k), ex.BinOp("*", ex.Const(d / a), form.w.expr))
                 if d / a != 0.0 else ex.Const(k))
    F = ScaleFunction(F_expr, form.w.domain, form.w.var, form.w.params)
    return RuleSpec(
        name=name, F=F, f=f, g=g, op="plus", shares_F_f=False,
        description=description, provenance=form,
        result_domain=_result_domain(F, f, g, "plus", name))


def compile_product_form(u: ScaleFunction, v: ScaleFunction, w: ScaleFunction,
                         name: str = "product", description: str = "") -> RuleSpec:
    """Compile u*v*w + u + v + w = 0 via the (1-t)/(1+t) log transform.

    Needs |u|, |v|, |w| < 1 on their domains so every bracket stays
    positive."""
    for tag, fn in (("u", u), ("v", v), ("w", w)):
        _check_positive(fn, lambda t: 1.0 - t, f"1 - {tag}")
        _check_positive(fn, lambda t: 1.0 + t, f"1 + {tag}")

    def ratio(expr: ex.Expr) -> ex.Expr:
        return _ln(ex.BinOp("/", ex.BinOp("-", ex.Const(1.0), expr),
                            ex.BinOp("+", ex.Const(1.0), expr)))

    f = ScaleFunction(ratio(u.expr), u.domain, u.var, u.params)
    g = ScaleFunction(ratio(v.expr), v.domain, v.var, v.params)
    F = ScaleFunction(ex.Neg(ratio(w.expr)), w.domain, w.var, w.params)
    return RuleSpec(
        name=name, F=F, f=f, g=g, op="plus", shares_F_f=False,
        description=description, provenance=ProductForm(u, v, w),
        result_domain=_result_domain(F, f, g, "plus", name))


def default_power_domain(alpha: float) -> Interval:
    """Domain used when a power rule does not declare one.

    Positive exponents get [0, k] sized so two full-scale operands still
    combine on-scale; negative exponents run from 1 out to the infinite
    end, whose mark is the origin."""
    if alpha > 0:
        return Interval(0.0, float(math.ceil(10.0 * 2.0 ** (1.0 / alpha))))
    return Interval(1.0, math.inf, hi_open=True)


def compile_power_rule(alpha: float, op: Literal["plus", "minus"],
                       domain: Interval | None = None, name: str = "power",
                       description: str = "") -> RuleSpec:
    """One shared x^alpha scale realising z^alpha = x^alpha op y^alpha."""
    if alpha == 0.0:
        raise ZeroAlpha("power rule needs alpha != 0")
    if domain is None:
        domain = default_power_domain(alpha)
    if domain.lo < 0.0:
        raise ValueError(f"power rule domain must lie in [0, inf), got {domain}")
    if alpha < 0.0 and domain.lo == 0.0 and not domain.lo_open:
        raise ValueError("negative exponents need a domain bounded away from 0")
    fn = ScaleFunction(ex.BinOp("^", ex.Name("x"), ex.Const(alpha)), domain)
    return RuleSpec(
        name=name, F=fn, f=fn, g=fn, op=op, shares_F_f=True,
        description=description, alpha=alpha,
        result_domain=_result_domain(fn, fn, fn, op, name))


def validate_rule(rule: RuleSpec) -> list[Finding]:
    """Re-run every compile-time check; an empty list means valid."""
    findings: list[Finding] = []
    for tag, fn in (("F", rule.F), ("f", rule.f), ("g", rule.g)):
        try:
            report = check_monotone(fn)
        except EvalError as exc:
            findings.append(Finding("EvalError", f"{tag} = {fn.text()}: {exc}", exc.at))
            continue
        if not report.ok:
            where = report.first_violation[0] if report.first_violation else None
            findings.append(Finding(
                "NotMonotone",
                f"{tag} = {fn.text()} is not strictly monotone on {fn.domain}", where))
    if not findings:
        try:
            _result_domain(rule.F, rule.f, rule.g, rule.op, rule.name)
        except EmptyRule as exc:
            findings.append(Finding("EmptyRule", str(exc)))
    prov = rule.provenance
    try:
        if isinstance(prov, BilinearForm):
            if prov.a == 0.0:
                findings.append(Finding("ZeroA", "bilinear relation needs a != 0"))
            else:
                a = prov.a
                k = prov.b * prov.c / (a * a) - prov.e / a
                _check_positive(prov.u, lambda t: t + prov.c / a, "u(x) + c/a")
                _check_positive(prov.v, lambda t: t + prov.b / a, "v(y) + b/a")
                _check_positive(prov.w, lambda t: k - (prov.d / a) * t,
                                "bc/a^2 - (d*w(z) + e)/a")
        elif isinstance(prov, ProductForm):
            for tag, fn in (("u", prov.u), ("v", prov.v), ("w", prov.w)):
                _check_positive(fn, lambda t: 1.0 - t, f"1 - {tag}")
                _check_positive(fn, lambda t: 1.0 + t, f"1 + {tag}")
    except PositivityViolation as exc:
        findings.append(Finding("PositivityViolation", str(exc), exc.where))
    if rule.shares_F_f and (rule.F.expr != rule.f.expr or rule.F.domain != rule.f.domain):
        findings.append(Finding("SharesMismatch", "rule claims F = f but they differ"))
    return findings


# ---------------------------------------------------------------------------
# DSL front end.  One statement per line, '#' starts a comment:
#
#   param <name> = <number>
#   scale <name>(<var>) = <expr> on [<lo>, <hi>]     ( or ) marks an open end
#   rule <name>: F=<scale> f=<scale> g=<scale> op=+|-
#   rule <name>: bilinear a=<n> b=<n> c=<n> d=<n> e=<n> u=<scale> v=<scale> w=<scale>
#   rule <name>: product u=<scale> v=<scale> w=<scale>
#   rule <name>: power alpha=<n> op=+|- [on [<lo>, <hi>]]


class DslValidationError(SlideRuleError):
    """A statement parsed but failed a semantic check; carries the line."""

    def __init__(self, line: int, cause: SlideRuleError):
        super().__init__(f"line {line}: {cause}")
        self.line = line
        self.cause = cause


@dataclass
class Program:
    params: dict[str, float] = field(default_factory=dict)
    scales: dict[str, ScaleFunction] = field(default_factory=dict)
    rules: dict[str, RuleSpec] = field(default_factory=dict)


def _parse_number(token: str, line: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise ParseError(f"expected a number, got {token!r}", line=line) from None


def _parse_domain(text: str, line: int) -> Interval:
    text = text.strip()
    if not text or text[0] not in "[(" or text[-1] not in "])":
        raise ParseError(f"expected an interval like [lo, hi], got {text!r}",
                         line=line, expected=("[", "("))
    body = text[1:-1].split(",")
    if len(body) != 2:
        raise ParseError("interval needs exactly two endpoints", line=line)
    lo = _parse_number(body[0].strip(), line)
    hi = _parse_number(body[1].strip(), line)
    try:
        return Interval(lo, hi, lo_open=text[0] == "(", hi_open=text[-1] == ")")
    except ValueError as exc:
        raise ParseError(str(exc), line=line) from None


def _split_kv(body: str, line: int) -> dict[str, str]:
    out: dict[str, str] = {}
    for tok in body.split():
        if "=" not in tok:
            raise ParseError(f"expected key=value, got {tok!r}", line=line)
        key, _, val = tok.partition("=")
        if key in out:
            raise ParseError(f"duplicate key {key!r}", line=line)
        out[key] = val
    return out


def _need(kv: dict[str, str], keys: tuple[str, ...], line: int) -> None:
    missing = [k for k in keys if k not in kv]
    if missing:
        raise ParseError(f"missing {', '.join(missing)}", line=line, expected=tuple(missing))
    stray = [k for k in kv if k not in keys]
    if stray:
        raise ParseError(f"unexpected key(s) {', '.join(stray)}", line=line, expected=keys)


def _op_of(token: str, line: int) -> str:
    if token == "+":
        return "plus"
    if token == "-":
        return "minus"
    raise ParseError(f"op must be + or -, got {token!r}", line=line, expected=("+", "-"))


def _scale_ref(program: Program, token: str, line: int) -> ScaleFunction:
    if token not in program.scales:
        raise ParseError(f"unknown scale {token!r}", line=line,
                         expected=tuple(program.scales))
    return program.scales[token]


def load_dsl(text: str) -> Program:
    """Parse and compile a rule-definition file.

    Grammar errors raise ParseError with the line; statements that parse
    but fail a semantic check (non-monotone scale, zero coefficient,
    positivity violation, empty rule) raise DslValidationError."""
    program = Program()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        try:
            if head == "param":
                _stmt_param(program, rest, lineno)
            elif head == "scale":
                _stmt_scale(program, rest, lineno)
            elif head == "rule":
                _stmt_rule(program, rest, lineno)
            else:
                raise ParseError(f"unknown statement {head!r}", line=lineno,
                                 expected=("param", "scale", "rule"))
        except ParseError as exc:
            if exc.line is None:  # expression-level error: attach the line
                raise ParseError(str(exc), offset=exc.offset,
                                 expected=exc.expected, line=lineno) from None
            raise
        except SlideRuleError as exc:
            raise DslValidationError(lineno, exc) from exc
    return program


def _stmt_param(program: Program, rest: str, line: int) -> None:
    name, eq, value = (piece.strip() for piece in rest.partition("="))
    if not eq or not name.isidentifier():
        raise ParseError("expected: param <name> = <number>", line=line)
    program.params[name] = _parse_number(value, line)


def _stmt_scale(program: Program, rest: str, line: int) -> None:
    sig, eq, body = rest.partition("=")
    if not eq:
        raise ParseError("expected: scale <name>(<var>) = <expr> on [lo, hi]", line=line)
    sig = sig.strip()
    if "(" not in sig or not sig.endswith(")"):
        raise ParseError(f"expected <name>(<var>), got {sig!r}", line=line)
    name, var = sig[:-1].split("(", 1)
    name, var = name.strip(), var.strip()
    if not name.isidentifier() or not var.isidentifier():
        raise ParseError(f"bad scale signature {sig!r}", line=line)
    if name in program.scales:
        raise ParseError(f"scale {name!r} already defined", line=line)
    expr_text, on, domain_text = body.rpartition(" on ")
    if not on:
        raise ParseError("scale statement needs an 'on [lo, hi]' clause", line=line)
    expr = ex.parse_expression(expr_text.strip(), known={var} | set(program.params))
    used = ex.names_in(expr) - {var}
    program.scales[name] = ScaleFunction(
        expr, _parse_domain(domain_text, line), var,
        {k: program.params[k] for k in used})


def _stmt_rule(program: Program, rest: str, line: int) -> None:
    name, colon, body = rest.partition(":")
    name = name.strip()
    if not colon or not name.isidentifier():
        raise ParseError("expected: rule <name>: ...", line=line)
    if name in program.rules:
        raise ParseError(f"rule {name!r} already defined", line=line)
    body = body.strip()
    kind = body.split(None, 1)[0] if body else ""

    if kind == "bilinear":
        kv = _split_kv(body[len(kind):], line)
        _need(kv, ("a", "b", "c", "d", "e", "u", "v", "w"), line)
        form = BilinearForm(
            *(_parse_number(kv[k], line) for k in "abcde"),
            u=_scale_ref(program, kv["u"], line),
            v=_scale_ref(program, kv["v"], line),
            w=_scale_ref(program, kv["w"], line))
        program.rules[name] = compile_bilinear(form, name=name)
    elif kind == "product":
        kv = _split_kv(body[len(kind):], line)
        _need(kv, ("u", "v", "w"), line)
        program.rules[name] = compile_product_form(
            _scale_ref(program, kv["u"], line),
            _scale_ref(program, kv["v"], line),
            _scale_ref(program, kv["w"], line), name=name)
    elif kind == "power":
        args, on, domain_text = body[len(kind):].rpartition(" on ")
        if not on:
            args, domain_text = body[len(kind):], ""
        kv = _split_kv(args, line)
        _need(kv, ("alpha", "op"), line)
        domain = _parse_domain(domain_text, line) if domain_text else None
        program.rules[name] = compile_power_rule(
            _parse_number(kv["alpha"], line), _op_of(kv["op"], line),
            domain=domain, name=name)
    else:
        kv = _split_kv(body, line)
        _need(kv, ("F", "f", "g", "op"), line)
        program.rules[name] = compile_direct(
            _scale_ref(program, kv["F"], line),
            _scale_ref(program, kv["f"], line),
            _scale_ref(program, kv["g"], line),
            _op_of(kv["op"], line), name=name)
