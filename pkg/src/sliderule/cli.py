"""Command-line front end.

Commands: compile, compute, chain, render, profile, list, export.
Exit codes are a stable contract: 0 success, 1 I/O or parse failure,
2 validation failure, 3 off-scale reading, 64 usage error.  All output is
reproducible: no timestamps, no randomness; numbers print as shortest
round-trip decimals trimmed to nine significant digits.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import catalog
from .compiler import DslValidationError, load_dsl, validate_rule
from .errors import OffScale, ParseError, SheetFormatError, SlideRuleError
from .render import SvgStyle, render_svg
from .scales import RuleSpec
from .sheet import export_sheet, parse_sheet, serialize_sheet
from .simulator import (DEFAULT_LENGTH_MM, IDEAL, ReadingModel, assemble,
                        chain, error_profile, power_mean, read_result, slide_set)

__all__ = ["main", "entrypoint"]

EXIT_OK = 0
EXIT_IO_OR_PARSE = 1
EXIT_VALIDATION = 2
EXIT_OFF_SCALE = 3
EXIT_USAGE = 64


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); usage errors are 64
        raise _UsageError(message)


def _fmt(v: float) -> str:
    return f"{v:.9g}"


def _parse_params(pairs: list[str] | None) -> dict[str, float]:
    out: dict[str, float] = {}
    for pair in pairs or []:
        key, eq, val = pair.partition("=")
        if not eq:
            raise _UsageError(f"--param needs name=value, got {pair!r}")
        try:
            out[key.strip()] = float(val)
        except ValueError:
            raise _UsageError(f"--param {key}: {val!r} is not a number") from None
    return out


def _resolve_rule(token: str, params: dict[str, float], rule_name: str | None) -> RuleSpec:
    """A catalog name, or a path to a rule-definition file."""
    path = Path(token)
    if token.endswith(".dsl") or path.is_file():
        program = load_dsl(path.read_text(encoding="utf-8"))
        if not program.rules:
            raise DslValidationError(0, SlideRuleError("file defines no rules"))
        if rule_name is not None:
            if rule_name not in program.rules:
                raise SlideRuleError(
                    f"no rule {rule_name!r} in {token}; defined: {', '.join(program.rules)}")
            return program.rules[rule_name]
        if len(program.rules) > 1:
            raise SlideRuleError(
                f"{token} defines {len(program.rules)} rules; pick one with --rule")
        return next(iter(program.rules.values()))
    return catalog.builtin(token, **params).rule


def _build_parser() -> _Parser:
    top = _Parser(prog="sliderule", description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="command", metavar="command")

    def common(p, resolution=True):
        p.add_argument("--length", type=float, default=DEFAULT_LENGTH_MM,
                       help="physical scale length in mm (default 250)")
        p.add_argument("--param", action="append", metavar="NAME=VALUE",
                       help="bind a rule parameter; repeatable")
        p.add_argument("--rule", help="rule name inside a definition file")
        if resolution:
            p.add_argument("--resolution", type=float, default=0.0,
                           help="reading resolution in mm (0 = exact)")

    p = sub.add_parser("compile", help="compile a rule-definition file to a scale sheet")
    p.add_argument("dsl_path")
    p.add_argument("-o", "--out", help="output sheet path (JSON)")
    p.add_argument("--length", type=float, default=DEFAULT_LENGTH_MM)
    p.add_argument("--validate-only", action="store_true",
                   help="report diagnostics without writing a sheet")

    p = sub.add_parser("compute", help="evaluate a rule at (x, y)")
    p.add_argument("rule_ref", help="catalog rule name or .dsl file")
    p.add_argument("x", type=float)
    p.add_argument("y", type=float)
    common(p)

    p = sub.add_parser("chain", help="fold a rule over several values")
    p.add_argument("rule_ref")
    p.add_argument("xs", type=float, nargs="+", metavar="x")
    p.add_argument("--mean", type=float, metavar="ALPHA",
                   help="print the power mean of the values instead")
    common(p)

    p = sub.add_parser("render", help="render a scale sheet to SVG")
    p.add_argument("sheet_path", nargs="?",
                   help="sheet JSON (omit for the default reciprocal+square sheet)")
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--length", type=float, default=DEFAULT_LENGTH_MM)
    p.add_argument("--mm-to-px", type=float, default=4.0)

    p = sub.add_parser("profile", help="tabulate quantized reading error over a grid")
    p.add_argument("rule_ref")
    p.add_argument("-o", "--out", help="CSV path (default stdout)")
    p.add_argument("--plot", help="also save an error heatmap (PNG)")
    p.add_argument("--grid-x", metavar="LO:HI:N", help="x grid (default: inset domain, 50 pts)")
    p.add_argument("--grid-y", metavar="LO:HI:N")
    common(p)

    p = sub.add_parser("list", help="list the built-in rule catalog")

    p = sub.add_parser("export", help="export catalog rules as a scale sheet")
    p.add_argument("names", nargs="*", help="catalog rule names (default: replus quadplus)")
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--length", type=float, default=DEFAULT_LENGTH_MM)
    p.add_argument("--param", action="append", metavar="NAME=VALUE")
    return top


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"sliderule: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return _dispatch(args)
    except _UsageError as exc:
        print(f"sliderule: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OffScale as exc:
        print(f"off scale: {exc}", file=sys.stderr)
        return EXIT_OFF_SCALE
    except (ParseError, SheetFormatError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_IO_OR_PARSE
    except DslValidationError as exc:
        print(f"validation: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (SlideRuleError, ValueError) as exc:
        print(f"validation: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO_OR_PARSE


def _dispatch(args) -> int:
    return {
        "compile": _cmd_compile,
        "compute": _cmd_compute,
        "chain": _cmd_chain,
        "render": _cmd_render,
        "profile": _cmd_profile,
        "list": _cmd_list,
        "export": _cmd_export,
    }[args.command](args)


def _cmd_compile(args) -> int:
    text = Path(args.dsl_path).read_text(encoding="utf-8")
    program = load_dsl(text)
    findings = []
    for name, rule in program.rules.items():
        findings += [f"{name}: {f}" for f in validate_rule(rule)]
    if findings:
        for line in findings:
            print(f"validation: {line}", file=sys.stderr)
        return EXIT_VALIDATION
    print(f"ok: {len(program.rules)} rule(s), {len(program.scales)} scale(s)")
    if args.validate_only:
        return EXIT_OK
    if not args.out:
        raise _UsageError("compile needs -o OUT unless --validate-only")
    sheet = export_sheet(list(program.rules.values()), length_mm=args.length)
    Path(args.out).write_text(serialize_sheet(sheet), encoding="utf-8")
    return EXIT_OK


def _cmd_compute(args) -> int:
    rule = _resolve_rule(args.rule_ref, _parse_params(args.param), args.rule)
    state = slide_set(assemble(rule, args.length), args.x)
    model = ReadingModel(args.resolution)
    z = read_result(state, args.y, model)
    print(_fmt(z))
    if args.resolution > 0:
        ideal = read_result(state, args.y, IDEAL)
        rel = abs(z - ideal) / (abs(ideal) if ideal else 1.0)
        print(f"ideal {_fmt(ideal)}")
        print(f"rel_err {_fmt(rel)}")
    return EXIT_OK


def _cmd_chain(args) -> int:
    rule = _resolve_rule(args.rule_ref, _parse_params(args.param), args.rule)
    model = ReadingModel(args.resolution)
    if args.mean is not None:
        if rule.alpha is None or rule.alpha != args.mean:
            raise SlideRuleError(
                f"--mean {args.mean:g} needs the matching power rule "
                f"(got {args.rule_ref!r}" +
                ("" if rule.alpha is None else f" with exponent {rule.alpha:g}") + ")")
        print(_fmt(power_mean(args.xs, args.mean, model, args.length)))
    else:
        print(_fmt(chain(rule, args.xs, model, args.length)))
    return EXIT_OK


def _cmd_render(args) -> int:
    if args.sheet_path is None:
        rules = [catalog.builtin("replus").rule, catalog.builtin("quadplus").rule]
        sheet = export_sheet(rules, length_mm=args.length)
    else:
        sheet = parse_sheet(Path(args.sheet_path).read_text(encoding="utf-8"))
    svg = render_svg(sheet, SvgStyle(mm_to_px=args.mm_to_px))
    Path(args.out).write_text(svg, encoding="utf-8")
    return EXIT_OK


def _parse_grid(spec: str | None, fn, label: str) -> list[float]:
    if spec is None:
        lo, hi = fn.domain.numeric_lo, fn.domain.numeric_hi
        if hi - lo > 1e12:
            raise _UsageError(f"--grid-{label} is required for unbounded domains")
        span = hi - lo
        lo, hi, n = lo + 0.02 * span, hi - 0.05 * span, 50
    else:
        parts = spec.split(":")
        if len(parts) != 3:
            raise _UsageError(f"--grid-{label} must be LO:HI:N, got {spec!r}")
        try:
            lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise _UsageError(f"--grid-{label}: bad numbers in {spec!r}") from None
        if n < 2 or not lo < hi:
            raise _UsageError(f"--grid-{label}: need LO < HI and N >= 2")
    return [lo + i * (hi - lo) / (n - 1) for i in range(n)]


def _cmd_profile(args) -> int:
    rule = _resolve_rule(args.rule_ref, _parse_params(args.param), args.rule)
    if args.resolution <= 0:
        raise _UsageError("profile needs --resolution > 0")
    xs = _parse_grid(args.grid_x, rule.f, "x")
    ys = _parse_grid(args.grid_y, rule.g, "y")
    table = error_profile(rule, (xs, ys), ReadingModel(args.resolution), args.length)
    csv_text = table.to_csv()
    if args.out:
        Path(args.out).write_text(csv_text, encoding="utf-8")
    else:
        sys.stdout.write(csv_text)
    n_off = sum(1 for r in table.rows if r.off_scale)
    print(f"max_rel_err {_fmt(table.max_rel_err)} mean_rel_err {_fmt(table.mean_rel_err)} "
          f"points {len(table.rows)} off_scale {n_off}", file=sys.stderr)
    if args.plot:
        from .report import save_error_figure
        save_error_figure(table, args.plot,
                          title=f"{rule.name}: reading error at {args.resolution:g} mm")
    return EXIT_OK


def _cmd_list(args) -> int:
    for entry in catalog.list_builtins():
        params = ", ".join(
            f"{k}={'<required>' if v is None else f'{v:g}'}"
            for k, v in entry["parameters"].items())
        suffix = f" [{params}]" if params else ""
        print(f"{entry['name']}{suffix}")
        print(f"    {entry['description']}")
    return EXIT_OK


def _cmd_export(args) -> int:
    names = args.names or ["replus", "quadplus"]
    params = _parse_params(args.param)
    schemas = {e["name"]: e["parameters"] for e in catalog.list_builtins()}
    rules = []
    for name in names:
        accepted = {k: v for k, v in params.items() if k in schemas.get(name, {})}
        rules.append(catalog.builtin(name, **accepted).rule)
    sheet = export_sheet(rules, length_mm=args.length)
    Path(args.out).write_text(serialize_sheet(sheet), encoding="utf-8")
    return EXIT_OK


def entrypoint() -> None:
    sys.exit(main(sys.argv[1:]))
