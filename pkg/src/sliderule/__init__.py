"""Two-variable function scales for slide rules.

Compile a functional relation into a triple of strictly monotone scale
functions F, f, g with F(z) = f(x) op g(y), lay the scales out on a
physical strip, render them, and simulate the slide movements that read
the relation off, exactly or under a quantized reading model.
"""

from .catalog import CatalogEntry, builtin, list_builtins
from .compiler import (BilinearForm, Finding, ProductForm, Program,
                       compile_bilinear, compile_direct, compile_power_rule,
                       compile_product_form, load_dsl, validate_rule)
from .errors import (ChainUnsupported, DegenerateScale, DomainError, EmptyRule,
                     EvalError, NoConvergence, NotMonotone, OffScale, ParseError,
                     PositivityViolation, RangeError, SheetFormatError,
                     SlideRuleError, UnknownEntry, ZeroA, ZeroAlpha)
from .expressions import parse_expression, to_text
from .layout import Tick, TickLayout, TickPolicy, generate_ticks
from .render import SvgStyle, render_svg
from .scales import (Interval, RuleSpec, Scale, ScaleFunction, check_monotone,
                     eval_scale_fn, invert_scale_fn, position_of, value_at)
from .sheet import ScaleSheet, export_sheet, parse_sheet, serialize_sheet
from .simulator import (IDEAL, ProfileTable, ReadingModel, RuleState, assemble,
                        chain, error_profile, power_mean, read_result, slide_set)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # core scales
    "Interval", "ScaleFunction", "Scale", "RuleSpec",
    "eval_scale_fn", "invert_scale_fn", "position_of", "value_at", "check_monotone",
    # expressions
    "parse_expression", "to_text",
    # compiler
    "BilinearForm", "ProductForm", "Finding", "Program",
    "compile_direct", "compile_bilinear", "compile_product_form",
    "compile_power_rule", "validate_rule", "load_dsl",
    # simulator
    "ReadingModel", "IDEAL", "RuleState", "assemble", "slide_set",
    "read_result", "chain", "power_mean", "error_profile", "ProfileTable",
    # layout and rendering
    "TickPolicy", "Tick", "TickLayout", "generate_ticks",
    "ScaleSheet", "export_sheet", "serialize_sheet", "parse_sheet",
    "SvgStyle", "render_svg",
    # catalog
    "CatalogEntry", "builtin", "list_builtins",
    # errors
    "SlideRuleError", "DomainError", "EvalError", "RangeError", "NoConvergence",
    "ParseError", "NotMonotone", "EmptyRule", "PositivityViolation", "ZeroA",
    "ZeroAlpha", "ChainUnsupported", "OffScale", "DegenerateScale",
    "UnknownEntry", "SheetFormatError",
]
