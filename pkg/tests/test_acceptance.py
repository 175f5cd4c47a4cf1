"""Acceptance suite: one test per shipped guarantee, one PASS line each.

Every expected value here is either exact arithmetic or produced by an
independent oracle computed inside the test (direct formula evaluation,
brute-force means, first-order quantization bounds); nothing is read back
from the code paths under test.
"""

import math
import random
import time
import xml.etree.ElementTree as ET

from sliderule import catalog
from sliderule.compiler import BilinearForm, compile_bilinear, compile_product_form
from sliderule.errors import OffScale
from sliderule.render import render_svg
from sliderule.scales import (Interval, Scale, ScaleFunction, eval_scale_fn,
                              invert_scale_fn, position_of, value_at)
from sliderule.sheet import export_sheet
from sliderule.simulator import (IDEAL, ReadingModel, assemble, chain,
                                 error_profile, power_mean, read_result, slide_set)

from conftest import assert_rel, uniform_grid

REL = 1e-9


def _read(name, x, y, **bindings):
    rule = catalog.builtin(name, **bindings).rule
    return read_result(slide_set(assemble(rule), x), y, IDEAL)


def test_worked_examples_exact():
    t0 = time.perf_counter()
    assert_rel(_read("replus", 3.0, 6.0), 2.0, REL, "replus(3,6)")
    assert_rel(_read("quadplus", 3.0, 4.0), 5.0, REL, "quadplus(3,4)")
    assert_rel(chain(catalog.builtin("quadplus").rule, [1.0, 2.0, 2.0]), 3.0,
               REL, "chain quadplus [1,2,2]")
    assert_rel(_read("tangent_circles", 4.0, 4.0), 1.0, REL, "tangent_circles(4,4)")
    assert_rel(_read("quadratic_solver", 5.0, 6.0), 0.5, REL, "quadratic_solver(5,6)")
    assert_rel(_read("cubic_solver", 3.0, 2.0), math.sqrt(2.0), REL, "cubic_solver(3,2)")
    assert_rel(_read("lorentz", 1.0, 0.6), 1.25, REL, "lorentz(1, 0.6)")
    assert_rel(_read("factorial_product", 5.0, 3.0), 720.0, REL, "factorial_product(5,3)")
    assert_rel(_read("power_tower", 2.0, 3.0), 8.0, REL, "power_tower(2,3)")
    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0, f"worked examples took {elapsed:.2f} s"
    print(f"PASS: nine worked examples exact to 1e-9 in {elapsed * 1000:.0f} ms")


def _random_feasible_form(rng, a):
    """A bilinear relation with identity carriers whose brackets stay
    positive on [1, 3] x [1, 3] and on a z-domain derived from the
    reachable bracket product."""
    while True:
        b = rng.choice([-0.5, 0.0, 0.5, 1.0, 2.0])
        c = rng.choice([-0.5, 0.0, 0.5, 1.0, 2.0])
        if b / a > -0.9 and c / a > -0.9:
            break
    d = rng.choice([-2.0, -1.0, 1.0, 2.0])
    e = rng.choice([-1.0, 0.0, 1.0])
    corners = [(u + c / a) * (v + b / a) for u in (1.0, 3.0) for v in (1.0, 3.0)]
    lo_p, hi_p = min(corners), max(corners)
    k = b * c / (a * a) - e / a
    w_ends = sorted(((k - p) * a / d for p in (lo_p, hi_p)))
    span = w_ends[1] - w_ends[0]
    domain = Interval(w_ends[0] + 0.02 * span, w_ends[1] - 0.02 * span)
    return BilinearForm(
        a, b, c, d, e,
        u=ScaleFunction("x", Interval(1.0, 3.0), var="x"),
        v=ScaleFunction("y", Interval(1.0, 3.0), var="y"),
        w=ScaleFunction("z", domain, var="z"))


def test_bilinear_transform_soundness():
    t0 = time.perf_counter()
    rng = random.Random(20260811)
    a_values = [1.0, -1.0, 2.0, -2.0, rng.choice([1.0, -1.0, 2.0, -2.0])]
    rng.shuffle(a_values)
    grid = uniform_grid(1.0, 3.0, 100)
    for i, a in enumerate(a_values):
        form = _random_feasible_form(rng, a)
        rule = compile_bilinear(form, name=f"random_{i}")
        state0 = assemble(rule)
        skipped = 0
        for x in grid:
            state = slide_set(state0, x)
            for y in grid:
                try:
                    z = read_result(state, y, IDEAL)
                except OffScale:
                    skipped += 1
                    continue
                residual = (form.a * x * y + form.b * x + form.c * y
                            + form.d * z + form.e)
                scale = max(1.0, abs(form.a * x * y), abs(form.b * x),
                            abs(form.c * y), abs(form.d * z), abs(form.e))
                assert abs(residual) <= 1e-7 * scale, \
                    f"form {i} (a={a}): residual {residual} at ({x}, {y})"
        assert skipped <= 0.10 * len(grid) ** 2, f"form {i}: {skipped} off-scale"
    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0, f"bilinear soundness took {elapsed:.2f} s"
    print(f"PASS: five random bilinear relations hold to 1e-7 on 100x100 grids "
          f"({elapsed:.1f} s)")


def test_product_form_soundness():
    iv = Interval(-0.9, 0.9, lo_open=True, hi_open=True)
    rule = compile_product_form(ScaleFunction("x", iv, var="x"),
                                ScaleFunction("y", iv, var="y"),
                                ScaleFunction("z", iv, var="z"))
    grid = uniform_grid(iv.numeric_lo, iv.numeric_hi, 100)
    state0 = assemble(rule)
    checked = skipped = 0
    for x in grid:
        state = slide_set(state0, x)
        for y in grid:
            try:
                z = read_result(state, y, IDEAL)
            except OffScale:
                # the exact solution -(x+y)/(1+xy) leaves the declared
                # z-interval at these corners; nothing to read there
                assert abs(-(x + y) / (1.0 + x * y)) >= 0.9 - 1e-6
                skipped += 1
                continue
            assert abs(x * y * z + x + y + z) <= 1e-7
            checked += 1
    assert checked > 0.65 * len(grid) ** 2
    print(f"PASS: product relation residual <= 1e-7 on {checked} grid points "
          f"({skipped} corners off scale)")


def test_power_means():
    assert_rel(power_mean([2.0, 8.0], -1.0), 3.2, REL, "harmonic mean")
    brute = math.sqrt((3.0 ** 2 + 4.0 ** 2) / 2.0)
    assert_rel(power_mean([3.0, 4.0], 2.0), brute, REL, "quadratic mean")
    print("PASS: harmonic mean [2,8] = 3.2 and quadratic mean [3,4] matches "
          "brute force to 1e-9")


def test_horizon_against_independent_oracle():
    R, h, t = 6371.0, 0.004, 0.030
    oracle = R * math.acos(R / (R + h)) + R * math.acos(R / (R + t))
    assert abs(oracle - 26.69) < 0.01, f"oracle sanity: {oracle}"
    got = _read("horizon", h, t)
    assert_rel(got, oracle, REL, "horizon")
    print(f"PASS: sight distance h=4 m, t=30 m reads {got:.5f} km vs direct "
          f"evaluation {oracle:.5f} km")


def test_reading_error_model():
    rule = catalog.builtin("product_xy").rule
    grid = uniform_grid(1.05, 9.5, 50)
    model = ReadingModel(0.1)
    at_250 = error_profile(rule, (grid, grid), model, 250.0)
    assert not any(row.off_scale for row in at_250.rows)
    assert at_250.max_rel_err <= 2.5e-3, at_250.max_rel_err
    assert at_250.max_rel_err >= 1e-5, at_250.max_rel_err
    at_500 = error_profile(rule, (grid, grid), model, 500.0)
    assert at_500.max_rel_err < at_250.max_rel_err
    print(f"PASS: 0.1 mm reading on the 250 mm product rule errs at most "
          f"{at_250.max_rel_err:.2e} (>= 1e-5); 500 mm improves it to "
          f"{at_500.max_rel_err:.2e}")


def test_round_trip_property_suite():
    rng = random.Random(424242)
    n_scales = 0
    for item in catalog.list_builtins():
        bindings = {"alpha": 2.0} if item["name"] == "power" else {}
        rule = catalog.builtin(item["name"], **bindings).rule
        for fn in {id(rule.F): rule.F, id(rule.f): rule.f, id(rule.g): rule.g}.values():
            scale = Scale(fn, 250.0)
            lo, hi = fn.domain.numeric_lo, fn.domain.numeric_hi
            log_sampling = lo > 0 and hi / lo > 1e3
            for _ in range(1000):
                if log_sampling:
                    x = math.exp(rng.uniform(math.log(lo), math.log(hi)))
                else:
                    x = rng.uniform(lo, hi)
                assert_rel(invert_scale_fn(fn, eval_scale_fn(fn, x)), x, REL,
                           f"{item['name']}:{fn.text()} eval/invert at {x!r}")
                assert_rel(value_at(scale, position_of(scale, x)), x, REL,
                           f"{item['name']}:{fn.text()} position/value at {x!r}")
            n_scales += 1
    print(f"PASS: eval/invert and position/value round trips hold to 1e-9 on "
          f"1000 random points for each of {n_scales} catalog scales")


def test_rendered_sheet_structure():
    rules = [catalog.builtin("replus").rule, catalog.builtin("quadplus").rule]
    sheet = export_sheet(rules, 250.0)
    svg = render_svg(sheet)
    assert render_svg(export_sheet(rules, 250.0)) == svg, "rendering not deterministic"

    root = ET.fromstring(svg)
    margin = float(root.attrib["data-margin-mm"])
    px = float(root.attrib["data-mm-to-px"])
    ns = "{http://www.w3.org/2000/svg}"
    stators = {name: assemble(catalog.builtin(name).rule, 250.0).stator
               for name in ("replus", "quadplus")}
    checked = 0
    for group in root.iter(f"{ns}g"):
        name = group.attrib.get("data-ref", "").split("/")[0]
        if name not in stators:
            continue
        mount = float(group.attrib["data-mount-mm"])
        for text in group.findall(f"{ns}text"):
            if text.attrib.get("class") != "tick-label":
                continue
            recovered = float(text.attrib["x"]) / px - margin - mount
            want = position_of(stators[name], float(text.text))
            assert abs(recovered - want) <= 0.01, (name, text.text)
            checked += 1
    assert checked >= 15

    # structure: equal value steps on the reciprocal scale pack ever tighter
    # approaching the infinity origin, and the widest void hugs that origin;
    # on the square scale the unit marks crowd toward 0
    rep = {t.value: t.pos_mm for t in sheet.rules[0].scales[0].ticks}
    gaps = [rep[v] - rep[v + 1.0] for v in map(float, range(1, 10))]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    ps = sorted(t.pos_mm for t in sheet.rules[0].scales[0].ticks)
    voids = [(p, q - p) for p, q in zip(ps, ps[1:])]
    widest_at, widest = max(voids, key=lambda v: v[1])
    assert widest_at < 62.5 and widest > max(g for p, g in voids if p > 187.5)

    quad = {t.value: t.pos_mm for t in sheet.rules[1].scales[0].ticks}
    qgaps = [quad[v + 1.0] - quad[v] for v in map(float, range(0, 10))]
    assert all(b > a for a, b in zip(qgaps, qgaps[1:]))
    print(f"PASS: default sheet renders byte-identically; {checked} labeled marks "
          f"recovered within 0.01 mm; reciprocal and square scales show the "
          f"expected compression structure")
