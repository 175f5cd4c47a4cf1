import math
import random

import pytest

from sliderule import catalog
from sliderule.compiler import validate_rule
from sliderule.errors import UnknownEntry
from sliderule.simulator import assemble, read_result, slide_set

from conftest import assert_rel, factorial_table, uniform_grid


def read(entry, x, y):
    return read_result(slide_set(assemble(entry.rule), x), y)


class TestRegistry:
    def test_listing_is_stable_and_big_enough(self):
        first = catalog.list_builtins()
        assert first == catalog.list_builtins()
        assert len(first) >= 13
        names = [e["name"] for e in first]
        assert names.index("replus") < names.index("quadplus")

    def test_replus_description(self):
        entry = next(e for e in catalog.list_builtins() if e["name"] == "replus")
        text = entry["description"].lower()
        assert "optic" in text and "resistor" in text and "harmonic" in text

    def test_tangent_circles_cites_exponent(self):
        entry = next(e for e in catalog.list_builtins() if e["name"] == "tangent_circles")
        assert "-1/2" in entry["description"]

    def test_unknown_entry(self):
        with pytest.raises(UnknownEntry) as err:
            catalog.builtin("frobnicator")
        assert "replus" in err.value.valid

    def test_every_entry_constructible_and_valid(self):
        for item in catalog.list_builtins():
            bindings = {"alpha": 2.0} if item["name"] == "power" else {}
            entry = catalog.builtin(item["name"], **bindings)
            assert validate_rule(entry.rule) == []

    def test_required_parameter_enforced(self):
        with pytest.raises(ValueError):
            catalog.builtin("power")

    def test_stray_parameter_rejected(self):
        with pytest.raises(ValueError):
            catalog.builtin("replus", bogus=1.0)


class TestWorkedExamples:
    def test_each_entry_reproduces_its_example(self):
        for item in catalog.list_builtins():
            bindings = {"alpha": 2.0} if item["name"] == "power" else {}
            entry = catalog.builtin(item["name"], **bindings)
            if entry.example is None:
                continue
            (x, y), want = entry.example
            assert_rel(read(entry, x, y), want, what=item["name"])

    def test_cubic_solver_discriminant_halves(self):
        entry = catalog.builtin("cubic_solver")
        assert_rel(read(entry, 3.0, 2.0), math.sqrt(2.0))
        # p^3/27 + q^2/4 = 0 at p = -3 (cube root branch), q = 2
        assert abs(read(entry, -3.0, 2.0)) <= 1e-6

    def test_lorentz_example(self):
        assert_rel(read(catalog.builtin("lorentz"), 1.0, 0.6), 1.25)

    def test_factorial_product(self):
        assert_rel(read(catalog.builtin("factorial_product"), 5.0, 3.0), 720.0)


class TestParameterRebinding:
    def test_horizon_in_metres(self):
        entry = catalog.builtin("horizon", R=6371000.0)
        assert entry.example is None  # examples describe default bindings only
        R = 6371000.0
        oracle = R * (math.acos(R / (R + 4.0)) + math.acos(R / (R + 30.0)))
        assert_rel(read(entry, 4.0, 30.0), oracle)
        assert oracle == pytest.approx(26690.6, abs=0.2)

    def test_lorentz_si_speed_of_light(self):
        c = 299792458.0
        entry = catalog.builtin("lorentz", c=c)
        assert_rel(read(entry, 1.0, 0.6 * c), 1.25)

    def test_power_alpha_binding(self):
        entry = catalog.builtin("power", alpha=-1.0)
        assert_rel(read(entry, 3.0, 6.0), 2.0)
        assert entry.rule.alpha == -1.0


class TestFactorialScales:
    def test_integer_factorials_through_the_gamma_path(self):
        table = factorial_table(20)
        entry = catalog.builtin("factorial_product")
        state0 = assemble(entry.rule)
        for n in range(1, 21):
            got = read_result(slide_set(state0, float(n)), 1.0)
            assert_rel(got, float(table[n]), what=f"{n}!")

    def test_quotients(self):
        entry = catalog.builtin("factorial_quotient")
        state0 = assemble(entry.rule)
        table = factorial_table(12)
        for n, k in ((5, 3), (10, 7), (12, 12), (8, 1)):
            got = read_result(slide_set(state0, float(n)), float(k))
            assert_rel(got, table[n] / table[k], what=f"{n}!/{k}!")


class TestPowerTower:
    def test_exponentiation_grid(self):
        entry = catalog.builtin("power_tower")
        state0 = assemble(entry.rule)
        for x in uniform_grid(1.2, 10.0, 18):
            state = slide_set(state0, x)
            for y in uniform_grid(0.5, 4.0, 18):
                got = read_result(state, y)
                assert abs(got - x ** y) <= 1e-7 * x ** y, f"{x}^{y}"

    def test_chains_feed_back(self):
        # (2^2)^1.5 = 8 via two movements on the same log-log scale
        from sliderule.simulator import chain
        got = chain(catalog.builtin("power_tower").rule, [2.0, 2.0, 1.5])
        assert_rel(got, 8.0, tol=1e-7)


class TestRoundTrips:
    def test_random_points_on_every_catalog_scale(self):
        from sliderule.scales import (Scale, eval_scale_fn, invert_scale_fn,
                                      position_of, value_at)
        rng = random.Random(20260811)
        for item in catalog.list_builtins():
            bindings = {"alpha": 2.0} if item["name"] == "power" else {}
            rule = catalog.builtin(item["name"], **bindings).rule
            fns = {id(rule.F): rule.F, id(rule.f): rule.f, id(rule.g): rule.g}
            for fn in fns.values():
                scale = Scale(fn, 250.0)
                lo, hi = fn.domain.numeric_lo, fn.domain.numeric_hi
                for _ in range(100):
                    if lo > 0 and hi / lo > 1e3:
                        x = math.exp(rng.uniform(math.log(lo), math.log(hi)))
                    else:
                        x = rng.uniform(lo, hi)
                    assert_rel(invert_scale_fn(fn, eval_scale_fn(fn, x)), x,
                               what=f"{item['name']}:{fn.text()} eval/invert")
                    assert_rel(value_at(scale, position_of(scale, x)), x,
                               what=f"{item['name']}:{fn.text()} pos/value")
