import json
import math
import subprocess
import sys

import pytest

from sliderule.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


GOOD_DSL = "rule r: power alpha=-1 op=+\n"
ZERO_A_DSL = (
    "scale sx(x) = x on [1, 10]\n"
    "scale sy(y) = y on [1, 10]\n"
    "scale sz(z) = z on [1, 100]\n"
    "rule m: bilinear a=0 b=1 c=1 d=-1 e=0 u=sx v=sy w=sz\n")
NON_MONOTONE_DSL = "scale s(x) = x^2 on [-1, 1]\nrule r: F=s f=s g=s op=+\n"
BAD_GRAMMAR_DSL = "rule r power alpha\n"


class TestCompute:
    def test_reciprocal(self, capsys):
        code, out, _ = run(capsys, "compute", "replus", "3", "6")
        assert code == 0 and out.strip() == "2"

    def test_square(self, capsys):
        code, out, _ = run(capsys, "compute", "quadplus", "3", "4")
        assert code == 0 and out.strip() == "5"

    def test_horizon_with_param(self, capsys):
        code, out, _ = run(capsys, "compute", "horizon", "4", "30",
                           "--param", "R=6371000")
        assert code == 0
        assert float(out.splitlines()[0]) == pytest.approx(26690.6, abs=0.2)

    def test_resolution_reports_ideal_and_error(self, capsys):
        code, out, _ = run(capsys, "compute", "product_xy", "2", "3",
                           "--resolution", "0.1")
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 3
        assert lines[1].startswith("ideal ") and lines[2].startswith("rel_err ")
        assert float(lines[0]) == pytest.approx(6.0, rel=5e-3)

    def test_off_scale_exit_code(self, capsys):
        code, _, err = run(capsys, "compute", "replus", "1.05", "1.05")
        assert code == 3 and "off scale" in err

    def test_domain_violation_is_validation(self, capsys):
        code, _, err = run(capsys, "compute", "quadplus", "99", "4")
        assert code == 2

    def test_unknown_rule(self, capsys):
        code, _, err = run(capsys, "compute", "nope", "1", "2")
        assert code == 2 and "replus" in err

    def test_dsl_file_rule(self, capsys, tmp_path):
        path = tmp_path / "rules.dsl"
        path.write_text(GOOD_DSL)
        code, out, _ = run(capsys, "compute", str(path), "3", "6")
        assert code == 0 and out.strip() == "2"


class TestChain:
    def test_reciprocal(self, capsys):
        code, out, _ = run(capsys, "chain", "replus", "2", "3", "6")
        assert code == 0 and out.strip() == "1"

    def test_square(self, capsys):
        code, out, _ = run(capsys, "chain", "quadplus", "1", "2", "2")
        assert code == 0 and out.strip() == "3"

    def test_quadratic_mean(self, capsys):
        code, out, _ = run(capsys, "chain", "quadplus", "3", "4", "--mean", "2")
        assert code == 0
        # display trims to nine significant digits
        assert float(out) == pytest.approx(math.sqrt(12.5), rel=1e-8)

    def test_mean_requires_matching_power_rule(self, capsys):
        code, _, err = run(capsys, "chain", "product_xy", "2", "3", "--mean", "2")
        assert code == 2
        code, _, err = run(capsys, "chain", "quadplus", "2", "3", "--mean", "-1")
        assert code == 2

    def test_unchainable_rule(self, capsys):
        code, _, err = run(capsys, "chain", "product_xy", "2", "3")
        assert code == 2 and "chain" in err.lower()


class TestCompile:
    def test_power_file_compiles_to_sheet(self, capsys, tmp_path):
        src = tmp_path / "replus.dsl"
        src.write_text(GOOD_DSL)
        out_path = tmp_path / "sheet.json"
        code, out, _ = run(capsys, "compile", str(src), "-o", str(out_path))
        assert code == 0 and "1 rule(s)" in out
        doc = json.loads(out_path.read_text())
        assert doc["version"] == 1
        assert len(doc["rules"][0]["scales"]) == 2

    def test_validate_only(self, capsys, tmp_path):
        src = tmp_path / "replus.dsl"
        src.write_text(GOOD_DSL)
        code, out, _ = run(capsys, "compile", str(src), "--validate-only")
        assert code == 0 and "ok" in out

    def test_zero_a_fails_validation(self, capsys, tmp_path):
        src = tmp_path / "bad.dsl"
        src.write_text(ZERO_A_DSL)
        code, _, err = run(capsys, "compile", str(src), "--validate-only")
        assert code == 2 and "a != 0" in err

    def test_non_monotone_fails_validation_with_witness(self, capsys, tmp_path):
        src = tmp_path / "bad.dsl"
        src.write_text(NON_MONOTONE_DSL)
        code, _, err = run(capsys, "compile", str(src), "--validate-only")
        assert code == 2 and "monotone" in err and "line 1" in err

    def test_bad_grammar_is_parse_error(self, capsys, tmp_path):
        src = tmp_path / "bad.dsl"
        src.write_text(BAD_GRAMMAR_DSL)
        code, _, err = run(capsys, "compile", str(src), "--validate-only")
        assert code == 1 and "parse error" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "compile", str(tmp_path / "absent.dsl"))
        assert code == 1


class TestRenderAndExport:
    def test_default_sheet_renders_deterministically(self, capsys, tmp_path):
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        assert run(capsys, "render", "-o", str(a))[0] == 0
        assert run(capsys, "render", "-o", str(b))[0] == 0
        assert a.read_bytes() == b.read_bytes()
        assert b"<svg" in a.read_bytes()

    def test_render_from_exported_sheet(self, capsys, tmp_path):
        sheet = tmp_path / "sheet.json"
        code, _, _ = run(capsys, "export", "quadplus", "-o", str(sheet))
        assert code == 0
        out = tmp_path / "sheet.svg"
        assert run(capsys, "render", str(sheet), "-o", str(out))[0] == 0
        assert "tick-label" in out.read_text()

    def test_render_rejects_bad_sheet(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{}")
        code, _, err = run(capsys, "render", str(bad), "-o", str(tmp_path / "x.svg"))
        assert code == 1

    def test_export_defaults_to_reciprocal_and_square(self, capsys, tmp_path):
        sheet = tmp_path / "sheet.json"
        assert run(capsys, "export", "-o", str(sheet))[0] == 0
        doc = json.loads(sheet.read_text())
        assert [r["name"] for r in doc["rules"]] == ["replus", "quadplus"]


class TestProfile:
    def test_csv_and_summary(self, capsys, tmp_path):
        out_csv = tmp_path / "prof.csv"
        code, _, err = run(capsys, "profile", "product_xy",
                           "--resolution", "0.1", "--length", "250",
                           "--grid-x", "1.05:9.5:30", "--grid-y", "1.05:9.5:30",
                           "-o", str(out_csv))
        assert code == 0
        lines = out_csv.read_text().splitlines()
        assert lines[0] == "x,y,z_exact,z_read,rel_err"
        assert len(lines) == 1 + 30 * 30
        max_err = float(err.split("max_rel_err ")[1].split()[0])
        assert 1e-5 <= max_err <= 2.5e-3

    def test_stdout_and_plot(self, capsys, tmp_path):
        png = tmp_path / "prof.png"
        code, out, _ = run(capsys, "profile", "product_xy",
                           "--resolution", "0.1", "--grid-x", "2:9:5",
                           "--grid-y", "2:9:5", "--plot", str(png))
        assert code == 0
        assert out.splitlines()[0] == "x,y,z_exact,z_read,rel_err"
        assert png.stat().st_size > 1000

    def test_needs_resolution(self, capsys):
        assert run(capsys, "profile", "product_xy")[0] == 64

    def test_unbounded_domain_needs_grid(self, capsys):
        code, _, err = run(capsys, "profile", "replus", "--resolution", "0.1")
        assert code == 64 and "grid" in err


class TestUsage:
    def test_list_is_stable(self, capsys):
        code, out, _ = run(capsys, "list")
        assert code == 0 and out.splitlines()[0] == "replus"
        code2, out2, _ = run(capsys, "list")
        assert out2 == out

    def test_unknown_command(self, capsys):
        assert run(capsys, "frobnicate")[0] == 64

    def test_unknown_flag(self, capsys):
        assert run(capsys, "compute", "replus", "3", "6", "--wat")[0] == 64

    def test_no_command(self, capsys):
        assert run(capsys)[0] == 64

    def test_help_exits_zero(self, capsys):
        assert run(capsys, "--help")[0] == 0
        for cmd in ("compile", "compute", "chain", "render", "profile", "list", "export"):
            code, out, _ = run(capsys, cmd, "--help")
            assert code == 0 and "--help" in out

    def test_console_entrypoint(self):
        proc = subprocess.run([sys.executable, "-m", "sliderule",
                               "compute", "replus", "3", "6"],
                              capture_output=True, text=True)
        assert proc.returncode == 0 and proc.stdout.strip() == "2"
