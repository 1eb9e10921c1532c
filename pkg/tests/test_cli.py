import csv
import io
import json
import math
import re
import subprocess
import sys
from pathlib import Path

import pytest

from polarsl.cli import main
from polarsl.polar import GridSpec, compute_spectrum

GOLDEN = Path(__file__).parent / "golden"
ROOT = Path(__file__).resolve().parents[1]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_module(*argv):
    return subprocess.run(
        [sys.executable, "-m", "polarsl", *argv],
        capture_output=True,
        text=True,
        cwd=ROOT,
    )


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestSpectrum:
    def test_csv(self, capsys):
        code, out, _ = run(capsys, "spectrum", "--m", "1", "--levels", "3")
        assert code == 0
        assert out.splitlines()[0] == "n,l,m,W_computed,W_exact,rel_error"
        parsed = rows(out)
        assert [float(r["W_exact"]) for r in parsed] == [1.125, 3.125, 6.125]
        assert [int(r["l"]) for r in parsed] == [1, 2, 3]
        assert all(float(r["rel_error"]) < 1e-4 for r in parsed)

    def test_json(self, capsys):
        code, out, _ = run(capsys, "spectrum", "--m", "0", "--levels", "1", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert list(payload) == ["m", "lambda", "levels", "grid", "extrapolation"]
        assert payload["levels"][0]["W_exact"] == 0.125
        assert payload["lambda"] == -0.125

    def test_sign_of_m_is_byte_identical(self, capsys):
        _, plus, _ = run(capsys, "spectrum", "--m", "2", "--levels", "2")
        _, minus, _ = run(capsys, "spectrum", "--m", "-2", "--levels", "2")
        assert plus == minus

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "s.csv"
        code, out, _ = run(
            capsys, "spectrum", "--m", "1", "--levels", "1", "--grid", "64", "--output", str(target)
        )
        assert code == 0 and out == ""
        assert target.read_text().startswith("n,l,m,")

    def test_csv_round_trips_exactly(self, capsys):
        _, out, _ = run(capsys, "spectrum", "--m", "1", "--levels", "2", "--grid", "64")
        computed = [float(r["W_computed"]) for r in rows(out)]
        assert computed == [lv.W_computed for lv in compute_spectrum(1, 2, GridSpec(64)).levels]


class TestDensity:
    def test_equator_row(self, capsys):
        code, out, _ = run(capsys, "density", "--l", "1", "--m", "1")
        assert code == 0
        parsed = rows(out)
        assert len(parsed) == 181
        assert list(parsed[0]) == ["theta", "Theta_normalized", "density"]
        assert float(parsed[0]["theta"]) == 0.0 and float(parsed[-1]["theta"]) == math.pi
        assert float(parsed[90]["density"]) == pytest.approx(0.75, abs=1e-14)
        assert float(parsed[0]["density"]) == 0.0

    def test_sign_of_m(self, capsys):
        _, plus, _ = run(capsys, "density", "--l", "1", "--m", "1")
        _, minus, _ = run(capsys, "density", "--l", "1", "--m", "-1")
        assert plus == minus

    def test_m_exceeds_l_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["density", "--l", "1", "--m", "2"])
        assert info.value.code == 2

    def test_emit_plot(self, capsys, tmp_path):
        stem = tmp_path / "p11"
        code, _, _ = run(
            capsys, "density", "--l", "1", "--m", "1", "--samples", "19", "--emit-plot", str(stem)
        )
        assert code == 0
        assert len((tmp_path / "p11.dat").read_text().splitlines()) == 20
        assert "p11.dat" in (tmp_path / "p11.gp").read_text()

    def test_json(self, capsys):
        _, out, _ = run(capsys, "density", "--l", "2", "--m", "-1", "--samples", "5", "--format", "json")
        payload = json.loads(out)
        assert (payload["l"], payload["m"]) == (2, 1)
        assert len(payload["density"]) == 5


class TestHft:
    def test_m0_refused(self, capsys):
        code, out, err = run(capsys, "hft", "--m", "0", "--n", "0")
        assert code == 1
        assert out == ""
        assert "m = 0" in err and "diverges" in err

    def test_pass(self, capsys):
        code, out, _ = run(capsys, "hft", "--m", "1", "--n", "0", "--grid", "1024")
        payload = json.loads(out)
        assert code == 0 and payload["passed"] is True
        assert payload["analytic"] == 1.5
        assert payload["dW_dlambda_fd"] == pytest.approx(1.5, rel=1e-3)

    def test_default_grid(self, capsys):
        code, out, _ = run(capsys, "hft", "--m", "1", "--n", "0", "--richardson", "1")
        payload = json.loads(out)
        assert code == 0 and payload["grid"]["N"] == 4096
        assert payload["expectation"] == pytest.approx(1.5, rel=1e-3)

    def test_negative_level_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["hft", "--m", "1", "--n", "-1"])
        assert info.value.code == 2
        assert "nonnegative" in capsys.readouterr().err

    def test_discrepancy_exits_one(self, capsys):
        code, out, _ = run(capsys, "hft", "--m", "2", "--n", "0", "--grid", "256", "--tolerance", "1e-15")
        assert code == 1
        assert json.loads(out)["passed"] is False


class TestTransform:
    def test_identity(self, capsys):
        code, out, _ = run(capsys, "transform", "--m", "1", "--derivatives", "analytic")
        assert code == 0
        parsed = rows(out)
        assert list(parsed[0]) == ["theta", "U_eff", "U_paper", "abs_diff"]
        assert len(parsed) == 63
        assert max(float(r["abs_diff"]) for r in parsed) < 1e-10

    def test_m0_potential_negative(self, capsys):
        _, out, _ = run(capsys, "transform", "--m", "0")
        assert all(float(r["U_paper"]) < 0 for r in rows(out))

    def test_bad_derivatives_flag(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["transform", "--m", "1", "--derivatives", "spline"])
        assert info.value.code == 2


class TestVerify:
    def test_zero_tolerance_exits_one(self, capsys):
        code, _, err = run(capsys, "verify", "--tol-spectrum-m-pos", "0")
        assert code == 1
        assert "tol_spectrum_m_pos" in err

    @pytest.mark.slow
    def test_default_suite(self, capsys):
        code, out, _ = run(capsys, "verify")
        assert code == 0, out
        assert out.splitlines()[-1].endswith("checks passed")


class TestExitCodes:
    def test_missing_flag(self):
        proc = run_module("spectrum", "--levels", "3")
        assert proc.returncode == 2
        assert "usage" in proc.stderr

    def test_unknown_command(self):
        assert run_module("eigen").returncode == 2

    def test_m0_hft(self):
        proc = run_module("hft", "--m", "0", "--n", "0")
        assert proc.returncode == 1
        assert "diverges" in proc.stderr

    def test_success(self):
        proc = run_module("transform", "--m", "2", "--grid", "16")
        assert proc.returncode == 0
        assert proc.stdout.startswith("theta,U_eff,U_paper,abs_diff\n")


GOLDEN_CASES = {
    "spectrum_m1_levels3.csv": ["spectrum", "--m", "1", "--levels", "3"],
    "density_l1_m1.csv": ["density", "--l", "1", "--m", "1"],
    "transform_m1.csv": ["transform", "--m", "1"],
}


REAL = re.compile(r"-?\d\.\d{16}e[+-]\d{2}")


def same_cell(got, want):
    if REAL.fullmatch(want):
        close = float(got) == pytest.approx(float(want), rel=1e-8, abs=1e-9)
        return REAL.fullmatch(got) is not None and close
    return got == want


class TestGolden:
    @pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
    def test_matches_golden(self, capsys, name):
        code, out, _ = run(capsys, *GOLDEN_CASES[name])
        assert code == 0
        expected = (GOLDEN / name).read_text(encoding="utf-8")
        assert "\r" not in out and out.endswith("\n")
        got_lines, want_lines = out.splitlines(), expected.splitlines()
        assert got_lines[0] == want_lines[0]
        assert len(got_lines) == len(want_lines)
        for got, want in zip(got_lines[1:], want_lines[1:]):
            got_cells, want_cells = got.split(","), want.split(",")
            assert len(got_cells) == len(want_cells)
            assert all(same_cell(g, w) for g, w in zip(got_cells, want_cells)), (got, want)

    @pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
    def test_deterministic(self, capsys, name):
        _, first, _ = run(capsys, *GOLDEN_CASES[name])
        _, second, _ = run(capsys, *GOLDEN_CASES[name])
        assert first == second
