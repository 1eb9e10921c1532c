import pytest

from polarsl.config import VerifyConfig
from polarsl.verify import (
    CheckResult,
    check_degeneracy,
    check_densities,
    check_eigenfunctions,
    check_eigensolver,
    check_eigenvalue_law,
    check_m0_divergence,
    check_transform,
    run_verification,
)

SMALL = VerifyConfig(max_l=2, grid=512, spectrum_grid=256)


def test_check_result_line():
    assert CheckResult("x", True, "ok").line() == "PASS x: ok"
    assert CheckResult("x", False, "bad").line() == "FAIL x: bad"


def test_transform_checks_pass():
    results = check_transform(VerifyConfig())
    assert len(results) == 5
    assert all(r.passed for r in results), [r.line() for r in results]


def test_density_checks_pass():
    assert all(r.passed for r in check_densities(VerifyConfig()))


def test_eigensolver_checks_pass():
    results = check_eigensolver(VerifyConfig())
    assert all(r.passed for r in results), [r.line() for r in results]


def test_degeneracy_on_small_grid():
    assert all(r.passed for r in check_degeneracy(SMALL))


def test_eigenvalue_law_passes_for_every_m():
    results = check_eigenvalue_law(VerifyConfig(max_l=3, spectrum_grid=512))
    assert [r.name for r in results] == [f"eigenvalue-law m={m}" for m in range(4)]
    assert all(r.passed for r in results), [r.line() for r in results]


def test_eigenfunction_checks_pass():
    results = check_eigenfunctions(VerifyConfig(grid=1024))
    assert len(results) == 9
    assert all(r.passed for r in results), [r.line() for r in results]


def test_unattainable_tolerance_fails():
    results = check_eigenvalue_law(VerifyConfig(max_l=2, spectrum_grid=256, tol_spectrum_m_pos=1e-300))
    assert not any(r.passed for r in results[1:])


def test_m0_divergence_checks_pass():
    assert all(r.passed for r in check_m0_divergence(SMALL))


@pytest.mark.slow
def test_full_default_suite_passes():
    results = run_verification(VerifyConfig())
    failed = [r.line() for r in results if not r.passed]
    assert not failed
