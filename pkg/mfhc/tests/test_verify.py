"""Property suites behind `mfhc verify`."""

import math
import random

import pytest

from mfhc.services import operators, verify


@pytest.mark.parametrize("suite", ["operators", "hcmodule", "weil", "metaplectic"])
def test_fast_suites_pass(suite: str) -> None:
    """Every check in the suite passes."""
    report = verify.run_suite(suite)
    assert report.checks
    assert report.passed, [c for c in report.checks if not c.passed]
    assert report.failed == 0


def test_shintani_suite_passes_at_small_truncation() -> None:
    """The Shintani checks pass with D_max = 200, n_max = 12."""
    report = verify.run_suite("shintani", delta=-4, d_max=200, n_max=12)
    assert report.passed, [c for c in report.checks if not c.passed]


@pytest.mark.slow
def test_shintani_suite_passes_at_default_truncation() -> None:
    """D_max = 400, n_max = 20 for Δ = −3."""
    report = verify.run_suite("shintani", delta=-3)
    assert report.passed, [c for c in report.checks if not c.passed]


def test_errors_inside_checks_become_failures() -> None:
    """A non-fundamental Δ fails the suite instead of raising."""
    report = verify.run_suite("shintani", delta=-12, d_max=20, n_max=2)
    assert not report.passed
    prefactor = report.checks[0]
    assert prefactor.name == "prefactor"
    assert prefactor.deviation == math.inf
    assert "NotFundamental" in prefactor.detail


def test_corrupted_module_is_the_negative_control() -> None:
    """The corrupted module fails its relations, so the check passes."""
    passed, deviation, _ = verify.check_corrupted_module_fails()
    assert passed
    assert deviation > 0


def test_run_suites_all_order() -> None:
    """'all' runs every suite in a fixed order."""
    names = [name for name, _ in verify.suite_checks("weil")]
    assert names[:3] == [f"relations {t}" for t in verify.WEIL_FIXTURES]
    with pytest.raises(ValueError):
        verify.suite_checks("nonsense")


def test_random_fe_expansion_shape() -> None:
    """Random inputs decompose into the three coefficient families."""
    rng = random.Random(0)
    for k in (0, -2, -3):
        f = verify.random_fe_expansion(rng, k)
        data = operators.fe_decompose(f)
        assert not data.minus_zero.is_zero()
        assert operators.is_harmonic(f)


def test_coherence_deviation_is_small() -> None:
    """Symbolic operators agree with mpmath.diff partials on a random input."""
    rng = random.Random(1)
    f = verify.random_fe_expansion(rng, -2, span=2)
    taus = [verify.random_tau(rng) for _ in range(2)]
    assert verify.coherence_deviation(f, ("raise", "lower"), taus) < 1e-6


def test_random_tau_in_upper_half_plane() -> None:
    """Sample points have 1 <= v <= 1.5."""
    rng = random.Random(2)
    assert all(1.0 <= verify.random_tau(rng).imag <= 1.5 for _ in range(50))


def test_half_integral_random_expansions_stay_on_the_real_branch() -> None:
    """Only n < 0 harmonic atoms appear for k ∈ ½ + ℤ."""
    rng = random.Random(3)
    for k in verify.COHERENCE_WEIGHTS[2:]:
        f = verify.random_fe_expansion(rng, k)
        assert operators.is_harmonic(f)
        assert all(ell > 0 for t in f.terms for _, ell in t.gammas)


def test_relative_error_is_relative() -> None:
    """Small values are not hidden behind an absolute floor."""
    assert verify.relative_error(1e-3, 1e-3 + 1e-8) == pytest.approx(1e-5)
    assert verify.relative_error(0, 1e-9) == pytest.approx(1e-9)


def test_coherence_covers_every_operator_and_weight() -> None:
    """Five weights including ½, 3/2 and −½, with ξ at half-integral weight."""
    assert set(verify.COHERENCE_OPERATORS) == {"raise", "lower", "laplacian", "xi", "d"}
    assert {0, -2} < set(verify.COHERENCE_WEIGHTS)
    rng = random.Random(4)
    f = verify.random_fe_expansion(rng, verify.COHERENCE_WEIGHTS[2], span=1)
    taus = [verify.random_tau(rng) for _ in range(3)]
    assert verify.coherence_deviation(f, ("xi", "laplacian"), taus) < 1e-6


def test_sympy_derivative_check_passes() -> None:
    """Symbolic derivatives agree with sympy.diff."""
    passed, deviation, _ = verify.check_sympy_derivatives(points=2)
    assert passed, deviation
