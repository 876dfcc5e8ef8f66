"""Divisor sums, Hurwitz class numbers and special-function kernels."""

import cmath
import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mfhc.errors import DomainError, WeightError
from mfhc.services import arith
from mfhc.services.coefficient import HalfInteger

HURWITZ_VALUES = {
    0: Fraction(-1, 12),
    1: Fraction(0),
    2: Fraction(0),
    3: Fraction(1, 3),
    4: Fraction(1, 2),
    7: Fraction(1),
    8: Fraction(1),
    11: Fraction(1),
    12: Fraction(4, 3),
    15: Fraction(2),
    16: Fraction(3, 2),
    20: Fraction(2),
}


@pytest.mark.parametrize("D,expected", sorted(HURWITZ_VALUES.items()))
def test_hurwitz_known_values(D: int, expected: Fraction) -> None:
    """Weighted counts of reduced forms."""
    assert arith.hurwitz(D) == expected


def test_hurwitz_rejects_negative() -> None:
    """H is only defined for D >= 0."""
    with pytest.raises(DomainError):
        arith.hurwitz(-3)


def test_reduced_forms_of_discriminant_minus_20() -> None:
    """x² + 5y² and 2x² + 2xy + 3y²."""
    assert arith.reduced_forms(20) == [(1, 0, 5), (2, 2, 3)]


def test_hurwitz_table_is_sorted_and_complete() -> None:
    """Table covers 0..d_max in order."""
    table = arith.hurwitz_table(30, workers=1)
    assert list(table) == list(range(31))
    assert table[23] == 3


@pytest.mark.parametrize("n", range(1, 16))
def test_kronecker_hurwitz_relation(n: int) -> None:
    """Σ_r H(4n − r²) = Σ_{d|n} max(d, n/d)."""
    left, right = arith.kronecker_hurwitz_sides(n)
    assert left == right


def test_sigma1() -> None:
    """σ₁ of small integers."""
    assert [arith.sigma1(n) for n in range(1, 9)] == [1, 3, 4, 7, 6, 12, 8, 15]
    with pytest.raises(DomainError):
        arith.sigma1(0)


@pytest.mark.parametrize("delta,expected", [(-3, True), (-4, True), (-8, True), (5, True), (-12, False), (1, False), (-7, True), (-16, False), (12, True)])
def test_fundamental_discriminants(delta: int, expected: bool) -> None:
    """Δ ≡ 1 (4) squarefree or 4m with m ≡ 2, 3 (4) squarefree."""
    assert arith.is_fundamental_discriminant(delta) is expected


def test_pochhammer() -> None:
    """(3/2)_2 = 15/4; (x)_0 = 1."""
    assert arith.pochhammer(Fraction(3, 2), 2) == Fraction(15, 4)
    assert arith.pochhammer(7, 0) == 1


@given(st.floats(min_value=0.05, max_value=3.0))
@settings(max_examples=25, deadline=None)
def test_beta32_matches_quadrature(s: float) -> None:
    """Closed form √s·Γ(−½, s) agrees with direct integration."""
    assert arith.beta32(s) == pytest.approx(arith.beta32_by_quadrature(s), rel=1e-9)


def test_beta32_at_zero() -> None:
    """∫_1^∞ t^{−3/2} dt = 2."""
    assert arith.beta32(0.0) == 2.0


@pytest.mark.parametrize("x", [0.3, 1.0, -0.7, -2.0])
def test_w_kernel_closed_forms(x: float) -> None:
    """W_0(x) = e^{2x}; W_{−2}(x) = (4x² − 4x + 2)e^{2x}."""
    assert arith.w_kernel(HalfInteger.of(0), x) == pytest.approx(math.exp(2 * x), rel=1e-10)
    assert arith.w_kernel(HalfInteger.of(-2), x) == pytest.approx((4 * x * x - 4 * x + 2) * math.exp(2 * x), rel=1e-10)


def test_w_kernel_rejects_half_integral_weight() -> None:
    """Half-integral weights use the gamma atom directly."""
    with pytest.raises(WeightError):
        arith.w_kernel(HalfInteger(3), 1.0)


def test_inc_gamma_real_and_branch() -> None:
    """Γ(1, x) = e^{−x} and negative arguments give the principal branch."""
    assert arith.inc_gamma(1, 0.5) == pytest.approx(math.exp(-0.5))
    value = arith.inc_gamma(HalfInteger(1), -1.0)
    assert isinstance(value, complex)
    with mpmath.workdps(30):
        expected = complex(mpmath.gammainc(mpmath.mpf(0.5), mpmath.mpc(-1.0, 0)))
    assert cmath.isclose(value, expected, rel_tol=1e-12)


@pytest.mark.parametrize("tau", [1j, 0.3 + 0.5j, -0.2 + 0.1j])
def test_theta_eval_matches_jacobi_theta(tau: complex) -> None:
    """θ(τ) = ϑ₃(0, q) with nome q = e^{2πiτ}."""
    with mpmath.workdps(30):
        expected = complex(mpmath.jtheta(3, 0, mpmath.exp(2j * mpmath.pi * tau)))
    assert cmath.isclose(arith.theta_eval(tau), expected, rel_tol=1e-12, abs_tol=1e-12)


def test_theta_eval_needs_upper_half_plane() -> None:
    """Im τ <= 0 is outside the domain."""
    with pytest.raises(DomainError):
        arith.theta_eval(0.5 + 0j)
