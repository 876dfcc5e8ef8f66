"""Finite quadratic modules and the Weil representation."""

from fractions import Fraction

import numpy as np
import pytest

from mfhc.errors import DegenerateForm, ParseError
from mfhc.services import weil
from mfhc.services.weil import FiniteQuadraticModule


@pytest.mark.parametrize(
    "text,root",
    [("Z/2:1/4", 1), ("Z/3:1/3", 2), ("Z/4:1/8", 1), ("trivial", 0), ("Z/2:-1/4", 7)],
)
def test_sigma_eighth_roots(text: str, root: int) -> None:
    """σ(D) = e(−j/8) for the small fixtures."""
    sigma = weil.sigma_invariant(FiniteQuadraticModule.parse(text))
    assert abs(abs(sigma.value) - 1) < 1e-12
    assert sigma.eighth_root == root


@pytest.mark.parametrize("text", ["Z/2:1/4", "Z/3:1/3", "Z/4:1/8", "Z/2:1/4 + Z/4:1/8", "trivial"])
def test_relations_hold_with_relation_normalization(text: str) -> None:
    """Every Mp₁(ℤ) relation checks out with c = σ/√#M."""
    report = weil.check_relations(FiniteQuadraticModule.parse(text))
    assert report.passed, [c for c in report.checks if not c.passed]
    assert report.max_deviation < 1e-10


def test_displayed_normalization_breaks_st_cubed() -> None:
    """c = 1/(σ√#M) fails (ST)³ = S² on ℤ/2 with q = x²/4."""
    report = weil.check_relations(FiniteQuadraticModule.parse("Z/2:1/4"), normalization="displayed")
    failing = {c.name for c in report.checks if not c.passed}
    assert "(ST)^3 = S^2" in failing
    assert not report.passed


def test_corrupted_module_is_reported_not_raised() -> None:
    """An ill-defined q shows up as failed checks."""
    corrupted = FiniteQuadraticModule((2,), ((Fraction(1, 3),),))
    report = weil.check_relations(corrupted)
    names = {c.name for c in report.checks if not c.passed}
    assert "|sigma| = 1" in names
    assert report.eighth_root is None
    with pytest.raises(DegenerateForm):
        weil.sigma_invariant(corrupted)


def test_from_generators_validates() -> None:
    """q(x + n·e) must equal q(x) mod 1."""
    with pytest.raises(DegenerateForm):
        FiniteQuadraticModule.from_generators([2], [Fraction(1, 3)])


@pytest.mark.parametrize("text", ["Y/2:1/4", "Z/2", "Z/x:1/4", "Z/2:0.5", "Z/0:1"])
def test_parse_rejects_malformed(text: str) -> None:
    """Only 'Z/n:q' factors with exact q parse."""
    with pytest.raises(ParseError):
        FiniteQuadraticModule.parse(text)


def test_elements_and_quadratic_form() -> None:
    """Lexicographic enumeration and q mod 1."""
    fqm = FiniteQuadraticModule.parse("Z/2:1/4 + Z/3:1/3")
    assert fqm.order == 6
    assert fqm.elements()[:3] == [(0, 0), (0, 1), (0, 2)]
    assert fqm.q((1, 2)) == Fraction(1, 4) + Fraction(1, 3)
    assert fqm.bilinear((1, 0), (1, 0)) == Fraction(1, 2)
    assert str(fqm) == "Z/2:1/4 + Z/3:1/3"


def test_bilinearity_exhaustive_and_sampled() -> None:
    """Well-defined modules have no violations in either mode."""
    small = FiniteQuadraticModule.parse("Z/4:1/8")
    big = FiniteQuadraticModule.parse("Z/8:1/16 + Z/4:1/8 + Z/3:1/3")
    assert big.order > weil.EXHAUSTIVE_LIMIT
    assert weil.bilinearity_violations(small) == 0
    assert weil.bilinearity_violations(big, samples=200) == 0


def test_rho_matrices() -> None:
    """ρ(T) is diagonal of e(q(m)); ρ(S) is unitary and symmetric."""
    fqm = FiniteQuadraticModule.parse("Z/4:1/8")
    t = weil.rho_T(fqm)
    np.testing.assert_allclose(np.diag(t), [weil.e(fqm.q(m)) for m in fqm.elements()])
    s = weil.rho_S(fqm)
    np.testing.assert_allclose(s @ s.conj().T, np.eye(4), atol=1e-12)
    np.testing.assert_allclose(s, s.T, atol=1e-12)
    np.testing.assert_allclose(weil.rho_Z(fqm), s @ s, atol=1e-12)


def test_rho_s_unknown_normalization() -> None:
    """Only 'relation' and 'displayed' are known."""
    with pytest.raises(ValueError):
        weil.rho_S(FiniteQuadraticModule.parse("Z/2:1/4"), normalization="other")


@pytest.mark.parametrize("level", [1, 2, 3, 5])
@pytest.mark.parametrize("sign", [1, -1])
def test_milgram_rank_one(level: int, sign: int) -> None:
    """σ of ℤ/2N with q = ±x²/4N is e(∓1/8)."""
    sigma = weil.sigma_invariant(weil.rank_one_module(level, sign))
    assert sigma.eighth_root == weil.milgram_eighth_root(level, sign)
