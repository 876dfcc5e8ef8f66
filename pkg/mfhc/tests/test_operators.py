"""Differential operators on expansions."""

import cmath
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mfhc.errors import LogWeightUnsupported, ShapeError, WeightError
from mfhc.services import operators, qexp
from mfhc.services.coefficient import Coefficient, HalfInteger
from mfhc.services.qexp import make_expansion, term
from mfhc.services.verify import (
    COHERENCE_OPERATORS,
    COHERENCE_WEIGHTS,
    coherence_deviation,
    random_fe_expansion,
    random_tau,
    relative_error,
)

HALF = HalfInteger(1)
THREE_HALVES = HalfInteger(3)


@pytest.mark.parametrize("k", [HalfInteger(-4), HalfInteger(0), HALF, THREE_HALVES, HalfInteger(-1), HalfInteger(5)])
@pytest.mark.parametrize("n", [-2, -1, 1, 3])
def test_harmonic_atom_is_annihilated_by_laplacian(k: HalfInteger, n: int) -> None:
    """Γ(1−k, −4πnv)q^n is harmonic for every k != 1."""
    assert operators.is_harmonic(operators.harmonic_atom(k, n))


@pytest.mark.parametrize("k", [HalfInteger(-2), HALF, THREE_HALVES])
def test_holomorphic_and_constant_atoms_are_harmonic(k: HalfInteger) -> None:
    """q^n and v^{1−k} are harmonic of weight k."""
    assert operators.is_harmonic(make_expansion([term(1, q=2)], weight=k))
    assert operators.is_harmonic(operators.nonholomorphic_constant_atom(k))


def test_weight_one_log_atom_is_unsupported() -> None:
    """Weight 1 needs −log v, which is not represented."""
    with pytest.raises(LogWeightUnsupported):
        operators.harmonic_atom(1, 1)
    with pytest.raises(LogWeightUnsupported):
        operators.nonholomorphic_constant_atom(1)


def test_lowering_kills_holomorphic_terms() -> None:
    """L_k q^n = 0."""
    f = make_expansion([term(1, q=-1), term(5, q=3)], weight=HALF)
    assert operators.lowering(f).is_zero()
    assert operators.lowering(f).weight == HalfInteger(-3)


def test_raising_weight_bookkeeping() -> None:
    """R_k raises weight by 2; ξ_k maps k to 2 − k."""
    f = make_expansion([term(1, q=1)], weight=HALF)
    assert operators.raising(f).weight == HalfInteger(5)
    assert operators.xi(operators.harmonic_atom(THREE_HALVES, -1)).weight == HALF


def test_raising_without_weight_fails() -> None:
    """Operators read the declared weight."""
    with pytest.raises(WeightError):
        operators.raising(make_expansion([term(1, q=1)]))


def test_xi_of_harmonic_atom_is_holomorphic() -> None:
    """ξ_k sends the non-holomorphic part to a q-series."""
    g = operators.xi(operators.harmonic_atom(THREE_HALVES, -4, Coefficient.monomial(pi_exponent=Fraction(-1, 2))))
    assert operators.is_weakly_holomorphic(g)
    assert not g.is_zero()


def test_xi_of_constant_atom() -> None:
    """ξ_k v^{1−k} = (1−k)·conj(…) is the constant 1 − k for real coefficients."""
    g = operators.xi(operators.nonholomorphic_constant_atom(THREE_HALVES))
    assert g.coefficient_of() == Coefficient.rational(Fraction(-1, 2))
    assert len(g.terms) == 1


@pytest.mark.parametrize("k", [0, -1, -2, -3])
def test_bol_identity_routes_agree(k: int) -> None:
    """D^{1−k} f = (−4π)^{k−1} R_k^{1−k} f on harmonic-shape expansions."""
    f = random_fe_expansion(random.Random(10 + k), k, span=2)
    assert operators.bol(f).terms == operators.bol_via_raising(f).terms


def test_bol_needs_nonpositive_integral_weight() -> None:
    """Bol's identity is stated for k ∈ ℤ, k <= 0."""
    with pytest.raises(WeightError):
        operators.bol(make_expansion([term(1, q=1)], weight=HALF))
    with pytest.raises(WeightError):
        operators.bol(make_expansion([term(1, q=1)], weight=2))


def test_flip_of_single_q_power() -> None:
    """Flip of q at weight 0 is −Γ(1, 4πv)q^{−1}."""
    f = make_expansion([term(1, q=1)], weight=0)
    g = operators.flip(f)
    assert g.coefficient_of(q=-1, gammas=[(HalfInteger.of(1), 1)]) == Coefficient.rational(-1)
    assert len(g.terms) == 1


@pytest.mark.parametrize("seed", range(6))
def test_flip_is_an_involution(seed: int) -> None:
    """flip ∘ flip = id exactly."""
    f = random_fe_expansion(random.Random(seed), -2 * (seed % 3))
    assert operators.flip(operators.flip(f)) == f


@pytest.mark.parametrize("k", [0, -2])
def test_flip_matches_raising_formula(k: int) -> None:
    """flip f = −(v^{−k}/(−k)!)·conj(R_k^{−k} f) pointwise."""
    f = random_fe_expansion(random.Random(20 - k), k, span=2)
    for tau in (0.1 + 1.1j, -0.25 + 1.3j):
        exact = qexp.eval_numeric(operators.flip(f), tau)
        other = operators.flip_by_raising_numeric(f, tau)
        assert cmath.isclose(exact, other, rel_tol=1e-9, abs_tol=1e-9)


def test_fe_decompose_rejects_foreign_shape() -> None:
    """v·q is not a harmonic Fourier-expansion atom at weight 0."""
    f = make_expansion([term(1, v=1, q=1)], weight=0)
    with pytest.raises(ShapeError):
        operators.fe_decompose(f)


def test_fe_decompose_families() -> None:
    """Holomorphic, constant and gamma parts land in their families."""
    k = HalfInteger(-2)
    f = qexp.add(
        make_expansion([term(3, q=-1), term(2)], weight=k, window=(-1, 2)),
        qexp.add(
            make_expansion(operators.harmonic_atom(k, 2, 7).terms, weight=k, window=(-1, 2)),
            make_expansion(operators.nonholomorphic_constant_atom(k, 5).terms, weight=k, window=(-1, 2)),
        ),
    )
    data = operators.fe_decompose(f)
    assert data.plus == {Fraction(-1): Coefficient.rational(3), Fraction(0): Coefficient.rational(2)}
    assert data.minus == {Fraction(2): Coefficient.rational(7)}
    assert data.minus_zero == Coefficient.rational(5)


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 2**16), k=st.sampled_from(COHERENCE_WEIGHTS))
def test_symbolic_operators_match_numeric_partials(seed: int, k: Fraction) -> None:
    """R, L, ξ, Δ and D agree with mpmath.diff partials at 20 random τ, relative error <= 1e-6."""
    rng = random.Random(seed)
    f = random_fe_expansion(rng, k, span=2)
    taus = [random_tau(rng) for _ in range(20)]
    assert coherence_deviation(f, COHERENCE_OPERATORS, taus) <= 1e-6


@pytest.mark.parametrize("name", ["d_tau", "d_taubar"])
def test_wirtinger_derivatives_match_numeric_partials(name: str) -> None:
    """∂_τ and ∂_τ̄ agree with their numeric counterparts."""
    f = random_fe_expansion(random.Random(30), Fraction(3, 2), span=2)
    for tau in (0.05 + 1.2j, 0.3 + 1.0j, 1 + 1j):
        exact = qexp.eval_numeric(operators.apply_operator(name, f), tau)
        assert relative_error(exact, operators.numeric_operator(name, f, tau)) < 1e-6


def test_operators_on_inverse_v() -> None:
    """R₂(v⁻¹) = v⁻², L₂(v⁻¹) = −1 and ξ₂(c·v⁻¹) = −c̄."""
    f = make_expansion([term(1, v=-1)], weight=2)
    assert operators.raising(f).terms == (term(1, v=-2),)
    assert operators.lowering(f).terms == (term(-1),)
    c = Coefficient.gaussian(3, -2)
    g = operators.xi(make_expansion([term(c, v=-1)], weight=2))
    assert g.terms == (term(-c.conjugate()),)
    assert g.weight == HalfInteger(0)


def test_raising_at_one_plus_i() -> None:
    """R_k then evaluation matches the numeric operator at τ = 1+i for k ∈ {−2, ½, 3/2}."""
    for k in (-2, Fraction(1, 2), Fraction(3, 2)):
        f = random_fe_expansion(random.Random(31), k, span=2)
        exact = qexp.eval_numeric(operators.raising(f), 1 + 1j)
        assert relative_error(exact, operators.numeric_operator("raise", f, 1 + 1j)) < 1e-6


def test_partials_accept_explicit_step() -> None:
    """A coarse explicit step is passed through and loses accuracy."""
    f = make_expansion([term(1, q=-2)], weight=0)
    tau = 0.1 + 1.0j
    exact = qexp.eval_numeric(operators.apply_operator("d_tau", f), tau)
    fine = operators.numeric_operator("d_tau", f, tau)
    coarse = operators.numeric_operator("d_tau", f, tau, h=1e-2)
    assert relative_error(exact, fine) < 1e-12
    assert relative_error(exact, coarse) > 1e-6


def test_apply_operator_unknown_name() -> None:
    """Unknown names are reported with the known ones."""
    with pytest.raises(ValueError):
        operators.apply_operator("frobenius", make_expansion([term(1)], weight=0))
