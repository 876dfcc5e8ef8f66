"""Term algebra of truncated real-analytic Fourier expansions.

An atom is c·v^a·q^m·q̄^{m′}·ΠΓ(s, 4πℓv) with the fixed conventions
q^m = e^{2πimτ}, q̄^{m′} = e^{−2πim′τ̄}, v = Im τ, so e^{−4πℓv} = q^ℓ·q̄^ℓ.
A term oscillates in u = Re τ with frequency m − m′; the truncation window of
an Expansion bounds that frequency. Expansions are immutable and every
operation here is a pure function.
"""

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Optional

import mpmath
import sympy

from mfhc.config import config
from mfhc.errors import DomainError, NonRealGammaBranch, TruncationError, WeightError
from mfhc.logging import get_logger
from mfhc.services import arith
from mfhc.services.coefficient import Coefficient, HalfInteger, HalfIntegerLike, Scalar
from mfhc.utils.numbers import format_fraction

logger = get_logger("qexp")

# (s, ℓ) denoting Γ(s, 4πℓv), ℓ != 0
GammaFactor = tuple[HalfInteger, Fraction]
Window = tuple[Fraction, Fraction]

ZERO_HALF = HalfInteger(0)


@dataclass(frozen=True)
class AnalyticTerm:
    coeff: Coefficient
    v_power: HalfInteger = ZERO_HALF
    q_power: Fraction = Fraction(0)
    qbar_power: Fraction = Fraction(0)
    gammas: tuple[GammaFactor, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "q_power", Fraction(self.q_power))
        object.__setattr__(self, "qbar_power", Fraction(self.qbar_power))
        object.__setattr__(self, "v_power", HalfInteger.of(self.v_power))
        gammas = []
        for s, ell in self.gammas:
            ell = Fraction(ell)
            if ell == 0:
                raise DomainError("gamma factor Γ(s, 4πℓv) needs ℓ != 0")
            gammas.append((HalfInteger.of(s), ell))
        gammas.sort(key=lambda g: (g[0].twice_value, g[1]))
        object.__setattr__(self, "gammas", tuple(gammas))

    @property
    def key(self) -> tuple:
        return (self.v_power, self.q_power, self.qbar_power, self.gammas)

    @property
    def frequency(self) -> Fraction:
        return self.q_power - self.qbar_power

    def sort_key(self) -> tuple:
        return (
            self.frequency,
            self.q_power,
            self.v_power.twice_value,
            tuple((s.twice_value, ell) for s, ell in self.gammas),
        )

    def is_holomorphic_atom(self) -> bool:
        return self.v_power.twice_value == 0 and self.qbar_power == 0 and not self.gammas

    def with_coeff(self, coeff: Coefficient) -> "AnalyticTerm":
        return replace(self, coeff=coeff)

    def __str__(self) -> str:
        parts = [f"({self.coeff})"]
        if self.v_power.twice_value:
            parts.append(f"v^{self.v_power}")
        if self.q_power:
            parts.append(f"q^{format_fraction(self.q_power)}")
        if self.qbar_power:
            parts.append(f"q̄^{format_fraction(self.qbar_power)}")
        for s, ell in self.gammas:
            parts.append(f"Γ({s}, 4π·{format_fraction(ell)}·v)")
        return "·".join(parts)


def term(
    coeff: Scalar = 1,
    v: HalfIntegerLike = 0,
    q: Fraction | int = 0,
    qbar: Fraction | int = 0,
    gammas: Iterable[tuple[HalfIntegerLike, Fraction | int]] = (),
) -> AnalyticTerm:
    """Convenience constructor: term(c, v=a, q=m, qbar=m′, gammas=[(s, ℓ)])."""
    return AnalyticTerm(
        coeff=Coefficient.coerce(coeff),
        v_power=HalfInteger.of(v),
        q_power=Fraction(q),
        qbar_power=Fraction(qbar),
        gammas=tuple((HalfInteger.of(s), Fraction(ell)) for s, ell in gammas),
    )


def multiply_terms(a: AnalyticTerm, b: AnalyticTerm) -> AnalyticTerm:
    return AnalyticTerm(
        coeff=a.coeff * b.coeff,
        v_power=a.v_power + b.v_power,
        q_power=a.q_power + b.q_power,
        qbar_power=a.qbar_power + b.qbar_power,
        gammas=a.gammas + b.gammas,
    )


@dataclass(frozen=True)
class Expansion:
    """Finite sum of atoms with an optional weight and a frequency window.

    Build through make_expansion; the dataclass constructor does not normalize.
    """

    weight: Optional[HalfInteger]
    terms: tuple[AnalyticTerm, ...]
    window: Window

    def is_zero(self) -> bool:
        return not self.terms

    def require_weight(self) -> HalfInteger:
        if self.weight is None:
            raise WeightError("expansion has no declared weight")
        return self.weight

    def coefficient_of(self, v: HalfIntegerLike = 0, q: Fraction | int = 0, qbar: Fraction | int = 0, gammas=()) -> Coefficient:
        key = term(0, v, q, qbar, gammas).key
        for t in self.terms:
            if t.key == key:
                return t.coeff
        return Coefficient.zero()

    def __str__(self) -> str:
        w = "none" if self.weight is None else str(self.weight)
        body = " + ".join(str(t) for t in self.terms) or "0"
        lo, hi = self.window
        return f"[weight {w}, window {format_fraction(lo)}..{format_fraction(hi)}] {body}"


def _merge(terms: Iterable[AnalyticTerm]) -> tuple[AnalyticTerm, ...]:
    acc: dict[tuple, AnalyticTerm] = {}
    for t in terms:
        prev = acc.get(t.key)
        acc[t.key] = t if prev is None else prev.with_coeff(prev.coeff + t.coeff)
    kept = [t for t in acc.values() if not t.coeff.is_zero()]
    kept.sort(key=AnalyticTerm.sort_key)
    return tuple(kept)


def make_expansion(
    terms: Iterable[AnalyticTerm],
    weight: Optional[HalfIntegerLike] = None,
    window: Optional[tuple[Fraction | int, Fraction | int]] = None,
) -> Expansion:
    """Normalize terms into an Expansion. Without a window the tightest one is used.

    Raises TruncationError if a nonzero term falls outside an explicit window.
    """
    merged = _merge(terms)
    if window is None:
        freqs = [t.frequency for t in merged] or [Fraction(0)]
        win: Window = (min(freqs), max(freqs))
    else:
        win = (Fraction(window[0]), Fraction(window[1]))
        if win[0] > win[1]:
            raise TruncationError(f"empty window {window}")
        for t in merged:
            if not win[0] <= t.frequency <= win[1]:
                raise TruncationError(f"term {t} has frequency outside window {window}")
    w = None if weight is None else HalfInteger.of(weight)
    return Expansion(weight=w, terms=merged, window=win)


def normalize(e: Expansion) -> Expansion:
    """Merge like terms, drop zeros, sort. Idempotent; window and weight kept."""
    return Expansion(weight=e.weight, terms=_merge(e.terms), window=e.window)


def with_weight(e: Expansion, weight: Optional[HalfIntegerLike]) -> Expansion:
    return replace(e, weight=None if weight is None else HalfInteger.of(weight))


def _combined_weight(a: Expansion, b: Expansion) -> Optional[HalfInteger]:
    if a.weight is not None and b.weight is not None and a.weight != b.weight:
        raise WeightError(f"cannot add weight {a.weight} and weight {b.weight}")
    return a.weight if a.weight is not None else b.weight


def add(a: Expansion, b: Expansion) -> Expansion:
    """Sum on the intersection of the windows; terms outside it are dropped."""
    lo = max(a.window[0], b.window[0])
    hi = min(a.window[1], b.window[1])
    if lo > hi:
        raise TruncationError(f"disjoint windows {a.window} and {b.window}")
    kept = [t for t in a.terms + b.terms if lo <= t.frequency <= hi]
    return Expansion(weight=_combined_weight(a, b), terms=_merge(kept), window=(lo, hi))


def scale(e: Expansion, c: Scalar) -> Expansion:
    c = Coefficient.coerce(c)
    return Expansion(weight=e.weight, terms=_merge(t.with_coeff(t.coeff * c) for t in e.terms), window=e.window)


def sub(a: Expansion, b: Expansion) -> Expansion:
    return add(a, scale(b, -1))


def multiply_by_term(e: Expansion, t: AnalyticTerm) -> Expansion:
    """Multiply by a single atom; the window shifts by its frequency.
    Weight metadata is cleared."""
    shift = t.frequency
    terms = [multiply_terms(x, t) for x in e.terms]
    return Expansion(weight=None, terms=_merge(terms), window=(e.window[0] + shift, e.window[1] + shift))


def multiply_by_v_power(e: Expansion, a: HalfIntegerLike, c: Scalar = 1) -> Expansion:
    return multiply_by_term(e, term(c, v=a))


# -- derivatives ------------------------------------------------------------


def four_pi_ell_power(s: HalfInteger, ell: Fraction) -> Coefficient:
    """(4πℓ)^s exactly, with (−1)^s = e^{iπs} for ℓ < 0."""
    return Coefficient.from_rational_power(4 * ell, s) * Coefficient.pi_power(s)


_HALF_OVER_I = Coefficient.gaussian(0, Fraction(-1, 2))  # 1/(2i)


def _gamma_derivative_terms(t: AnalyticTerm, sign: int) -> list[AnalyticTerm]:
    """sign·(1/2i)(4πℓ)^s v^{s−1} q^ℓ q̄^ℓ in place of each gamma factor."""
    out = []
    for idx, (s, ell) in enumerate(t.gammas):
        rest = t.gammas[:idx] + t.gammas[idx + 1 :]
        c = t.coeff * _HALF_OVER_I * four_pi_ell_power(s, ell) * sign
        out.append(
            AnalyticTerm(
                coeff=c,
                v_power=t.v_power + s - 1,
                q_power=t.q_power + ell,
                qbar_power=t.qbar_power + ell,
                gammas=rest,
            )
        )
    return out


def _d_tau_term(t: AnalyticTerm) -> list[AnalyticTerm]:
    out: list[AnalyticTerm] = []
    if t.v_power.twice_value:
        # ∂_τ v^a = (a/2i) v^{a−1}
        out.append(replace(t, coeff=t.coeff * _HALF_OVER_I * t.v_power.value, v_power=t.v_power - 1))
    if t.q_power:
        out.append(t.with_coeff(t.coeff * Coefficient.monomial(pi_exponent=1, re=0, im=2 * t.q_power)))
    out.extend(_gamma_derivative_terms(t, -1))
    return out


def _d_taubar_term(t: AnalyticTerm) -> list[AnalyticTerm]:
    out: list[AnalyticTerm] = []
    if t.v_power.twice_value:
        out.append(replace(t, coeff=t.coeff * _HALF_OVER_I * (-t.v_power.value), v_power=t.v_power - 1))
    if t.qbar_power:
        out.append(t.with_coeff(t.coeff * Coefficient.monomial(pi_exponent=1, re=0, im=-2 * t.qbar_power)))
    out.extend(_gamma_derivative_terms(t, +1))
    return out


def d_tau(e: Expansion) -> Expansion:
    """Symbolic ∂_τ. The result carries no weight."""
    terms = [x for t in e.terms for x in _d_tau_term(t)]
    return Expansion(weight=None, terms=_merge(terms), window=e.window)


def d_taubar(e: Expansion) -> Expansion:
    """Symbolic ∂_τ̄. The result carries no weight."""
    terms = [x for t in e.terms for x in _d_taubar_term(t)]
    return Expansion(weight=None, terms=_merge(terms), window=e.window)


def conjugate(e: Expansion) -> Expansion:
    """Complex conjugation: c ↦ c̄, q^m ↦ q̄^m, q̄^{m′} ↦ q^{m′}.
    Weight metadata is kept; the window is mirrored."""
    out = []
    for t in e.terms:
        for s, ell in t.gammas:
            if ell < 0:
                raise NonRealGammaBranch(f"Γ({s}, 4π·{format_fraction(ell)}·v) has a complex branch")
        out.append(replace(t, coeff=t.coeff.conjugate(), q_power=t.qbar_power, qbar_power=t.q_power))
    return Expansion(weight=e.weight, terms=_merge(out), window=(-e.window[1], -e.window[0]))


# -- numerics ---------------------------------------------------------------


def _term_value_mp(t: AnalyticTerm, tau: mpmath.mpc) -> mpmath.mpc:
    v = tau.imag
    two_pi_i = 2j * mpmath.pi
    value = t.coeff.to_mp()
    if t.v_power.twice_value:
        value *= v ** (mpmath.mpf(t.v_power.twice_value) / 2)
    exponent = mpmath.mpc(0)
    if t.q_power:
        exponent += two_pi_i * mpmath.mpf(t.q_power.numerator) / t.q_power.denominator * tau
    if t.qbar_power:
        exponent -= two_pi_i * mpmath.mpf(t.qbar_power.numerator) / t.qbar_power.denominator * mpmath.conj(tau)
    for s, ell in t.gammas:
        x = 4 * mpmath.pi * mpmath.mpf(ell.numerator) / ell.denominator * v
        value *= arith.inc_gamma_mp(s, x)
    return value * mpmath.exp(exponent)


def eval_mp(e: Expansion, tau: mpmath.mpc) -> mpmath.mpc:
    """Sum of the terms at τ in the current mpmath context."""
    return mpmath.fsum(_term_value_mp(t, tau) for t in e.terms)


def eval_numeric(e: Expansion, tau: complex) -> complex:
    """Σ over terms at τ. No tail estimate is added for the truncation."""
    if tau.imag <= 0:
        raise DomainError(f"eval_numeric needs Im τ > 0, got {tau}")
    with mpmath.workdps(config.MP_DPS):
        return complex(eval_mp(e, mpmath.mpc(tau.real, tau.imag)))


# -- closed form in u, v ----------------------------------------------------

U = sympy.Symbol("u", real=True)
V = sympy.Symbol("v", positive=True)


def _term_to_sympy(t: AnalyticTerm) -> sympy.Expr:
    tau = U + sympy.I * V
    taubar = U - sympy.I * V
    expr = t.coeff.expr * V ** t.v_power.to_sympy()
    if t.q_power:
        expr *= sympy.exp(2 * sympy.pi * sympy.I * _rational(t.q_power) * tau)
    if t.qbar_power:
        expr *= sympy.exp(-2 * sympy.pi * sympy.I * _rational(t.qbar_power) * taubar)
    for s, ell in t.gammas:
        expr *= sympy.uppergamma(s.to_sympy(), 4 * sympy.pi * _rational(ell) * V)
    return expr


def _rational(x: Fraction) -> sympy.Rational:
    return sympy.Rational(x.numerator, x.denominator)


def to_sympy(e: Expansion) -> sympy.Expr:
    """The expansion as a closed-form function of the symbols u and v."""
    return sympy.Add(*(_term_to_sympy(t) for t in e.terms))


def sympy_d_tau(expr: sympy.Expr) -> sympy.Expr:
    """∂_τ = (∂_u − i∂_v)/2 by sympy differentiation."""
    return (sympy.diff(expr, U) - sympy.I * sympy.diff(expr, V)) / 2


def sympy_d_taubar(expr: sympy.Expr) -> sympy.Expr:
    """∂_τ̄ = (∂_u + i∂_v)/2 by sympy differentiation."""
    return (sympy.diff(expr, U) + sympy.I * sympy.diff(expr, V)) / 2


def eval_sympy(expr: sympy.Expr, tau: complex, dps: int = 30) -> complex:
    if tau.imag <= 0:
        raise DomainError(f"eval_sympy needs Im τ > 0, got {tau}")
    subs = {U: sympy.Float(repr(tau.real), dps), V: sympy.Float(repr(tau.imag), dps)}
    return complex(expr.evalf(dps, subs=subs))
