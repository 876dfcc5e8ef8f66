"""Differential operators on expansions: R_k, L_k, Δ_k, ξ_k, Bol and the flip.

Every operator reads the declared weight and writes the weight of its image.
numeric_operator evaluates the same operators from mpmath.diff partials
of eval_mp, which is what the symbolic forms are checked against.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import mpmath

from mfhc.config import config
from mfhc.errors import LogWeightUnsupported, ShapeError, WeightError
from mfhc.logging import get_logger
from mfhc.services import qexp
from mfhc.services.coefficient import Coefficient, HalfInteger, HalfIntegerLike
from mfhc.services.qexp import Expansion, make_expansion, term
from mfhc.utils.numbers import factorial

logger = get_logger("operators")

TWO_I = Coefficient.gaussian(0, 2)
TWO_PI_I = Coefficient.monomial(pi_exponent=1, re=0, im=2)


def raising(f: Expansion) -> Expansion:
    """R_k = 2i∂_τ + k v^{−1}, weight k → k+2."""
    k = f.require_weight()
    out = qexp.add(qexp.scale(qexp.d_tau(f), TWO_I), qexp.multiply_by_v_power(f, -1, k.value))
    return qexp.with_weight(out, k + 2)


def lowering(f: Expansion) -> Expansion:
    """L_k = −2i v² ∂_τ̄, weight k → k−2."""
    k = f.require_weight()
    out = qexp.multiply_by_v_power(qexp.d_taubar(f), 2, -TWO_I)
    return qexp.with_weight(out, k - 2)


def laplacian(f: Expansion) -> Expansion:
    """Δ_k = −R_{k−2} L_k; weight k."""
    k = f.require_weight()
    return qexp.with_weight(qexp.scale(raising(lowering(f)), -1), k)


def xi(f: Expansion) -> Expansion:
    """ξ_k f = 2i v^k conj(∂_τ̄ f), weight k → 2−k."""
    k = f.require_weight()
    inner = qexp.conjugate(qexp.d_taubar(f))
    return qexp.with_weight(qexp.multiply_by_v_power(inner, k, TWO_I), 2 - k)


def iterated_raising(f: Expansion, r: int) -> Expansion:
    """R_{k+2(r−1)} ∘ ⋯ ∘ R_k."""
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    f.require_weight()
    for _ in range(r):
        f = raising(f)
    return f


def _bol_order(f: Expansion) -> int:
    k = f.require_weight()
    if not k.is_integral or k.floor() > 0:
        raise WeightError(f"Bol's identity needs an integral weight k <= 0, got {k}")
    return 1 - k.floor()


def bol(f: Expansion) -> Expansion:
    """D^{1−k} with D = (1/2πi)∂_τ, weight k → 2−k (k ∈ ℤ, k <= 0)."""
    n = _bol_order(f)
    k = f.require_weight()
    out = f
    for _ in range(n):
        out = qexp.d_tau(out)
    return qexp.with_weight(qexp.scale(out, TWO_PI_I ** (-n)), 2 - k)


def bol_via_raising(f: Expansion) -> Expansion:
    """(−4π)^{k−1} R_k^{1−k} f, the second side of Bol's identity."""
    n = _bol_order(f)
    k = f.require_weight()
    const = Coefficient.from_rational_power(-4, k - 1) * Coefficient.pi_power(k - 1)
    return qexp.scale(iterated_raising(f, n), const)


# -- harmonic Fourier-expansion shape ------------------------------------------


def _reject_log_weight(k: HalfInteger) -> None:
    if k == HalfInteger(2):
        raise LogWeightUnsupported("weight 1 needs a −log(v) atom, which is not represented")


def harmonic_atom(k: HalfIntegerLike, n: int | Fraction, coeff: Coefficient | int = 1) -> Expansion:
    """c·W_k(4πnv)q^n stored as c·Γ(1−k, −4πnv)q^n, n != 0."""
    k = HalfInteger.of(k)
    _reject_log_weight(k)
    n = Fraction(n)
    if n == 0:
        raise ShapeError("harmonic atom needs n != 0")
    return make_expansion([term(coeff, q=n, gammas=[(1 - k, -n)])], weight=k, window=(n, n))


def nonholomorphic_constant_atom(k: HalfIntegerLike, coeff: Coefficient | int = 1) -> Expansion:
    """c·v^{1−k}."""
    k = HalfInteger.of(k)
    _reject_log_weight(k)
    return make_expansion([term(coeff, v=1 - k)], weight=k, window=(0, 0))


@dataclass(frozen=True)
class FourierData:
    """Coefficient families of f = Σ c⁺(n)q^n + c⁻(0)v^{1−k} + Σ_{n≠0} c⁻(n)W_k(4πnv)q^n."""

    weight: HalfInteger
    plus: dict[Fraction, Coefficient] = field(default_factory=dict)
    minus_zero: Coefficient = field(default_factory=Coefficient.zero)
    minus: dict[Fraction, Coefficient] = field(default_factory=dict)


def fe_decompose(f: Expansion) -> FourierData:
    k = f.require_weight()
    _reject_log_weight(k)
    plus: dict[Fraction, Coefficient] = {}
    minus: dict[Fraction, Coefficient] = {}
    minus_zero = Coefficient.zero()
    for t in f.terms:
        if t.is_holomorphic_atom():
            plus[t.q_power] = t.coeff
        elif t.v_power == 1 - k and t.q_power == 0 and t.qbar_power == 0 and not t.gammas:
            minus_zero = t.coeff
        elif (
            t.v_power.twice_value == 0
            and t.qbar_power == 0
            and t.q_power != 0
            and t.gammas == ((1 - k, -t.q_power),)
        ):
            minus[t.q_power] = t.coeff
        else:
            raise ShapeError(f"atom {t} is not of harmonic Fourier-expansion shape for weight {k}")
    return FourierData(weight=k, plus=plus, minus_zero=minus_zero, minus=minus)


def flip(f: Expansion) -> Expansion:
    """Flipping operator for integral k <= 0, acting on the expansion as
    −c̄⁻(0)v^{1−k} − (−k)!Σc̄⁻(−n)q^n − c̄⁺(0) − (1/(−k)!)Σ_{n≠0}c̄⁺(−n)Γ(1−k, −4πnv)q^n.
    An exact involution; gamma branches are never conjugated."""
    k = f.require_weight()
    if not k.is_integral or k.floor() > 0:
        raise WeightError(f"flip needs an integral weight k <= 0, got {k}")
    data = fe_decompose(f)
    kf = factorial(-k.floor())
    terms = []
    if not data.minus_zero.is_zero():
        terms.append(term(-data.minus_zero.conjugate(), v=1 - k))
    for n, c in data.minus.items():
        terms.append(term(-kf * c.conjugate(), q=-n))
    for n, c in data.plus.items():
        if n == 0:
            terms.append(term(-c.conjugate()))
        else:
            terms.append(term(-c.conjugate() / kf, q=-n, gammas=[(1 - k, n)]))
    lo, hi = f.window
    return make_expansion(terms, weight=k, window=(-hi, -lo))


def flip_by_raising_numeric(f: Expansion, tau: complex) -> complex:
    """−(v^{−k}/(−k)!)·conj((R_k^{−k} f)(τ)); equals flip(f) at τ."""
    k = f.require_weight()
    if not k.is_integral or k.floor() > 0:
        raise WeightError(f"flip needs an integral weight k <= 0, got {k}")
    K = -k.floor()
    value = qexp.eval_numeric(iterated_raising(f, K), tau)
    return -(tau.imag**K) / factorial(K) * value.conjugate()


def is_weakly_holomorphic(f: Expansion) -> bool:
    """Shape predicate: only pure q-powers. Says nothing about modularity."""
    return all(t.is_holomorphic_atom() for t in f.terms)


def is_harmonic(f: Expansion) -> bool:
    return laplacian(f).is_zero()


# -- dispatch and numeric counterparts --------------------------------------------

SYMBOLIC: dict[str, Callable[[Expansion], Expansion]] = {
    "raise": raising,
    "lower": lowering,
    "laplacian": laplacian,
    "xi": xi,
    "bol": bol,
    "bol_raising": bol_via_raising,
    "flip": flip,
    "d": lambda f: qexp.with_weight(qexp.scale(qexp.d_tau(f), TWO_PI_I ** (-1)), None),
    "d_tau": qexp.d_tau,
    "d_taubar": qexp.d_taubar,
    "conjugate": qexp.conjugate,
}

NUMERIC_NAMES = ("raise", "lower", "laplacian", "xi", "d", "d_tau", "d_taubar")

# (∂_u order, ∂_v order)
_PARTIALS = ((0, 0), (1, 0), (0, 1), (2, 0), (0, 2))


def apply_operator(name: str, f: Expansion) -> Expansion:
    try:
        op = SYMBOLIC[name]
    except KeyError:
        raise ValueError(f"unknown operator {name!r}; expected one of {sorted(SYMBOLIC)}") from None
    return op(f)


def partials(f: Expansion, tau: complex, h: float | None = None) -> dict[tuple[int, int], mpmath.mpc]:
    """f, f_u, f_v, f_uu, f_vv at τ via mpmath.diff on eval_mp.

    mpmath picks the step and working precision unless h is given.
    """
    options = {} if h is None else {"h": h}
    with mpmath.workdps(config.MP_DPS):
        u, v = mpmath.mpf(tau.real), mpmath.mpf(tau.imag)

        def at(x: mpmath.mpf, y: mpmath.mpf) -> mpmath.mpc:
            return qexp.eval_mp(f, mpmath.mpc(x, y))

        return {order: +mpmath.diff(at, (u, v), order, **options) for order in _PARTIALS}


def operator_from_partials(name: str, k: Fraction | None, v: float, p: dict[tuple[int, int], mpmath.mpc]) -> complex:
    """Combine precomputed partials into the value of a named operator."""
    if name not in NUMERIC_NAMES:
        raise ValueError(f"no numeric form for {name!r}")
    with mpmath.workdps(config.MP_DPS):
        f0, fu, fv = p[(0, 0)], p[(1, 0)], p[(0, 1)]
        dt = (fu - 1j * fv) / 2
        dtb = (fu + 1j * fv) / 2
        v = mpmath.mpf(v)
        if name == "d_tau":
            return complex(dt)
        if name == "d_taubar":
            return complex(dtb)
        if name == "d":
            return complex(dt / (2j * mpmath.pi))
        if k is None:
            raise WeightError(f"{name} needs a declared weight")
        k = mpmath.mpf(k.numerator) / k.denominator
        if name == "raise":
            out = 2j * dt + k / v * f0
        elif name == "lower":
            out = -2j * v**2 * dtb
        elif name == "xi":
            out = 2j * v**k * mpmath.conj(dtb)
        else:
            out = -(v**2) * (p[(2, 0)] + p[(0, 2)]) + 1j * k * v * (fu + 1j * fv)
        return complex(out)


def numeric_operator(name: str, f: Expansion, tau: complex, h: float | None = None) -> complex:
    """Value of an operator at τ from numerical partials in u and v."""
    if name not in NUMERIC_NAMES:
        raise ValueError(f"no numeric form for {name!r}")
    k = None if f.weight is None else f.weight.value
    return operator_from_partials(name, k, tau.imag, partials(f, tau, h))
