"""Harish-Chandra modules: principal series I(ε, ν) and the modules ϖ(f, k).

K-types are indexed by j ∈ ε + 2ℤ. On the basis φ_j of I(ε, ν):

    H φ_j = j φ_j,   X_± φ_j = ½(ν + 1 ± j) φ_{j±2},   C φ_j = (ν² − 1) φ_j.

ν is an exact Coefficient; decompositions are only decided for rational ν.
"""

import cmath
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from mfhc.errors import WeightError
from mfhc.logging import get_logger
from mfhc.services.arith import pochhammer
from mfhc.services.coefficient import Coefficient, HalfInteger, HalfIntegerLike
from mfhc.services.metaplectic import MetaplecticElement, act, nmk_parameters, omega
from mfhc.services.qexp import Expansion, eval_numeric
from mfhc.utils.numbers import factorial, format_fraction

logger = get_logger("hcmodule")

NuLike = Union[Coefficient, Fraction, int]


class LieElement(str, Enum):
    H = "H"
    XPLUS = "Xplus"
    XMINUS = "Xminus"
    CASIMIR = "Casimir"


class Order(str, Enum):
    DOWNUP = "downup"  # X_-^r X_+^r
    UPDOWN = "updown"  # X_+^r X_-^r


def _nu(nu: NuLike) -> Coefficient:
    return Coefficient.coerce(nu)


def same_class_mod2(a: HalfInteger, b: HalfInteger) -> bool:
    return (a.twice_value - b.twice_value) % 4 == 0


@dataclass(frozen=True)
class PrincipalSeriesVector:
    """Finite combination Σ c_j φ_j in I(ε, ν). combo is sorted by j, zeros dropped."""

    epsilon: HalfInteger
    nu: Coefficient
    combo: tuple[tuple[HalfInteger, Coefficient], ...] = ()

    def __post_init__(self) -> None:
        eps = HalfInteger(HalfInteger.of(self.epsilon).residue_mod2)
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "nu", _nu(self.nu))
        acc: dict[HalfInteger, Coefficient] = {}
        for j, c in self.combo:
            j = HalfInteger.of(j)
            if not same_class_mod2(j, eps):
                raise ValueError(f"K-type {j} is not in {eps} + 2ℤ")
            acc[j] = acc.get(j, Coefficient.zero()) + Coefficient.coerce(c)
        items = tuple(sorted(((j, c) for j, c in acc.items() if not c.is_zero()), key=lambda x: x[0]))
        object.__setattr__(self, "combo", items)

    @classmethod
    def basis(cls, epsilon: HalfIntegerLike, nu: NuLike, j: HalfIntegerLike) -> "PrincipalSeriesVector":
        return cls(HalfInteger.of(epsilon), _nu(nu), ((HalfInteger.of(j), Coefficient.one()),))

    def with_combo(self, items: Iterable[tuple[HalfInteger, Coefficient]]) -> "PrincipalSeriesVector":
        return PrincipalSeriesVector(self.epsilon, self.nu, tuple(items))

    def is_zero(self) -> bool:
        return not self.combo

    def coefficient(self, j: HalfIntegerLike) -> Coefficient:
        j = HalfInteger.of(j)
        for jj, c in self.combo:
            if jj == j:
                return c
        return Coefficient.zero()

    def __add__(self, other: "PrincipalSeriesVector") -> "PrincipalSeriesVector":
        if (self.epsilon, self.nu) != (other.epsilon, other.nu):
            raise ValueError("vectors live in different principal series")
        return self.with_combo(self.combo + other.combo)

    def scale(self, c: Union[Coefficient, Fraction, int]) -> "PrincipalSeriesVector":
        c = Coefficient.coerce(c)
        return self.with_combo((j, x * c) for j, x in self.combo)

    def __sub__(self, other: "PrincipalSeriesVector") -> "PrincipalSeriesVector":
        return self + other.scale(-1)

    def __str__(self) -> str:
        if not self.combo:
            return "0"
        return " + ".join(f"({c})φ_{j}" for j, c in self.combo)


def ps_apply(x: LieElement, vec: PrincipalSeriesVector) -> PrincipalSeriesVector:
    """Linear action of H, X_±, C on a principal-series vector."""
    x = LieElement(x)
    half = Fraction(1, 2)
    out: list[tuple[HalfInteger, Coefficient]] = []
    for j, c in vec.combo:
        if x is LieElement.H:
            out.append((j, c * j.value))
        elif x is LieElement.XPLUS:
            out.append((j + 2, c * (vec.nu + 1 + j.value) * half))
        elif x is LieElement.XMINUS:
            out.append((j - 2, c * (vec.nu + 1 - j.value) * half))
        else:
            out.append((j, c * (vec.nu * vec.nu - 1)))
    return vec.with_combo(out)


Word = Sequence[Union[LieElement, str]]


def apply_word(word: Word, vec: PrincipalSeriesVector) -> PrincipalSeriesVector:
    """Apply a product X_1 X_2 ⋯ X_n; the rightmost letter acts first."""
    for letter in reversed(list(word)):
        vec = ps_apply(LieElement(letter), vec)
    return vec


def casimir_forms(vec: PrincipalSeriesVector) -> tuple[PrincipalSeriesVector, ...]:
    """C·vec via H² + 2X₊X₋ + 2X₋X₊, (H−1)² + 4X₊X₋ − 1 and (H+1)² + 4X₋X₊ − 1."""
    H, XP, XM = LieElement.H, LieElement.XPLUS, LieElement.XMINUS
    h = apply_word([H], vec)
    hh = apply_word([H, H], vec)
    pm = apply_word([XP, XM], vec)
    mp = apply_word([XM, XP], vec)
    first = hh + pm.scale(2) + mp.scale(2)
    # (H ∓ 1)² = H² ∓ 2H + 1, so the trailing −1 cancels the +1
    second = hh - h.scale(2) + pm.scale(4)
    third = hh + h.scale(2) + mp.scale(4)
    return first, second, third


def commutator(a: LieElement, b: LieElement, vec: PrincipalSeriesVector) -> PrincipalSeriesVector:
    return apply_word([a, b], vec) - apply_word([b, a], vec)


def ps_compose(r: int, j: HalfIntegerLike, nu: NuLike, order: Union[Order, str]) -> Coefficient:
    """Scalar of X_-^r X_+^r φ_j (downup) or X_+^r X_-^r φ_j (updown).

    downup: Π_{i<r} ¼(ν+1+j+2i)(ν+1−j−2r+2i)
    updown: Π_{i<r} ¼(ν+1−j+2i)(ν+1+j−2r+2i)
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    j = HalfInteger.of(j).value
    nu = _nu(nu)
    order = Order(order)
    quarter = Fraction(1, 4)
    out = Coefficient.one()
    for i in range(r):
        if order is Order.DOWNUP:
            out = out * (nu + 1 + j + 2 * i) * (nu + 1 - j - 2 * r + 2 * i) * quarter
        else:
            out = out * (nu + 1 - j + 2 * i) * (nu + 1 + j - 2 * r + 2 * i) * quarter
    return out


def ps_compose_by_iteration(r: int, j: HalfIntegerLike, nu: NuLike, order: Union[Order, str]) -> Coefficient:
    j = HalfInteger.of(j)
    order = Order(order)
    first, second = (LieElement.XPLUS, LieElement.XMINUS) if order is Order.DOWNUP else (LieElement.XMINUS, LieElement.XPLUS)
    vec = PrincipalSeriesVector.basis(j, nu, j)
    vec = apply_word([second] * r + [first] * r, vec)
    return vec.coefficient(j)


def lemma_eigenvalue(r: int, k: HalfIntegerLike, side: Union[Order, str]) -> Coefficient:
    """(−1)^r r!(k)_r for X_-^r X_+^r f̃_k, r!(k−1−r)_r for X_+^r X_-^r f̃_{k−2}."""
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    k = HalfInteger.of(k).value
    if Order(side) is Order.DOWNUP:
        return Coefficient.rational((-1) ** r * factorial(r) * pochhammer(k, r))
    return Coefficient.rational(factorial(r) * pochhammer(k - 1 - r, r))


# -- module classes ---------------------------------------------------------------


class ModuleKind(str, Enum):
    IRREDUCIBLE_PRINCIPAL = "IrreduciblePrincipal"
    REDUCIBLE_PRINCIPAL = "ReduciblePrincipal"
    DISCRETE_PLUS = "DiscretePlus"
    DISCRETE_MINUS = "DiscreteMinus"
    EXTENSION_MINUS_PLUS = "ExtensionMinusPlus"
    OUT_OF_SCOPE = "OutOfScope"
    NOT_DECIDABLE = "NotDecidable"


@dataclass(frozen=True)
class KTypeSupport:
    """{j ≡ residue (2) : lower <= j <= upper} ∪ isolated; None bounds are open."""

    residue: HalfInteger
    lower: Optional[HalfInteger] = None
    upper: Optional[HalfInteger] = None
    isolated: tuple[HalfInteger, ...] = ()

    def contains(self, j: HalfIntegerLike) -> bool:
        j = HalfInteger.of(j)
        if j in self.isolated:
            return True
        if not same_class_mod2(j, self.residue):
            return False
        if self.lower is not None and j < self.lower:
            return False
        if self.upper is not None and j > self.upper:
            return False
        return True

    @property
    def direction(self) -> str:
        if self.lower is None and self.upper is None:
            return "both"
        if self.upper is None:
            return "up"
        if self.lower is None:
            return "down"
        return "finite"

    def members(self, lo: HalfIntegerLike, hi: HalfIntegerLike) -> list[HalfInteger]:
        lo, hi = HalfInteger.of(lo), HalfInteger.of(hi)
        candidates = {HalfInteger(t) for t in range(lo.twice_value, hi.twice_value + 1)}
        return sorted(j for j in candidates if self.contains(j))


def full_support(residue: HalfIntegerLike) -> KTypeSupport:
    return KTypeSupport(residue=HalfInteger(HalfInteger.of(residue).residue_mod2))


def discrete_plus_support(nu: Fraction) -> KTypeSupport:
    """ϖ⁺(ν): {ν+1, ν+3, …}."""
    base = HalfInteger.of(nu + 1)
    return KTypeSupport(residue=HalfInteger(base.residue_mod2), lower=base)


def discrete_minus_support(nu: Fraction) -> KTypeSupport:
    """ϖ⁻(ν): {…, −ν−3, −ν−1}."""
    top = HalfInteger.of(-nu - 1)
    return KTypeSupport(residue=HalfInteger(top.residue_mod2), upper=top)


@dataclass(frozen=True)
class ModuleClass:
    kind: ModuleKind
    nu: Optional[Fraction] = None
    weight: Optional[HalfInteger] = None
    support: Optional[KTypeSupport] = None
    sub: Optional["ModuleClass"] = None
    quotient: Optional["ModuleClass"] = None
    nonsplit: bool = False
    casimir: Optional[Fraction] = None
    label: str = ""
    note: str = ""

    def describe(self) -> str:
        if self.kind in (ModuleKind.DISCRETE_PLUS, ModuleKind.DISCRETE_MINUS):
            sign = "+" if self.kind is ModuleKind.DISCRETE_PLUS else "−"
            return f"ϖ{sign}({format_fraction(self.nu)})"
        if self.sub is not None and self.quotient is not None:
            middle = "ϖ" if self.kind is ModuleKind.EXTENSION_MINUS_PLUS else "I"
            return f"0 → {self.sub.describe()} → {middle} → {self.quotient.describe()} → 0"
        if self.kind is ModuleKind.IRREDUCIBLE_PRINCIPAL:
            return "I(ε, ν) irreducible"
        return f"{self.kind.value}: {self.label or self.note}"


def discrete_plus(nu: Fraction) -> ModuleClass:
    return ModuleClass(ModuleKind.DISCRETE_PLUS, nu=nu, support=discrete_plus_support(nu), casimir=nu * nu - 1)


def discrete_minus(nu: Fraction) -> ModuleClass:
    return ModuleClass(ModuleKind.DISCRETE_MINUS, nu=nu, support=discrete_minus_support(nu), casimir=nu * nu - 1)


def ps_decompose(epsilon: HalfIntegerLike, nu: NuLike) -> ModuleClass:
    """Composition structure of I(ε, ν) for ε ∈ ½ + ℤ and rational ν."""
    eps = HalfInteger(HalfInteger.of(epsilon).residue_mod2)
    nu_c = _nu(nu)
    if eps.is_integral:
        return ModuleClass(
            ModuleKind.OUT_OF_SCOPE,
            support=full_support(eps),
            label="integral ε",
            note="integral ε is the SL₂(ℝ) case and is not decomposed here",
        )
    if not nu_c.is_rational():
        return ModuleClass(ModuleKind.NOT_DECIDABLE, support=full_support(eps), note=f"ν = {nu_c} is not rational")
    nu_q = nu_c.as_fraction()
    casimir = nu_q * nu_q - 1
    if (2 * nu_q).denominator != 1 or (2 * nu_q).numerator % 2 == 0:
        return ModuleClass(ModuleKind.IRREDUCIBLE_PRINCIPAL, nu=nu_q, support=full_support(eps), casimir=casimir)
    nu_h = HalfInteger.of(nu_q)
    if same_class_mod2(nu_h, eps):
        sub, quotient = discrete_minus(nu_q), discrete_plus(-nu_q)
    else:
        sub, quotient = discrete_plus(nu_q), discrete_minus(-nu_q)
    return ModuleClass(
        ModuleKind.REDUCIBLE_PRINCIPAL,
        nu=nu_q,
        support=full_support(eps),
        sub=sub,
        quotient=quotient,
        casimir=casimir,
    )


def vanishing_transitions(epsilon: HalfIntegerLike, nu: NuLike, bound: int) -> list[tuple[HalfInteger, str]]:
    """All (j, sign) with |j| <= bound and X_sign φ_j = 0, by direct evaluation."""
    eps = HalfInteger(HalfInteger.of(epsilon).residue_mod2)
    hits: list[tuple[HalfInteger, str]] = []
    for t in range(-2 * bound, 2 * bound + 1):
        j = HalfInteger(t)
        if not same_class_mod2(j, eps):
            continue
        vec = PrincipalSeriesVector.basis(eps, nu, j)
        if ps_apply(LieElement.XPLUS, vec).is_zero():
            hits.append((j, "+"))
        if ps_apply(LieElement.XMINUS, vec).is_zero():
            hits.append((j, "-"))
    return hits


def classify_form_module(k: HalfIntegerLike, lowering_nonzero: bool) -> ModuleClass:
    """ϖ(f, k) for a harmonic weak Maaß form f of half-integral weight k.

    L_k f = 0 gives ϖ⁺(k−1). Otherwise the module is a nonsplit extension
    0 → ϖ⁻(1−k) → ϖ → ϖ⁺(k−1) → 0 with K-types k + 2ℤ.
    """
    k = HalfInteger.of(k)
    if k.is_integral:
        raise WeightError(f"integral weight {k} is outside the half-integral classification")
    kq = k.value
    casimir = (kq - 1) ** 2 - 1
    plus = discrete_plus(kq - 1)
    if not lowering_nonzero:
        return ModuleClass(
            ModuleKind.DISCRETE_PLUS, nu=kq - 1, weight=k, support=plus.support, casimir=casimir, label="L_k f = 0"
        )
    logger.debug("classify weight=%s lowering=nonzero", k)
    return ModuleClass(
        ModuleKind.EXTENSION_MINUS_PLUS,
        nu=kq - 1,
        weight=k,
        support=full_support(k),
        sub=discrete_minus(1 - kq),
        quotient=plus,
        nonsplit=True,
        casimir=casimir,
        label="L_k f ≠ 0",
    )


def integral_weight_marker(k: HalfIntegerLike, label: str, lowering_nonzero: bool = True) -> ModuleClass:
    """Out-of-scope marker for integral weights. For weight 2 with L ≠ 0 the
    support {0} ∪ {2, 4, …} of case III (b) is attached."""
    k = HalfInteger.of(k)
    if not k.is_integral:
        raise WeightError(f"weight {k} is not integral")
    support = None
    if k == HalfInteger(4) and lowering_nonzero:
        support = KTypeSupport(residue=HalfInteger(0), lower=HalfInteger(4), isolated=(HalfInteger(0),))
    return ModuleClass(
        ModuleKind.OUT_OF_SCOPE,
        weight=k,
        support=support,
        label=label,
        note="integral weights follow the nine cases of the SL₂(ℝ) classification",
    )


# -- Lie algebra matrices and functions on Mp₁(ℝ) ---------------------------------------


def lie_matrix(x: Union[LieElement, str]) -> np.ndarray:
    """H, X_± as trace-zero complex 2×2 matrices; Casimir as H² + 2X₊X₋ + 2X₋X₊."""
    x = LieElement(x)
    if x is LieElement.H:
        return 1j * np.array([[0, -1], [1, 0]], dtype=complex)
    if x is LieElement.XPLUS:
        return 0.5 * np.array([[1, 1j], [1j, -1]], dtype=complex)
    if x is LieElement.XMINUS:
        return 0.5 * np.array([[1, -1j], [-1j, -1]], dtype=complex)
    h, xp, xm = (lie_matrix(e) for e in (LieElement.H, LieElement.XPLUS, LieElement.XMINUS))
    return h @ h + 2 * xp @ xm + 2 * xm @ xp


def principal_series_value(j: HalfIntegerLike, nu: float | complex, x) -> complex:
    """φ_j(x) = s^{2ε}·a^{ν+1}·e^{ijθ} for x = n(b)m(a, s)k(θ), with the sign
    factor trivial since the decomposition picks s = +1."""
    _, a, theta = nmk_parameters(x)
    jv = HalfInteger.of(j).twice_value / 2
    return a ** (nu + 1) * cmath.exp(1j * jv * theta)


def pullback(f: Expansion, x: MetaplecticElement) -> complex:
    """f̃(x) = ω_x(i)^{−2k} f(g·i) for x = (g, ω). Right K-equivariant:
    f̃(x·k(θ)) = f̃(x)·e^{ikθ}."""
    k = f.require_weight()
    return omega(x, 1j) ** (-k.twice_value) * eval_numeric(f, act(x, 1j))
