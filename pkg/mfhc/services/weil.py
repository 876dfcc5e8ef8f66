"""Finite quadratic modules and their Weil representation.

M = ⊕ ℤ/n_i with q(x) = Σ gram[i][j]·x_i·x_j mod 1. The representation space
has the elements of M as basis, enumerated lexicographically in generator
coordinates. Matrices are numpy complex arrays.
"""

import cmath
import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from mfhc.config import config
from mfhc.errors import DegenerateForm, ParseError
from mfhc.logging import get_logger
from mfhc.utils.numbers import format_fraction, parse_fraction

logger = get_logger("weil")

SIGMA_TOL = 1e-6
RECOGNITION_TOL = 1e-10
EXHAUSTIVE_LIMIT = 64

Element = tuple[int, ...]


def e(x: float | Fraction) -> complex:
    """e(x) = exp(2πix)."""
    return cmath.exp(2j * math.pi * float(x))


@dataclass(frozen=True)
class FiniteQuadraticModule:
    """Direct constructor skips validation; use from_generators or parse."""

    cyclic_orders: tuple[int, ...]
    q_gram: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_generators(cls, orders: list[int], q_values: list[Fraction]) -> "FiniteQuadraticModule":
        """Diagonal module: generator e_i of order n_i with q(e_i) = q_values[i]."""
        if len(orders) != len(q_values):
            raise ParseError("one q-value per cyclic factor")
        if any(n < 1 for n in orders):
            raise ParseError(f"cyclic orders must be positive, got {orders}")
        r = len(orders)
        gram = tuple(tuple(Fraction(q_values[i]) if i == j else Fraction(0) for j in range(r)) for i in range(r))
        fqm = cls(tuple(orders), gram)
        if not fqm.is_well_defined():
            raise DegenerateForm(f"q is not well defined on {fqm}")
        return fqm

    @classmethod
    def parse(cls, text: str) -> "FiniteQuadraticModule":
        """'Z/2:1/4 + Z/4:1/8'; 'trivial' or '' for the zero module."""
        text = text.strip()
        if text in ("", "trivial", "0"):
            return cls((), ())
        orders: list[int] = []
        values: list[Fraction] = []
        for part in text.split("+"):
            part = part.strip()
            head, sep, value = part.partition(":")
            if not sep or not head.startswith("Z/"):
                raise ParseError(f"malformed cyclic factor {part!r}; expected 'Z/n:q'")
            try:
                orders.append(int(head[2:]))
            except ValueError:
                raise ParseError(f"malformed order in {part!r}") from None
            values.append(parse_fraction(value))
        return cls.from_generators(orders, values)

    @property
    def order(self) -> int:
        return math.prod(self.cyclic_orders)

    def elements(self) -> list[Element]:
        return list(itertools.product(*(range(n) for n in self.cyclic_orders)))

    def q(self, x: Element) -> Fraction:
        r = len(self.cyclic_orders)
        total = sum(
            (self.q_gram[i][j] * x[i] * x[j] for i in range(r) for j in range(r)),
            Fraction(0),
        )
        return total % 1

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % n for a, b, n in zip(x, y, self.cyclic_orders))

    def bilinear(self, x: Element, y: Element) -> Fraction:
        """⟨x, y⟩ = q(x + y) − q(x) − q(y) mod 1."""
        return (self.q(self.add(x, y)) - self.q(x) - self.q(y)) % 1

    def is_well_defined(self) -> bool:
        """q(x + n_i e_i) = q(x) mod 1 for all x and i: n_i²·g_ii ∈ ℤ and 2n_i·g_ij ∈ ℤ."""
        r = len(self.cyclic_orders)
        for i, n in enumerate(self.cyclic_orders):
            if (n * n * self.q_gram[i][i]).denominator != 1:
                return False
            for j in range(r):
                if (2 * n * self.q_gram[i][j]).denominator != 1:
                    return False
        return True

    def __str__(self) -> str:
        if not self.cyclic_orders:
            return "trivial"
        return " + ".join(
            f"Z/{n}:{format_fraction(self.q_gram[i][i])}" for i, n in enumerate(self.cyclic_orders)
        )


def bilinearity_violations(fqm: FiniteQuadraticModule, samples: int = 500, seed: int = 0) -> int:
    """Count triples with ⟨x+y, z⟩ != ⟨x, z⟩ + ⟨y, z⟩ mod 1. Exhaustive for
    |M| <= 64, seeded random triples above."""
    elems = fqm.elements()
    if len(elems) <= EXHAUSTIVE_LIMIT:
        triples = itertools.product(elems, repeat=3)
    else:
        rng = random.Random(seed)
        triples = ((rng.choice(elems), rng.choice(elems), rng.choice(elems)) for _ in range(samples))
    bad = 0
    for x, y, z in triples:
        if (fqm.bilinear(fqm.add(x, y), z) - fqm.bilinear(x, z) - fqm.bilinear(y, z)) % 1 != 0:
            bad += 1
    return bad


def gauss_sum(fqm: FiniteQuadraticModule) -> complex:
    """(1/√#M)·Σ e(−q(m)), unchecked."""
    return sum((e(-fqm.q(m)) for m in fqm.elements()), 0j) / math.sqrt(fqm.order)


@dataclass(frozen=True)
class SigmaValue:
    value: complex
    eighth_root: Optional[int]  # j with σ = e(−j/8)


def recognize_eighth_root(z: complex, tol: float = RECOGNITION_TOL) -> Optional[int]:
    for j in range(8):
        if abs(z - e(Fraction(-j, 8))) <= tol:
            return j
    return None


def sigma_invariant(fqm: FiniteQuadraticModule) -> SigmaValue:
    """σ(D) = (1/√#M)·Σ_{m∈M} e(−q(m)); DegenerateForm if |σ| is not 1."""
    z = gauss_sum(fqm)
    if abs(abs(z) - 1) > SIGMA_TOL:
        raise DegenerateForm(f"|σ(D)| = {abs(z):.6g} for {fqm}")
    return SigmaValue(value=z, eighth_root=recognize_eighth_root(z))


def rho_T(fqm: FiniteQuadraticModule) -> np.ndarray:
    return np.diag([e(fqm.q(m)) for m in fqm.elements()]).astype(complex)


def _s_factor(fqm: FiniteQuadraticModule, normalization: str, sigma: complex) -> complex:
    if normalization == "relation":
        return sigma / math.sqrt(fqm.order)
    if normalization == "displayed":
        return 1 / (sigma * math.sqrt(fqm.order))
    raise ValueError(f"unknown normalization {normalization!r}; expected 'relation' or 'displayed'")


def rho_S(fqm: FiniteQuadraticModule, normalization: str = "relation", sigma: Optional[complex] = None) -> np.ndarray:
    """ρ(S)e_m = c·Σ_{m′} e(−⟨m, m′⟩)e_{m′} with c = σ(D)/√#M ("relation")
    or c = 1/(σ(D)√#M) ("displayed")."""
    if sigma is None:
        sigma = sigma_invariant(fqm).value
    elems = fqm.elements()
    kernel = np.array([[e(-fqm.bilinear(m, mp)) for m in elems] for mp in elems], dtype=complex)
    return _s_factor(fqm, normalization, sigma) * kernel


def rho_Z(fqm: FiniteQuadraticModule, normalization: str = "relation") -> np.ndarray:
    """Image of the central element Z = S²."""
    s = rho_S(fqm, normalization)
    return s @ s


@dataclass(frozen=True)
class RelationCheck:
    name: str
    deviation: float
    passed: bool


@dataclass(frozen=True)
class RelationReport:
    module: str
    normalization: str
    sigma: complex
    eighth_root: Optional[int]
    checks: tuple[RelationCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_deviation(self) -> float:
        return max((c.deviation for c in self.checks), default=0.0)


def _dev(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b))) if a.size else 0.0


def check_relations(fqm: FiniteQuadraticModule, normalization: str = "relation", tol: Optional[float] = None) -> RelationReport:
    """Relations of Mp₁(ℤ) in ρ_D. Failures are report entries, never exceptions."""
    tol = config.PRECISION if tol is None else tol
    checks: list[RelationCheck] = []

    sigma = gauss_sum(fqm)
    sigma_dev = abs(abs(sigma) - 1)
    checks.append(RelationCheck("|sigma| = 1", sigma_dev, sigma_dev <= SIGMA_TOL))
    root = recognize_eighth_root(sigma) if sigma_dev <= SIGMA_TOL else None
    checks.append(RelationCheck("sigma eighth root", 0.0 if root is not None else sigma_dev, root is not None))

    bad = bilinearity_violations(fqm)
    checks.append(RelationCheck("bilinear form", float(bad), bad == 0))

    t = rho_T(fqm)
    s = rho_S(fqm, normalization, sigma=sigma)
    ident = np.eye(fqm.order, dtype=complex)
    st = s @ t
    s2 = s @ s
    pairs = [
        ("S unitary", s @ s.conj().T, ident),
        ("S symmetric", s, s.T),
        ("T unit diagonal", np.abs(np.diag(t)), np.ones(fqm.order)),
        ("(ST)^3 = S^2", st @ st @ st, s2),
        ("S^8 = I", np.linalg.matrix_power(s, 8), ident),
        ("S^2 T = T S^2", s2 @ t, t @ s2),
    ]
    for name, lhs, rhs in pairs:
        d = _dev(lhs, rhs)
        checks.append(RelationCheck(name, d, d <= tol))

    report = RelationReport(
        module=str(fqm),
        normalization=normalization,
        sigma=sigma,
        eighth_root=root,
        checks=tuple(checks),
    )
    logger.info(
        "weil module=%s normalization=%s checks=%d failed=%d",
        fqm,
        normalization,
        len(checks),
        sum(not c.passed for c in checks),
    )
    return report


def milgram_eighth_root(level: int, sign: int) -> int:
    """Expected j for the discriminant form of the rank-one lattice (ℤ, sign·level·x²):
    M = ℤ/2level, q(x) = sign·x²/(4level), signature sign, σ = e(−sign/8)."""
    if sign not in (1, -1):
        raise ValueError(f"sign must be ±1, got {sign}")
    return sign % 8


def rank_one_module(level: int, sign: int = 1) -> FiniteQuadraticModule:
    return FiniteQuadraticModule.from_generators([2 * level], [Fraction(sign, 4 * level)])
