"""Exact scalars: half-integers and the coefficient ring.

Coefficients are sympy expressions kept in expanded form over the Gaussian
rationals, spanned by monomials π^e·√d with e ∈ ½ℤ and d a squarefree positive
integer. That is enough for every constant in the expansions we handle:
(4πℓ)^s with s ∈ ½ℤ, factorials, Pochhammer values, 1/16π, √|Δ|.
The monomial view (2e, d, re, im) is what serialization and printing read.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Union

import mpmath
import sympy

from mfhc.errors import ParseError
from mfhc.utils.numbers import format_fraction, parse_fraction, squarefree_split


@dataclass(frozen=True, order=True)
class HalfInteger:
    """k ∈ ½ℤ stored as the integer 2k."""

    twice_value: int

    @classmethod
    def of(cls, x: "HalfIntegerLike") -> "HalfInteger":
        if isinstance(x, HalfInteger):
            return x
        if isinstance(x, str):
            return cls.parse(x)
        if isinstance(x, bool):
            raise TypeError("bool is not a half-integer")
        if isinstance(x, int):
            return cls(2 * x)
        if isinstance(x, Fraction):
            twice = 2 * x
            if twice.denominator != 1:
                raise ValueError(f"{x} is not in ½ℤ")
            return cls(twice.numerator)
        raise TypeError(f"cannot convert {type(x).__name__} to HalfInteger")

    @classmethod
    def parse(cls, text: str) -> "HalfInteger":
        value = parse_fraction(text)
        if (2 * value).denominator != 1:
            raise ParseError(f"not a half-integer: {text!r}")
        return cls((2 * value).numerator)

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice_value, 2)

    @property
    def is_integral(self) -> bool:
        return self.twice_value % 2 == 0

    @property
    def is_half_integral(self) -> bool:
        """Strictly half-integral: k ∈ ½ + ℤ."""
        return self.twice_value % 2 == 1

    @property
    def residue_mod2(self) -> int:
        """2k mod 4, i.e. the class of k in ½ℤ/2ℤ encoded as 0, 1, 2, 3."""
        return self.twice_value % 4

    def floor(self) -> int:
        return self.twice_value // 2

    def to_sympy(self) -> sympy.Rational:
        return sympy.Rational(self.twice_value, 2)

    def __add__(self, other: "HalfIntegerLike") -> "HalfInteger":
        return HalfInteger(self.twice_value + HalfInteger.of(other).twice_value)

    __radd__ = __add__

    def __sub__(self, other: "HalfIntegerLike") -> "HalfInteger":
        return HalfInteger(self.twice_value - HalfInteger.of(other).twice_value)

    def __rsub__(self, other: "HalfIntegerLike") -> "HalfInteger":
        return HalfInteger(HalfInteger.of(other).twice_value - self.twice_value)

    def __neg__(self) -> "HalfInteger":
        return HalfInteger(-self.twice_value)

    def __mul__(self, n: int) -> "HalfInteger":
        if not isinstance(n, int):
            return NotImplemented
        return HalfInteger(self.twice_value * n)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return format_fraction(self.value)

    def __repr__(self) -> str:
        return f"HalfInteger({self})"


HalfIntegerLike = Union[HalfInteger, int, Fraction, str]

# (pi2, radicand, re, im): (re + i·im)·π^{pi2/2}·√radicand
Monomial = tuple[int, int, Fraction, Fraction]

Scalar = Union["Coefficient", int, Fraction]


def _q(x: int | Fraction) -> sympy.Rational:
    x = Fraction(x)
    return sympy.Rational(x.numerator, x.denominator)


def _fraction(r: sympy.Rational) -> Fraction:
    return Fraction(int(r.p), int(r.q))


def _split_term(t: sympy.Expr) -> tuple[int, int, Fraction, bool]:
    """One product of the expanded form as (pi2, radicand, scalar, imaginary)."""
    number, rest = t.as_coeff_Mul()
    if not number.is_Rational:
        raise ArithmeticError(f"{t} has a non-rational coefficient")
    scalar = _fraction(number)
    pi2 = 0
    radicand = 1
    imaginary = False
    for factor in sympy.Mul.make_args(rest):
        if factor is sympy.S.One:
            continue
        if factor is sympy.I:
            imaginary = not imaginary
            continue
        if factor.is_Rational:
            scalar *= _fraction(factor)
            continue
        base, exp = factor.as_base_exp()
        if base is sympy.pi and exp.is_Rational and exp.q in (1, 2):
            pi2 += int(2 * exp)
            continue
        if base.is_Rational and base.is_positive and exp.is_Rational and exp.q == 2:
            # b^{n/2} = b^{(n−1)/2}·√(pq)/q for b = p/q
            b = _fraction(base)
            scalar *= b ** ((int(exp.p) - 1) // 2) / b.denominator
            radicand *= b.numerator * b.denominator
            continue
        raise ArithmeticError(f"factor {factor} is outside the coefficient ring")
    s, r = squarefree_split(radicand)
    return pi2, r, scalar * s, imaginary


def _monomials(expr: sympy.Expr) -> tuple[Monomial, ...]:
    acc: dict[tuple[int, int], tuple[Fraction, Fraction]] = {}
    for t in sympy.Add.make_args(expr):
        if t is sympy.S.Zero:
            continue
        pi2, d, scalar, imaginary = _split_term(t)
        re, im = acc.get((pi2, d), (Fraction(0), Fraction(0)))
        acc[(pi2, d)] = (re, im + scalar) if imaginary else (re + scalar, im)
    out = [(pi2, d, re, im) for (pi2, d), (re, im) in acc.items() if re or im]
    out.sort(key=lambda m: (m[0], m[1]))
    return tuple(out)


@lru_cache(maxsize=16384)
def _complex_value(expr: sympy.Expr) -> complex:
    return complex(expr)


@lru_cache(maxsize=16384)
def _decimal_parts(expr: sympy.Expr, dps: int) -> tuple[str, str]:
    re, im = expr.evalf(dps).as_real_imag()
    return str(re), str(im)


@dataclass(frozen=True, eq=False)
class Coefficient:
    """Exact element Σ (re + i·im)·π^{e}·√d backed by an expanded sympy expression.

    Equality and hashing go through the monomial view, so they do not depend on
    how sympy happens to group radicals.
    """

    expr: sympy.Expr = sympy.S.Zero
    monomials: tuple[Monomial, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        expr = sympy.expand(sympy.sympify(self.expr))
        object.__setattr__(self, "expr", expr)
        object.__setattr__(self, "monomials", _monomials(expr))

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "Coefficient":
        return cls(sympy.S.Zero)

    @classmethod
    def one(cls) -> "Coefficient":
        return cls(sympy.S.One)

    @classmethod
    def rational(cls, x: int | Fraction) -> "Coefficient":
        return cls(_q(x))

    @classmethod
    def gaussian(cls, re: int | Fraction, im: int | Fraction) -> "Coefficient":
        return cls(_q(re) + sympy.I * _q(im))

    @classmethod
    def i(cls) -> "Coefficient":
        return cls(sympy.I)

    @classmethod
    def monomial(
        cls,
        pi_exponent: HalfIntegerLike = 0,
        radicand: int = 1,
        re: int | Fraction = 1,
        im: int | Fraction = 0,
    ) -> "Coefficient":
        """(re + i·im)·π^{pi_exponent}·√radicand; sympy reduces the radicand."""
        if radicand < 1:
            raise ValueError(f"radicand must be positive, got {radicand}")
        e = HalfInteger.of(pi_exponent).to_sympy()
        return cls((_q(re) + sympy.I * _q(im)) * sympy.pi**e * sympy.sqrt(radicand))

    @classmethod
    def pi_power(cls, exponent: HalfIntegerLike) -> "Coefficient":
        return cls(sympy.pi ** HalfInteger.of(exponent).to_sympy())

    @classmethod
    def sqrt(cls, x: int | Fraction) -> "Coefficient":
        """√x for rational x > 0."""
        x = Fraction(x)
        if x <= 0:
            raise ValueError(f"sqrt needs a positive rational, got {x}")
        return cls(sympy.sqrt(_q(x)))

    @classmethod
    def from_rational_power(cls, base: int | Fraction, exponent: HalfIntegerLike) -> "Coefficient":
        """base^exponent for rational base != 0 and exponent ∈ ½ℤ.
        Negative bases take sympy's principal branch, (−1)^s = e^{iπs}."""
        base = Fraction(base)
        if base == 0:
            raise ValueError("0 has no half-integral powers here")
        return cls(_q(base) ** HalfInteger.of(exponent).to_sympy())

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.monomials

    def is_rational(self) -> bool:
        if self.is_zero():
            return True
        if len(self.monomials) != 1:
            return False
        pi2, d, _, im = self.monomials[0]
        return pi2 == 0 and d == 1 and im == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.monomials[0][2] if self.monomials else Fraction(0)

    def is_monomial(self) -> bool:
        return len(self.monomials) == 1

    def to_complex(self) -> complex:
        return _complex_value(self.expr)

    def to_mp(self) -> mpmath.mpc:
        """Value at the current mpmath precision."""
        re, im = _decimal_parts(self.expr, mpmath.mp.dps + 5)
        return mpmath.mpc(mpmath.mpf(re), mpmath.mpf(im))

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def coerce(x: Scalar) -> "Coefficient":
        if isinstance(x, Coefficient):
            return x
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            return Coefficient.rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Coefficient")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Coefficient):
            return NotImplemented
        return self.monomials == other.monomials

    def __hash__(self) -> int:
        return hash(self.monomials)

    def __add__(self, other: Scalar) -> "Coefficient":
        return Coefficient(self.expr + Coefficient.coerce(other).expr)

    __radd__ = __add__

    def __neg__(self) -> "Coefficient":
        return Coefficient(-self.expr)

    def __sub__(self, other: Scalar) -> "Coefficient":
        return Coefficient(self.expr - Coefficient.coerce(other).expr)

    def __rsub__(self, other: Scalar) -> "Coefficient":
        return Coefficient.coerce(other) - self

    def __mul__(self, other: Scalar) -> "Coefficient":
        return Coefficient(self.expr * Coefficient.coerce(other).expr)

    __rmul__ = __mul__

    def inverse(self) -> "Coefficient":
        """1/c. Monomials invert by c̄/|c|²; sums go through radsimp and must
        land back in the ring."""
        if self.is_zero():
            raise ZeroDivisionError("zero coefficient")
        conj = sympy.conjugate(self.expr)
        if self.is_monomial():
            return Coefficient(conj / sympy.expand(self.expr * conj))
        candidate = sympy.radsimp(1 / self.expr)
        try:
            inv = Coefficient(candidate)
        except ArithmeticError:
            raise ArithmeticError(f"{self} has no inverse in the coefficient ring") from None
        if inv * self != Coefficient.one():
            raise ArithmeticError(f"{self} has no inverse in the coefficient ring")
        return inv

    def __truediv__(self, other: Scalar) -> "Coefficient":
        return self * Coefficient.coerce(other).inverse()

    def __rtruediv__(self, other: Scalar) -> "Coefficient":
        return Coefficient.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "Coefficient":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        return Coefficient(self.expr**n)

    def conjugate(self) -> "Coefficient":
        return Coefficient(sympy.conjugate(self.expr))

    def __str__(self) -> str:
        if not self.monomials:
            return "0"
        parts = []
        for pi2, d, re, im in self.monomials:
            scalar = format_fraction(re) if im == 0 else f"({format_fraction(re)}{'+' if im >= 0 else '-'}{format_fraction(abs(im))}i)"
            factors = [scalar]
            if pi2:
                factors.append(f"π^{format_fraction(Fraction(pi2, 2))}")
            if d != 1:
                factors.append(f"√{d}")
            parts.append("·".join(factors))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Coefficient({self})"
