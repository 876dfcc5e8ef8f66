"""Arithmetic in Mp₁(ℝ), the connected double cover of SL₂(ℝ).

An element is (g, ω) with ω holomorphic on ℍ and ω(τ)² = cτ + d. Since ℍ is
connected, ω = ±P where P is the principal square root of cτ + d (for c = 0,
d < 0 this is the constant i√|d|). We store g and that sign.
"""

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from mfhc.config import config
from mfhc.errors import DomainError, MfhcError, ParseError, SignDomainError
from mfhc.logging import get_logger

logger = get_logger("metaplectic")

Real = Union[Fraction, int, float]
Matrix = tuple[tuple[Real, Real], tuple[Real, Real]]

# float entries closer than this to an integer are snapped to it
SNAP_TOL = 1e-12
DET_TOL = 1e-12


def _snap(x: Real) -> Real:
    if isinstance(x, float):
        r = round(x)
        if abs(x - r) < SNAP_TOL:
            return int(r)
    return x


def _principal_root(c: Real, d: Real, tau: complex) -> complex:
    if c == 0:
        return complex(math.sqrt(d)) if d > 0 else 1j * math.sqrt(-d)
    return cmath.sqrt(complex(float(c) * tau + float(d)))


def _mat_mul(x: Matrix, y: Matrix) -> Matrix:
    (a, b), (c, d) = x
    (e, f), (g, h) = y
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


@dataclass(frozen=True)
class MetaplecticElement:
    """(g, ω) with g = [[a, b], [c, d]] and ω = branch·P."""

    a: Real
    b: Real
    c: Real
    d: Real
    branch: int = 1

    def __post_init__(self) -> None:
        if self.branch not in (1, -1):
            raise ValueError(f"branch must be ±1, got {self.branch}")
        det = self.a * self.d - self.b * self.c
        exact = all(isinstance(x, (int, Fraction)) for x in (self.a, self.b, self.c, self.d))
        if (exact and det != 1) or (not exact and abs(det - 1) > DET_TOL):
            raise DomainError(f"determinant {det} != 1")

    @property
    def matrix(self) -> Matrix:
        return ((self.a, self.b), (self.c, self.d))

    def __str__(self) -> str:
        return f"([[{self.a}, {self.b}], [{self.c}, {self.d}]], {'+' if self.branch > 0 else '-'}√(cτ+d))"


def from_matrix(m: Matrix, branch: int = 1) -> MetaplecticElement:
    (a, b), (c, d) = m
    return MetaplecticElement(_snap(a), _snap(b), _snap(c), _snap(d), branch)


def identity() -> MetaplecticElement:
    return MetaplecticElement(1, 0, 0, 1, 1)


def central_minus_one() -> MetaplecticElement:
    """(I, −1), the nontrivial element of the kernel of the projection."""
    return MetaplecticElement(1, 0, 0, 1, -1)


def omega(x: MetaplecticElement, tau: complex) -> complex:
    return x.branch * _principal_root(x.c, x.d, tau)


def act(x: MetaplecticElement, tau: complex) -> complex:
    """Möbius action g·τ."""
    return (float(x.a) * tau + float(x.b)) / (float(x.c) * tau + float(x.d))


def _branch_of(m: Matrix, value: complex, tau: complex) -> int:
    """Sign s with value = s·P_m(τ)."""
    p = _principal_root(m[1][0], m[1][1], tau)
    scale = max(1.0, abs(p))
    plus, minus = abs(value - p), abs(value + p)
    if min(plus, minus) > config.BRANCH_TOL * scale:
        logger.debug("branch residual %.3e above tolerance at τ=%s", min(plus, minus), tau)
    return 1 if plus <= minus else -1


def multiply(x: MetaplecticElement, y: MetaplecticElement, tau: complex = 1j) -> MetaplecticElement:
    """(g, ω)(g′, ω′) = (gg′, τ ↦ ω(g′τ)ω′(τ)); the sign is read off at τ."""
    m = _mat_mul(x.matrix, y.matrix)
    value = omega(x, act(y, tau)) * omega(y, tau)
    return from_matrix(m, _branch_of(m, value, tau))


def inverse(x: MetaplecticElement) -> MetaplecticElement:
    """(g, ω)^{−1} = (g^{−1}, τ ↦ 1/ω(g^{−1}τ))."""
    m = ((x.d, -x.b), (-x.c, x.a))
    ginv = MetaplecticElement(*m[0], *m[1], 1)
    value = 1 / omega(x, act(ginv, 1j))
    return from_matrix(m, _branch_of(m, value, 1j))


def project(x: MetaplecticElement) -> Matrix:
    return x.matrix


def k_elem(theta: float) -> MetaplecticElement:
    """k(θ) with ω(i) = e^{−iθ/2}."""
    c, s = math.cos(theta), math.sin(theta)
    m = ((_snap(c), _snap(s)), (_snap(-s), _snap(c)))
    return from_matrix(m, _branch_of(m, cmath.exp(-0.5j * theta), 1j))


def m_elem(a: Real, s: Union[int, complex]) -> MetaplecticElement:
    """m(a, s) = (diag(a, a^{−1}), √(a^{−1})_s) with s = ±1 for a > 0 and s = ±i for a < 0."""
    if a == 0:
        raise DomainError("m(a, s) needs a != 0")
    d = Fraction(1) / a if isinstance(a, (int, Fraction)) else 1 / a
    if a > 0 and s in (1, -1):
        branch = int(s.real) if isinstance(s, complex) else s
    elif a < 0 and s in (1j, -1j):
        # √(a^{−1})_{±i} = ±i√|a^{−1}| and P = i√|a^{−1}|
        branch = 1 if s == 1j else -1
    else:
        raise SignDomainError(f"sign {s} does not match a = {a}")
    return MetaplecticElement(a, 0, 0, d, branch)


def n_elem(b: Real) -> MetaplecticElement:
    return MetaplecticElement(1, b, 0, 1, 1)


def nmk_parameters(x: MetaplecticElement) -> tuple[float, float, float]:
    """(b, a, θ) with x = n(b)·m(a, +1)·k(θ), a > 0, θ ∈ [0, 4π)."""
    z = act(x, 1j)
    a = math.sqrt(z.imag)
    b = z.real
    nm = multiply(n_elem(b), m_elem(a, 1))
    rest = multiply(inverse(nm), x)
    theta = math.atan2(float(rest.b), float(rest.a)) % (4 * math.pi)
    if k_elem(theta).branch != rest.branch:
        theta = (theta + 2 * math.pi) % (4 * math.pi)
    return b, a, theta


def nmk_decompose(x: MetaplecticElement) -> tuple[MetaplecticElement, MetaplecticElement, MetaplecticElement]:
    b, a, theta = nmk_parameters(x)
    return n_elem(b), m_elem(a, 1), k_elem(theta)


def _close_matrix(m: Matrix, n: Matrix, tol: float) -> bool:
    return all(abs(float(m[i][j]) - float(n[i][j])) <= tol for i in range(2) for j in range(2))


def is_close(x: MetaplecticElement, y: MetaplecticElement, tol: float = 1e-12) -> bool:
    """Same sign and matrices within tol entrywise."""
    return x.branch == y.branch and _close_matrix(x.matrix, y.matrix, tol)


def compose(*elements: MetaplecticElement) -> MetaplecticElement:
    out = identity()
    for e in elements:
        out = multiply(out, e)
    return out


def parse_element(text: str) -> MetaplecticElement:
    """"id", "n:2", "k:1.5707963", "m:2:+1", "m:-1:i", "m:-1:-i"."""
    parts = [p.strip() for p in text.strip().split(":")]
    try:
        if parts == ["id"]:
            return identity()
        if parts[0] == "n" and len(parts) == 2:
            return n_elem(_parse_real(parts[1]))
        if parts[0] == "k" and len(parts) == 2:
            return k_elem(float(parts[1]))
        if parts[0] == "m" and len(parts) == 3:
            signs = {"+1": 1, "1": 1, "-1": -1, "i": 1j, "+i": 1j, "-i": -1j}
            if parts[2] not in signs:
                raise ParseError(f"unknown sign {parts[2]!r}")
            return m_elem(_parse_real(parts[1]), signs[parts[2]])
    except MfhcError:
        raise
    except ValueError as exc:
        raise ParseError(f"malformed element {text!r}: {exc}") from exc
    raise ParseError(f"malformed element {text!r}")


def _parse_real(text: str) -> Real:
    try:
        return Fraction(text)
    except ValueError:
        return float(text)
