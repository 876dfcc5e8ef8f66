"""Number-theoretic and special-function kernels.

Divisor sums, Hurwitz class numbers by reduced-form enumeration, incomplete
gamma (mpmath), β₃⁄₂, the real-valued W_k and the unary theta series.
"""

import cmath
import math
from concurrent.futures import ProcessPoolExecutor, as_completed
from fractions import Fraction
from typing import Union

import mpmath

from mfhc.config import config
from mfhc.errors import DomainError, WeightError
from mfhc.logging import get_logger
from mfhc.services.coefficient import HalfInteger
from mfhc.utils.numbers import factorial, is_squarefree

logger = get_logger("arith")

RealOrHalf = Union[HalfInteger, int, float, Fraction]

# e^{-2πN²v} < 1e-14  ⇔  N² > 34/(2πv) (ln 1e14 ≈ 32.2, rounded up)
THETA_TAIL_EXPONENT = 34.0


def sigma1(n: int) -> int:
    """Σ_{d|n} d."""
    if n <= 0:
        raise DomainError(f"sigma1 needs n >= 1, got {n}")
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d
            if d * d != n:
                total += n // d
        d += 1
    return total


def divisors(n: int) -> list[int]:
    if n <= 0:
        raise DomainError(f"divisors needs n >= 1, got {n}")
    return [d for d in range(1, n + 1) if n % d == 0]


def reduced_forms(D: int) -> list[tuple[int, int, int]]:
    """Reduced positive-definite forms (a, b, c) with b² − 4ac = −D.

    Reduced means |b| <= a <= c, and b >= 0 whenever a = c or |b| = a.
    Non-primitive forms are included (Hurwitz counts all classes).
    """
    if D <= 0:
        return []
    forms: list[tuple[int, int, int]] = []
    a = 1
    while 3 * a * a <= D:
        for b in range(-a + 1, a + 1):
            if (b * b + D) % (4 * a):
                continue
            c = (b * b + D) // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            forms.append((a, b, c))
        a += 1
    return forms


def _class_weight(form: tuple[int, int, int]) -> Fraction:
    a, b, c = form
    if b == 0 and a == c:
        return Fraction(1, 2)
    if a == b == c:
        return Fraction(1, 3)
    return Fraction(1)


def hurwitz(D: int) -> Fraction:
    """Hurwitz class number H(D). H(0) = −1/12; zero off discriminants."""
    if D < 0:
        raise DomainError(f"hurwitz needs D >= 0, got {D}")
    if D == 0:
        return Fraction(-1, 12)
    if D % 4 in (1, 2):
        return Fraction(0)
    return sum((_class_weight(f) for f in reduced_forms(D)), Fraction(0))


def hurwitz_table(d_max: int, workers: int | None = None) -> dict[int, Fraction]:
    """H(D) for 0 <= D <= d_max. workers > 1 fans out over processes."""
    if d_max < 0:
        raise DomainError(f"d_max must be >= 0, got {d_max}")
    workers = config.WORKERS if workers is None else workers
    table: dict[int, Fraction] = {}
    if workers <= 1:
        for D in range(d_max + 1):
            table[D] = hurwitz(D)
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            futures = {ex.submit(hurwitz, D): D for D in range(d_max + 1)}
            for fut in as_completed(futures):
                table[futures[fut]] = fut.result()
    logger.info("hurwitz_table d_max=%d workers=%d", d_max, workers)
    return dict(sorted(table.items()))


def kronecker_hurwitz_sides(n: int) -> tuple[Fraction, int]:
    """(Σ_{r∈ℤ} H(4n − r²), Σ_{d|n} max(d, n/d)); the two agree for n >= 1."""
    if n <= 0:
        raise DomainError(f"n must be >= 1, got {n}")
    left = Fraction(0)
    r = 0
    while r * r <= 4 * n:
        h = hurwitz(4 * n - r * r)
        left += h if r == 0 else 2 * h
        r += 1
    right = sum(max(d, n // d) for d in divisors(n))
    return left, right


def is_fundamental_discriminant(delta: int) -> bool:
    """Δ ≡ 1 (4) squarefree, or Δ = 4m with m ≡ 2, 3 (4) squarefree. Δ = 0, 1 excluded."""
    if delta in (0, 1):
        return False
    if delta % 4 == 1:
        return is_squarefree(abs(delta))
    if delta % 4 == 0:
        m = delta // 4
        return m % 4 in (2, 3) and is_squarefree(abs(m))
    return False


def pochhammer(x: Fraction | int, r: int) -> Fraction:
    """(x)_r = x(x+1)⋯(x+r−1); (x)_0 = 1."""
    if r < 0:
        raise DomainError(f"pochhammer needs r >= 0, got {r}")
    out = Fraction(1)
    for i in range(r):
        out *= Fraction(x) + i
    return out


def _s_value(s: RealOrHalf) -> mpmath.mpf:
    if isinstance(s, HalfInteger):
        return mpmath.mpf(s.twice_value) / 2
    if isinstance(s, Fraction):
        return mpmath.mpf(s.numerator) / s.denominator
    return mpmath.mpf(s)


def inc_gamma_mp(s: RealOrHalf, x) -> mpmath.mpc:
    """Γ(s, x) at mpmath precision. Negative x uses the principal branch
    x^s = |x|^s e^{iπs}, matching the symbolic derivative rules."""
    sv = _s_value(s)
    xv = mpmath.mpmathify(x)
    if xv == 0:
        if sv <= 0:
            raise DomainError(f"Γ({sv}, 0) diverges")
        return mpmath.gamma(sv)
    if mpmath.im(xv) == 0 and mpmath.re(xv) < 0:
        xv = mpmath.mpc(mpmath.re(xv), 0)
    return mpmath.gammainc(sv, xv)


def inc_gamma(s: RealOrHalf, x: float) -> float | complex:
    """Γ(s, x) = ∫_x^∞ e^{−t} t^{s−1} dt. Real for x > 0, complex for x < 0."""
    with mpmath.workdps(config.MP_DPS):
        value = inc_gamma_mp(s, x)
    if x >= 0:
        return float(mpmath.re(value))
    return complex(value)


def beta32(s: float) -> float:
    """β₃⁄₂(s) = ∫_1^∞ e^{−st} t^{−3/2} dt = √s·Γ(−½, s)."""
    if s < 0:
        raise DomainError(f"beta32 needs s >= 0, got {s}")
    if s == 0:
        return 2.0
    with mpmath.workdps(config.MP_DPS):
        return float(mpmath.sqrt(s) * inc_gamma_mp(HalfInteger(-1), s).real)


def beta32_by_quadrature(s: float) -> float:
    with mpmath.workdps(config.MP_DPS):
        return float(mpmath.quad(lambda t: mpmath.exp(-s * t) * t ** mpmath.mpf(-1.5), [1, 2, mpmath.inf]))


def w_kernel_correction(k: HalfInteger, x: float) -> complex:
    """Constant c with W_k(x) = Γ(1−k, −2x) + c: i(−1)^{1−k}π/(k−1)! for k >= 1
    and x > 0, zero otherwise (Γ(1−k, ·) is entire and real for k <= 0)."""
    k = HalfInteger.of(k)
    if not k.is_integral:
        raise WeightError(f"W_k correction needs integral k, got {k}")
    kk = k.floor()
    if kk >= 1 and x > 0:
        return 1j * (-1) ** (1 - kk) * math.pi / factorial(kk - 1)
    return 0j


def w_kernel(k: HalfInteger, x: float) -> float:
    """W_k(x) = Re Γ(1−k, −2x) for integral k, x != 0."""
    k = HalfInteger.of(k)
    if not k.is_integral:
        raise WeightError(f"w_kernel needs integral k, got {k}; use the gamma atom directly")
    if x == 0:
        raise DomainError("w_kernel needs x != 0")
    value = inc_gamma(1 - k, -2 * x)
    return (complex(value) + w_kernel_correction(k, x)).real


def theta_cutoff(v: float) -> int:
    return math.ceil(math.sqrt(THETA_TAIL_EXPONENT / (2 * math.pi * v))) + 2


def theta_eval(tau: complex) -> complex:
    """θ(τ) = Σ_{n∈ℤ} e^{2πin²τ}, truncated where the tail drops below 1e-14."""
    v = tau.imag
    if v <= 0:
        raise DomainError(f"theta_eval needs Im τ > 0, got {tau}")
    N = theta_cutoff(v)
    total = 1 + 0j
    for n in range(1, N + 1):
        total += 2 * cmath.exp(2j * math.pi * n * n * tau)
    return total
