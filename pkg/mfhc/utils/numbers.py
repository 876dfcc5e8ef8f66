"""Exact-string parsing and formatting for rationals. Floats are never accepted."""

import math
import re
from fractions import Fraction

from mfhc.errors import ParseError

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_fraction(text: str) -> Fraction:
    """Parse "3/2", "-1/2", "4" (unicode minus allowed). "1.5" is rejected."""
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {type(text).__name__}")
    m = _RATIONAL_RE.match(text.replace("−", "-"))
    if not m:
        raise ParseError(f"not an exact rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ParseError(f"zero denominator: {text!r}")
    return Fraction(num, den)


def format_fraction(x: Fraction | int) -> str:
    """Inverse of parse_fraction: "3/2", "-1/2", "4"."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def squarefree_split(n: int) -> tuple[int, int]:
    """Write n >= 1 as s^2 * r with r squarefree. Returns (s, r)."""
    if n < 1:
        raise ValueError(f"squarefree_split needs n >= 1, got {n}")
    s, r = 1, n
    p = 2
    while p * p <= r:
        while r % (p * p) == 0:
            r //= p * p
            s *= p
        p += 1 if p == 2 else 2
    return s, r


def is_squarefree(n: int) -> bool:
    return n >= 1 and squarefree_split(n)[0] == 1


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError(f"factorial of negative integer {n}")
    return math.factorial(n)
