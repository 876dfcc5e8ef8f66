"""Error hierarchy. Every error is a ValueError so callers can catch broadly."""


class MfhcError(ValueError):
    """Base class for all mfhc errors."""


class DomainError(MfhcError):
    """Argument outside the domain of a function (Im τ <= 0, n <= 0, ...)."""


class WeightError(MfhcError):
    """Weight missing or outside the range an operator is defined for."""


class ShapeError(MfhcError):
    """Expansion has atoms outside the harmonic Fourier-expansion shape."""


class NonRealGammaBranch(MfhcError):
    """Conjugation of Γ(s, 4πℓv) with ℓ < 0 (complex branch) is not defined."""


class TruncationError(MfhcError):
    """Term frequency outside the declared truncation window."""


class LogWeightUnsupported(MfhcError):
    """Weight-1 non-holomorphic parts need a -log(v) atom, which is not represented."""


class SignDomainError(MfhcError):
    """Sign choice s does not match the sign of a in m(a, s)."""


class DegenerateForm(MfhcError):
    """|σ(D)| != 1: the quadratic form is degenerate or not well defined."""


class NotFundamental(MfhcError):
    """Discriminant is not a negative fundamental discriminant."""


class BadGroupElement(MfhcError):
    """Matrix is not in Γ₀(4) (or not in SL₂(ℤ))."""


class ParseError(MfhcError):
    """Malformed textual input (weights, modules, elements)."""
