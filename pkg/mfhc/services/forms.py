"""Concrete forms: E₂*, Zagier's E*₃⁄₂, the Shintani right-hand side and
numeric modularity/harmonicity checks.

E*₃⁄₂(τ) = Σ_{D>=0} H(D)q^D + (1/8π)v^{−1/2}
           + (1/4√π)·Σ_{n>=1} n·Γ(−½, 4πn²v)q^{−n²}.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import mpmath

from mfhc.config import config
from mfhc.errors import BadGroupElement, DomainError, NotFundamental, WeightError
from mfhc.logging import get_logger
from mfhc.services import arith, operators, qexp
from mfhc.services.coefficient import Coefficient, HalfInteger
from mfhc.services.diagrams import Diagram, ktype_diagram
from mfhc.services.hcmodule import ModuleClass, classify_form_module, integral_weight_marker
from mfhc.services.qexp import Expansion, make_expansion, term

logger = get_logger("forms")

IntMatrix = tuple[tuple[int, int], tuple[int, int]]

DEFAULT_SAMPLES = (1j, 0.5 + 1j, 0.1 + 1.2j, -0.3 + 1.5j, 0.25 + 2j)


def build_e2star(n_max: int) -> Expansion:
    """1 − 24Σ_{n<=n_max} σ₁(n)q^n − (3/π)v^{−1}, weight 2."""
    if n_max < 1:
        raise DomainError(f"n_max must be >= 1, got {n_max}")
    terms = [term(1), term(Coefficient.monomial(pi_exponent=-1, re=-3), v=-1)]
    terms += [term(-24 * arith.sigma1(n), q=n) for n in range(1, n_max + 1)]
    return make_expansion(terms, weight=2, window=(0, n_max))


def build_e32star(d_max: int, n_max: int) -> Expansion:
    if d_max < 1 or n_max < 1:
        raise DomainError(f"d_max and n_max must be >= 1, got {d_max}, {n_max}")
    table = arith.hurwitz_table(d_max)
    terms = [term(h, q=D) for D, h in table.items() if h != 0]
    terms.append(term(Coefficient.monomial(pi_exponent=-1, re=Fraction(1, 8)), v=Fraction(-1, 2)))
    half = HalfInteger(-1)
    for n in range(1, n_max + 1):
        c = Coefficient.monomial(pi_exponent=Fraction(-1, 2), re=Fraction(n, 4))
        terms.append(term(c, q=-n * n, gammas=[(half, n * n)]))
    logger.info("built e32star d_max=%d n_max=%d terms=%d", d_max, n_max, len(terms))
    return make_expansion(terms, weight=Fraction(3, 2), window=(-n_max * n_max, d_max))


def shintani_prefactor(delta: int) -> Coefficient:
    """12·H(|Δ|)/√|Δ| for a negative fundamental discriminant Δ."""
    if delta >= 0 or not arith.is_fundamental_discriminant(delta):
        raise NotFundamental(f"{delta} is not a negative fundamental discriminant")
    d = -delta
    return Coefficient.rational(12 * arith.hurwitz(d)) * Coefficient.sqrt(Fraction(1, d))


def shintani_rhs(delta: int, d_max: Optional[int] = None, n_max: Optional[int] = None) -> Expansion:
    """Evaluated Shintani lift of E₂*: (12·H(|Δ|)/√|Δ|)·E*₃⁄₂."""
    prefactor = shintani_prefactor(delta)
    d_max = config.DMAX if d_max is None else d_max
    n_max = config.NMAX if n_max is None else n_max
    return qexp.scale(build_e32star(d_max, n_max), prefactor)


def plus_space_violations(f: Expansion) -> list[Fraction]:
    """Holomorphic exponents D with D ≡ 1, 2 (mod 4) and nonzero coefficient."""
    return [
        t.q_power
        for t in f.terms
        if t.is_holomorphic_atom() and t.q_power.denominator == 1 and t.q_power.numerator % 4 in (1, 2)
    ]


def default_grid(center: complex = 0.1 + 1j, spacing: float = 0.05) -> list[complex]:
    """3×3 grid around center."""
    return [center + dx * spacing + 1j * dy * spacing for dx in (-1, 0, 1) for dy in (-1, 0, 1)]


def five_point_laplacian(f: Expansion, tau: complex, h: float) -> complex:
    """Δ_k f(τ) from f at τ, τ ± h and τ ± ih."""
    k = f.require_weight().value
    with mpmath.workdps(config.MP_DPS):
        t = mpmath.mpc(tau.real, tau.imag)
        step = mpmath.mpf(h)
        ih = mpmath.mpc(0, step)
        f0 = qexp.eval_mp(f, t)
        fu_p, fu_m = qexp.eval_mp(f, t + step), qexp.eval_mp(f, t - step)
        fv_p, fv_m = qexp.eval_mp(f, t + ih), qexp.eval_mp(f, t - ih)
        partials = {
            (0, 0): f0,
            (1, 0): (fu_p - fu_m) / (2 * step),
            (0, 1): (fv_p - fv_m) / (2 * step),
            (2, 0): (fu_p - 2 * f0 + fu_m) / step**2,
            (0, 2): (fv_p - 2 * f0 + fv_m) / step**2,
        }
    return operators.operator_from_partials("laplacian", k, tau.imag, partials)


def harmonicity_residual(f: Expansion, taus: Iterable[complex], h: Optional[float] = None) -> float:
    """max |Δ_k f(τ)| by 5-point finite differences."""
    f.require_weight()
    h = config.LAPLACE_STEP if h is None else h
    points = list(taus)
    if any(t.imag <= 0 for t in points):
        raise DomainError("harmonicity_residual needs Im τ > 0")
    # sequential: mpmath precision is process-global state
    values = [abs(five_point_laplacian(f, t, h)) for t in points]
    return max(values, default=0.0)


def _check_gamma0_4(gamma: Sequence[Sequence[int]]) -> IntMatrix:
    try:
        (a, b), (c, d) = gamma
    except (TypeError, ValueError):
        raise BadGroupElement(f"expected a 2×2 matrix, got {gamma!r}") from None
    if not all(isinstance(x, int) and not isinstance(x, bool) for x in (a, b, c, d)):
        raise BadGroupElement(f"entries must be integers, got {gamma!r}")
    if a * d - b * c != 1:
        raise BadGroupElement(f"determinant {a * d - b * c} != 1")
    if c % 4:
        raise BadGroupElement(f"c = {c} is not divisible by 4; not in Γ₀(4)")
    return (a, b), (c, d)


@dataclass(frozen=True)
class TransformationResult:
    max_deviation: float
    deviations: tuple[float, ...]
    samples: tuple[complex, ...]


def transformation_check(
    f: Expansion, gamma: Sequence[Sequence[int]], taus: Iterable[complex] = DEFAULT_SAMPLES
) -> TransformationResult:
    """|f(γτ) − (θ(γτ)/θ(τ))^{2k} f(τ)| / |f(τ)| over the samples."""
    (a, b), (c, d) = _check_gamma0_4(gamma)
    k = f.require_weight()
    if k.twice_value not in (1, 3):
        raise WeightError(f"transformation_check handles weights 1/2 and 3/2, got {k}")
    samples = tuple(taus)
    devs = []
    for tau in samples:
        if tau.imag <= 0:
            raise DomainError(f"sample {tau} is not in the upper half plane")
        gt = (a * tau + b) / (c * tau + d)
        lhs = qexp.eval_numeric(f, gt)
        base = qexp.eval_numeric(f, tau)
        rhs = (arith.theta_eval(gt) / arith.theta_eval(tau)) ** k.twice_value * base
        devs.append(abs(lhs - rhs) / abs(base))
        logger.debug("transformation τ=%s deviation=%.3e", tau, devs[-1])
    return TransformationResult(max(devs, default=0.0), tuple(devs), samples)


# -- classification of the worked examples -------------------------------------

EXAMPLE_TAGS = ("e2star", "e32star", "weakly_holomorphic_half")

INTRO_CAPTIONS = {
    "e2star": "L_2 f ≠ 0, Δ_2 f = 0.",
    "e32star": "L_{3/2} f ≠ 0, Δ_{3/2} f = 0.",
}


def example_form(tag: str) -> Expansion:
    if tag == "e2star":
        return build_e2star(10)
    if tag == "e32star":
        return build_e32star(40, 4)
    if tag == "weakly_holomorphic_half":
        # q^{-1} + 2 + q: shape of a weight-½ weakly holomorphic input
        return make_expansion([term(1, q=-1), term(2), term(1, q=1)], weight=Fraction(1, 2))
    raise ValueError(f"unknown example {tag!r}; expected one of {EXAMPLE_TAGS}")


def classify_expansion(f: Expansion, label: str = "") -> ModuleClass:
    """Module class from the symbolic nonvanishing of L_k f."""
    k = f.require_weight()
    lowering_nonzero = not operators.lowering(f).is_zero()
    if k.is_integral:
        return integral_weight_marker(k, label or "integral weight", lowering_nonzero)
    return classify_form_module(k, lowering_nonzero)


def classify_example(tag: str) -> tuple[ModuleClass, Diagram]:
    f = example_form(tag)
    module = classify_expansion(f, "III (b)" if tag == "e2star" else "")
    diagram = ktype_diagram(module, caption=INTRO_CAPTIONS.get(tag))
    logger.info("classified example=%s kind=%s", tag, module.kind.value)
    return module, diagram
