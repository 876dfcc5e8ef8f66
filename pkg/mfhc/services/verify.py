"""Property suites behind `mfhc verify`.

Each suite is a list of named checks. A check returns (passed, deviation,
detail); exceptions inside a check are recorded as failures.
"""

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from mfhc.config import config
from mfhc.errors import MfhcError
from mfhc.logging import get_logger
from mfhc.services import arith, forms, hcmodule, metaplectic, operators, qexp, weil
from mfhc.services.coefficient import Coefficient, HalfInteger, HalfIntegerLike
from mfhc.services.hcmodule import LieElement, ModuleKind, Order, PrincipalSeriesVector
from mfhc.services.qexp import Expansion, make_expansion, term

logger = get_logger("verify")

CheckResult = tuple[bool, float, str]


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    passed: bool
    deviation: float
    detail: str = ""
    elapsed_ms: float = 0.0


@dataclass
class SuiteReport:
    suite: str
    checks: list[CheckOutcome] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> int:
        return sum(not c.passed for c in self.checks)


# -- random inputs ----------------------------------------------------------------


def random_coefficient(rng: random.Random, gaussian: bool = True) -> Coefficient:
    re = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
    im = Fraction(rng.randint(-9, 9), rng.randint(1, 5)) if gaussian else Fraction(0)
    c = Coefficient.gaussian(re, im)
    return c if not c.is_zero() else Coefficient.one()


def random_fe_expansion(rng: random.Random, k: HalfIntegerLike, span: int = 3) -> Expansion:
    """Random expansion of harmonic Fourier-expansion shape, k != 1.

    For half-integral k only n < 0 gets a harmonic atom, so every gamma factor
    stays on the real branch.
    """
    k = HalfInteger.of(k)
    parts = [operators.nonholomorphic_constant_atom(k, random_coefficient(rng))]
    terms = [term(random_coefficient(rng), q=n) for n in range(-span, span + 1) if rng.random() < 0.7]
    parts.append(make_expansion(terms, weight=k, window=(-span, span)))
    for n in range(-span, span + 1):
        if n and (k.is_integral or n < 0) and rng.random() < 0.5:
            parts.append(operators.harmonic_atom(k, n, random_coefficient(rng)))
    out = make_expansion([], weight=k, window=(-span, span))
    for p in parts:
        out = qexp.add(out, make_expansion(p.terms, weight=k, window=(-span, span)))
    return out


def random_tau(rng: random.Random) -> complex:
    return complex(rng.uniform(-0.5, 0.5), rng.uniform(1.0, 1.5))


def random_element(rng: random.Random) -> metaplectic.MetaplecticElement:
    return metaplectic.compose(
        metaplectic.n_elem(rng.uniform(-2, 2)),
        metaplectic.m_elem(rng.uniform(0.5, 2), rng.choice((1, -1))),
        metaplectic.k_elem(rng.uniform(0, 4 * math.pi)),
    )


# -- operators --------------------------------------------------------------------

ANNIHILATION_WEIGHTS = (-6, -4, -2, 0, Fraction(1, 2), Fraction(3, 2), Fraction(5, 2), Fraction(-1, 2))


def check_termwise_harmonicity() -> CheckResult:
    failures = []
    for k in ANNIHILATION_WEIGHTS:
        atoms = [operators.nonholomorphic_constant_atom(k)]
        for n in range(-5, 6):
            atoms.append(make_expansion([term(1, q=n)], weight=k))
            if n:
                atoms.append(operators.harmonic_atom(k, n))
        failures += [str(a) for a in atoms if not operators.is_harmonic(a)]
    return not failures, float(len(failures)), "; ".join(failures[:3])


def check_flip_involution(count: int = 200, seed: int = 1) -> CheckResult:
    rng = random.Random(seed)
    bad = 0
    for i in range(count):
        f = random_fe_expansion(rng, -2 * (i % 4))
        if operators.flip(operators.flip(f)) != f:
            bad += 1
    return bad == 0, float(bad), f"{count} expansions"


def check_bol_routes(count: int = 50, seed: int = 2) -> CheckResult:
    rng = random.Random(seed)
    bad = 0
    for i in range(count):
        f = random_fe_expansion(rng, -(i % 4), span=2)
        if operators.bol(f).terms != operators.bol_via_raising(f).terms:
            bad += 1
    return bad == 0, float(bad), f"{count} expansions, k in 0..-3"


def relative_error(exact: complex, approx: complex) -> float:
    """|exact − approx|/|exact|, absolute only when exact is 0."""
    diff = abs(exact - approx)
    return diff if exact == 0 else diff / abs(exact)


COHERENCE_OPERATORS = ("raise", "lower", "laplacian", "xi", "d")
COHERENCE_WEIGHTS = (0, -2, Fraction(1, 2), Fraction(3, 2), Fraction(-1, 2))


def coherence_deviation(f: Expansion, names: tuple[str, ...], taus: list[complex]) -> float:
    """Worst relative error of the symbolic operators against mpmath.diff partials."""
    symbolic = {name: operators.apply_operator(name, f) for name in names}
    k = None if f.weight is None else f.weight.value
    worst = 0.0
    for tau in taus:
        p = operators.partials(f, tau)
        for name in names:
            exact = qexp.eval_numeric(symbolic[name], tau)
            approx = operators.operator_from_partials(name, k, tau.imag, p)
            worst = max(worst, relative_error(exact, approx))
    return worst


def check_coherence(points: int = 20, seed: int = 3) -> CheckResult:
    rng = random.Random(seed)
    worst = 0.0
    for k in COHERENCE_WEIGHTS:
        f = random_fe_expansion(rng, k, span=2)
        taus = [random_tau(rng) for _ in range(points)]
        worst = max(worst, coherence_deviation(f, COHERENCE_OPERATORS, taus))
    return worst <= config.FD_TOL, worst, f"{points} points per weight, k in {{0, -2, 1/2, 3/2, -1/2}}"


def check_sympy_derivatives(points: int = 3, seed: int = 9) -> CheckResult:
    """d_tau and d_taubar against sympy.diff of the closed form in u and v."""
    rng = random.Random(seed)
    worst = 0.0
    for k in (-2, Fraction(3, 2)):
        f = random_fe_expansion(rng, k, span=1)
        f = make_expansion([t for t in f.terms if all(ell > 0 for _, ell in t.gammas)], weight=k)
        closed = qexp.to_sympy(f)
        pairs = ((qexp.d_tau(f), qexp.sympy_d_tau(closed)), (qexp.d_taubar(f), qexp.sympy_d_taubar(closed)))
        for _ in range(points):
            tau = random_tau(rng)
            for ours, reference in pairs:
                worst = max(worst, relative_error(qexp.eval_sympy(reference, tau), qexp.eval_numeric(ours, tau)))
    return worst <= config.PRECISION, worst, f"{points} points, k in {{-2, 3/2}}"


# -- hcmodule ---------------------------------------------------------------------


def _random_vector(rng: random.Random) -> PrincipalSeriesVector:
    eps = HalfInteger(rng.choice((1, 3)))
    nu = Fraction(rng.randint(-20, 20), rng.randint(1, 6))
    combo = []
    for _ in range(3):
        j = HalfInteger(eps.twice_value + 4 * rng.randint(-5, 5))
        combo.append((j, random_coefficient(rng, gaussian=False)))
    return PrincipalSeriesVector(eps, Coefficient.rational(nu), tuple(combo))


def check_commutators(count: int = 25, seed: int = 4) -> CheckResult:
    rng = random.Random(seed)
    H, XP, XM = LieElement.H, LieElement.XPLUS, LieElement.XMINUS
    bad = 0
    for _ in range(count):
        vec = _random_vector(rng)
        ok = (
            hcmodule.commutator(XP, XM, vec) == hcmodule.ps_apply(H, vec)
            and hcmodule.commutator(H, XP, vec) == hcmodule.ps_apply(XP, vec).scale(2)
            and hcmodule.commutator(H, XM, vec) == hcmodule.ps_apply(XM, vec).scale(-2)
        )
        bad += not ok
    return bad == 0, float(bad), f"{count} vectors"


def check_casimir(count: int = 25, seed: int = 5) -> CheckResult:
    rng = random.Random(seed)
    bad = 0
    for _ in range(count):
        vec = _random_vector(rng)
        scalar = vec.scale(vec.nu * vec.nu - 1)
        forms_ = hcmodule.casimir_forms(vec) + (hcmodule.ps_apply(LieElement.CASIMIR, vec),)
        bad += any(f != scalar for f in forms_)
    for twice in (-5, -3, -1, 1, 3, 5, 7):
        k = HalfInteger(twice)
        for flag in (False, True):
            m = hcmodule.classify_form_module(k, flag)
            bad += m.casimir != (k.value - 1) ** 2 - 1
    return bad == 0, float(bad), "three forms and ν²−1; (k−1)²−1 on classified modules"


def check_lemma_eigenvalues(max_r: int = 20, count: int = 25, seed: int = 6) -> CheckResult:
    rng = random.Random(seed)
    bad = 0
    weights = [HalfInteger(2 * rng.randint(-10, 10) + 1) for _ in range(count)]
    for k in weights:
        nu = k.value - 1
        for r in range(1, max_r + 1):
            bad += hcmodule.lemma_eigenvalue(r, k, Order.DOWNUP) != hcmodule.ps_compose(r, k, nu, Order.DOWNUP)
            bad += hcmodule.lemma_eigenvalue(r, k, Order.UPDOWN) != hcmodule.ps_compose(r, k - 2, nu, Order.UPDOWN)
    return bad == 0, float(bad), f"r <= {max_r}, {len(weights)} weights"


def check_unique_transition(bound: int = 200) -> CheckResult:
    bad = 0
    for eps in (HalfInteger(1), HalfInteger(3)):
        for twice_nu in range(-9, 10, 2):
            hits = hcmodule.vanishing_transitions(eps, Fraction(twice_nu, 2), bound)
            bad += len(hits) != 1
    return bad == 0, float(bad), f"|j| <= {bound}"


DECOMPOSITION_NUS = (
    tuple(Fraction(t, 2) for t in range(-9, 10, 2))
    + tuple(Fraction(t, 3) for t in (-4, -2, -1, 1, 2, 4))
    + (Fraction(-2), Fraction(0), Fraction(1), Fraction(3))
)


def _partitions_support(m: hcmodule.ModuleClass, bound: int = 30) -> bool:
    full = set(m.support.members(-bound, bound))
    sub = set(m.sub.support.members(-bound, bound))
    quotient = set(m.quotient.support.members(-bound, bound))
    return sub | quotient == full and not sub & quotient


def check_decomposition_table() -> CheckResult:
    half = Fraction(1, 2)
    sequences = [
        (half, half, ModuleKind.DISCRETE_MINUS, half),
        (half, Fraction(3, 2), ModuleKind.DISCRETE_PLUS, Fraction(3, 2)),
    ]
    bad = 0
    for eps, nu, sub_kind, sub_nu in sequences:
        m = hcmodule.ps_decompose(eps, nu)
        bad += m.kind is not ModuleKind.REDUCIBLE_PRINCIPAL or m.sub.kind is not sub_kind or m.sub.nu != sub_nu
    cases = 0
    for eps in (HalfInteger(1), HalfInteger(3)):
        for nu in DECOMPOSITION_NUS:
            cases += 1
            m = hcmodule.ps_decompose(eps, nu)
            # reducible exactly when ν ∈ ½ + ℤ
            if (2 * nu).denominator == 1 and (2 * nu).numerator % 2 == 1:
                bad += m.kind is not ModuleKind.REDUCIBLE_PRINCIPAL or not _partitions_support(m)
            else:
                bad += m.kind is not ModuleKind.IRREDUCIBLE_PRINCIPAL
    return bad == 0, float(bad), f"two sequences, {cases} cases"


def check_intro_examples() -> CheckResult:
    m32, _ = forms.classify_example("e32star")
    m2, d2 = forms.classify_example("e2star")
    ok = (
        m32.kind is ModuleKind.EXTENSION_MINUS_PLUS
        and m32.sub.nu == Fraction(-1, 2)
        and m32.quotient.nu == Fraction(1, 2)
        and m2.label == "III (b)"
        and d2.transition == "both"
    )
    return ok, 0.0 if ok else 1.0, "e32star extension, e2star III (b)"


# -- weil -------------------------------------------------------------------------

WEIL_FIXTURES = ("Z/2:1/4", "Z/3:1/3", "Z/4:1/8")


def _weil_fixture_check(text: str) -> Callable[[], CheckResult]:
    def run() -> CheckResult:
        report = weil.check_relations(weil.FiniteQuadraticModule.parse(text))
        failed = [c.name for c in report.checks if not c.passed]
        return report.passed, report.max_deviation, f"σ = e(−{report.eighth_root}/8)" if not failed else ", ".join(failed)

    return run


def check_milgram() -> CheckResult:
    bad = 0
    for level in (1, 2, 3, 5):
        for sign in (1, -1):
            sigma = weil.sigma_invariant(weil.rank_one_module(level, sign))
            bad += sigma.eighth_root != weil.milgram_eighth_root(level, sign)
    return bad == 0, float(bad), "rank-one lattices, levels 1, 2, 3, 5"


def check_corrupted_module_fails() -> CheckResult:
    corrupted = weil.FiniteQuadraticModule((2,), ((Fraction(1, 3),),))
    report = weil.check_relations(corrupted)
    return not report.passed, report.max_deviation, "negative control"


# -- shintani ---------------------------------------------------------------------


def shintani_checks(delta: int, d_max: Optional[int] = None, n_max: Optional[int] = None) -> list[tuple[str, Callable[[], CheckResult]]]:
    cache: dict[str, Expansion] = {}

    def rhs() -> Expansion:
        if "f" not in cache:
            cache["f"] = forms.shintani_rhs(delta, d_max, n_max)
        return cache["f"]

    def prefactor() -> CheckResult:
        c = forms.shintani_prefactor(delta)
        return True, 0.0, f"12·H(|Δ|)/√|Δ| = {c}"

    def harmonic() -> CheckResult:
        f = rhs()
        residue = operators.laplacian(f)
        return residue.is_zero(), float(len(residue.terms)), "symbolic Δ_{3/2}"

    def plus_space() -> CheckResult:
        bad = forms.plus_space_violations(rhs())
        return not bad, float(len(bad)), "holomorphic support D ≡ 0, 3 (mod 4)"

    def modularity() -> CheckResult:
        result = forms.transformation_check(rhs(), ((1, 0), (4, 1)))
        return result.max_deviation <= config.MODULARITY_TOL, result.max_deviation, "γ = [[1,0],[4,1]], 5 samples"

    def residual() -> CheckResult:
        grid = [complex(u, v) for u in (0.0, 0.3) for v in (1.0, 1.5, 2.0)]
        r = forms.harmonicity_residual(rhs(), grid)
        return r <= config.RESIDUAL_TOL, r, "v in [1, 2]"

    def kronecker_hurwitz() -> CheckResult:
        bad = [n for n in range(1, 51) if len(set(arith.kronecker_hurwitz_sides(n))) != 1]
        return not bad, float(len(bad)), "n <= 50"

    return [
        ("prefactor", prefactor),
        ("harmonic", harmonic),
        ("plus space", plus_space),
        ("gamma0(4) transformation", modularity),
        ("finite-difference residual", residual),
        ("kronecker-hurwitz", kronecker_hurwitz),
    ]


# -- metaplectic ------------------------------------------------------------------


def check_double_cover() -> CheckResult:
    k2 = metaplectic.k_elem(2 * math.pi)
    k4 = metaplectic.k_elem(4 * math.pi)
    z = metaplectic.k_elem(math.pi)
    z2 = metaplectic.multiply(z, z)
    z4 = metaplectic.multiply(z2, z2)
    ok = (
        metaplectic.is_close(k2, metaplectic.central_minus_one())
        and not metaplectic.is_close(k2, metaplectic.identity())
        and metaplectic.is_close(k4, metaplectic.identity())
        and metaplectic.is_close(z2, metaplectic.central_minus_one())
        and not metaplectic.is_close(z2, metaplectic.identity())
        and metaplectic.is_close(z4, metaplectic.identity())
    )
    return ok, 0.0 if ok else 1.0, "k(2π) = (I, −1), k(4π) = id; Z = k(π) has Z² = (I, −1), Z⁴ = id"


def scaled_tol(*xs: metaplectic.MetaplecticElement) -> float:
    scale = max(abs(float(v)) for x in xs for row in x.matrix for v in row)
    return 1e-12 * max(1.0, scale)


def check_associativity(count: int = 1000, seed: int = 7) -> CheckResult:
    rng = random.Random(seed)
    bad = 0
    for _ in range(count):
        x, y, z = random_element(rng), random_element(rng), random_element(rng)
        left = metaplectic.multiply(metaplectic.multiply(x, y), z)
        right = metaplectic.multiply(x, metaplectic.multiply(y, z))
        bad += not metaplectic.is_close(left, right, scaled_tol(left, right))
    return bad == 0, float(bad), f"{count} triples"


def check_nmk_roundtrip(count: int = 200, seed: int = 8) -> CheckResult:
    rng = random.Random(seed)
    bad = 0
    for _ in range(count):
        x = random_element(rng)
        back = metaplectic.compose(*metaplectic.nmk_decompose(x))
        bad += not metaplectic.is_close(x, back, scaled_tol(x, back))
    return bad == 0, float(bad), f"{count} elements"


# -- orchestration ----------------------------------------------------------------


def suite_checks(suite: str, delta: int = -3, d_max: Optional[int] = None, n_max: Optional[int] = None) -> list[tuple[str, Callable[[], CheckResult]]]:
    if suite == "operators":
        return [
            ("termwise harmonicity", check_termwise_harmonicity),
            ("flip involution", check_flip_involution),
            ("bol routes", check_bol_routes),
            ("symbolic-numeric coherence", check_coherence),
            ("sympy derivatives", check_sympy_derivatives),
        ]
    if suite == "hcmodule":
        return [
            ("commutators", check_commutators),
            ("casimir", check_casimir),
            ("lemma eigenvalues", check_lemma_eigenvalues),
            ("unique vanishing transition", check_unique_transition),
            ("decomposition table", check_decomposition_table),
            ("intro examples", check_intro_examples),
        ]
    if suite == "weil":
        checks = [(f"relations {text}", _weil_fixture_check(text)) for text in WEIL_FIXTURES]
        return checks + [("milgram", check_milgram), ("corrupted module fails", check_corrupted_module_fails)]
    if suite == "shintani":
        return shintani_checks(delta, d_max, n_max)
    if suite == "metaplectic":
        return [
            ("double cover", check_double_cover),
            ("associativity", check_associativity),
            ("nmk roundtrip", check_nmk_roundtrip),
        ]
    raise ValueError(f"unknown suite {suite!r}; expected one of {SUITES}")


SUITES = ("operators", "hcmodule", "weil", "shintani", "metaplectic")


def run_suite(suite: str, **kwargs) -> SuiteReport:
    report = SuiteReport(suite=suite)
    for name, fn in suite_checks(suite, **kwargs):
        start = time.perf_counter()
        try:
            passed, deviation, detail = fn()
        except MfhcError as exc:
            passed, deviation, detail = False, math.inf, f"{type(exc).__name__}: {exc}"
        elapsed = round((time.perf_counter() - start) * 1000, 2)
        report.checks.append(CheckOutcome(name, bool(passed), float(deviation), detail, elapsed))
        logger.debug("check suite=%s name=%s passed=%s", suite, name, passed)
    logger.info("suite=%s checks=%d failed=%d", suite, len(report.checks), report.failed)
    return report


def run_suites(suite: str, **kwargs) -> list[SuiteReport]:
    """'all' runs every suite in order."""
    names = SUITES if suite == "all" else (suite,)
    return [run_suite(name, **kwargs) for name in names]
