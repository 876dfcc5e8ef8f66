"""Pydantic schemas for expansions. Every exact number is an exact string.

Input also takes the compact form

    {"weight": "3/2", "truncation": [-1, 100],
     "terms": [{"coeff": [["2π", "r=1", "d=1", "re=2", "im=0"]],
                "v": "−1/2", "q": "4", "qbar": "0", "gammas": [["−1/2", "4"]]}]}

where a tagged coefficient reads (re + i·im)·base^r·√d and base is a rational
optionally followed by π. Output always uses the object form.
"""

from fractions import Fraction
from typing import Annotated, Any

from pydantic import BaseModel, BeforeValidator, ConfigDict, field_validator

from mfhc.errors import ParseError
from mfhc.services.coefficient import Coefficient, HalfInteger
from mfhc.services.qexp import AnalyticTerm, Expansion, make_expansion
from mfhc.utils.numbers import format_fraction, parse_fraction


def _exact(value: Any) -> Any:
    # ints are exact; floats are left for pydantic to reject
    return str(value) if isinstance(value, int) and not isinstance(value, bool) else value


ExactStr = Annotated[str, BeforeValidator(_exact)]


class MonomialOut(BaseModel):
    """(re + i·im)·π^{pi}·√d."""

    model_config = ConfigDict(extra="forbid")

    pi: str
    d: int
    re: str
    im: str


class GammaOut(BaseModel):
    """Γ(s, 4π·ell·v)."""

    model_config = ConfigDict(extra="forbid")

    s: ExactStr
    ell: ExactStr


def parse_tagged_monomial(parts: list[str]) -> list[MonomialOut]:
    """["2π", "r=1", "d=1", "re=2", "im=0"] as monomials."""
    if not parts:
        raise ParseError("empty coefficient entry")
    base, tags = str(parts[0]).strip(), {}
    for item in parts[1:]:
        key, sep, value = str(item).partition("=")
        if not sep or key.strip() not in ("r", "d", "re", "im"):
            raise ParseError(f"bad coefficient tag {item!r}")
        tags[key.strip()] = value.strip()
    has_pi = base.endswith("π")
    scale_text = base[:-1] if has_pi else base
    scale = parse_fraction(scale_text) if scale_text else Fraction(1)
    r = HalfInteger.parse(tags.get("r", "1"))
    d = int(tags.get("d", "1"))
    c = Coefficient.gaussian(parse_fraction(tags.get("re", "1")), parse_fraction(tags.get("im", "0")))
    c = c * Coefficient.from_rational_power(scale, r) * Coefficient.sqrt(d)
    if has_pi:
        c = c * Coefficient.pi_power(r)
    return coefficient_to_model(c)


class TermOut(BaseModel):
    model_config = ConfigDict(extra="forbid")

    coeff: list[MonomialOut]
    v: ExactStr
    q: ExactStr
    qbar: ExactStr
    gammas: list[GammaOut]

    @field_validator("coeff", mode="before")
    @classmethod
    def tagged_coeff(cls, value: Any) -> Any:
        if not isinstance(value, list):
            return value
        out: list[Any] = []
        for item in value:
            out.extend(parse_tagged_monomial(item) if isinstance(item, (list, tuple)) else [item])
        return out

    @field_validator("gammas", mode="before")
    @classmethod
    def gamma_pairs(cls, value: Any) -> Any:
        if not isinstance(value, list):
            return value
        return [{"s": g[0], "ell": g[1]} if isinstance(g, (list, tuple)) and len(g) == 2 else g for g in value]


class ExpansionOut(BaseModel):
    model_config = ConfigDict(extra="forbid")

    weight: str | None
    truncation: tuple[ExactStr, ExactStr]
    terms: list[TermOut]


def coefficient_to_model(c: Coefficient) -> list[MonomialOut]:
    return [
        MonomialOut(pi=format_fraction(Fraction(pi2, 2)), d=d, re=format_fraction(re), im=format_fraction(im))
        for pi2, d, re, im in c.monomials
    ]


def coefficient_from_model(monomials: list[MonomialOut]) -> Coefficient:
    out = Coefficient.zero()
    for m in monomials:
        out = out + Coefficient.monomial(
            pi_exponent=HalfInteger.parse(m.pi), radicand=m.d, re=parse_fraction(m.re), im=parse_fraction(m.im)
        )
    return out


def expansion_to_model(e: Expansion) -> ExpansionOut:
    return ExpansionOut(
        weight=None if e.weight is None else str(e.weight),
        truncation=(format_fraction(e.window[0]), format_fraction(e.window[1])),
        terms=[
            TermOut(
                coeff=coefficient_to_model(t.coeff),
                v=str(t.v_power),
                q=format_fraction(t.q_power),
                qbar=format_fraction(t.qbar_power),
                gammas=[GammaOut(s=str(s), ell=format_fraction(ell)) for s, ell in t.gammas],
            )
            for t in e.terms
        ],
    )


def expansion_from_model(m: ExpansionOut) -> Expansion:
    terms = [
        AnalyticTerm(
            coeff=coefficient_from_model(t.coeff),
            v_power=HalfInteger.parse(t.v),
            q_power=parse_fraction(t.q),
            qbar_power=parse_fraction(t.qbar),
            gammas=tuple((HalfInteger.parse(g.s), parse_fraction(g.ell)) for g in t.gammas),
        )
        for t in m.terms
    ]
    truncation = (parse_fraction(m.truncation[0]), parse_fraction(m.truncation[1]))
    return make_expansion(terms, weight=None if m.weight is None else HalfInteger.parse(m.weight), window=truncation)
