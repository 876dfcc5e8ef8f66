"""JSON schemas for expansions, modules and reports."""

import json
import math
from fractions import Fraction

import pytest
from pydantic import ValidationError

from mfhc.errors import ParseError
from mfhc.schemas.expansion import ExpansionOut, expansion_from_model, expansion_to_model, parse_tagged_monomial
from mfhc.schemas.modules import diagram_to_model, module_to_model
from mfhc.schemas.reports import (
    dump_json,
    element_to_model,
    hurwitz_to_model,
    suite_to_model,
    weil_to_model,
)
from mfhc.services import arith, forms, hcmodule, metaplectic, weil
from mfhc.services.coefficient import Coefficient, HalfInteger
from mfhc.services.diagrams import ktype_diagram
from mfhc.services.verify import CheckOutcome, SuiteReport


def test_expansion_survives_json() -> None:
    """E*₃⁄₂ written and read back is the same expansion."""
    f = forms.build_e32star(12, 2)
    text = dump_json(expansion_to_model(f))
    back = expansion_from_model(ExpansionOut.model_validate_json(text))
    assert back == f


def test_expansion_model_uses_exact_strings() -> None:
    """Coefficients and exponents are exact strings, never floats."""
    payload = json.loads(dump_json(expansion_to_model(forms.build_e32star(4, 1))))
    assert payload["weight"] == "3/2"
    assert payload["truncation"] == ["-1", "4"]
    gamma_terms = [t for t in payload["terms"] if t["gammas"]]
    assert gamma_terms[0]["gammas"] == [{"ell": "1", "s": "-1/2"}]
    assert gamma_terms[0]["coeff"] == [{"d": 1, "im": "0", "pi": "-1/2", "re": "1/4"}]


def test_expansion_model_forbids_unknown_fields() -> None:
    """Unexpected keys are a validation error."""
    with pytest.raises(ValidationError):
        ExpansionOut.model_validate({"weight": None, "truncation": ["0", "0"], "terms": [], "extra": 1})


COMPACT = {
    "weight": "3/2",
    "truncation": [-1, 100],
    "terms": [
        {
            "coeff": [["2π", "r=1", "d=1", "re=2", "im=0"]],
            "v": "−1/2",
            "q": "4",
            "qbar": "0",
            "gammas": [["−1/2", "4"]],
        }
    ],
}


def test_compact_expansion_form_is_accepted() -> None:
    """Integer bounds, tagged coefficients and gamma pairs load as exact values."""
    f = expansion_from_model(ExpansionOut.model_validate(COMPACT))
    assert f.weight == HalfInteger(3)
    assert f.window == (Fraction(-1), Fraction(100))
    (t,) = f.terms
    assert t.coeff == Coefficient.monomial(pi_exponent=1, re=4)
    assert t.v_power == HalfInteger(-1) and t.q_power == 4 and t.qbar_power == 0
    assert t.gammas == ((HalfInteger(-1), Fraction(4)),)


def test_tagged_coefficient_with_half_power() -> None:
    """(2π)^{1/2}·√2·i = 2i·√π."""
    (m,) = parse_tagged_monomial(["2π", "r=1/2", "d=2", "re=0", "im=1"])
    assert (m.pi, m.d, m.re, m.im) == ("1/2", 1, "0", "2")
    with pytest.raises(ParseError):
        parse_tagged_monomial(["π", "z=3"])


def test_compact_form_rejects_floats() -> None:
    """Truncation bounds must be exact."""
    with pytest.raises(ValidationError):
        ExpansionOut.model_validate({**COMPACT, "truncation": [-1.0, 100]})


def test_module_model_nests_sub_and_quotient() -> None:
    """Extensions serialize their pieces recursively."""
    model = module_to_model(hcmodule.classify_form_module(HalfInteger(3), True))
    assert model.kind == "ExtensionMinusPlus"
    assert model.sub.kind == "DiscreteMinus" and model.sub.nu == "-1/2"
    assert model.quotient.support.lower == "3/2"
    assert model.support.direction == "both"
    assert model.nonsplit


def test_diagram_model() -> None:
    """Diagram nodes are exact strings."""
    d = ktype_diagram(hcmodule.classify_form_module(HalfInteger(5), False))
    model = diagram_to_model(d)
    assert model.generator == "5/2"
    assert model.support == ["5/2", "9/2", "13/2"]
    assert model.axis_marks == [0, 1]
    assert model.near_zero == ["-3/2", "1/2"]


def test_element_model_keeps_exact_entries() -> None:
    """Fractions print exactly, floats stay floats."""
    exact = element_to_model(metaplectic.n_elem(Fraction(1, 2)))
    assert exact.m == [["1", "1/2"], ["0", "1"]] and exact.branch == 1
    rotated = element_to_model(metaplectic.k_elem(1.0))
    assert isinstance(rotated.m[0][0], float)


def test_weil_model_shapes() -> None:
    """Matrices are lists of [re, im] pairs indexed by module elements."""
    fqm = weil.FiniteQuadraticModule.parse("Z/4:1/8")
    report = weil.check_relations(fqm)
    model = weil_to_model(fqm, report, weil.rho_T(fqm), weil.rho_S(fqm))
    assert model.order == 4
    assert model.elements == [[0], [1], [2], [3]]
    assert len(model.rho_S) == 4 and len(model.rho_S[0]) == 4
    assert model.eighth_root == 1
    assert model.passed


def test_hurwitz_model() -> None:
    """Keys are decimal strings and values exact rationals."""
    model = hurwitz_to_model(4, arith.hurwitz_table(4, workers=1))
    assert model.values == {"0": "-1/12", "1": "0", "2": "0", "3": "1/3", "4": "1/2"}


def test_suite_model_drops_timings_and_infinities() -> None:
    """Infinite deviations become null and timings are not serialized."""
    report = SuiteReport("weil", [CheckOutcome("a", True, 0.0, "", 3.2), CheckOutcome("b", False, math.inf, "boom", 1.0)])
    payload = json.loads(dump_json([suite_to_model(report)]))
    assert payload[0]["passed"] is False
    assert payload[0]["checks"][1]["deviation"] is None
    assert "elapsed_ms" not in payload[0]["checks"][0]


def test_dump_json_sorts_keys() -> None:
    """Output is deterministic."""
    text = dump_json({"z": hurwitz_to_model(0, {0: Fraction(-1, 12)}), "a": []})
    assert text.index('"a"') < text.index('"z"')
