"""Pydantic schemas for numeric outputs: metaplectic elements, Weil matrices,
Hurwitz tables and verify reports. Complex numbers are [re, im] pairs."""

import json
import math
from fractions import Fraction
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict

from mfhc.services.metaplectic import MetaplecticElement
from mfhc.services.verify import SuiteReport
from mfhc.services.weil import FiniteQuadraticModule, RelationReport
from mfhc.utils.numbers import format_fraction

Pair = tuple[float, float]


def pair(z: complex) -> Pair:
    return (float(z.real), float(z.imag))


def matrix_pairs(m: np.ndarray) -> list[list[Pair]]:
    return [[pair(z) for z in row] for row in m]


class MetaplecticElementOut(BaseModel):
    model_config = ConfigDict(extra="forbid")

    m: list[list[str | float]]
    branch: int


def _entry(x: Any) -> str | float:
    if isinstance(x, (int, Fraction)):
        return format_fraction(x)
    return float(x)


def element_to_model(x: MetaplecticElement) -> MetaplecticElementOut:
    return MetaplecticElementOut(m=[[_entry(v) for v in row] for row in x.matrix], branch=x.branch)


class RelationCheckOut(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    deviation: float
    passed: bool


class WeilOut(BaseModel):
    model_config = ConfigDict(extra="forbid")

    module: str
    order: int
    normalization: str
    elements: list[list[int]]
    sigma: Pair
    eighth_root: int | None
    rho_T: list[list[Pair]]
    rho_S: list[list[Pair]]
    rho_Z: list[list[Pair]]
    checks: list[RelationCheckOut]
    passed: bool


def weil_to_model(
    fqm: FiniteQuadraticModule, report: RelationReport, t: np.ndarray, s: np.ndarray
) -> WeilOut:
    return WeilOut(
        module=report.module,
        order=fqm.order,
        normalization=report.normalization,
        elements=[list(x) for x in fqm.elements()],
        sigma=pair(report.sigma),
        eighth_root=report.eighth_root,
        rho_T=matrix_pairs(t),
        rho_S=matrix_pairs(s),
        rho_Z=matrix_pairs(s @ s),
        checks=[RelationCheckOut(name=c.name, deviation=c.deviation, passed=c.passed) for c in report.checks],
        passed=report.passed,
    )


class HurwitzTableOut(BaseModel):
    model_config = ConfigDict(extra="forbid")

    d_max: int
    values: dict[str, str]


def hurwitz_to_model(d_max: int, table: dict[int, Fraction]) -> HurwitzTableOut:
    return HurwitzTableOut(d_max=d_max, values={str(D): format_fraction(h) for D, h in table.items()})


class CheckOut(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    passed: bool
    deviation: float | None
    detail: str


class SuiteReportOut(BaseModel):
    model_config = ConfigDict(extra="forbid")

    suite: str
    passed: bool
    checks: list[CheckOut]


def suite_to_model(report: SuiteReport) -> SuiteReportOut:
    # timings stay out of JSON so output is deterministic
    return SuiteReportOut(
        suite=report.suite,
        passed=report.passed,
        checks=[
            CheckOut(
                name=c.name,
                passed=c.passed,
                deviation=c.deviation if math.isfinite(c.deviation) else None,
                detail=c.detail,
            )
            for c in report.checks
        ],
    )


def dump_json(payload: BaseModel | list[BaseModel] | dict[str, Any]) -> str:
    """Sorted-key JSON of a model, a list of models or a dict of models."""

    def plain(x: Any) -> Any:
        if isinstance(x, BaseModel):
            return x.model_dump(mode="json")
        if isinstance(x, list):
            return [plain(v) for v in x]
        if isinstance(x, dict):
            return {k: plain(v) for k, v in x.items()}
        return x

    return json.dumps(plain(payload), sort_keys=True, ensure_ascii=False, indent=2)
