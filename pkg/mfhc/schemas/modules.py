"""Pydantic schemas for module classes and K-type diagrams."""

from typing import Optional

from pydantic import BaseModel, ConfigDict

from mfhc.services.diagrams import Diagram
from mfhc.services.hcmodule import KTypeSupport, ModuleClass
from mfhc.utils.numbers import format_fraction


class KTypeSupportOut(BaseModel):
    model_config = ConfigDict(extra="forbid")

    residue: str
    lower: str | None
    upper: str | None
    isolated: list[str]
    direction: str


class ModuleClassOut(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: str
    description: str
    nu: str | None = None
    weight: str | None = None
    support: KTypeSupportOut | None = None
    sub: Optional["ModuleClassOut"] = None
    quotient: Optional["ModuleClassOut"] = None
    nonsplit: bool = False
    casimir: str | None = None
    label: str = ""
    note: str = ""


ModuleClassOut.model_rebuild()


class DiagramOut(BaseModel):
    model_config = ConfigDict(extra="forbid")

    weight: str
    nodes: list[str]
    support: list[str]
    generator: str
    transition: str
    axis_marks: list[int]
    near_zero: list[str]
    caption: str


def support_to_model(s: KTypeSupport) -> KTypeSupportOut:
    return KTypeSupportOut(
        residue=str(s.residue),
        lower=None if s.lower is None else str(s.lower),
        upper=None if s.upper is None else str(s.upper),
        isolated=[str(j) for j in s.isolated],
        direction=s.direction,
    )


def module_to_model(m: ModuleClass) -> ModuleClassOut:
    return ModuleClassOut(
        kind=m.kind.value,
        description=m.describe(),
        nu=None if m.nu is None else format_fraction(m.nu),
        weight=None if m.weight is None else str(m.weight),
        support=None if m.support is None else support_to_model(m.support),
        sub=None if m.sub is None else module_to_model(m.sub),
        quotient=None if m.quotient is None else module_to_model(m.quotient),
        nonsplit=m.nonsplit,
        casimir=None if m.casimir is None else format_fraction(m.casimir),
        label=m.label,
        note=m.note,
    )


def diagram_to_model(d: Diagram) -> DiagramOut:
    return DiagramOut(
        weight=str(d.weight),
        nodes=[str(j) for j in d.nodes],
        support=[str(j) for j in d.support],
        generator=str(d.generator),
        transition=d.transition,
        axis_marks=list(d.axis_marks),
        near_zero=[str(j) for j in d.near_zero],
        caption=d.caption,
    )
