"""K-type diagrams of classified modules, as data and as ASCII art.

Axis conventions: ● K-type in the support, ○ absent K-type, ◎ the generator k,
┊ the axis marks 0 and 1. The label line carries the marks, the letter k and
the arrow of the nonvanishing transition at k. For half-integral k a second
line names the two K-types nearest zero, {−3/2, ½} or {−½, 3/2}.
"""

from dataclasses import dataclass

from mfhc.errors import DomainError, WeightError
from mfhc.logging import get_logger
from mfhc.services.coefficient import HalfInteger
from mfhc.services.hcmodule import ModuleClass, ModuleKind

logger = get_logger("diagrams")

DEFAULT_WINDOW = 4
AXIS_MARKS = (0, 1)

# columns per unit of K-type
_SCALE = 4


@dataclass(frozen=True)
class Diagram:
    weight: HalfInteger
    nodes: tuple[HalfInteger, ...]
    support: tuple[HalfInteger, ...]
    generator: HalfInteger
    transition: str  # "raise" or "both"
    caption: str
    axis_marks: tuple[int, ...] = AXIS_MARKS
    near_zero: tuple[HalfInteger, ...] = ()


def default_caption(module: ModuleClass) -> str:
    k = module.weight
    if module.kind is ModuleKind.OUT_OF_SCOPE:
        return f"L_k f ≠ 0, k = {k}, case {module.label}."
    rel = "=" if module.kind is ModuleKind.DISCRETE_PLUS else "≠"
    side = ">" if k.value > 1 else "<"
    residue = "1/2" if k.residue_mod2 == 1 else "3/2"
    return f"L_k f {rel} 0, k {side} 1, k ∈ {residue} + 2ℤ."


def ktype_diagram(module: ModuleClass, window: int = DEFAULT_WINDOW, caption: str | None = None) -> Diagram:
    """Diagram of K-types k + 2ℤ inside [min(k, 0) − window, max(k, 1) + window]."""
    if window < 4:
        raise DomainError(f"window must be >= 4, got {window}")
    if module.weight is None or module.support is None:
        raise WeightError(f"module {module.describe()} has no generator weight or K-type support")
    k = module.weight
    lo = HalfInteger.of(min(k.value, 0)) - window
    hi = HalfInteger.of(max(k.value, 1)) + window
    nodes = tuple(HalfInteger(t) for t in range(lo.twice_value, hi.twice_value + 1) if (t - k.twice_value) % 4 == 0)
    support = tuple(j for j in nodes if module.support.contains(j))
    # lowering from k lands on an isolated K-type only in the two-way case
    transition = "both" if (k - 2) in module.support.isolated else "raise"
    logger.debug("diagram weight=%s nodes=%d support=%d", k, len(nodes), len(support))
    return Diagram(
        weight=k,
        nodes=nodes,
        support=support,
        generator=k,
        transition=transition,
        caption=caption if caption is not None else default_caption(module),
        near_zero=near_zero_ktypes(k, nodes),
    )


def near_zero_ktypes(k: HalfInteger, nodes: tuple[HalfInteger, ...]) -> tuple[HalfInteger, ...]:
    """Nodes j with −2 < j < 2; empty for integral k."""
    if k.is_integral:
        return ()
    return tuple(j for j in nodes if -4 < j.twice_value < 4)


def _column(j: HalfInteger, first: HalfInteger) -> int:
    return _SCALE * (j.twice_value - first.twice_value) // 2


def render_ascii(diagram: Diagram) -> str:
    """Axis, labels, near-zero K-types (half-integral k only), caption.
    Trailing spaces are stripped."""
    first = diagram.nodes[0]
    width = _column(diagram.nodes[-1], first) + 1
    axis = ["─"] * width
    labels = [" "] * (width + 2)
    for mark in diagram.axis_marks:
        col = _column(HalfInteger.of(mark), first)
        if 0 <= col < width:
            axis[col] = "┊"
            labels[col] = str(mark)
    supported = set(diagram.support)
    for j in diagram.nodes:
        col = _column(j, first)
        if j == diagram.generator:
            axis[col] = "◎"
        else:
            axis[col] = "●" if j in supported else "○"
    gen = _column(diagram.generator, first)
    labels[gen] = "k"
    labels[gen + 1] = "→"
    if diagram.transition == "both":
        labels[gen - 1] = "←"
    lines = ["".join(axis).rstrip(), "".join(labels).rstrip()]
    if diagram.near_zero:
        near = [" "] * (width + 8)
        for j in diagram.near_zero:
            col = _column(j, first)
            near[col : col + len(str(j))] = str(j)
        lines.append("".join(near).rstrip())
    lines.append(diagram.caption)
    return "\n".join(lines) + "\n"
