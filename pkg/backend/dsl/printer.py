from fractions import Fraction
from typing import Iterable, List, Union

from topology.diagram import FamilyInstance, GroupDiagram
from topology.liegroup import SubgroupSpec

INDENT = "  "


def _rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_ambient(diagram: GroupDiagram) -> str:
    return " x ".join(name for name, _ in diagram.G.factors)


def format_subgroup(K: SubgroupSpec) -> str:
    """Canonical group expression; factorwise S3 terms sit at their factor position."""
    if K.su3_block is not None:
        block = K.su3_block
        if block.kind == "S_U2U1":
            return "S_U2U1"
        if block.kind == "SU2SU1_Zn":
            return "SU2SU1" if block.n == 1 else f"SU2SU1 x cyclic({block.n})"
        return f"cyclic({block.n})"

    if not K.full_s3_factors and not K.annihilator:
        return "torus()"

    pending = [f"circle({', '.join(str(v) for v in s)})" for s in K.circle_slopes]
    pending += [
        f"cyclic({g.order}, [{', '.join(_rational(x) for x in g.point)}])"
        for g in K.finite_gens
    ]
    terms: List[str] = []
    s3_positions = [
        k for k, (kind, coords) in enumerate(K.ambient.factors)
        if kind == "S3" and coords[0] in K.full_s3_factors
    ]
    if s3_positions:
        for position in range(s3_positions[-1] + 1):
            if position in s3_positions:
                terms.append("S3")
            elif pending:
                terms.append(pending.pop(0))
            else:
                terms.append("cyclic(1)")
    terms += pending
    return " x ".join(terms) if terms else "cyclic(1)"


def format_family(f: FamilyInstance) -> str:
    body = "; ".join(f"{k} = {v}" for k, v in f.params.items())
    return f"family {f.tag} {{ {body} }}"


def format_diagram(d: GroupDiagram) -> str:
    lines = [
        "diagram {",
        f"{INDENT}G = {format_ambient(d)};",
        f"{INDENT}Kminus = {format_subgroup(d.Kminus)};",
        f"{INDENT}Kplus = {format_subgroup(d.Kplus)};",
        f"{INDENT}H = {format_subgroup(d.H)};",
        "}",
    ]
    return "\n".join(lines)


def format_document(items: Iterable[Union[FamilyInstance, GroupDiagram]]) -> str:
    out = []
    for item in items:
        out.append(format_family(item) if isinstance(item, FamilyInstance) else format_diagram(item))
    return "\n\n".join(out) + "\n"
