import logging
from dataclasses import dataclass, field
from functools import reduce
from math import gcd
from typing import Dict, List, Optional, Tuple

from core.errors import InvalidFamily, NotASphere, NotInTable, UnsupportedSubgroupShape
from core.types import FamilyTag
from topology.liegroup import (
    S3_S3,
    S3_T2,
    SU3,
    AmbientGroup,
    FiniteGen,
    Su3Block,
    SubgroupSpec,
    component_group,
    contains,
    dimension,
    homogeneous_relations,
    identity_component,
    intersect,
)
from utils.intlin import (
    FGAbelianGroup,
    IntMatrix,
    cokernel,
    hermite_rows,
    kernel_basis,
    saturation,
    solve_integer,
)

logger = logging.getLogger(__name__)

FAMILY_PARAMS: Dict[str, Tuple[str, ...]] = {
    "N6A": ("r", "s", "a_minus", "b_minus", "c_minus", "a_plus", "b_plus", "c_plus", "m_minus", "m_plus"),
    "N6B": ("p", "q", "n"),
    "N6C": ("n",),
    "N6D": ("p",),
    "N6E": ("p",),
    "N6F": ("n",),
}
OPTIONAL_PARAMS: Dict[str, Tuple[str, ...]] = {"N6B": ("x", "y")}

GCD_MINUS = "gcd(b₋,c₋)=1"
GCD_PLUS = "gcd(b₊,c₊)=1"
LINEAR_MINUS = "a₋=r·b₋+s·c₋"
LINEAR_PLUS = "a₊=r·b₊+s·c₊"
ORDER_MINUS = "m₋≥1"
ORDER_PLUS = "m₊≥1"
DISTINCT = "K⁻≠K⁺"
CORE = "K⁻₀∩K⁺₀⊂H"
H_MINUS = "H∩K⁻₀=H₋"
H_PLUS = "H∩K⁺₀=H₊"
SPHERE_MINUS = "K⁻/H is a sphere"
SPHERE_PLUS = "K⁺/H is a sphere"
COPRIME = "gcd(p,q)=1"
FREE_CYCLIC = "ℤn∩circle(p,q)=1"
EXACT_ORDER = "ℤn generator has order n"
POSITIVE_N = "n≥1"

FAMILY_CONDITIONS: Dict[str, List[str]] = {
    "N6A": [DISTINCT, GCD_MINUS, GCD_PLUS, LINEAR_MINUS, LINEAR_PLUS, CORE, H_MINUS, H_PLUS],
    "N6B": [COPRIME, FREE_CYCLIC, POSITIVE_N],
    "N6C": [POSITIVE_N],
    "N6D": [],
    "N6E": [],
    "N6F": [POSITIVE_N],
}


@dataclass(frozen=True)
class GroupDiagram:
    G: AmbientGroup
    Kminus: SubgroupSpec
    Kplus: SubgroupSpec
    H: SubgroupSpec

    def __post_init__(self):
        for name in ("Kminus", "Kplus", "H"):
            if getattr(self, name).ambient != self.G:
                raise UnsupportedSubgroupShape(f"{name} is not a subgroup of {self.G}")

    def is_nested(self) -> bool:
        return contains(self.Kminus, self.H) and contains(self.Kplus, self.H)


@dataclass(frozen=True)
class FamilyInstance:
    tag: FamilyTag
    params: Dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.tag not in FAMILY_PARAMS:
            raise ValueError(f"unknown family {self.tag}")
        required = FAMILY_PARAMS[self.tag]
        allowed = set(required) | set(OPTIONAL_PARAMS.get(self.tag, ()))
        missing = [k for k in required if k not in self.params]
        unknown = [k for k in self.params if k not in allowed]
        if missing:
            raise ValueError(f"{self.tag} is missing parameters {missing}")
        if unknown:
            raise ValueError(f"{self.tag} has no parameters {unknown}")
        if ("x" in self.params) != ("y" in self.params):
            raise ValueError("explicit cyclic placement needs both x and y")
        ordered = {k: self.params[k] for k in required}
        ordered.update({k: self.params[k] for k in OPTIONAL_PARAMS.get(self.tag, ()) if k in self.params})
        object.__setattr__(self, "params", ordered)

    def __getitem__(self, name: str) -> int:
        return self.params[name]

    def __str__(self) -> str:
        return f"{self.tag}(" + ", ".join(f"{k}={v}" for k, v in self.params.items()) + ")"


def _n6b_generator(p: int, q: int, n: int, x: Optional[int] = None, y: Optional[int] = None) -> FiniteGen:
    if x is None:
        d = gcd(p, q)
        x, y = solve_integer(IntMatrix.from_rows([[-q // d, p // d]]), [1])
    return FiniteGen.reduced((x, y), n)


def _blocking_violations(f: FamilyInstance) -> List[str]:
    """Violations that leave no diagram to build."""
    v = []
    if f.tag == "N6A":
        if not any((f["b_minus"], f["c_minus"])):
            v.append(GCD_MINUS)
        if not any((f["b_plus"], f["c_plus"])):
            v.append(GCD_PLUS)
        if f["m_minus"] < 1:
            v.append(ORDER_MINUS)
        if f["m_plus"] < 1:
            v.append(ORDER_PLUS)
    elif f.tag == "N6B":
        if gcd(f["p"], f["q"]) != 1:
            v.append(COPRIME)
        if f["n"] < 1:
            v.append(POSITIVE_N)
    elif f.tag in ("N6C", "N6F"):
        if f["n"] < 1:
            v.append(POSITIVE_N)
    return v


def family_diagram(f: FamilyInstance) -> GroupDiagram:
    """The group diagram of a Table family row."""
    blocking = _blocking_violations(f)
    if blocking:
        raise InvalidFamily(blocking)

    if f.tag == "N6A":
        v_minus = (f["a_minus"], f["b_minus"], f["c_minus"])
        v_plus = (f["a_plus"], f["b_plus"], f["c_plus"])
        h_minus = FiniteGen.reduced(v_minus, f["m_minus"])
        h_plus = FiniteGen.reduced(v_plus, f["m_plus"])
        return GroupDiagram(
            S3_T2,
            SubgroupSpec.generated(S3_T2, slopes=[v_minus], finite_gens=[h_plus]),
            SubgroupSpec.generated(S3_T2, slopes=[v_plus], finite_gens=[h_minus]),
            SubgroupSpec.generated(S3_T2, finite_gens=[h_minus, h_plus]),
        )
    if f.tag == "N6B":
        gen = _n6b_generator(f["p"], f["q"], f["n"], f.params.get("x"), f.params.get("y"))
        T = SubgroupSpec.maximal_torus(S3_S3)
        return GroupDiagram(S3_S3, T, T, SubgroupSpec.generated(S3_S3, slopes=[(f["p"], f["q"])], finite_gens=[gen]))
    if f.tag == "N6C":
        zn = FiniteGen((0, 1), f["n"])
        return GroupDiagram(
            S3_S3,
            SubgroupSpec.maximal_torus(S3_S3),
            SubgroupSpec.generated(S3_S3, finite_gens=[zn], full=[0]),
            SubgroupSpec.generated(S3_S3, slopes=[(1, 0)], finite_gens=[zn]),
        )
    if f.tag in ("N6D", "N6E"):
        s3_circle = SubgroupSpec.generated(S3_S3, slopes=[(0, 1)], full=[0])
        k_minus = SubgroupSpec.maximal_torus(S3_S3) if f.tag == "N6D" else s3_circle
        return GroupDiagram(S3_S3, k_minus, s3_circle, SubgroupSpec.circle(S3_S3, (f["p"], 1)))
    L = SubgroupSpec.su3(Su3Block("S_U2U1"))
    return GroupDiagram(SU3, L, L, SubgroupSpec.su3(Su3Block("SU2SU1_Zn", f["n"])))


def _order(group: FGAbelianGroup) -> int:
    if not group.is_finite:
        raise UnsupportedSubgroupShape("component group is infinite")
    return group.order


def sphere_check(K: SubgroupSpec, H: SubgroupSpec) -> int:
    """Dimension l of the sphere K/H, or NotASphere."""
    if not contains(K, H):
        raise NotASphere("H is not contained in K")

    if K.su3_block is not None:
        kinds = (K.su3_block.kind, H.su3_block.kind)
        if kinds == ("S_U2U1", "SU2SU1_Zn"):
            return 1
        if kinds == ("SU2SU1_Zn", "Zn_diagonal") and K.su3_block.n == H.su3_block.n:
            return 3
        raise NotASphere(f"{K}/{H} is not a sphere")

    if K.full_s3_factors == H.full_s3_factors:
        if dimension(K) - dimension(H) != 1:
            raise NotASphere(f"{K}/{H} has dimension {dimension(K) - dimension(H)}")
        h_in_k0 = intersect(H, identity_component(K))
        if _order(component_group(K)) * _order(component_group(h_in_k0)) != _order(component_group(H)):
            raise NotASphere(f"{K}/{H} is disconnected")
        return 1

    extra = K.full_s3_factors - H.full_s3_factors
    if len(extra) == 1:
        (f,) = extra
        if H.annihilator == K.annihilator:
            # S3/S1 times the common part
            return 2
        if dimension(K) - dimension(H) == 3:
            column = [row[f] for row in H.annihilator]
            if reduce(gcd, column, 0) == 1:
                y = kernel_basis(IntMatrix.from_rows([column], len(column)))
                r = K.ambient.maximal_torus_rank
                projected = [
                    [sum(c * row[i] for c, row in zip(coeffs, H.annihilator)) for i in range(r)]
                    for coeffs in y.columns()
                ]
                if hermite_rows(projected, r) == K.annihilator:
                    # H is the graph of a homomorphism into the S3 circle
                    return 3
    raise NotASphere(f"{K}/{H} is not a sphere")


def _sphere_violations(d: GroupDiagram) -> List[str]:
    v = []
    for K, label in ((d.Kminus, SPHERE_MINUS), (d.Kplus, SPHERE_PLUS)):
        try:
            sphere_check(K, d.H)
        except NotASphere:
            v.append(label)
    return v


def validate_family(f: FamilyInstance) -> List[str]:
    """Violated side conditions of the family row; empty means valid."""
    violations = _blocking_violations(f)

    if f.tag == "N6A":
        r, s = f["r"], f["s"]
        if gcd(f["b_minus"], f["c_minus"]) != 1 and GCD_MINUS not in violations:
            violations.append(GCD_MINUS)
        if gcd(f["b_plus"], f["c_plus"]) != 1 and GCD_PLUS not in violations:
            violations.append(GCD_PLUS)
        if f["a_minus"] != r * f["b_minus"] + s * f["c_minus"]:
            violations.append(LINEAR_MINUS)
        if f["a_plus"] != r * f["b_plus"] + s * f["c_plus"]:
            violations.append(LINEAR_PLUS)
    elif f.tag == "N6B":
        n = f["n"]
        if "x" in f.params and n >= 1 and reduce(gcd, (f["x"], f["y"]), n) != 1:
            violations.append(EXACT_ORDER)

    if _blocking_violations(f):
        return violations
    d = family_diagram(f)

    if f.tag == "N6A":
        k0_minus = identity_component(d.Kminus)
        k0_plus = identity_component(d.Kplus)
        if d.Kminus == d.Kplus:
            violations.append(DISTINCT)
        if not contains(d.H, intersect(k0_minus, k0_plus)):
            violations.append(CORE)
        h_minus = SubgroupSpec.generated(S3_T2, finite_gens=[FiniteGen.reduced((f["a_minus"], f["b_minus"], f["c_minus"]), f["m_minus"])])
        h_plus = SubgroupSpec.generated(S3_T2, finite_gens=[FiniteGen.reduced((f["a_plus"], f["b_plus"], f["c_plus"]), f["m_plus"])])
        if intersect(d.H, k0_minus) != h_minus:
            violations.append(H_MINUS)
        if intersect(d.H, k0_plus) != h_plus:
            violations.append(H_PLUS)
    elif f.tag == "N6B":
        gen = _n6b_generator(f["p"], f["q"], f["n"], f.params.get("x"), f.params.get("y"))
        cyclic = SubgroupSpec.generated(S3_S3, finite_gens=[gen])
        circle = SubgroupSpec.circle(S3_S3, (f["p"], f["q"]))
        if intersect(cyclic, circle) != SubgroupSpec.trivial(S3_S3):
            violations.append(FREE_CYCLIC)

    violations.extend(_sphere_violations(d))
    if violations:
        logger.info("%s violates %s", f, violations)
    return violations


def _is_maximal_torus(K: SubgroupSpec) -> bool:
    return K.is_torus_type and not K.annihilator


def _circle_parameter(H: SubgroupSpec) -> int:
    """p for H = circle(p, 1)."""
    if not H.is_torus_type or dimension(H) != 1:
        raise NotInTable("H is not a circle")
    a, b = H.circle_slopes[0]
    if b not in (1, -1):
        raise NotInTable("H is not of the form circle(p,1)")
    return a * b


def _extract(d: GroupDiagram) -> FamilyInstance:
    if d.G == SU3:
        km, kp, h = d.Kminus.su3_block, d.Kplus.su3_block, d.H.su3_block
        if km.kind == kp.kind == "S_U2U1" and h.kind == "SU2SU1_Zn":
            return FamilyInstance("N6F", {"n": h.n})
        raise NotInTable("SU3 diagram outside the table")

    if d.G == S3_S3:
        km, kp = d.Kminus, d.Kplus
        if _is_maximal_torus(km) and _is_maximal_torus(kp):
            if not d.H.is_torus_type or dimension(d.H) != 1:
                raise NotInTable("principal isotropy is not one-dimensional")
            pi0 = component_group(d.H)
            if len(pi0.torsion) > 1:
                raise NotInTable("principal isotropy components are not cyclic")
            p, q = d.H.circle_slopes[0]
            return FamilyInstance("N6B", {"p": p, "q": q, "n": pi0.order})
        if _is_maximal_torus(km) and kp.full_s3_factors == {0}:
            if dimension(kp) == 3:
                return FamilyInstance("N6C", {"n": _order(component_group(kp))})
            if dimension(kp) == 4:
                return FamilyInstance("N6D", {"p": _circle_parameter(d.H)})
        if km == kp and km.full_s3_factors == {0} and dimension(km) == 4:
            return FamilyInstance("N6E", {"p": _circle_parameter(d.H)})
        raise NotInTable("S3xS3 diagram outside the table")

    km, kp, h = d.Kminus, d.Kplus, d.H
    if not (km.is_torus_type and kp.is_torus_type and dimension(km) == 1 and dimension(kp) == 1 and dimension(h) == 0):
        raise NotInTable("S3xT2 diagram is not of circle type")
    (a_m, b_m, c_m), = km.circle_slopes
    (a_p, b_p, c_p), = kp.circle_slopes
    rs = solve_integer(IntMatrix.from_rows([[b_m, c_m], [b_p, c_p]]), [a_m, a_p]) or (0, 0)
    m_minus = _order(component_group(intersect(h, identity_component(km))))
    m_plus = _order(component_group(intersect(h, identity_component(kp))))
    return FamilyInstance("N6A", {
        "r": rs[0], "s": rs[1],
        "a_minus": a_m, "b_minus": b_m, "c_minus": c_m,
        "a_plus": a_p, "b_plus": b_p, "c_plus": c_p,
        "m_minus": m_minus, "m_plus": m_plus,
    })


def recognize_family(d: GroupDiagram) -> FamilyInstance:
    """Identifies the Table row of a diagram given in normalized presentation."""
    f = _extract(d)
    try:
        rebuilt = family_diagram(f)
    except InvalidFamily:
        raise NotInTable(f"no {f.tag} parameters reproduce this diagram")
    if rebuilt != d:
        raise NotInTable(f"diagram resembles {f.tag} but does not match its normal form")
    logger.debug("recognized %s", f)
    return f


def normalize_instance(f: FamilyInstance) -> FamilyInstance:
    """The parameters recognize_family reports for the diagram of f."""
    params = dict(f.params)
    if f.tag == "N6A":
        for side in ("minus", "plus"):
            v = [params[f"a_{side}"], params[f"b_{side}"], params[f"c_{side}"]]
            lead = next((x for x in v if x != 0), 0)
            if lead < 0:
                params[f"a_{side}"], params[f"b_{side}"], params[f"c_{side}"] = (-x for x in v)
    elif f.tag == "N6B":
        lead = next((x for x in (params["p"], params["q"]) if x != 0), 0)
        if lead < 0:
            params["p"], params["q"] = -params["p"], -params["q"]
            if "x" in params:
                params["x"], params["y"] = -params["x"], -params["y"]
        if "x" in params and not _blocking_violations(f):
            plain = {k: params[k] for k in FAMILY_PARAMS["N6B"]}
            if family_diagram(FamilyInstance("N6B", params)) == family_diagram(FamilyInstance("N6B", plain)):
                params = plain
    return FamilyInstance(f.tag, params)


def fundamental_group(d: GroupDiagram) -> FGAbelianGroup:
    """pi_1(M) by van Kampen over the two disk bundles."""
    l_minus = sphere_check(d.Kminus, d.H)
    l_plus = sphere_check(d.Kplus, d.H)

    if d.G == SU3:
        for K, l in ((d.Kminus, l_minus), (d.Kplus, l_plus)):
            if l == 1:
                if component_group(K).is_trivial:
                    return FGAbelianGroup.trivial()
                raise UnsupportedSubgroupShape("disconnected SU3 singular isotropy")
        return component_group(d.H)

    rest = d.H.rest_coordinates
    phi = d.H.annihilator_matrix(rest)
    columns = homogeneous_relations(d.H).columns()
    for K, l in ((d.Kminus, l_minus), (d.Kplus, l_plus)):
        if l == 1:
            # the circle K/H lifts to a path ending in the component group of H
            image = phi @ kernel_basis(K.annihilator_matrix(rest))
            columns += saturation(image).columns()
    return cokernel(IntMatrix.from_columns(columns, phi.rows))
