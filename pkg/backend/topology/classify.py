"""Diffeomorphism verdicts for the simply connected families.

Each family is non-primitive: all of its isotropy groups lie in a proper
subgroup L, so M fibers over G/L with fiber the L-manifold M_L. The bundle is
associated to a principal bundle P = G x_L J through a structure homomorphism
L -> J, and the verdict is read off either from the Euler class of P (circle
structure groups) or from pi_1(P) (loop class of the pi_1(L) generator).
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from math import gcd
from typing import Dict, Optional, Tuple

from core.errors import InvalidFamily, WrongFamily
from core.types import VerdictPayload
from topology.diagram import FamilyInstance, validate_family
from topology.liegroup import (
    PU3,
    S3_S3,
    S3_T2,
    LoopSpec,
    Su3Block,
    SubgroupSpec,
    loop_class,
    so,
)
from utils.intlin import FGAbelianGroup, IntMatrix, cokernel, is_surjective_onto, presentation_relations

logger = logging.getLogger(__name__)

MINUS = "−"


def _signed(x) -> str:
    s = str(x)
    return MINUS + s[1:] if s.startswith("-") else s


@dataclass(frozen=True)
class EulerClass:
    """A class in H^2 of the base, only defined up to a global sign."""

    coordinates: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coordinates", tuple(self.coordinates))

    @property
    def defined_up_to_sign(self) -> bool:
        return True

    @property
    def is_zero(self) -> bool:
        return not any(self.coordinates)

    @property
    def canonical(self) -> Tuple[int, ...]:
        lead = next((x for x in self.coordinates if x != 0), 0)
        return tuple(-x for x in self.coordinates) if lead < 0 else self.coordinates

    @property
    def divisibility(self) -> int:
        g = 0
        for x in self.coordinates:
            g = gcd(g, x)
        return g

    def __eq__(self, other) -> bool:
        if not isinstance(other, EulerClass):
            return NotImplemented
        return self.canonical == other.canonical

    def __hash__(self) -> int:
        return hash(self.canonical)

    def __str__(self) -> str:
        if len(self.coordinates) == 1:
            return "±" + _signed(self.coordinates[0])
        return "±(" + ",".join(_signed(x) for x in self.coordinates) + ")"


@dataclass(frozen=True)
class DiffeoVerdict(ABC):
    kind = "DiffeoVerdict"

    @abstractmethod
    def describe(self) -> str:
        ...

    def payload(self) -> VerdictPayload:
        return VerdictPayload(kind=self.kind, description=self.describe())


@dataclass(frozen=True)
class S3xS3(DiffeoVerdict):
    kind = "S3xS3"

    def describe(self) -> str:
        return "S³×S³"


@dataclass(frozen=True)
class S4xS2(DiffeoVerdict):
    kind = "S4xS2"

    def describe(self) -> str:
        return "S⁴×S²"


@dataclass(frozen=True)
class NontrivialS4BundleOverS2(DiffeoVerdict):
    kind = "NontrivialS4BundleOverS2"

    def describe(self) -> str:
        return "nontrivial S⁴ bundle over S²"


@dataclass(frozen=True)
class CP2BundleOverS2(DiffeoVerdict):
    """The two nontrivial bundles are diffeomorphic, so triviality is the whole invariant."""

    trivial: bool = True
    kind = "CP2BundleOverS2"

    def describe(self) -> str:
        return "ℂP²×S²" if self.trivial else "nontrivial ℂP² bundle over S²"

    def payload(self) -> VerdictPayload:
        return VerdictPayload(kind=self.kind, description=self.describe(), trivial=self.trivial)


@dataclass(frozen=True)
class S2BundleOverS2xS2(DiffeoVerdict):
    e: EulerClass = EulerClass((0, 0))
    kind = "S2BundleOverS2xS2"

    def describe(self) -> str:
        return f"S² bundle over S²×S² with e_P={self.e}"

    def payload(self) -> VerdictPayload:
        return VerdictPayload(kind=self.kind, description=self.describe(), euler=list(self.e.coordinates))


@dataclass(frozen=True)
class S2BundleOverCP2(DiffeoVerdict):
    e: EulerClass = EulerClass((0,))
    kind = "S2BundleOverCP2"

    def describe(self) -> str:
        return f"S² bundle over ℂP² with e_P={self.e}"

    def payload(self) -> VerdictPayload:
        return VerdictPayload(kind=self.kind, description=self.describe(), euler=list(self.e.coordinates))


@dataclass(frozen=True)
class NonPrimitivityData:
    """L, the base G/L, the fiber M_L and the structure homomorphism L -> J.

    structure_hom_weights lists, per SO(2) block of J, the weights of the
    block rotation on the torus of L. Families whose J is not a torus carry
    circle_loop instead: the image of the pi_1(L) generator.
    """

    L: SubgroupSpec
    base: str
    fiber: str
    structure_group: str
    structure_hom_weights: Tuple[Tuple[int, ...], ...] = ()
    circle_loop: Optional[LoopSpec] = None


def euler_coordinates(tag: str, params: Dict) -> Tuple:
    """Closed form of e_P; works on plain ints and on sympy symbols alike."""
    if tag == "N6B":
        n, p, q = params["n"], params["p"], params["q"]
        return (n * q, -n * p)
    if tag == "N6F":
        return (params["n"],)
    raise WrongFamily(f"{tag} has no circle structure group")


def structure_loop(tag: str, params: Dict) -> LoopSpec:
    """Image of the S1 generator of L under the structure homomorphism."""
    if tag == "N6C":
        # (1, e^{i theta}) -> diag(I_3, R(n theta))
        return LoopSpec(so(5), (params["n"],))
    if tag == "N6D":
        p = params["p"]
        return LoopSpec(PU3, (0, p, p))
    if tag == "N6E":
        # right multiplication by e^{-ip theta} rotates the two planes oppositely
        p = params["p"]
        return LoopSpec(so(5), (-p, p))
    raise WrongFamily(f"{tag} has no SO or PU(3) structure group")


def _s3_circle() -> SubgroupSpec:
    return SubgroupSpec.generated(S3_S3, slopes=[(0, 1)], full=[0])


def nonprimitivity_data(f: FamilyInstance) -> NonPrimitivityData:
    if f.tag == "N6A":
        v_minus = (f["a_minus"], f["b_minus"], f["c_minus"])
        v_plus = (f["a_plus"], f["b_plus"], f["c_plus"])
        D = abs(f["b_minus"] * f["c_plus"] - f["b_plus"] * f["c_minus"])
        n_minus, n_plus = (f["m_plus"] // D, f["m_minus"] // D) if D else (0, 0)
        return NonPrimitivityData(
            L=SubgroupSpec.generated(S3_T2, slopes=[v_minus, v_plus]),
            base="S³",
            fiber="S³",
            structure_group="T2",
            structure_hom_weights=(
                (n_minus * f["c_minus"], -n_minus * f["b_minus"]),
                (n_plus * f["c_plus"], -n_plus * f["b_plus"]),
            ),
        )
    if f.tag == "N6B":
        return NonPrimitivityData(
            L=SubgroupSpec.maximal_torus(S3_S3),
            base="S²×S²",
            fiber="S²",
            structure_group="SO(2)",
            structure_hom_weights=((-f["n"] * f["q"], f["n"] * f["p"]),),
        )
    if f.tag == "N6C":
        return NonPrimitivityData(_s3_circle(), "S²", "S⁴", "SO(5)", circle_loop=structure_loop("N6C", f.params))
    if f.tag == "N6D":
        return NonPrimitivityData(_s3_circle(), "S²", "ℂP²", "SU(3)/Z3", circle_loop=structure_loop("N6D", f.params))
    if f.tag == "N6E":
        return NonPrimitivityData(_s3_circle(), "S²", "S⁴", "SO(5)", circle_loop=structure_loop("N6E", f.params))
    return NonPrimitivityData(
        L=SubgroupSpec.su3(Su3Block("S_U2U1")),
        base="ℂP²",
        fiber="S²",
        structure_group="SO(2)",
        structure_hom_weights=((f["n"],),),
    )


def euler_class(f: FamilyInstance) -> EulerClass:
    return EulerClass(euler_coordinates(f.tag, f.params))


def principal_bundle_pi1(f: FamilyInstance) -> FGAbelianGroup:
    """pi_1(G x_L J), the cokernel of pi_1(L) -> pi_1(J) since G is simply connected."""
    loop = structure_loop(f.tag, f.params)
    target = loop.target.fundamental_group
    image = IntMatrix.from_columns([loop_class(loop).coordinates], target.generator_count)
    if is_surjective_onto(image, target):
        return FGAbelianGroup.trivial()
    return cokernel(image.hstack(presentation_relations(target)))


def classify(f: FamilyInstance) -> DiffeoVerdict:
    violations = validate_family(f)
    if violations:
        raise InvalidFamily(violations)

    if f.tag == "N6A":
        verdict = S3xS3()
    elif f.tag == "N6B":
        verdict = S2BundleOverS2xS2(euler_class(f))
    elif f.tag in ("N6C", "N6E"):
        verdict = NontrivialS4BundleOverS2() if principal_bundle_pi1(f).is_trivial else S4xS2()
    elif f.tag == "N6D":
        verdict = CP2BundleOverS2(trivial=not principal_bundle_pi1(f).is_trivial)
    else:
        verdict = S2BundleOverCP2(euler_class(f))
    logger.debug("%s -> %s", f, verdict.describe())
    return verdict
