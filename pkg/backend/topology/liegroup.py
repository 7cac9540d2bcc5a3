"""Ambient groups of the classification and their closed subgroups.

A torus-type subgroup of S3xT2 or S3xS3 is stored through its annihilator: the
lattice of characters of the maximal torus that are trivial on it, kept in row
Hermite normal form so that equal subgroups compare equal. Coordinates are
angles in R/Z; for S3xT2 coordinate 0 is the circle of the S3 factor, for
S3xS3 coordinates 0 and 1 are the circles of the two S3 factors. A full S3
factor contributes a zero column to the annihilator.

SU(3) subgroups are limited to three named blocks.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import FrozenSet, List, Optional, Sequence, Tuple

from core.errors import UnsupportedSubgroupShape
from core.types import AmbientTag, Su3BlockKind
from utils.intlin import (
    FGAbelianGroup,
    IntMatrix,
    cokernel,
    hermite_rows,
    kernel_basis,
    lattice_contains,
    saturation,
    smith_normal_form,
)

logger = logging.getLogger(__name__)

_AMBIENT_RANK = {"S3xT2": 3, "S3xS3": 2, "SU3": 2}
_AMBIENT_DIMENSION = {"S3xT2": 5, "S3xS3": 6, "SU3": 8}
_AMBIENT_S3_COORDINATES = {"S3xT2": (0,), "S3xS3": (0, 1), "SU3": ()}
_AMBIENT_FACTORS = {
    "S3xT2": (("S3", (0,)), ("T2", (1, 2))),
    "S3xS3": (("S3", (0,)), ("S3", (1,))),
    "SU3": (("SU3", ()),),
}


@dataclass(frozen=True)
class AmbientGroup:
    tag: AmbientTag

    @property
    def maximal_torus_rank(self) -> int:
        return _AMBIENT_RANK[self.tag]

    @property
    def dimension(self) -> int:
        return _AMBIENT_DIMENSION[self.tag]

    @property
    def s3_coordinates(self) -> Tuple[int, ...]:
        return _AMBIENT_S3_COORDINATES[self.tag]

    @property
    def factors(self) -> Tuple[Tuple[str, Tuple[int, ...]], ...]:
        return _AMBIENT_FACTORS[self.tag]

    @property
    def is_torus_ambient(self) -> bool:
        return self.tag != "SU3"

    @property
    def fundamental_group(self) -> FGAbelianGroup:
        return FGAbelianGroup(2) if self.tag == "S3xT2" else FGAbelianGroup.trivial()

    def __str__(self) -> str:
        return self.tag


S3_T2 = AmbientGroup("S3xT2")
S3_S3 = AmbientGroup("S3xS3")
SU3 = AmbientGroup("SU3")


def primitive(vector: Sequence[int]) -> Tuple[int, ...]:
    """Divides out the content and makes the first nonzero entry positive."""
    g = reduce(gcd, vector, 0)
    if g == 0:
        raise UnsupportedSubgroupShape("circle slopes must be nonzero")
    v = [x // g for x in vector]
    lead = next(x for x in v if x != 0)
    return tuple(-x for x in v) if lead < 0 else tuple(v)


@dataclass(frozen=True)
class FiniteGen:
    """The point numerators/order of the torus, of exact order `order`."""

    numerators: Tuple[int, ...]
    order: int

    def __post_init__(self):
        if self.order < 1:
            raise UnsupportedSubgroupShape(f"finite generator order must be positive, got {self.order}")
        nums = tuple(x % self.order for x in self.numerators)
        if reduce(gcd, nums, self.order) != 1:
            raise UnsupportedSubgroupShape(f"generator {self.numerators}/{self.order} does not have exact order {self.order}")
        object.__setattr__(self, "numerators", nums)

    @classmethod
    def reduced(cls, numerators: Sequence[int], order: int) -> "FiniteGen":
        g = reduce(gcd, numerators, order)
        return cls(tuple(x // g for x in numerators), order // g)

    @property
    def point(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(x, self.order) for x in self.numerators)


@dataclass(frozen=True)
class Su3Block:
    kind: Su3BlockKind
    n: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise UnsupportedSubgroupShape(f"cyclic order must be positive, got {self.n}")
        if self.kind == "S_U2U1" and self.n != 1:
            raise UnsupportedSubgroupShape("S_U2U1 carries no cyclic part")


@dataclass(frozen=True)
class SubgroupSpec:
    ambient: AmbientGroup
    full_s3_factors: FrozenSet[int] = field(default_factory=frozenset)
    annihilator: Tuple[Tuple[int, ...], ...] = ()
    su3_block: Optional[Su3Block] = None

    @classmethod
    def generated(
        cls,
        ambient: AmbientGroup,
        slopes: Sequence[Sequence[int]] = (),
        finite_gens: Sequence[FiniteGen] = (),
        full: Sequence[int] = (),
    ) -> "SubgroupSpec":
        """Closed subgroup generated by circles, finite elements and full S3 factors."""
        if not ambient.is_torus_ambient:
            raise UnsupportedSubgroupShape("SU3 subgroups are named blocks only")
        r = ambient.maximal_torus_rank
        full = frozenset(full)
        if not full <= set(ambient.s3_coordinates):
            raise UnsupportedSubgroupShape(f"{sorted(full)} are not S3 factors of {ambient}")
        slopes = [tuple(s) for s in slopes]
        for s in slopes:
            if len(s) != r:
                raise UnsupportedSubgroupShape(f"slope {s} has rank {len(s)}, expected {r}")
            if not any(s):
                raise UnsupportedSubgroupShape("circle slopes must be nonzero")
        for g in finite_gens:
            if len(g.numerators) != r:
                raise UnsupportedSubgroupShape(f"generator {g.numerators} has rank {len(g.numerators)}, expected {r}")
        slopes += [tuple(1 if i == f else 0 for i in range(r)) for f in sorted(full)]

        J = len(finite_gens)
        rows = [list(s) + [0] * J for s in slopes]
        for j, g in enumerate(finite_gens):
            rows.append(list(g.numerators) + [-g.order if k == j else 0 for k in range(J)])
        K = kernel_basis(IntMatrix.from_rows(rows, r + J))
        characters = [c[:r] for c in K.columns()]
        return cls(ambient, full, hermite_rows(characters, r))

    @classmethod
    def trivial(cls, ambient: AmbientGroup) -> "SubgroupSpec":
        if not ambient.is_torus_ambient:
            return cls.su3(Su3Block("Zn_diagonal", 1))
        return cls.generated(ambient)

    @classmethod
    def maximal_torus(cls, ambient: AmbientGroup) -> "SubgroupSpec":
        r = ambient.maximal_torus_rank
        return cls.generated(ambient, slopes=[tuple(1 if i == j else 0 for i in range(r)) for j in range(r)])

    @classmethod
    def circle(cls, ambient: AmbientGroup, slope: Sequence[int]) -> "SubgroupSpec":
        return cls.generated(ambient, slopes=[slope])

    @classmethod
    def su3(cls, block: Su3Block) -> "SubgroupSpec":
        return cls(SU3, frozenset(), (), block)

    @property
    def is_torus_type(self) -> bool:
        return self.su3_block is None and not self.full_s3_factors

    @property
    def rest_coordinates(self) -> Tuple[int, ...]:
        return tuple(i for i in range(self.ambient.maximal_torus_rank) if i not in self.full_s3_factors)

    def annihilator_matrix(self, coordinates: Optional[Sequence[int]] = None) -> IntMatrix:
        """Annihilator rows restricted to the given coordinates (all by default)."""
        r = self.ambient.maximal_torus_rank
        coordinates = tuple(range(r)) if coordinates is None else tuple(coordinates)
        return IntMatrix.from_rows([[row[i] for i in coordinates] for row in self.annihilator], len(coordinates))

    def _torus_structure(self):
        rest = self.rest_coordinates
        phi = self.annihilator_matrix(rest)
        snf = smith_normal_form(phi)
        return rest, snf

    def _embed(self, rest: Sequence[int], vector: Sequence[int]) -> Tuple[int, ...]:
        out = [0] * self.ambient.maximal_torus_rank
        for i, v in zip(rest, vector):
            out[i] = v
        return tuple(out)

    @property
    def circle_slopes(self) -> List[Tuple[int, ...]]:
        """A basis of circles for the torus part outside the full S3 factors."""
        if self.su3_block is not None:
            return []
        rest, snf = self._torus_structure()
        return [primitive(self._embed(rest, snf.V.column(j))) for j in range(snf.rank, len(rest))]

    @property
    def finite_gens(self) -> List[FiniteGen]:
        if self.su3_block is not None:
            return []
        rest, snf = self._torus_structure()
        gens = []
        for j, d in enumerate(snf.diagonal):
            if d > 1:
                gens.append(FiniteGen(self._embed(rest, snf.V.column(j)), d))
        return gens

    def contains_point(self, point: Sequence[Fraction]) -> bool:
        """Membership of a rational point of the maximal torus."""
        if self.su3_block is not None:
            raise UnsupportedSubgroupShape("point membership is defined for torus ambients only")
        for chi in self.annihilator:
            value = sum(Fraction(c) * Fraction(x) for c, x in zip(chi, point))
            if value.denominator != 1:
                return False
        return True

    def __str__(self) -> str:
        if self.su3_block is not None:
            b = self.su3_block
            return b.kind if b.kind == "S_U2U1" else f"{b.kind}({b.n})"
        parts = [f"S3[{f}]" for f in sorted(self.full_s3_factors)]
        parts += [f"circle{s}" for s in self.circle_slopes]
        parts += [f"Z{g.order}{g.numerators}" for g in self.finite_gens]
        return " . ".join(parts) if parts else "1"


def _check_same_ambient(A: SubgroupSpec, B: SubgroupSpec):
    if A.ambient != B.ambient:
        raise UnsupportedSubgroupShape(f"subgroups of different ambients {A.ambient} and {B.ambient}")


def _su3_contains(a: Su3Block, b: Su3Block) -> bool:
    if a.kind == "S_U2U1":
        return True
    if a.kind == "SU2SU1_Zn":
        return a.n % b.n == 0 and b.kind in ("SU2SU1_Zn", "Zn_diagonal")
    return b.kind == "Zn_diagonal" and a.n % b.n == 0


def intersect(A: SubgroupSpec, B: SubgroupSpec) -> SubgroupSpec:
    _check_same_ambient(A, B)
    if not A.ambient.is_torus_ambient:
        raise UnsupportedSubgroupShape("intersections inside SU3 are not representable")
    r = A.ambient.maximal_torus_rank
    return SubgroupSpec(
        A.ambient,
        A.full_s3_factors & B.full_s3_factors,
        hermite_rows(list(A.annihilator) + list(B.annihilator), r),
    )


def join(A: SubgroupSpec, B: SubgroupSpec) -> SubgroupSpec:
    """The closed subgroup generated by A and B."""
    _check_same_ambient(A, B)
    if not A.ambient.is_torus_ambient:
        raise UnsupportedSubgroupShape("products inside SU3 are not representable")
    return SubgroupSpec.generated(
        A.ambient,
        slopes=A.circle_slopes + B.circle_slopes,
        finite_gens=A.finite_gens + B.finite_gens,
        full=A.full_s3_factors | B.full_s3_factors,
    )


def contains(A: SubgroupSpec, B: SubgroupSpec) -> bool:
    """True iff B is a subgroup of A."""
    _check_same_ambient(A, B)
    if not A.ambient.is_torus_ambient:
        return _su3_contains(A.su3_block, B.su3_block)
    if not B.full_s3_factors <= A.full_s3_factors:
        return False
    return all(lattice_contains(B.annihilator, chi) for chi in A.annihilator)


def identity_component(A: SubgroupSpec) -> SubgroupSpec:
    if A.su3_block is not None:
        return SubgroupSpec.su3(Su3Block(A.su3_block.kind, 1))
    r = A.ambient.maximal_torus_rank
    sat = saturation(A.annihilator_matrix().transpose())
    return SubgroupSpec(A.ambient, A.full_s3_factors, hermite_rows(sat.columns(), r))


def component_group(A: SubgroupSpec) -> FGAbelianGroup:
    if A.su3_block is not None:
        return FGAbelianGroup.cyclic(A.su3_block.n)
    coker = cokernel(A.annihilator_matrix().transpose())
    return FGAbelianGroup(0, coker.torsion)


def dimension(A: SubgroupSpec) -> int:
    if A.su3_block is not None:
        return {"S_U2U1": 4, "SU2SU1_Zn": 3, "Zn_diagonal": 0}[A.su3_block.kind]
    r = A.ambient.maximal_torus_rank
    return 2 * len(A.full_s3_factors) + r - len(A.annihilator)


def homogeneous_relations(H: SubgroupSpec) -> IntMatrix:
    """pi_1(G/H) is Z^k modulo the columns of this matrix.

    Lifting H to the universal cover of G, pi_1(G/H) is the component group of
    the lift: Z^k modulo the annihilator columns of the S3 circle coordinates,
    where k is the rank of the annihilator outside the full S3 factors.
    """
    if H.su3_block is not None:
        raise UnsupportedSubgroupShape("SU3 quotients have no torus presentation")
    rest = H.rest_coordinates
    phi = H.annihilator_matrix(rest)
    s3_columns = [k for k, i in enumerate(rest) if i in H.ambient.s3_coordinates]
    return phi.select_columns(s3_columns)


def pi1_homogeneous(H: SubgroupSpec) -> FGAbelianGroup:
    if H.su3_block is not None:
        # SU3 is simply connected
        return component_group(H)
    return cokernel(homogeneous_relations(H))


@dataclass(frozen=True)
class LoopTarget:
    kind: str
    k: int = 0

    def __post_init__(self):
        if self.kind not in ("SO", "PU3", "Torus"):
            raise ValueError(f"unknown loop target {self.kind}")
        if self.kind == "SO" and self.k < 2:
            raise ValueError("SO(k) loops need k >= 2")

    @property
    def fundamental_group(self) -> FGAbelianGroup:
        if self.kind == "SO":
            return FGAbelianGroup(1) if self.k == 2 else FGAbelianGroup.cyclic(2)
        if self.kind == "PU3":
            return FGAbelianGroup.cyclic(3)
        return FGAbelianGroup(self.k)

    def __str__(self) -> str:
        if self.kind == "SO":
            return f"SO({self.k})"
        if self.kind == "PU3":
            return "PU(3)"
        return f"T{self.k}"


def so(k: int) -> LoopTarget:
    return LoopTarget("SO", k)


PU3 = LoopTarget("PU3")


def torus(rank: int) -> LoopTarget:
    return LoopTarget("Torus", rank)


@dataclass(frozen=True)
class LoopSpec:
    """theta -> block rotations R(w theta) in SO(k), diag(e^{i a theta}) in PU(3), or a torus slope."""

    target: LoopTarget
    block_weights: Tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "block_weights", tuple(self.block_weights))
        n = len(self.block_weights)
        if self.target.kind == "SO" and 2 * n > self.target.k:
            raise ValueError(f"{n} rotation blocks do not fit in {self.target}")
        if self.target.kind == "PU3" and n != 3:
            raise ValueError("PU(3) loops need exactly three diagonal weights")
        if self.target.kind == "Torus" and n != self.target.k:
            raise ValueError(f"torus loop needs {self.target.k} weights")

    def __add__(self, other: "LoopSpec") -> "LoopSpec":
        """Pointwise product of the two loops, which is their concatenation in pi_1."""
        if self.target != other.target:
            raise ValueError("cannot compose loops in different groups")
        n = max(len(self.block_weights), len(other.block_weights))
        a = list(self.block_weights) + [0] * (n - len(self.block_weights))
        b = list(other.block_weights) + [0] * (n - len(other.block_weights))
        return LoopSpec(self.target, tuple(x + y for x, y in zip(a, b)))

    def raw_class(self):
        """Integer lift of the class: total weight for SO(k) and PU(3), the slope for tori."""
        if self.target.kind == "Torus":
            return tuple(self.block_weights)
        return sum(self.block_weights)


@dataclass(frozen=True)
class LoopClass:
    group: FGAbelianGroup
    coordinates: Tuple[int, ...]

    @property
    def is_trivial(self) -> bool:
        return not any(self.coordinates)


def loop_class(loop: LoopSpec) -> LoopClass:
    """Class of the loop in pi_1 of its target.

    For PU(3) the class of diag(e^{i a1 t}, e^{i a2 t}, e^{i a3 t}) is taken as
    +(a1 + a2 + a3) mod 3; only its vanishing matters downstream.
    """
    group = loop.target.fundamental_group
    raw = loop.raw_class()
    if loop.target.kind == "Torus":
        return LoopClass(group, tuple(raw))
    if group.torsion:
        return LoopClass(group, (raw % group.torsion[0],))
    return LoopClass(group, (raw,))
