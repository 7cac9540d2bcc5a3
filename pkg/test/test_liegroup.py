from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.errors import UnsupportedSubgroupShape
from topology.liegroup import (
    PU3,
    S3_S3,
    S3_T2,
    SU3,
    FiniteGen,
    LoopSpec,
    Su3Block,
    SubgroupSpec,
    component_group,
    contains,
    dimension,
    identity_component,
    intersect,
    join,
    loop_class,
    pi1_homogeneous,
    primitive,
    so,
)
from utils.intlin import FGAbelianGroup


def circle(*slope, ambient=S3_S3):
    return SubgroupSpec.circle(ambient, slope)


@st.composite
def subgroups(draw, ambient=S3_S3):
    r = ambient.maximal_torus_rank
    entries = st.integers(min_value=-3, max_value=3)
    slopes = draw(st.lists(st.tuples(*[entries] * r).filter(any), max_size=2))
    gens = []
    for _ in range(draw(st.integers(min_value=0, max_value=2))):
        order = draw(st.integers(min_value=1, max_value=6))
        nums = draw(st.tuples(*[st.integers(min_value=0, max_value=5)] * r))
        gens.append(FiniteGen.reduced(nums, order))
    full = draw(st.sets(st.sampled_from(ambient.s3_coordinates), max_size=len(ambient.s3_coordinates)))
    return SubgroupSpec.generated(ambient, slopes=slopes, finite_gens=gens, full=full)


def test_ambient_groups():
    assert (S3_T2.dimension, S3_S3.dimension, SU3.dimension) == (5, 6, 8)
    assert (S3_T2.maximal_torus_rank, S3_S3.maximal_torus_rank) == (3, 2)
    assert S3_T2.fundamental_group == FGAbelianGroup(2)
    assert S3_S3.fundamental_group.is_trivial


def test_primitive_slopes():
    assert primitive((2, -4)) == (1, -2)
    assert primitive((0, -3, 6)) == (0, 1, -2)
    with pytest.raises(UnsupportedSubgroupShape):
        primitive((0, 0))


def test_finite_generator_order():
    with pytest.raises(UnsupportedSubgroupShape):
        FiniteGen((2, 0), 4)
    g = FiniteGen.reduced((2, 0), 4)
    assert (g.numerators, g.order) == ((1, 0), 2)
    assert FiniteGen((-1, 5), 3).numerators == (2, 2)
    assert FiniteGen((1, 0), 3).point == (Fraction(1, 3), Fraction(0))


def test_intersect_examples():
    assert intersect(circle(1, 0), circle(0, 1)) == SubgroupSpec.trivial(S3_S3)
    a = circle(1, 2)
    b = SubgroupSpec.generated(S3_S3, slopes=[(1, 2)], finite_gens=[FiniteGen((1, 0), 3)])
    assert intersect(a, b) == a


def test_intersect_in_su3_is_unsupported():
    L = SubgroupSpec.su3(Su3Block("S_U2U1"))
    with pytest.raises(UnsupportedSubgroupShape):
        intersect(L, L)


def test_contains_examples():
    T = SubgroupSpec.maximal_torus(S3_S3)
    assert contains(T, SubgroupSpec.trivial(S3_S3))
    assert contains(circle(1, 2), circle(2, 4))
    assert circle(1, 2) == circle(2, 4)
    z2 = SubgroupSpec.generated(S3_S3, finite_gens=[FiniteGen((1, 0), 2)])
    assert not contains(circle(0, 1), z2)
    s3 = SubgroupSpec.generated(S3_S3, full=[0])
    assert contains(s3, circle(1, 0))
    assert not contains(circle(1, 0), s3)


def test_su3_blocks():
    big = SubgroupSpec.su3(Su3Block("S_U2U1"))
    mid = SubgroupSpec.su3(Su3Block("SU2SU1_Zn", 4))
    small = SubgroupSpec.su3(Su3Block("Zn_diagonal", 4))
    assert contains(big, mid) and contains(mid, small)
    assert not contains(small, mid)
    assert [dimension(K) for K in (big, mid, small)] == [4, 3, 0]
    assert component_group(mid) == FGAbelianGroup.cyclic(4)
    assert identity_component(mid) == SubgroupSpec.su3(Su3Block("SU2SU1_Zn", 1))
    with pytest.raises(UnsupportedSubgroupShape):
        Su3Block("S_U2U1", 2)


def test_identity_component_examples():
    H = SubgroupSpec.generated(S3_S3, slopes=[(1, 1)], finite_gens=[FiniteGen((1, 0), 3)])
    assert identity_component(H) == circle(1, 1)
    zn = SubgroupSpec.generated(S3_S3, finite_gens=[FiniteGen((1, 2), 5)])
    assert identity_component(zn) == SubgroupSpec.trivial(S3_S3)
    s3_zn = SubgroupSpec.generated(S3_S3, finite_gens=[FiniteGen((0, 1), 4)], full=[0])
    assert identity_component(s3_zn) == SubgroupSpec.generated(S3_S3, full=[0])


def test_component_group_examples():
    assert component_group(circle(1, 0)).is_trivial
    H = SubgroupSpec.generated(S3_S3, slopes=[(0, 1)], finite_gens=[FiniteGen((1, 0), 4)])
    assert component_group(H) == FGAbelianGroup.cyclic(4)
    klein = SubgroupSpec.generated(S3_S3, finite_gens=[FiniteGen((1, 0), 2), FiniteGen((0, 1), 2)])
    assert component_group(klein) == FGAbelianGroup(0, (2, 2))


def test_dimension_examples():
    assert dimension(circle(1, 2, 3, ambient=S3_T2)) == 1
    assert dimension(SubgroupSpec.generated(S3_S3, slopes=[(0, 1)], full=[0])) == 4
    assert dimension(SubgroupSpec.maximal_torus(S3_T2)) == 3
    assert dimension(SubgroupSpec.su3(Su3Block("S_U2U1"))) == 4


def test_canonical_generators_rebuild_the_subgroup():
    H = SubgroupSpec.generated(S3_T2, slopes=[(1, 2, 0)], finite_gens=[FiniteGen((1, 1, 3), 6)])
    rebuilt = SubgroupSpec.generated(S3_T2, slopes=H.circle_slopes, finite_gens=H.finite_gens)
    assert rebuilt == H
    assert H.circle_slopes == [(1, 2, 0)]


def test_point_membership():
    H = SubgroupSpec.generated(S3_S3, slopes=[(1, 0)], finite_gens=[FiniteGen((0, 1), 3)])
    assert H.contains_point((Fraction(1, 7), Fraction(2, 3)))
    assert not H.contains_point((Fraction(0), Fraction(1, 2)))


def test_homogeneous_fundamental_group():
    assert pi1_homogeneous(SubgroupSpec.trivial(S3_T2)) == FGAbelianGroup(2)
    H = SubgroupSpec.generated(S3_S3, slopes=[(1, 0)], finite_gens=[FiniteGen((0, 1), 2)])
    assert pi1_homogeneous(H) == FGAbelianGroup.cyclic(2)
    assert pi1_homogeneous(SubgroupSpec.su3(Su3Block("Zn_diagonal", 5))) == FGAbelianGroup.cyclic(5)
    # the S3 circle of S3 x T2 is null-homotopic in G
    assert pi1_homogeneous(circle(1, 0, 0, ambient=S3_T2)) == FGAbelianGroup(2)


def test_join():
    assert join(circle(1, 0), circle(0, 1)) == SubgroupSpec.maximal_torus(S3_S3)


def test_loop_class_examples():
    for n in range(1, 8):
        assert loop_class(LoopSpec(so(5), (n,))).coordinates == (n % 2,)
    for p in range(-5, 6):
        assert loop_class(LoopSpec(so(5), (-p, p))).is_trivial
        cls = loop_class(LoopSpec(PU3, (0, p, p)))
        assert cls.coordinates == ((2 * p) % 3,)
        assert cls.is_trivial == (p % 3 == 0)


def test_loop_spec_shapes():
    with pytest.raises(ValueError):
        LoopSpec(so(3), (1, 1))
    with pytest.raises(ValueError):
        LoopSpec(PU3, (1, 2))


@given(st.lists(st.integers(min_value=-10, max_value=10), min_size=1, max_size=2),
       st.lists(st.integers(min_value=-10, max_value=10), min_size=1, max_size=2))
def test_loop_class_is_additive(a, b):
    x, y = LoopSpec(so(5), tuple(a)), LoopSpec(so(5), tuple(b))
    expected = (loop_class(x).coordinates[0] + loop_class(y).coordinates[0]) % 2
    assert loop_class(x + y).coordinates == (expected,)


@settings(max_examples=60, deadline=None)
@given(subgroups(), subgroups())
def test_intersect_lattice_properties(A, B):
    AB = intersect(A, B)
    assert AB == intersect(B, A)
    assert intersect(A, A) == A
    assert contains(A, AB) and contains(B, AB)
    assert dimension(AB) <= min(dimension(A), dimension(B))


@settings(max_examples=60, deadline=None)
@given(subgroups(ambient=S3_T2))
def test_identity_component_is_connected(A):
    A0 = identity_component(A)
    assert contains(A, A0)
    assert component_group(A0).is_trivial
    assert dimension(A0) == dimension(A)
