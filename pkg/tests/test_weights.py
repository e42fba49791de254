import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tropical_descendants.errors import ProfileMismatch, UnmarkedMultivalent
from tropical_descendants.refined import Laurent, RefinedValue, eval_y1
from tropical_descendants.weights import (
    CurveWeightInput,
    MarkingProfile,
    curve_weight_refined,
    mikhalkin_mu,
    normalization_factor,
    random_wall_multiset,
    rd_from_labeled,
    recursion_summand_count,
    vertex_weight_classical,
    vertex_weight_refined,
    wall_identity_sum,
)

from _helpers import S_INV, pal, yv


@st.composite
def local_degrees(draw, lo=3, hi=6, box=2, nonzero=False):
    m = draw(st.integers(lo, hi))
    vec = st.tuples(st.integers(-box, box), st.integers(-box, box))
    if nonzero:
        vec = vec.filter(lambda v: v != (0, 0))
    vs = draw(st.lists(vec, min_size=m - 1, max_size=m - 1))
    last = (-sum(v[0] for v in vs), -sum(v[1] for v in vs))
    if nonzero and last == (0, 0):
        vs = vs[:-1] + [(vs[-1][0] + 1, vs[-1][1])]
        last = (last[0] - 1, last[1])
    return vs + [last]


def test_mikhalkin_mu():
    assert mikhalkin_mu([(1, 0), (0, 1), (-1, -1)]) == 1
    assert mikhalkin_mu([(2, 0), (-1, -2), (-1, 2)]) == 4
    assert mikhalkin_mu([(0, 0), (1, 0), (-1, 0)]) == 0


@pytest.mark.parametrize(
    "vs,expected",
    [
        ([(1, 0), (0, 1), (-1, -1)], RefinedValue(1)),
        ([(1, 0), (1, 0), (1, 0), (-3, 0)], RefinedValue(24, 2)),
        ([(1, 0), (1, 0), (-1, -2), (-1, 2)], yv(pal(8, 0, 8), 1)),
        ([(1, 0), (1, 0), (-1, 0), (-1, 0)], yv({0: 24}, 1)),
        ([(1, 0), (-1, 0), (0, 1), (0, -1)], yv(pal(4, 16), 1)),
        ([(1, -1), (1, 1), (-1, 0), (-1, 0)], yv(pal(8, 8), 1)),
        ([(0, -1), (1, 0), (1, 1), (-2, 0)], RefinedValue(Laurent({2: 4, 0: 4, -2: 4}), 1)),
    ],
)
def test_marked_vertex_examples(vs, expected):
    assert vertex_weight_refined(vs, marked=True) == expected


def test_valency_two_marked_vertex():
    assert vertex_weight_refined([(1, 0), (-1, 0)], marked=True) == RefinedValue(1)


def test_unmarked_weights():
    assert vertex_weight_refined([(1, 0), (-1, 2), (0, -2)], marked=False) == RefinedValue(Laurent({1: 1, -1: 1}))
    assert vertex_weight_classical([(1, 0), (-1, 2), (0, -2)], marked=False) == 2
    with pytest.raises(UnmarkedMultivalent):
        vertex_weight_refined([(1, 0), (-1, 0), (0, 1), (0, -1)], marked=False)


def test_classical_closed_values():
    assert vertex_weight_classical([(1, 0), (-1, 0), (0, 1), (0, -1)], marked=True) == 6
    five = [(1, 0), (1, 0), (0, 1), (-1, -1), (-1, 0)]
    assert vertex_weight_classical(five, marked=True) == 60


@settings(max_examples=60, deadline=None)
@given(local_degrees())
def test_classical_limit(vs):
    assert eval_y1(vertex_weight_refined(vs, True)) == vertex_weight_classical(vs, True)


@settings(max_examples=40, deadline=None)
@given(local_degrees(), st.randoms(use_true_random=False))
def test_order_independent(vs, rnd):
    shuffled = list(vs)
    rnd.shuffle(shuffled)
    assert vertex_weight_refined(vs, True) == vertex_weight_refined(shuffled, True)


@settings(max_examples=40, deadline=None)
@given(
    local_degrees(),
    st.sampled_from([((0, -1), (1, 0)), ((1, 1), (0, 1)), ((2, 1), (1, 1)), ((1, 0), (0, -1)), ((0, 1), (1, 0))]),
)
def test_unimodular_invariance(vs, m):
    (a, b), (c, d) = m
    img = [(a * x + c * y, b * x + d * y) for x, y in vs]
    w = vertex_weight_refined(vs, True)
    assert vertex_weight_refined(img, True) == w
    assert w.invert_variable() == w


def test_wall_identity_seeded():
    rng = random.Random(2024)
    for i in range(24):
        b = random_wall_multiset(rng, 4 + i % 4)
        assert wall_identity_sum(b) == RefinedValue(0), b


@settings(max_examples=30, deadline=None)
@given(local_degrees(lo=4, hi=6, box=3, nonzero=True))
def test_wall_identity_property(b):
    if any((b[0][0] + v[0], b[0][1] + v[1]) == (0, 0) for v in b[1:]):
        return
    assert wall_identity_sum(b) == RefinedValue(0)


def test_summand_count():
    assert recursion_summand_count(3) == 3
    assert recursion_summand_count(4) == 18
    assert recursion_summand_count(5) == 180


def test_profile():
    p = MarkingProfile.parse("2,0,2,0")
    assert p.n == (2, 0, 2)
    assert p.psi_indices() == [0, 0, 2, 2]
    p.check(9)
    with pytest.raises(ProfileMismatch):
        p.check(8)


def test_normalization():
    assert normalization_factor((2, 0, 2)) == Fraction(1, 36)
    assert normalization_factor((5,)) == 1
    assert normalization_factor((0, 0, 0, 1)) == Fraction(1, 60)


def test_curve_weight():
    assert curve_weight_refined(CurveWeightInput([(((1, 0), (0, 1), (-1, -1)), True)])) == RefinedValue(1)
    two = CurveWeightInput([(((2, 0), (-1, 1), (-1, -1)), False), (((3, 0), (0, 1), (-3, -1)), False)], aut=1)
    assert curve_weight_refined(two, labeled=True) == RefinedValue(Laurent({1: 1, -1: 1}) * Laurent({2: 1, 0: 1, -2: 1}))
    c = CurveWeightInput(
        [(((1, 0), (1, 0), (-1, 0), (-1, 0)), True), (((2, 0), (-1, 2), (-1, -2)), False)], aut=2
    )
    # weights 4 (as [4]^- evaluates at y=1) times 24/(y+2+1/y), halved
    assert eval_y1(curve_weight_refined(c)) == Fraction(4 * 6, 2)
    assert curve_weight_refined(c) == curve_weight_refined(c, labeled=True) / 2


def test_rd_from_labeled():
    assert rd_from_labeled(RefinedValue(6), 3) == RefinedValue(1)
    assert rd_from_labeled(RefinedValue(0), 3) == RefinedValue(0)
    x = S_INV * 5
    assert rd_from_labeled(x * 24, 4) == x
