from itertools import combinations_with_replacement

import pytest

from tropical_descendants import closed_forms as cf
from tropical_descendants.errors import PreconditionError
from tropical_descendants.refined import RefinedValue, eval_y1, to_y_form
from tropical_descendants.weights import vertex_weight_refined

from _helpers import pal, yv


@pytest.mark.parametrize("r", range(2, 7))
def test_star_closed_form(r):
    for a in combinations_with_replacement((1, 2, 3), r):
        assert vertex_weight_refined(cf.star_degree(a), True) == cf.star_weight(r, a)
    assert cf.star_weight_recursive(r) == cf.star_weight(r)


def test_star_values():
    assert cf.star_weight(3) == RefinedValue(24, 2)
    assert cf.star_weight(4) == RefinedValue(480, 3)


@pytest.mark.parametrize("r", range(2, 5))
@pytest.mark.parametrize("h", (1, 2, 3))
def test_triangle_closed_form(r, h):
    for a in combinations_with_replacement((1, 2), r):
        closed = cf.triangle_family_closed(h, a)
        assert vertex_weight_refined(cf.triangle_degree(h, a), True) == closed
        assert cf.triangle_family_recursive(h, a, literal=False) == closed


def test_triangle_anchor():
    expected = yv(pal(8, 0, 8), 1)
    assert cf.triangle_family_closed(2, (1, 1)) == expected
    assert vertex_weight_refined(cf.triangle_degree(2, (1, 1)), True) == expected


def test_literal_grouping_differs():
    assert cf.triangle_family_recursive(2, (1, 1), literal=True) != cf.triangle_family_closed(2, (1, 1))


@pytest.mark.parametrize("k", (1, 2, 3))
def test_even_family(k):
    c = cf.triangle_family_closed(2, (1,) * (2 * k))
    assert cf.ac1_even(k) == c
    assert to_y_form(c).m == k


@pytest.mark.parametrize("k,h", [(1, 3), (1, 5), (1, 7), (2, 3), (2, 5)])
def test_odd_family(k, h):
    c = cf.triangle_family_closed(h, (1,) * (2 * k + 1))
    assert cf.ac1_odd_corrected(k, h) == c
    assert to_y_form(c).m == k


def test_odd_family_stated_sum_overcounts():
    # the sum over y^(h i), i = -k..k has 2k+1 terms where k+1 are needed
    assert eval_y1(cf.ac1_odd(1, 3)) == 90
    assert eval_y1(cf.triangle_family_closed(3, (1, 1, 1))) == 60


def test_preconditions():
    with pytest.raises(PreconditionError):
        cf.star_weight(1)
    with pytest.raises(PreconditionError):
        cf.ac1_odd(1, 2)
    with pytest.raises(PreconditionError):
        cf.triangle_family_closed(0, (1, 1))


def test_stated_odd_example():
    # 120 (y - 1 + 1/y)(y^3 + 1 + 1/y^3)/(y + 2 + 1/y)
    alt = yv({1: 1, 0: -1, -1: 1})
    geo = yv({3: 1, 0: 1, -3: 1})
    assert cf.ac1_odd(1, 3) == alt * geo * yv({0: 120}, 1)
    assert cf.ac1_odd_corrected(1, 3) == alt * yv({3: 1, -3: 1}) * yv({0: 120}, 1)


def test_even_examples():
    assert cf.ac1_even(1) == yv(pal(8, 0, 8), 1)
    assert cf.ac1_even(2) == yv(pal(1, 0, 1, 0, 1), 2, 24 * 720 // 6)
