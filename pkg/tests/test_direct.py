from fractions import Fraction as F

import pytest

from tropical_descendants.direct import (
    Limits,
    MarkedTreeType,
    compute_rd_direct,
    enumerate_types,
    random_points,
    solve_positions,
    subset_sums,
)
from tropical_descendants.errors import LimitExceeded, NonGeneric, PreconditionError
from tropical_descendants.refined import RefinedValue
from tropical_descendants.subdivision import compute_rd
from tropical_descendants.weights import MarkingProfile

from _helpers import CONIC, CUBIC, LINE, SQUARE


def pts(*xy):
    return [(F(a), F(b)) for a, b in xy]


def test_line_two_points_one_type():
    types = list(enumerate_types(LINE, MarkingProfile((2,)), random_points(2, 5)))
    assert len(types) == 1
    t, _ = types[0]
    assert sum(1 for e in t.edges if e[1] is None) == 3


def test_line_marked_vertex_one_type():
    ((t, _),) = list(enumerate_types(LINE, MarkingProfile((0, 1)), pts((3, 7))))
    assert [e for e in t.edges if e[1] is not None] == []
    assert t.weight() == RefinedValue(1)


def test_solve_line():
    p = pts((0, 0), (3, 1))
    ((t, _),) = list(enumerate_types(LINE, MarkingProfile((2,)), p))
    sol = solve_positions(t, p)
    assert sol is not None and all(x > 0 for x in sol.lengths)
    with pytest.raises(NonGeneric):
        solve_positions(t, pts((1, 1), (1, 1)))


def test_solve_reports_infeasible_type():
    p = pts((0, 0), (3, 1))
    ((t, _),) = list(enumerate_types(LINE, MarkingProfile((2,)), p))
    assert solve_positions(t, [p[1], p[0]]) is None


def test_conic_type_infeasible_elsewhere():
    a, b = random_points(4, 11), random_points(4, 12)
    types = [t for t, _ in enumerate_types(CONIC, MarkingProfile((3, 1)), a)]
    assert all(solve_positions(t, a) is not None for t in types)
    assert any(solve_positions(t, b) is None for t in types)


def test_coinciding_points():
    with pytest.raises(NonGeneric):
        compute_rd_direct(LINE, (2,), points=pts((1, 2), (1, 2)))


def test_collinear_points_rejected_or_retried():
    # both points on a horizontal line: a ray of one meets the other point
    with pytest.raises(NonGeneric):
        compute_rd_direct(LINE, (2,), points=pts((0, 0), (5, 0)))


@pytest.mark.parametrize(
    "d,nbar",
    [(LINE, (2,)), (LINE, (0, 1)), (SQUARE, (3,)), (SQUARE, (0, 0, 1)), (CONIC, (3, 1)), (CONIC, (1, 2)),
     (CONIC, (2, 0, 1)), (CONIC, (1, 0, 0, 1)), (CONIC, (0, 0, 0, 0, 1))],
)
def test_agrees_with_lattice_backend(d, nbar):
    expected = compute_rd(d, nbar)
    for seed in (1, 2):
        assert compute_rd_direct(d, nbar, seed=seed).rd == expected


def test_conic_through_five_points():
    assert compute_rd_direct(CONIC, (5,), seed=3).rd == RefinedValue(1)


def test_accepted_solutions_are_exact():
    res = compute_rd_direct(CONIC, (2, 0, 1), seed=4)
    for t in res.types:
        sol = solve_positions(t, res.points)
        for i, p in enumerate(res.points):
            assert sol.positions[("m", i)] == p
        for tail, head, v in t.edges:
            if head is None:
                continue
            delta = (sol.positions[head][0] - sol.positions[tail][0], sol.positions[head][1] - sol.positions[tail][1])
            assert delta[0] * v[1] - delta[1] * v[0] == 0


@pytest.mark.parametrize("d,nbar", [(LINE, (2,)), (CONIC, (3, 1)), (CONIC, (1, 2))])
def test_regularity_filter_changes_nothing(d, nbar):
    on = compute_rd_direct(d, nbar, seed=9)
    off = compute_rd_direct(d, nbar, seed=9, regular_only=False)
    assert off.stats["nonregular"] == 0
    assert on.rd == off.rd


def test_limits():
    with pytest.raises(LimitExceeded):
        compute_rd_direct(CUBIC, (8,))
    with pytest.raises(LimitExceeded):
        compute_rd_direct(CONIC, (5,), limits=Limits(6, 5, 10))
    assert Limits.parse("degree=9,points=4") == Limits(9, 4, Limits.max_flows)


def test_point_count_checked():
    with pytest.raises(PreconditionError):
        list(enumerate_types(LINE, MarkingProfile((2,)), pts((0, 0))))


def test_subset_sums():
    assert subset_sums(LINE.entries) == {(1, 0), (0, 1), (-1, -1), (1, 1), (0, -1), (-1, 0)}


def test_deterministic_given_seed():
    a = compute_rd_direct(CONIC, (3, 1), seed=17)
    b = compute_rd_direct(CONIC, (3, 1), seed=17)
    assert [t.to_json() for t in a.types] == [t.to_json() for t in b.types]
    assert isinstance(a.types[0], MarkedTreeType)
