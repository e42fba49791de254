from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tropical_descendants.errors import Asymmetric, OddShape, PreconditionError
from tropical_descendants.refined import (
    Laurent,
    RefinedValue,
    S,
    bracket_minus,
    bracket_plus,
    canonicalize,
    eval_y1,
    eval_y_minus1,
    pole_analysis,
    pole_bound,
    symmetric_to_w,
    to_y_form,
    w_to_symmetric,
)

from _helpers import pal, yv

laurents = st.dictionaries(st.integers(-6, 6), st.fractions(max_denominator=7), max_size=6).map(Laurent)
values = st.builds(RefinedValue, laurents, st.integers(0, 4))


def test_bracket_minus_small():
    assert bracket_minus(1) == Laurent({0: 1})
    assert bracket_minus(3) == Laurent({2: 1, 0: 1, -2: 1})
    assert bracket_minus(0).is_zero()


@pytest.mark.parametrize("a", range(-7, 8))
def test_bracket_minus_is_odd_and_tends_to_alpha(a):
    assert bracket_minus(-a) == -bracket_minus(a)
    assert bracket_minus(a)(1) == a


@pytest.mark.parametrize("a", range(0, 9))
def test_bracket_plus_limit_and_symmetry(a):
    b = bracket_plus(a)
    assert eval_y1(b) == 1
    assert b.invert_variable() == b
    # (z^a + z^-a) = [a]^+ * (z + 1/z)
    assert b * RefinedValue(S) == RefinedValue(Laurent({a: 1, -a: 1}) if a else Laurent({0: 2}))


def test_bracket_plus_rejects_negative():
    with pytest.raises(PreconditionError):
        bracket_plus(-1)


def test_bracket_plus_zero_is_two_over_s():
    assert bracket_plus(0) == RefinedValue(2, 1)


def test_canonical_form_divides_out_s():
    v = RefinedValue(S * S * 3, 3)
    assert v.den_pow == 1 and v.num == Laurent({0: 3})


@given(values)
def test_canonicalize_idempotent(v):
    assert canonicalize(canonicalize(v)) == canonicalize(v)
    assert canonicalize(v).num == v.num and canonicalize(v).den_pow == v.den_pow


@given(values, values)
def test_field_axioms_on_samples(a, b):
    assert a + b == b + a
    assert a * b == b * a
    assert (a - b) + b == a
    assert eval_y1(a * b) == eval_y1(a) * eval_y1(b)


@given(values)
def test_json_round_trip(v):
    assert RefinedValue.from_json(v.to_json()) == v


def test_json_layout():
    v = RefinedValue(Laurent({2: Fraction(1, 2), -2: 3}), 1)
    assert v.to_json() == {"num": [[2, "1/2"], [-2, "3/1"]], "den_pow": 1}


def test_y_form_and_eval():
    v = yv(pal(1, 10), 0)
    assert v.to_string() == "y + 10 + y^-1"
    assert eval_y1(v) == 12
    assert eval_y_minus1(v) == 8


def test_odd_shape():
    with pytest.raises(OddShape):
        to_y_form(bracket_plus(0))
    # string output falls back to the z form
    assert "z" in bracket_plus(0).to_string()


def test_pole_at_minus_one_is_reported():
    with pytest.raises(PreconditionError):
        eval_y_minus1(yv({0: 1}, 1))


@given(st.lists(st.fractions(max_denominator=5), min_size=1, max_size=6))
def test_w_round_trip(coeffs):
    while coeffs and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    assert symmetric_to_w(w_to_symmetric(coeffs)) == [Fraction(c) for c in coeffs]


def test_asymmetric_rejected():
    with pytest.raises(Asymmetric):
        symmetric_to_w(Laurent({1: 1}))


def test_pole_bound():
    assert pole_bound((2, 0, 2)) == 2
    assert pole_bound((8,)) == 0
    assert pole_bound((0, 0, 0, 1)) == 1
    assert pole_bound((0, 0, 0, 0, 1, 1)) == 4


def test_pole_analysis_golden_total():
    rd = yv(pal(16, 96, 384, 736), 2)
    rep = pole_analysis(rd, {"p_a": 1, "boundary_points": 9, "num_ends": 9}, (2, 0, 2))
    assert (rep.m_y, rep.deg_F, rep.bound) == (2, 3, 2)
    assert rep.f_coeffs == [34 * 16, 21 * 16, 6 * 16, 16]
    assert rep.bound_holds and rep.degree_matches
