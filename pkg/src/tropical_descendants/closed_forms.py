"""Closed-form weights for the star and triangle families.

The star family is a single marked vertex with local degree
``{(a_1,0), ..., (a_r,0), (-a,0)}``; the triangle family adds height ``h``:
``{(a_1,0), ..., (a_r,0), (-1,-h), (1-a,h)}``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial, gcd
from typing import Sequence

from .errors import PreconditionError
from .lattice import Vec
from .refined import Laurent, RefinedValue, bracket_plus

S_INV = RefinedValue(1, 1)  # 1/(z + 1/z)


def _check(r: int, a: Sequence[int]) -> None:
    if r < 2:
        raise PreconditionError("the star and triangle families need r >= 2")
    if len(a) != r or any(x < 1 for x in a):
        raise PreconditionError("a must list r positive integers")


def star_degree(a: Sequence[int]) -> list[Vec]:
    return [(x, 0) for x in a] + [(-sum(a), 0)]


def triangle_degree(h: int, a: Sequence[int]) -> list[Vec]:
    return [(x, 0) for x in a] + [(-1, -h), (1 - sum(a), h)]


def star_weight(r: int, a: Sequence[int] | None = None) -> RefinedValue:
    if a is None:
        a = [1] * r
    _check(r, a)
    return RefinedValue(Fraction(factorial(r) * factorial(r + 1), 6), r - 1)


def star_weight_recursive(r: int) -> RefinedValue:
    """Iterate W_r = C(r+1, 2) * [0]^+ * W_(r-1) from W_2 = [0]^+."""
    w = bracket_plus(0)
    for j in range(3, r + 1):
        w = w * bracket_plus(0) * comb(j + 1, 2)
    return w


def triangle_family_closed(h: int, a: Sequence[int]) -> RefinedValue:
    a = tuple(a)
    r = len(a)
    _check(r, a)
    if h < 1:
        raise PreconditionError("h must be positive")
    total = sum(a)
    num = Laurent()
    for size in range(r + 1):
        for J in combinations(range(r), size):
            e = h * (total - 2 * sum(a[j] for j in J))
            c = factorial(r - size) * factorial(size)
            num = num + Laurent({e: c}) + Laurent({-e: c})
    return RefinedValue(num * Fraction(factorial(r + 2), 12), r)


def triangle_family_recursive(h: int, a: Sequence[int], literal: bool = True) -> RefinedValue:
    """Three-term splitting recursion over first merges.

    ``literal=True`` uses the grouping as commonly stated: no 1/(z+1/z)
    on the first term and an ordered double sum in the third.
    ``literal=False`` uses the grouping that follows from the marked
    vertex recursion.
    """
    a = tuple(a)
    _check(len(a), a)
    return _tri_rec(h, tuple(sorted(a)), literal)


@lru_cache(maxsize=None)
def _tri_rec(h: int, a: tuple[int, ...], literal: bool) -> RefinedValue:
    r = len(a)
    if r == 1:
        return bracket_plus(a[0] * h)
    total = sum(a)
    if literal:
        first = RefinedValue(Laurent({total * h: 1, -total * h: 1})) * star_weight(r)
    else:
        first = bracket_plus(total * h) * star_weight(r)
    second = RefinedValue(0)
    for i in range(r):
        rest = tuple(sorted(a[:i] + a[i + 1:]))
        second = second + bracket_plus(a[i] * h) * _tri_rec(h, rest, literal) * 2
    third = RefinedValue(0)
    for i, j in combinations(range(r), 2):
        rest = tuple(sorted([a[t] for t in range(r) if t not in (i, j)] + [a[i] + a[j]]))
        third = third + bracket_plus(0) * _tri_rec(h, rest, literal)
    if literal:
        third = third * 2
    return first + second + third


def _y_poly(coeffs: dict[int, int]) -> Laurent:
    """Laurent polynomial in y written in z = y^(1/2)."""
    return Laurent({2 * e: c for e, c in coeffs.items()})


def ac1_even(k: int) -> RefinedValue:
    if k < 1:
        raise PreconditionError("k >= 1")
    c = Fraction(factorial(2 * k) * factorial(2 * k + 2), 6)
    num = _y_poly({e: 1 for e in range(-2 * k, 2 * k + 1, 2)})
    return RefinedValue(num * c, 2 * k)


def ac1_odd(k: int, h: int) -> RefinedValue:
    if k < 1 or h <= 1 or gcd(h, 2 * k) != 1:
        raise PreconditionError("need k >= 1, h > 1 and gcd(h, 2k) = 1")
    c = Fraction(factorial(2 * k + 3) * factorial(2 * k + 1), 6)
    alt = _y_poly({(h - 1) // 2 - i: (-1) ** i for i in range(h)})
    geo = _y_poly({h * i: 1 for i in range(-k, k + 1)})
    return RefinedValue(alt * geo * c, 2 * k)


def ac1_odd_corrected(k: int, h: int) -> RefinedValue:
    """Odd family with the inner sum running over exponents h(k - 2i), i = 0..k."""
    if k < 1 or h <= 1 or gcd(h, 2 * k) != 1:
        raise PreconditionError("need k >= 1, h > 1 and gcd(h, 2k) = 1")
    c = Fraction(factorial(2 * k + 3) * factorial(2 * k + 1), 6)
    alt = _y_poly({(h - 1) // 2 - i: (-1) ** i for i in range(h)})
    geo = _y_poly({h * (k - 2 * i): 1 for i in range(k + 1)})
    return RefinedValue(alt * geo * c, 2 * k)
