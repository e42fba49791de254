"""Exact Laurent polynomials in z = y^(1/2) and refined values.

A :class:`RefinedValue` is ``num / (z + 1/z)**den_pow`` with ``num`` a
Laurent polynomial over the rationals.  Values are kept in canonical form:
the numerator is not divisible by ``z + 1/z`` unless ``den_pow == 0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Union

from .errors import Asymmetric, OddShape, PreconditionError

Scalar = Union[int, Fraction]


class Laurent:
    """Immutable Laurent polynomial with rational coefficients."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, Scalar] | None = None):
        c = {}
        if coeffs:
            for e, v in coeffs.items():
                if v:
                    c[int(e)] = Fraction(v)
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c: dict) -> "Laurent":
        obj = cls.__new__(cls)
        obj._c = c
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, exp: int, coeff: Scalar = 1) -> "Laurent":
        return cls({exp: coeff})

    @classmethod
    def const(cls, c: Scalar) -> "Laurent":
        return cls({0: c})

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._c)

    def items(self):
        """(exponent, coefficient) pairs by descending exponent."""
        return sorted(self._c.items(), reverse=True)

    def is_zero(self) -> bool:
        return not self._c

    def max_exp(self) -> int:
        return max(self._c)

    def min_exp(self) -> int:
        return min(self._c)

    def __getitem__(self, e: int) -> Fraction:
        return self._c.get(e, Fraction(0))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Laurent.const(other)
        if not isinstance(other, Laurent):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __add__(self, other) -> "Laurent":
        if isinstance(other, (int, Fraction)):
            other = Laurent.const(other)
        c = dict(self._c)
        for e, v in other._c.items():
            s = c.get(e, 0) + v
            if s:
                c[e] = s
            else:
                c.pop(e, None)
        return Laurent._raw(c)

    __radd__ = __add__

    def __neg__(self) -> "Laurent":
        return Laurent._raw({e: -v for e, v in self._c.items()})

    def __sub__(self, other) -> "Laurent":
        if isinstance(other, (int, Fraction)):
            other = Laurent.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "Laurent":
        return (-self) + other

    def __mul__(self, other) -> "Laurent":
        if isinstance(other, (int, Fraction)):
            if not other:
                return Laurent()
            return Laurent._raw({e: v * other for e, v in self._c.items()})
        if not isinstance(other, Laurent):
            return NotImplemented
        c: dict[int, Fraction] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                e = e1 + e2
                c[e] = c.get(e, 0) + v1 * v2
        return Laurent._raw({e: v for e, v in c.items() if v})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Laurent":
        if n < 0:
            raise ValueError("negative power")
        result = Laurent.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "Laurent":
        """Multiply by z**k."""
        return Laurent._raw({e + k: v for e, v in self._c.items()})

    def invert_variable(self) -> "Laurent":
        """Substitute z -> 1/z."""
        return Laurent._raw({-e: v for e, v in self._c.items()})

    def is_symmetric(self) -> bool:
        return self == self.invert_variable()

    def __call__(self, z: Scalar) -> Fraction:
        z = Fraction(z)
        return sum((v * z**e for e, v in self._c.items()), Fraction(0))

    def divisible_by_s(self) -> bool:
        """True iff divisible by z + 1/z, i.e. the numerator vanishes at z = i."""
        re = im = Fraction(0)
        for e, v in self._c.items():
            r = e % 4
            if r == 0:
                re += v
            elif r == 1:
                im += v
            elif r == 2:
                re -= v
            else:
                im -= v
        return re == 0 and im == 0

    def div_s(self) -> "Laurent":
        """Exact division by z + 1/z; raises ValueError when not divisible."""
        if not self._c:
            return self
        lo, hi = self.min_exp(), self.max_exp()
        # p = z^lo * q(z); p / (z + 1/z) = z^(lo+1) * q(z) / (z^2 + 1)
        q = [self._c.get(lo + d, Fraction(0)) for d in range(hi - lo + 1)]
        deg = len(q) - 1
        if deg < 2:
            raise ValueError("not divisible by z + 1/z")
        r = [Fraction(0)] * (deg - 1)
        work = list(q)
        for d in range(deg, 1, -1):
            c = work[d]
            r[d - 2] = c
            work[d - 2] -= c
            work[d] = 0
        if work[0] or work[1]:
            raise ValueError("not divisible by z + 1/z")
        return Laurent({lo + 1 + d: c for d, c in enumerate(r)})

    def __repr__(self) -> str:
        return f"Laurent({self.to_string()})"

    def to_string(self, var: str = "z") -> str:
        if not self._c:
            return "0"
        parts = []
        for e, v in self.items():
            mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
            if mono:
                if v == 1:
                    term = mono
                elif v == -1:
                    term = "-" + mono
                else:
                    term = f"{v}*{mono}"
            else:
                term = str(v)
            parts.append(term)
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out


Z = Laurent.monomial(1)
ONE = Laurent.const(1)
S = Laurent({1: 1, -1: 1})  # z + 1/z


class RefinedValue:
    """``num / (z + 1/z)**den_pow`` in canonical form."""

    __slots__ = ("num", "den_pow")

    def __init__(self, num: Laurent | Scalar = 0, den_pow: int = 0, *, canonical: bool = False):
        if not isinstance(num, Laurent):
            num = Laurent.const(num)
        if den_pow < 0:
            num = num * (S ** (-den_pow))
            den_pow = 0
        if not canonical:
            if num.is_zero():
                den_pow = 0
            while den_pow > 0 and num.divisible_by_s():
                num = num.div_s()
                den_pow -= 1
        self.num = num
        self.den_pow = den_pow

    @classmethod
    def coerce(cls, v) -> "RefinedValue":
        if isinstance(v, RefinedValue):
            return v
        return cls(v)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other) -> bool:
        try:
            other = RefinedValue.coerce(other)
        except TypeError:
            return NotImplemented
        return self.den_pow == other.den_pow and self.num == other.num

    def __hash__(self) -> int:
        return hash((self.num, self.den_pow))

    def __add__(self, other) -> "RefinedValue":
        other = RefinedValue.coerce(other)
        d = max(self.den_pow, other.den_pow)
        a = self.num if self.den_pow == d else self.num * S ** (d - self.den_pow)
        b = other.num if other.den_pow == d else other.num * S ** (d - other.den_pow)
        return RefinedValue(a + b, d)

    __radd__ = __add__

    def __neg__(self) -> "RefinedValue":
        return RefinedValue(-self.num, self.den_pow, canonical=True)

    def __sub__(self, other) -> "RefinedValue":
        return self + (-RefinedValue.coerce(other))

    def __rsub__(self, other) -> "RefinedValue":
        return RefinedValue.coerce(other) - self

    def __mul__(self, other) -> "RefinedValue":
        if isinstance(other, (int, Fraction)):
            return RefinedValue(self.num * other, self.den_pow, canonical=bool(other))
        if isinstance(other, Laurent):
            other = RefinedValue(other)
        if not isinstance(other, RefinedValue):
            return NotImplemented
        return RefinedValue(self.num * other.num, self.den_pow + other.den_pow)

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> "RefinedValue":
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return RefinedValue(self.num * (Fraction(1) / Fraction(other)), self.den_pow, canonical=True)

    def __pow__(self, n: int) -> "RefinedValue":
        return RefinedValue(self.num**n, self.den_pow * n)

    def invert_variable(self) -> "RefinedValue":
        return RefinedValue(self.num.invert_variable(), self.den_pow, canonical=True)

    def evaluate(self, z: Scalar) -> Fraction:
        z = Fraction(z)
        return self.num(z) / ((z + 1 / z) ** self.den_pow)

    def __repr__(self) -> str:
        return f"RefinedValue({self.to_string()})"

    def to_string(self) -> str:
        try:
            return y_form_string(self)
        except OddShape:
            return z_form_string(self)

    def to_json(self) -> dict:
        return {
            "num": [[e, _frac_str(c)] for e, c in self.num.items()],
            "den_pow": self.den_pow,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "RefinedValue":
        num = Laurent({int(e): Fraction(c) for e, c in data["num"]})
        return cls(num, int(data["den_pow"]))


def _frac_str(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def canonicalize(v: RefinedValue) -> RefinedValue:
    """Strip common (z + 1/z) factors between numerator and denominator."""
    return RefinedValue(v.num, v.den_pow)


def bracket_minus(alpha: int) -> Laurent:
    """Quantum integer (z^a - z^-a)/(z - 1/z); odd in ``alpha``."""
    if alpha == 0:
        return Laurent()
    sign = 1 if alpha > 0 else -1
    a = abs(alpha)
    return Laurent({e: sign for e in range(1 - a, a, 2)})


def bracket_plus(alpha: int) -> RefinedValue:
    """(z^a + z^-a)/(z + 1/z) for ``alpha >= 0``."""
    if alpha < 0:
        raise PreconditionError(f"bracket_plus needs alpha >= 0, got {alpha}")
    if alpha == 0:
        return RefinedValue(Laurent.const(2), 1, canonical=True)
    if alpha % 2:
        # alternating geometric sum z^(a-1) - z^(a-3) + ... + z^(1-a)
        return RefinedValue(
            Laurent({e: (-1) ** ((alpha - 1 - e) // 2) for e in range(1 - alpha, alpha, 2)}),
            canonical=True,
        )
    return RefinedValue(Laurent({alpha: 1, -alpha: 1}), 1, canonical=True)


def eval_y1(v: RefinedValue) -> Fraction:
    """Specialization y = 1 (z = 1)."""
    return v.num(1) / (2**v.den_pow)


@dataclass(frozen=True)
class YForm:
    """Numerator as a Laurent polynomial in y over (y + 2 + 1/y)**m."""

    numerator: Laurent
    m: int

    def evaluate(self, y: Scalar) -> Fraction:
        y = Fraction(y)
        return self.numerator(y) / ((y + 2 + 1 / y) ** self.m)


def to_y_form(v: RefinedValue) -> YForm:
    v = canonicalize(v)
    if v.den_pow % 2 or any(e % 2 for e in v.num.coeffs):
        raise OddShape(f"value has half-integral y-exponents or odd pole order: {z_form_string(v)}")
    return YForm(Laurent({e // 2: c for e, c in v.num.coeffs.items()}), v.den_pow // 2)


def eval_y_minus1(v: RefinedValue) -> Fraction:
    """Value at y = -1; defined only when there is no pole there."""
    yf = to_y_form(v)
    if yf.m:
        raise PreconditionError(f"pole of order {yf.m} at y = -1")
    return yf.numerator(-1)


def z_form_string(v: RefinedValue) -> str:
    num = v.num.to_string("z")
    if v.den_pow == 0:
        return num
    return f"({num})/(z + z^-1)^{v.den_pow}"


def y_form_string(v: RefinedValue) -> str:
    yf = to_y_form(v)
    num = yf.numerator.to_string("y")
    if yf.m == 0:
        return num
    den = "(y + 2 + y^-1)" if yf.m == 1 else f"(y + 2 + y^-1)^{yf.m}"
    return f"({num})/{den}"


def symmetric_to_w(numerator: Laurent) -> list[Fraction]:
    """Rewrite a y <-> 1/y symmetric Laurent polynomial as F(w), w = y + 1/y.

    Returns coefficients of F by ascending power of w.
    """
    if not numerator.is_symmetric():
        raise Asymmetric("numerator is not palindromic")
    rest = numerator
    if rest.is_zero():
        return []
    top = rest.max_exp()
    coeffs = [Fraction(0)] * (top + 1)
    w = Laurent({1: 1, -1: 1})
    while not rest.is_zero():
        d = rest.max_exp()
        c = rest[d]
        coeffs[d] = c
        rest = rest - (w**d) * c
    return coeffs


def w_to_symmetric(coeffs: Iterable[Scalar]) -> Laurent:
    w = Laurent({1: 1, -1: 1})
    out = Laurent()
    for i, c in enumerate(coeffs):
        if c:
            out = out + (w**i) * c
    return out


@dataclass
class PoleReport:
    m_y: int
    deg_F: int
    bound: int
    f_coeffs: list[Fraction] = field(default_factory=list)
    expected_deg_F: Fraction | None = None

    @property
    def bound_holds(self) -> bool:
        return self.m_y <= self.bound

    @property
    def degree_matches(self) -> bool:
        return self.expected_deg_F is not None and self.deg_F == self.expected_deg_F

    def to_json(self) -> dict:
        return {
            "m_y": self.m_y,
            "deg_F": self.deg_F,
            "bound": self.bound,
            "bound_holds": self.bound_holds,
            "expected_deg_F": None if self.expected_deg_F is None else _frac_str(Fraction(self.expected_deg_F)),
            "degree_matches": self.degree_matches,
            "f_coeffs": [_frac_str(c) for c in self.f_coeffs],
        }


def pole_bound(nbar: Iterable[int]) -> int:
    """sum_{k>=1} k (n_{2k} + n_{2k+1})."""
    n = list(nbar)
    total = 0
    for idx, nk in enumerate(n):
        if idx >= 2:
            total += (idx // 2) * nk
    return total


def pole_analysis(v: RefinedValue, geometry: Mapping | None, nbar: Iterable[int]) -> PoleReport:
    """Pole order at y = -1, the polynomial F and the degree/pole-order checks.

    ``geometry`` carries ``p_a`` (interior lattice points), ``boundary_points``
    and ``num_ends``; pass None to skip the degree prediction.
    """
    yf = to_y_form(v)
    f = symmetric_to_w(yf.numerator)
    deg = len(f) - 1 if f else -1
    expected = None
    if geometry is not None:
        expected = (
            Fraction(geometry["p_a"])
            + Fraction(geometry["boundary_points"] - geometry["num_ends"], 2)
            + yf.m
        )
    return PoleReport(m_y=yf.m, deg_F=deg, bound=pole_bound(nbar), f_coeffs=f, expected_deg_F=expected)


def from_y_form(numerator: Laurent, m: int) -> RefinedValue:
    """Inverse of :func:`to_y_form`."""
    return RefinedValue(Laurent({2 * e: c for e, c in numerator.coeffs.items()}), 2 * m)


def binomial_w_power(d: int) -> Laurent:
    """(y + 1/y)**d as a Laurent polynomial in y (helper for tests)."""
    return Laurent({d - 2 * i: comb(d, i) for i in range(d + 1)})
