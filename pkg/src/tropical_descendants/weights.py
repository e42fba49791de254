"""Refined and classical vertex weights, curve weights and normalizations."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Sequence

from .errors import PreconditionError, ProfileMismatch, UnmarkedMultivalent
from .lattice import Vec, vadd, wedge
from .refined import RefinedValue, bracket_minus, bracket_plus


@dataclass(frozen=True)
class MarkingProfile:
    """n_k = number of marked points of psi-index k."""

    n: tuple[int, ...]

    def __post_init__(self):
        n = tuple(int(x) for x in self.n)
        if any(x < 0 for x in n):
            raise PreconditionError("marking counts must be nonnegative")
        while n and n[-1] == 0:
            n = n[:-1]
        object.__setattr__(self, "n", n)

    @classmethod
    def parse(cls, text: str) -> "MarkingProfile":
        return cls(tuple(int(t) for t in text.replace(" ", "").split(",") if t))

    def __getitem__(self, k: int) -> int:
        return self.n[k] if 0 <= k < len(self.n) else 0

    @property
    def total(self) -> int:
        return sum(self.n)

    def weighted_total(self) -> int:
        return sum((k + 1) * nk for k, nk in enumerate(self.n))

    def check(self, degree_size: int) -> None:
        if self.weighted_total() != degree_size - 1:
            raise ProfileMismatch(
                f"sum (k+1) n_k = {self.weighted_total()} but |degree| - 1 = {degree_size - 1}"
            )

    def psi_indices(self) -> list[int]:
        """Default tau: indices in increasing order."""
        return [k for k, nk in enumerate(self.n) for _ in range(nk)]

    def __str__(self) -> str:
        return ",".join(str(x) for x in self.n) or "0"


def canonical(vectors: Iterable[Vec]) -> tuple[Vec, ...]:
    return tuple(sorted(tuple(v) for v in vectors))


def mikhalkin_mu(v: Sequence[Vec]) -> int:
    if len(v) != 3:
        raise PreconditionError("Mikhalkin weight needs exactly 3 vectors")
    return abs(wedge(v[0], v[1]))


def _check_balanced(v: Sequence[Vec]) -> None:
    if sum(a[0] for a in v) or sum(a[1] for a in v):
        raise PreconditionError(f"local degree {list(v)} is not balanced")


def merged_pairs(key: tuple[Vec, ...]):
    """Yield (multiplicity, wedge, merged multiset) over unordered position pairs."""
    counts = Counter(key)
    vals = sorted(counts)
    for ia, a in enumerate(vals):
        for b in vals[ia:]:
            if a == b:
                mult = counts[a] * (counts[a] - 1) // 2
            else:
                mult = counts[a] * counts[b]
            if not mult:
                continue
            rest = Counter(counts)
            rest[a] -= 1
            rest[b] -= 1
            rest[vadd(a, b)] += 1
            merged = canonical(rest.elements())
            yield mult, abs(wedge(a, b)), merged


@lru_cache(maxsize=None)
def _marked_weight(key: tuple[Vec, ...]) -> RefinedValue:
    n = len(key)
    if n == 2:
        return RefinedValue(1)
    if n == 3:
        return bracket_plus(abs(wedge(key[0], key[1])))
    total = RefinedValue(0)
    for mult, w, merged in merged_pairs(key):
        total = total + bracket_plus(w) * _marked_weight(merged) * mult
    return total


def vertex_weight_refined(v: Iterable[Vec], marked: bool) -> RefinedValue:
    key = canonical(v)
    if len(key) < 2:
        raise PreconditionError("a local degree has at least 2 vectors")
    _check_balanced(key)
    if not marked:
        if len(key) != 3:
            raise UnmarkedMultivalent(f"unmarked vertex of valency {len(key)}")
        return RefinedValue(bracket_minus(abs(wedge(key[0], key[1]))))
    return _marked_weight(key)


def vertex_weight_classical(v: Iterable[Vec], marked: bool) -> Fraction:
    key = canonical(v)
    _check_balanced(key)
    if not marked:
        if len(key) != 3:
            raise UnmarkedMultivalent(f"unmarked vertex of valency {len(key)}")
        return Fraction(abs(wedge(key[0], key[1])))
    if len(key) == 2:
        return Fraction(1)
    k = len(key) - 2
    return Fraction(factorial(k + 2) * factorial(k + 1), 3 * 2 ** (k + 1))


def recursion_summand_count(valency: int) -> int:
    """Number of fully expanded terms of the marked recursion."""
    out = 1
    for j in range(3, valency + 1):
        out *= j * (j - 1) // 2
    return out


@dataclass
class CurveWeightInput:
    vertices: list[tuple[tuple[Vec, ...], bool]]
    aut: int = 1


def curve_weight_refined(c: CurveWeightInput, labeled: bool = False) -> RefinedValue:
    out = RefinedValue(1)
    for vecs, marked in c.vertices:
        out = out * vertex_weight_refined(vecs, marked)
    if not labeled and c.aut != 1:
        out = out / c.aut
    return out


def normalization_factor(nbar: MarkingProfile | Sequence[int]) -> Fraction:
    if not isinstance(nbar, MarkingProfile):
        nbar = MarkingProfile(tuple(nbar))
    out = Fraction(1)
    for k, nk in enumerate(nbar.n):
        if k >= 1 and nk:
            out *= Fraction(3 * 2 ** (k + 1), factorial(k + 2) * factorial(k + 1)) ** nk
    return out


def rd_from_labeled(rd_lab: RefinedValue, degree_size: int) -> RefinedValue:
    return rd_lab / factorial(degree_size)


def wall_identity_sum(b: Sequence[Vec]) -> RefinedValue:
    """sum_i [b0 ^ bi]^- * W({b1..br} - {bi} + {b0 + bi}); vanishes for balanced input."""
    b = [tuple(v) for v in b]
    _check_balanced(b)
    b0, rest = b[0], b[1:]
    total = RefinedValue(0)
    for i, bi in enumerate(rest):
        merged = rest[:i] + rest[i + 1:] + [vadd(b0, bi)]
        total = total + RefinedValue(bracket_minus(wedge(b0, bi))) * vertex_weight_refined(merged, marked=True)
    return total


def random_wall_multiset(rng, size: int, box: int = 3) -> list[Vec]:
    """Balanced multiset of nonzero vectors with b0 + bi != 0 for all i."""
    while True:
        vs = [(rng.randint(-box, box), rng.randint(-box, box)) for _ in range(size - 1)]
        vs.append((-sum(v[0] for v in vs), -sum(v[1] for v in vs)))
        if (0, 0) in vs:
            continue
        if any(vadd(vs[0], v) == (0, 0) for v in vs[1:]):
            continue
        return vs
