"""Tree-shape weights RM^alpha and their proportionality to the marked vertex weight."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import factorial
from typing import Sequence

import networkx as nx

from .errors import PreconditionError
from .lattice import Vec, wedge
from .refined import Laurent, RefinedValue, bracket_plus, eval_y1
from .weights import vertex_weight_refined


@dataclass(frozen=True)
class TreeShape:
    """Unlabeled trivalent tree; leaves are nodes 0..m-1."""

    m: int
    edges: tuple[tuple[int, int], ...]

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_edges_from(self.edges)
        return g

    def internal_vertices(self) -> list[int]:
        g = self.graph()
        return sorted(v for v in g if g.degree(v) == 3)

    def branches(self) -> list[tuple[frozenset, frozenset, frozenset]]:
        """For every internal vertex, the leaf sets of its three branches."""
        g = self.graph()
        out = []
        for v in self.internal_vertices():
            sides = []
            for nb in sorted(g.neighbors(v)):
                h = g.copy()
                h.remove_edge(v, nb)
                comp = nx.node_connected_component(h, nb)
                sides.append(frozenset(x for x in comp if x < self.m))
            out.append(tuple(sides))
        return out

    def describe(self) -> str:
        """Nested leaf-set description rooted at leaf 0."""
        g = self.graph()

        def rec(v, parent):
            kids = [c for c in g.neighbors(v) if c != parent]
            if not kids:
                return "*"
            return "(" + ",".join(sorted(rec(c, v) for c in kids)) + ")"

        root = next(iter(g.neighbors(0)))
        return rec(root, 0)


def _relabel(g: nx.Graph, m: int) -> TreeShape:
    leaves = sorted(v for v in g if g.degree(v) == 1)
    internal = sorted(v for v in g if g.degree(v) != 1)
    mapping = {v: i for i, v in enumerate(leaves)}
    mapping.update({v: m + i for i, v in enumerate(internal)})
    edges = tuple(sorted(tuple(sorted((mapping[a], mapping[b]))) for a, b in g.edges()))
    return TreeShape(m, edges)


@lru_cache(maxsize=None)
def enumerate_tree_shapes(m: int) -> tuple[TreeShape, ...]:
    if not 3 <= m <= 10:
        raise PreconditionError("tree shapes are enumerated for 3 <= m <= 10")
    star = nx.star_graph(3)  # center 0, leaves 1..3
    shapes = [star]
    for _ in range(m - 3):
        grown: list[nx.Graph] = []
        for g in shapes:
            nxt = max(g) + 1
            for a, b in list(g.edges()):
                h = g.copy()
                h.remove_edge(a, b)
                h.add_edges_from([(a, nxt), (nxt, b), (nxt, nxt + 1)])
                if not any(nx.is_isomorphic(h, o) for o in grown):
                    grown.append(h)
        shapes = grown
    return tuple(_relabel(g, m) for g in shapes)


def _vsum(vs: Sequence[Vec], leaves, assign) -> Vec:
    x = y = 0
    for leaf in leaves:
        v = vs[assign[leaf]]
        x += v[0]
        y += v[1]
    return (x, y)


def _sum_over_assignments(v: Sequence[Vec], shape: TreeShape, fixed: tuple[int, int] | None) -> RefinedValue:
    m = len(v)
    if m != shape.m:
        raise PreconditionError("shape and local degree sizes differ")
    branches = shape.branches()
    tally: Counter = Counter()
    for perm in permutations(range(m)):
        # perm[leaf] = index of the entry sent to that leaf
        if fixed is not None and perm[fixed[0]] != fixed[1]:
            continue
        mus = []
        for b1, b2, _ in branches:
            mus.append(abs(wedge(_vsum(v, b1, perm), _vsum(v, b2, perm))))
        tally[tuple(sorted(mus))] += 1
    total = RefinedValue(0)
    for mus, count in sorted(tally.items()):
        term = RefinedValue(count)
        for mu in mus:
            term = term * bracket_plus(mu)
        total = total + term
    return total


def rm_alpha(v: Sequence[Vec], shape: TreeShape) -> RefinedValue:
    return _sum_over_assignments(list(v), shape, None)


def rm_alpha_fixed_leaf(v: Sequence[Vec], shape: TreeShape, i: int, j: int) -> RefinedValue:
    """Partial sum over assignments sending entry ``j`` to leaf ``i`` (0-based)."""
    return _sum_over_assignments(list(v), shape, (i, j))


def f_tau_closed_form(v: Sequence[Vec], j: int) -> RefinedValue:
    m = len(v)
    if m > 9:
        raise PreconditionError("factorial sum limited to m <= 9")
    rest = [b for idx, b in enumerate(v) if idx != j]
    exps: Counter = Counter()
    for perm in permutations(rest):
        f = 0
        for a in range(len(perm)):
            for b in range(a + 1, len(perm)):
                f += wedge(perm[a], perm[b])
        exps[f] += 1
    return RefinedValue(Laurent(dict(exps)) * 2 ** (m - 2), m - 2)


def proportionality_constant(m: int) -> Fraction:
    return Fraction(factorial(m - 1), 3 * 2 ** (m - 1))


@dataclass
class UniquenessReport:
    m: int
    shape_values: list[RefinedValue]
    vertex_weight: RefinedValue
    shapes_agree: bool
    proportional: bool
    y1_values: list[Fraction]
    fixed_leaf_ok: bool | None = None
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.shapes_agree and self.proportional and self.fixed_leaf_ok is not False and not self.failures


def verify_uniqueness(v: Sequence[Vec], check_fixed_leaf: bool = False) -> UniquenessReport:
    v = list(v)
    m = len(v)
    shapes = enumerate_tree_shapes(m)
    values = [rm_alpha(v, s) for s in shapes]
    w = vertex_weight_refined(v, marked=True)
    agree = all(x == values[0] for x in values)
    prop = w == values[0] * proportionality_constant(m)
    rep = UniquenessReport(m, values, w, agree, prop, [eval_y1(x) for x in values])
    if not agree:
        rep.failures.append("tree shapes disagree: " + "; ".join(x.to_string() for x in values))
    if not prop:
        rep.failures.append(
            f"vertex weight {w.to_string()} != {proportionality_constant(m)} * {values[0].to_string()}"
        )
    if any(y != factorial(m) for y in rep.y1_values):
        rep.failures.append(f"y=1 values {rep.y1_values} differ from {m}!")
    if check_fixed_leaf:
        ok = True
        for s in shapes:
            for j in range(m):
                target = f_tau_closed_form(v, j)
                for i in range(m):
                    if rm_alpha_fixed_leaf(v, s, i, j) != target:
                        ok = False
                        rep.failures.append(f"fixed leaf ({i},{j}) on {s.describe()} mismatch")
        rep.fixed_leaf_ok = ok
    return rep
