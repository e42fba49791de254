"""Direct backend: enumerate marked rational tropical curves through points.

Removing the marked points from a regular curve leaves components that are
binary trees, each with a single unbounded end.  Orienting edges toward
that end, every component is built from rays leaving the marked points by
repeatedly merging two rays that meet ahead of their start points.  We
enumerate such "flows" bottom-up, then choose one flow per end of the
degree subject to the valency and connectivity constraints at the marks.
"""
from __future__ import annotations

import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterator, Sequence

from .errors import LimitExceeded, NonGeneric, PreconditionError
from .lattice import Degree, Vec, validate_degree, wedge
from .refined import RefinedValue, bracket_minus
from .weights import MarkingProfile, rd_from_labeled, vertex_weight_refined

Point = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class Limits:
    max_degree: int = 6
    max_points: int = 5
    max_flows: int = 200_000

    @classmethod
    def parse(cls, text: str) -> "Limits":
        vals = dict(kv.split("=") for kv in text.split(",") if kv)
        return cls(
            int(vals.get("degree", cls.max_degree)),
            int(vals.get("points", cls.max_points)),
            int(vals.get("flows", cls.max_flows)),
        )


@dataclass(frozen=True)
class Flow:
    marks: int  # bitmask of marks with a leaf in this flow
    leaves: tuple[tuple[int, Vec], ...]
    start: Point
    direction: Vec
    children: tuple["Flow", ...] = ()

    @property
    def size(self) -> int:
        return len(self.leaves)


def subset_sums(d: Sequence[Vec]) -> set[Vec]:
    sums = {(0, 0)}
    for v in d:
        sums |= {(s[0] + v[0], s[1] + v[1]) for s in sums}
    sums.discard((0, 0))
    return sums


def _meet(p1: Point, u: Vec, p2: Point, w: Vec):
    c = wedge(u, w)
    dx, dy = p2[0] - p1[0], p2[1] - p1[1]
    if c == 0:
        if dx * u[1] - dy * u[0] == 0:
            raise NonGeneric("collinear rays overlap")
        return None
    s = (dx * w[1] - dy * w[0]) / c
    t = (dx * u[1] - dy * u[0]) / c
    if s == 0 or t == 0:
        raise NonGeneric("a ray passes through the start of another")
    if s < 0 or t < 0:
        return None
    return (p1[0] + s * u[0], p1[1] + s * u[1])


def _enumerate_flows(points: Sequence[Point], dirs: set[Vec], max_leaves: int, limit: int) -> list[Flow]:
    by_size: dict[int, list[Flow]] = defaultdict(list)
    for i, p in enumerate(points):
        for v in sorted(dirs):
            by_size[1].append(Flow(1 << i, ((i, v),), p, v))
    total = len(by_size[1])
    pset = set(points)
    for c in range(2, max_leaves + 1):
        for a in range(1, c // 2 + 1):
            b = c - a
            A, B = by_size[a], by_size[b]
            for ia, f in enumerate(A):
                for ib in range(ia + 1 if a == b else 0, len(B)):
                    g = B[ib]
                    if f.marks & g.marks:
                        continue
                    nd = (f.direction[0] + g.direction[0], f.direction[1] + g.direction[1])
                    if nd not in dirs:
                        continue
                    q = _meet(f.start, f.direction, g.start, g.direction)
                    if q is None:
                        continue
                    if q in pset:
                        raise NonGeneric("two rays meet at a marked point")
                    by_size[c].append(
                        Flow(f.marks | g.marks, tuple(sorted(f.leaves + g.leaves)), q, nd, (f, g))
                    )
                    total += 1
                    if total > limit:
                        raise LimitExceeded(f"more than {limit} partial curves")
    return [f for c in sorted(by_size) for f in by_size[c]]


def count_concurrencies(flows: Sequence[Flow]) -> int:
    """Merge points that a third, disjoint ray also passes through.

    Each one would give an unmarked vertex of valency > 3, i.e. a
    non-regular type.
    """
    found = 0
    for g in flows:
        if not g.children:
            continue
        q = g.start
        for f in flows:
            if f.marks & g.marks:
                continue
            dx, dy = q[0] - f.start[0], q[1] - f.start[1]
            if dx * f.direction[1] - dy * f.direction[0] == 0 and dx * f.direction[0] + dy * f.direction[1] > 0:
                found += 1
    return found


# ------------------------------------------------------------ marked types


@dataclass
class MarkedTreeType:
    """Combinatorial type: marked vertices ``("m", i)``, trivalent ``("v", j)``.

    ``edges`` holds ``(tail, head, direction)``; ``head`` is None for the
    unbounded ends.  Directions point from tail to head.
    """

    psi: tuple[int, ...]
    edges: list[tuple[tuple, tuple | None, Vec]] = field(default_factory=list)
    aut: int = 1

    def vertex_stars(self) -> dict[tuple, list[Vec]]:
        star: dict[tuple, list[Vec]] = defaultdict(list)
        for t, h, v in self.edges:
            star[t].append(v)
            if h is not None:
                star[h].append((-v[0], -v[1]))
        return star

    def weight(self) -> RefinedValue:
        w = RefinedValue(1)
        for node, vecs in sorted(self.vertex_stars().items()):
            if node[0] == "m":
                if self.psi[node[1]] >= 1:
                    w = w * vertex_weight_refined(vecs, marked=True)
            else:
                w = w * RefinedValue(bracket_minus(abs(wedge(vecs[0], vecs[1]))))
        return w

    def to_json(self) -> dict:
        def node(n):
            return None if n is None else f"{n[0]}{n[1]}"

        return {
            "edges": [
                {"from": node(t), "to": node(h), "direction": list(v)}
                for t, h, v in sorted(self.edges, key=lambda e: (e[0], e[1] or ("~",), e[2]))
            ],
            "aut": self.aut,
            "weight": (self.weight() / self.aut).to_json(),
        }

    def canonical(self) -> tuple:
        return (self.psi, tuple(sorted((t, h if h else ("end",), v) for t, h, v in self.edges)))


def _flow_to_edges(f: Flow, counter: list[int], edges: list) -> tuple:
    """Returns the node at the start of ``f``'s outgoing ray."""
    if not f.children:
        return ("m", f.leaves[0][0])
    tails = [(_flow_to_edges(ch, counter, edges), ch.direction) for ch in f.children]
    node = ("v", counter[0])
    counter[0] += 1
    for t, v in tails:
        edges.append((t, node, v))
    return node


def _assemble(choice: Sequence[Flow], psi: Sequence[int]) -> MarkedTreeType:
    counter = [0]
    edges: list = []
    for f in choice:
        node = _flow_to_edges(f, counter, edges)
        edges.append((node, None, f.direction))
    singles = Counter(f.leaves[0] for f in choice if not f.children)
    aut = 1
    for m in singles.values():
        aut *= factorial(m)
    return MarkedTreeType(tuple(psi), edges, aut)


def enumerate_types(
    d: Degree,
    nbar: MarkingProfile,
    points: Sequence[Point],
    limits: Limits | None = None,
    regular_only: bool = True,
    stats: dict | None = None,
) -> Iterator[tuple[MarkedTreeType, list[Flow]]]:
    """Regular marked types with a realization through ``points``.

    The point configuration is used to prune candidate partial curves; each
    type is yielded once together with its flows.  With ``regular_only``
    off, the partial curves are also scanned for higher-valent unmarked
    vertices and any hit is reported in ``stats["nonregular"]``.
    """
    limits = limits or Limits()
    if not isinstance(nbar, MarkingProfile):
        nbar = MarkingProfile(tuple(nbar))
    validate_degree(d)
    nbar.check(len(d))
    if len(d) > limits.max_degree or nbar.total > limits.max_points:
        raise LimitExceeded(
            f"|degree| = {len(d)}, n = {nbar.total} exceed limits "
            f"({limits.max_degree}, {limits.max_points})"
        )
    psi = nbar.psi_indices()
    n = len(psi)
    if len(points) != n:
        raise PreconditionError(f"need {n} points, got {len(points)}")
    if len(set(points)) != n:
        raise NonGeneric("marked points coincide")
    valency = [k + 2 for k in psi]
    dirs = subset_sums(d.entries)
    total_leaves = sum(valency)
    max_leaves = min(n, total_leaves - (len(d) - 1))
    flows = _enumerate_flows(points, dirs, max_leaves, limits.max_flows)
    if stats is not None:
        stats["flows"] = len(flows)
        if not regular_only:
            stats["nonregular"] = count_concurrencies(flows)
    roots: dict[Vec, list[Flow]] = defaultdict(list)
    ends = Counter(d.entries)
    for f in flows:
        if f.direction in ends:
            roots[f.direction].append(f)
    end_list = sorted(d.entries)
    seen = set()

    def rec(pos: int, start_idx: int, used: list[int], leaves_left: int, chosen: list[Flow]):
        if pos == len(end_list):
            if leaves_left == 0 and all(u == v for u, v in zip(used, valency)):
                yield list(chosen)
            return
        e = end_list[pos]
        cand = roots[e]
        first = start_idx if pos > 0 and end_list[pos - 1] == e else 0
        remaining_ends = len(end_list) - pos - 1
        for idx in range(first, len(cand)):
            f = cand[idx]
            if f.size > leaves_left - remaining_ends:
                continue
            ok = True
            for m, _ in f.leaves:
                if used[m] + 1 > valency[m]:
                    ok = False
                    break
            if not ok:
                continue
            for m, _ in f.leaves:
                used[m] += 1
            chosen.append(f)
            yield from rec(pos + 1, idx, used, leaves_left - f.size, chosen)
            chosen.pop()
            for m, _ in f.leaves:
                used[m] -= 1

    for choice in rec(0, 0, [0] * n, total_leaves, []):
        if not _marks_ok(choice, psi, n):
            continue
        t = _assemble(choice, psi)
        key = t.canonical()
        if key in seen:
            continue
        seen.add(key)
        yield t, choice


def _marks_ok(choice: Sequence[Flow], psi: Sequence[int], n: int) -> bool:
    rays: dict[int, list[Vec]] = defaultdict(list)
    for f in choice:
        for m, v in f.leaves:
            rays[m].append(v)
    for m in range(n):
        vs = rays[m]
        if sum(v[0] for v in vs) or sum(v[1] for v in vs):
            return False
        if psi[m] == 0 and vs[0] != (-vs[1][0], -vs[1][1]):
            return False
    # marks and components must form a tree
    parent = list(range(n + len(choice)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for ci, f in enumerate(choice):
        for m, _ in f.leaves:
            a, b = find(m), find(n + ci)
            if a == b:
                return False
            parent[a] = b
    return len({find(x) for x in range(n + len(choice))}) == 1


# ----------------------------------------------------------------- solving


@dataclass
class Solution:
    positions: dict[tuple, Point]
    lengths: list[Fraction]


def _solve_linear(rows: list[list[Fraction]], rhs: list[Fraction], nvars: int):
    """Exact Gaussian elimination; returns the unique solution or None."""
    m = [row[:] + [b] for row, b in zip(rows, rhs)]
    piv_cols = []
    r = 0
    for c in range(nvars):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                fac = m[i][c]
                m[i] = [a - fac * b for a, b in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
    if any(all(x == 0 for x in row[:-1]) and row[-1] != 0 for row in m):
        return None
    if len(piv_cols) < nvars:
        raise NonGeneric("positions are not determined by the points")
    sol = [Fraction(0)] * nvars
    for i, c in enumerate(piv_cols):
        sol[c] = m[i][-1]
    return sol


def solve_positions(t: MarkedTreeType, points: Sequence[Point]) -> Solution | None:
    """Solve h(p_i) = x_i for the vertex positions and bounded edge lengths.

    Returns None when the type has no realization through the points.
    """
    if len(set(points)) != len(points):
        raise NonGeneric("marked points coincide")
    free = sorted({n for e in t.edges for n in (e[0], e[1]) if n is not None and n[0] == "v"})
    bounded = [e for e in t.edges if e[1] is not None]
    idx = {v: 2 * i for i, v in enumerate(free)}
    nv = 2 * len(free) + len(bounded)
    rows, rhs = [], []
    for ei, (tail, head, vec) in enumerate(bounded):
        for axis in (0, 1):
            row = [Fraction(0)] * nv
            b = Fraction(0)
            # pos(head) - pos(tail) - len * vec = 0
            for node, sign in ((head, 1), (tail, -1)):
                if node[0] == "m":
                    b -= sign * points[node[1]][axis]
                else:
                    row[idx[node] + axis] += sign
            row[2 * len(free) + ei] = Fraction(-vec[axis])
            rows.append(row)
            rhs.append(b)
    sol = _solve_linear(rows, rhs, nv)
    if sol is None:
        return None
    lengths = sol[2 * len(free):]
    if any(x == 0 for x in lengths):
        raise NonGeneric("zero-length edge")
    if any(x < 0 for x in lengths):
        return None
    pos = {v: (sol[idx[v]], sol[idx[v] + 1]) for v in free}
    for i, p in enumerate(points):
        pos[("m", i)] = p
    return Solution(pos, lengths)


def random_points(n: int, seed: int, scale: int = 10**6) -> list[Point]:
    rng = random.Random(seed)
    return [
        (Fraction(rng.randint(-scale, scale), rng.randint(1, 997)), Fraction(rng.randint(-scale, scale), rng.randint(1, 997)))
        for _ in range(n)
    ]


@dataclass
class DirectResult:
    rd: RefinedValue
    labeled: RefinedValue
    types: list[MarkedTreeType]
    points: list[Point]
    seed: int
    stats: dict = field(default_factory=dict)


def compute_rd_direct(
    d: Degree,
    nbar,
    points: Sequence[Point] | None = None,
    seed: int = 0,
    limits: Limits | None = None,
    retries: int = 20,
    regular_only: bool = True,
) -> DirectResult:
    """Weighted count through ``points`` (or seeded random points).

    When no points are given, a non-generic sample is redrawn with the next
    seed, up to ``retries`` times.
    """
    if not isinstance(nbar, MarkingProfile):
        nbar = MarkingProfile(tuple(nbar))
    for attempt in range(retries if points is None else 1):
        pts = list(points) if points is not None else random_points(nbar.total, seed + attempt)
        try:
            return _direct_once(d, nbar, pts, seed + attempt, limits, regular_only)
        except NonGeneric:
            if points is not None:
                raise
    raise NonGeneric("no generic configuration found")


def _direct_once(d, nbar, pts, seed, limits, regular_only=True) -> DirectResult:
    labeled = RefinedValue(0)
    types = []
    stats: dict = {}
    N = factorial(len(d))
    for t, _ in enumerate_types(d, nbar, pts, limits, regular_only, stats):
        sol = solve_positions(t, pts)
        if sol is None:
            raise AssertionError("enumerated type has no realization")
        _check_balancing(t)
        labeled = labeled + t.weight() * Fraction(N, t.aut)
        types.append(t)
    return DirectResult(rd_from_labeled(labeled, len(d)), labeled, types, pts, seed, stats)


def _check_balancing(t: MarkedTreeType) -> None:
    for node, vecs in t.vertex_stars().items():
        if sum(v[0] for v in vecs) or sum(v[1] for v in vecs):
            raise AssertionError(f"unbalanced vertex {node}")
