"""Integer lattice primitives: wedges, degrees, Newton polygons and cells."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence

from .errors import PreconditionError, Unbalanced

Vec = tuple[int, int]


def wedge(a: Vec, b: Vec) -> int:
    return a[0] * b[1] - a[1] * b[0]


def vadd(a: Vec, b: Vec) -> Vec:
    return (a[0] + b[0], a[1] + b[1])


def vsub(a: Vec, b: Vec) -> Vec:
    return (a[0] - b[0], a[1] - b[1])


def vneg(a: Vec) -> Vec:
    return (-a[0], -a[1])


def lattice_length(v: Vec) -> int:
    return gcd(v[0], v[1])


def primitive(v: Vec) -> Vec:
    g = gcd(v[0], v[1])
    return (v[0] // g, v[1] // g)


def rot_ccw(v: Vec) -> Vec:
    """Rotation by +pi/2: curve direction -> polygon edge."""
    return (-v[1], v[0])


def rot_cw(v: Vec) -> Vec:
    """Rotation by -pi/2: polygon edge -> outgoing curve direction."""
    return (v[1], -v[0])


def _angle_key(v: Vec):
    # half-plane index then cross-product order; exact, no trig needed
    upper = v[1] > 0 or (v[1] == 0 and v[0] > 0)
    return (0 if upper else 1, _AngleCmp(v))


class _AngleCmp:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return wedge(self.v, other.v) > 0

    def __eq__(self, other):
        return wedge(self.v, other.v) == 0


def sort_by_angle(vectors: Iterable[Vec]) -> list[Vec]:
    """Sort nonzero vectors counterclockwise starting from the positive x-axis."""
    return sorted(vectors, key=_angle_key)


@dataclass(frozen=True)
class Degree:
    """Ordered list of nonzero integer vectors; positions are the labels."""

    entries: tuple[Vec, ...]

    @classmethod
    def from_list(cls, vectors: Iterable[Sequence[int]]) -> "Degree":
        return cls(tuple((int(v[0]), int(v[1])) for v in vectors))

    @classmethod
    def from_json(cls, data) -> "Degree":
        """Accepts [[x, y], ...] or [{"vector": [x, y], "mult": m}, ...]."""
        if isinstance(data, dict):
            data = data.get("degree", data.get("entries"))
        out = []
        for item in data:
            if isinstance(item, dict):
                out.extend([tuple(item["vector"])] * int(item.get("mult", 1)))
            else:
                out.append(tuple(item))
        return cls.from_list(out)

    def to_json(self) -> list:
        out = []
        for v, m in _runs(self.entries):
            out.append({"vector": list(v), "mult": m})
        return out

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def _runs(entries):
    out = []
    for v in entries:
        if out and out[-1][0] == v:
            out[-1][1] += 1
        else:
            out.append([v, 1])
    return [(v, m) for v, m in out]


def cubic_degree(d: int = 3) -> Degree:
    return Degree(((1, 1),) * d + ((0, -1),) * d + ((-1, 0),) * d)


@dataclass(frozen=True)
class DegreeFlags:
    balanced: bool
    nondegenerate: bool
    primitive: bool
    odd: bool


def validate_degree(d: Degree | Iterable[Vec]) -> DegreeFlags:
    entries = list(d.entries if isinstance(d, Degree) else d)
    if any(v == (0, 0) for v in entries):
        raise PreconditionError("degree entries must be nonzero")
    sx = sum(v[0] for v in entries)
    sy = sum(v[1] for v in entries)
    if sx or sy:
        raise Unbalanced(f"degree sums to ({sx}, {sy})")
    nondeg = any(wedge(a, b) for a, b in combinations(set(entries), 2))
    prim = all(lattice_length(v) == 1 for v in entries)
    odd = all(v[0] % 2 or v[1] % 2 for v in entries)
    return DegreeFlags(True, nondeg, prim, odd)


def convex_hull(points: Iterable[Vec]) -> list[Vec]:
    """Counterclockwise hull without collinear points (monotone chain)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and wedge(vsub(out[-1], out[-2]), vsub(p, out[-2])) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return hull[:1]
    return hull


@dataclass(frozen=True)
class LatticePolygon:
    """Convex lattice polygon, vertices counterclockwise; two vertices for a segment."""

    vertices: tuple[Vec, ...]

    @classmethod
    def hull(cls, points: Iterable[Vec]) -> "LatticePolygon":
        return cls(tuple(convex_hull(points)))

    @property
    def is_segment(self) -> bool:
        return len(self.vertices) == 2

    def edges(self) -> list[tuple[Vec, Vec]]:
        vs = self.vertices
        if len(vs) < 2:
            return []
        if len(vs) == 2:
            return [(vs[0], vs[1]), (vs[1], vs[0])]
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def edge_vectors(self) -> list[Vec]:
        return [vsub(b, a) for a, b in self.edges()]

    def translate(self, t: Vec) -> "LatticePolygon":
        return LatticePolygon(tuple(vadd(v, t) for v in self.vertices))

    def normalized(self) -> "LatticePolygon":
        """Translate so the lexicographically smallest vertex is the origin."""
        m = min(self.vertices)
        return self.translate(vneg(m))

    def contains(self, p: Vec) -> bool:
        """Closed containment."""
        vs = self.vertices
        if len(vs) == 1:
            return p == vs[0]
        if len(vs) == 2:
            a, b = vs
            return wedge(vsub(b, a), vsub(p, a)) == 0 and min(a, b) <= p <= max(a, b)
        return all(wedge(vsub(b, a), vsub(p, a)) >= 0 for a, b in self.edges())

    def lattice_points(self) -> list[Vec]:
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return [
            (x, y)
            for x in range(min(xs), max(xs) + 1)
            for y in range(min(ys), max(ys) + 1)
            if self.contains((x, y))
        ]

    def to_json(self) -> list:
        return [list(v) for v in self.vertices]


def newton_polygon(d: Degree | Iterable[Vec]) -> LatticePolygon:
    entries = list(d.entries if isinstance(d, Degree) else d)
    validate_degree(entries)
    edges = sort_by_angle(rot_ccw(v) for v in entries)
    pts = [(0, 0)]
    for e in edges:
        pts.append(vadd(pts[-1], e))
    poly = LatticePolygon.hull(pts)
    mx = min(v[0] for v in poly.vertices)
    my = min(v[1] for v in poly.vertices)
    return poly.translate((-mx, -my))


def local_degree_of_cell(edge_parts: Sequence[Sequence[Vec]]) -> list[Vec]:
    """Outgoing curve vectors dual to a cell, given each boundary edge's parts.

    ``edge_parts`` lists, for every counterclockwise boundary edge of the
    cell, the edge vectors of its pieces.
    """
    return [rot_cw(p) for parts in edge_parts for p in parts]


@dataclass(frozen=True)
class PolygonMetrics:
    lattice_area: int
    interior_points: int
    boundary_points: int


def polygon_metrics(p: LatticePolygon) -> PolygonMetrics:
    vs = p.vertices
    if len(vs) <= 2:
        b = 1 if len(vs) == 1 else lattice_length(vsub(vs[1], vs[0])) + 1
        return PolygonMetrics(0, 0, b)
    area2 = sum(wedge(a, b) for a, b in p.edges())
    bnd = sum(lattice_length(vsub(b, a)) for a, b in p.edges())
    interior = (area2 - bnd + 2) // 2
    return PolygonMetrics(area2, interior, bnd)


@dataclass(frozen=True)
class CellClass:
    tag: str  # Triangle, Parallelogram, MinkowskiTriangle, Segment, Other
    mu: int | None = None
    length: int | None = None

    def to_json(self) -> dict:
        out = {"tag": self.tag}
        if self.mu is not None:
            out["mu"] = self.mu
        if self.length is not None:
            out["length"] = self.length
        return out


def classify_cell(p: LatticePolygon) -> CellClass:
    vs = p.vertices
    if len(vs) < 2:
        return CellClass("Other")
    if len(vs) == 2:
        return CellClass("Segment", length=lattice_length(vsub(vs[1], vs[0])))
    ev = p.edge_vectors()
    if len(vs) == 3:
        return CellClass("Triangle", mu=abs(wedge(ev[0], ev[1])))
    if len(vs) == 4 and ev[0] == vneg(ev[2]) and ev[1] == vneg(ev[3]):
        return CellClass("Parallelogram")
    mu = _minkowski_triangle_mu(ev)
    if mu is not None:
        return CellClass("MinkowskiTriangle", mu=mu)
    return CellClass("Other")


def _minkowski_triangle_mu(edge_vectors: list[Vec]) -> int | None:
    lengths: Counter = Counter()
    for e in edge_vectors:
        lengths[primitive(e)] += lattice_length(e)
    dirs = sorted(lengths)
    # candidate segment summands: directions whose opposite is also an edge
    cands = []
    for dvec in dirs:
        opp = vneg(dvec)
        if opp in lengths and dvec > opp:
            for m in range(1, min(lengths[dvec], lengths[opp]) + 1):
                cands.append((dvec, m))
    options = [[c] for c in cands] + [
        [a, b] for a, b in combinations(cands, 2) if wedge(a[0], b[0]) != 0
    ]
    for opt in options:
        rest = Counter(lengths)
        for dvec, m in opt:
            rest[dvec] -= m
            rest[vneg(dvec)] -= m
        tri = [(dv[0] * m, dv[1] * m) for dv, m in rest.items() if m > 0]
        if len(tri) == 3:
            mu = abs(wedge(tri[0], tri[1]))
            if mu:
                return mu
    return None


def euclid_area(points: Sequence[Vec]) -> Fraction:
    n = len(points)
    return Fraction(abs(sum(wedge(points[i], points[(i + 1) % n]) for i in range(n))), 2)

