"""Lattice-path backend: rag rugs, completions and their refined weights.

A rag rug is a lambda-monotone chain of cells, one per marked point.  Its
two sides, together with the boundary of the Newton polygon, bound an upper
and a lower region.  Each region is filled by Mikhalkin-style corner
peeling with unit triangles and parallelograms.  Edges that start at an
interior point of a split edge of a rag-rug cell are not edges of the
dual subdivision, so unit cells sharing such an edge are merged afterwards.
"""
from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import factorial
from typing import Iterable, Iterator, Sequence

from .errors import NonGeneric, PreconditionError, Unsupported
from .lattice import (
    CellClass,
    Degree,
    LatticePolygon,
    Vec,
    classify_cell,
    convex_hull,
    lattice_length,
    newton_polygon,
    polygon_metrics,
    primitive,
    rot_cw,
    validate_degree,
    vadd,
    vsub,
    wedge,
)
from .refined import RefinedValue, bracket_minus
from .weights import (
    MarkingProfile,
    normalization_factor,
    vertex_weight_classical,
    vertex_weight_refined,
)

WORKERS_ENV = "TROPICAL_WORKERS"


@dataclass(frozen=True)
class StretchedConfig:
    """Order functional (primary, tiebreak) and the psi-index sequence tau."""

    primary: Vec = (1, 0)
    tiebreak: Vec = (0, -1)
    tau: tuple[int, ...] | None = None

    def key(self, p: Vec) -> tuple[int, int]:
        return (
            self.primary[0] * p[0] + self.primary[1] * p[1],
            self.tiebreak[0] * p[0] + self.tiebreak[1] * p[1],
        )

    @classmethod
    def parse_lambda(cls, text: str, tau=None) -> "StretchedConfig":
        a, b = text.split("/")
        pa = tuple(int(t) for t in a.split(","))
        pb = tuple(int(t) for t in b.split(","))
        return cls(pa, pb, None if tau is None else tuple(tau))

    def describe(self) -> str:
        return f"{self.primary[0]},{self.primary[1]}/{self.tiebreak[0]},{self.tiebreak[1]}"


def order_lattice_points(p: LatticePolygon, cfg: StretchedConfig) -> list[Vec]:
    if wedge(cfg.primary, cfg.tiebreak) == 0:
        raise NonGeneric("tiebreak covector is parallel to the primary one")
    pts = sorted(p.lattice_points(), key=cfg.key)
    for a, b in zip(pts, pts[1:]):
        if cfg.key(a) == cfg.key(b):
            raise NonGeneric(f"points {a} and {b} tie")
    return pts


# ----------------------------------------------------------------- rag rugs


@dataclass(frozen=True)
class Element:
    """A rag-rug cell: CCW boundary edges ``(start, end, parts)``.

    Segments have two edges, ``lo -> hi`` (facing the lower region) and
    ``hi -> lo``.  ``lo``/``hi`` are the lambda-extreme points.
    """

    k: int
    lo: Vec
    hi: Vec
    edges: tuple[tuple[Vec, Vec, tuple[int, ...]], ...]

    @property
    def vertices(self) -> tuple[Vec, ...]:
        return tuple(e[0] for e in self.edges)

    @property
    def is_segment(self) -> bool:
        return len(self.edges) == 2

    def polygon(self) -> LatticePolygon:
        return LatticePolygon.hull(self.vertices)

    def local_degree(self) -> list[Vec]:
        out = []
        for a, b, parts in self.edges:
            d = primitive(vsub(b, a))
            out.extend(rot_cw((d[0] * q, d[1] * q)) for q in parts)
        return out

    def key(self) -> tuple:
        """Identity up to reordering of parts on an edge."""
        return (self.k, tuple((a, b, tuple(sorted(parts))) for a, b, parts in self.edges))

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "vertices": [list(v) for v in self.polygon().vertices],
            "edges": [
                {"from": list(a), "to": list(b), "parts": list(parts)} for a, b, parts in self.edges
            ],
        }


RagRug = tuple  # tuple[Element, ...]


def _compositions(n: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (n,)
        return
    for first in range(1, n - parts + 2):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def _ccw_edges(vertices: Sequence[Vec], lo: Vec) -> list[tuple[Vec, Vec]]:
    """CCW edges starting at ``lo``."""
    vs = list(vertices)
    i = vs.index(lo)
    vs = vs[i:] + vs[:i]
    return [(vs[j], vs[(j + 1) % len(vs)]) for j in range(len(vs))]


def _element_candidates(points: Sequence[Vec], start: Vec, k: int, cfg: StretchedConfig) -> list[Element]:
    later = [q for q in points if cfg.key(q) > cfg.key(start)]
    out = []
    if k == 0:
        for q in later:
            L = lattice_length(vsub(q, start))
            out.append(Element(0, start, q, ((start, q, (L,)), (q, start, (L,)))))
        return out
    nparts = k + 2
    for size in range(1, min(nparts, len(later)) + 1):
        for extra in combinations(later, size):
            pts = (start,) + extra
            hull = convex_hull(pts)
            if len(hull) != len(pts):
                continue
            hi = max(pts, key=cfg.key)
            if len(hull) == 2:
                edges = [(start, hi), (hi, start)]
            else:
                edges = _ccw_edges(hull, start)
            lengths = [lattice_length(vsub(b, a)) for a, b in edges]
            if len(edges) > nparts or sum(lengths) < nparts:
                continue
            for counts in _part_counts(lengths, nparts):
                for comp in product(*(_compositions(L, c) for L, c in zip(lengths, counts))):
                    out.append(
                        Element(k, start, hi, tuple((a, b, c) for (a, b), c in zip(edges, comp)))
                    )
    return out


def _part_counts(lengths: Sequence[int], total: int) -> Iterator[tuple[int, ...]]:
    if not lengths:
        if total == 0:
            yield ()
        return
    rest_min = len(lengths) - 1
    rest_max = sum(lengths[1:])
    for c in range(1, lengths[0] + 1):
        left = total - c
        if rest_min <= left <= rest_max:
            for tail in _part_counts(lengths[1:], left):
                yield (c,) + tail


def _resolve_tau(nbar: MarkingProfile, cfg: StretchedConfig) -> tuple[int, ...]:
    if cfg.tau is None:
        return tuple(nbar.psi_indices())
    tau = tuple(cfg.tau)
    if Counter(tau) != Counter(nbar.psi_indices()):
        raise PreconditionError(f"tau {tau} does not match the marking profile {nbar}")
    return tau


def _prepare(d: Degree, nbar: MarkingProfile) -> LatticePolygon:
    if not isinstance(nbar, MarkingProfile):
        nbar = MarkingProfile(tuple(nbar))
    flags = validate_degree(d)
    if not flags.nondegenerate:
        raise PreconditionError("the lattice-path backend needs a nondegenerate degree")
    nbar.check(len(d))
    return newton_polygon(d)


def enumerate_rag_rugs(d: Degree, nbar: MarkingProfile, cfg: StretchedConfig | None = None) -> list[RagRug]:
    cfg = cfg or StretchedConfig()
    P = _prepare(d, nbar)
    tau = _resolve_tau(MarkingProfile(tuple(nbar.n if isinstance(nbar, MarkingProfile) else nbar)), cfg)
    pts = order_lattice_points(P, cfg)
    first, last = pts[0], pts[-1]
    out: list[RagRug] = []

    def rec(i: int, cur: Vec, chain: list[Element]):
        if i == len(tau):
            if cur == last:
                out.append(tuple(chain))
            return
        if cur == last:
            return
        for el in _element_candidates(pts, cur, tau[i], cfg):
            chain.append(el)
            rec(i + 1, el.hi, chain)
            chain.pop()

    rec(0, first, [])
    return out


# ---------------------------------------------------------------- completion


@dataclass(frozen=True)
class Cell:
    vertices: tuple[Vec, ...]
    cls: CellClass

    def to_json(self) -> dict:
        return {"vertices": [list(v) for v in self.vertices], "class": self.cls.to_json()}


@dataclass
class MarkedSubdivision:
    rag_rug: RagRug
    cells: list[Cell]
    tau: tuple[int, ...] = ()

    def key(self) -> tuple:
        return (tuple(e.key() for e in self.rag_rug), tuple(sorted(c.vertices for c in self.cells)))

    def to_json(self) -> dict:
        return {
            "rag_rug": [e.to_json() for e in self.rag_rug],
            "cells": [c.to_json() for c in sorted(self.cells, key=lambda c: c.vertices)],
        }


def _chain_paths(r: RagRug):
    """Lower and upper paths of the rag rug: points plus per-step bundle ids."""
    lower_pts, lower_ids = [r[0].lo], []
    upper_pts, upper_ids = [r[0].lo], []
    for idx, el in enumerate(r):
        edges = list(el.edges)
        # lower: CCW edges from lo until hi
        j = 0
        while True:
            a, b, parts = edges[j]
            _append_parts(lower_pts, lower_ids, a, b, parts, (idx, j))
            j += 1
            if b == el.hi:
                break
        # upper: CCW edges from hi back to lo, traversed in reverse
        ups = []
        while j < len(edges):
            ups.append((j, edges[j]))
            j += 1
        for j2, (a, b, parts) in reversed(ups):
            _append_parts(upper_pts, upper_ids, b, a, tuple(reversed(parts)), (idx, j2))
    return (lower_pts, lower_ids), (upper_pts, upper_ids)


def _append_parts(pts, ids, a, b, parts, tag):
    d = primitive(vsub(b, a))
    bid = tag if len(parts) > 1 else None
    cur = a
    for q in parts:
        cur = vadd(cur, (d[0] * q, d[1] * q))
        pts.append(cur)
        ids.append(bid)
    assert cur == b


def _boundary_chain(P: LatticePolygon, lo: Vec, hi: Vec, ccw: bool) -> list[Vec]:
    vs = list(P.vertices)
    if not ccw:
        vs = vs[::-1]
    i = vs.index(lo) if lo in vs else None
    if i is None:
        raise NonGeneric("lambda extreme is not a vertex of the polygon")
    vs = vs[i:] + vs[:i]
    out = [lo]
    for a, b in zip(vs, vs[1:] + vs[:1]):
        d = primitive(vsub(b, a))
        for _ in range(lattice_length(vsub(b, a))):
            out.append(vadd(out[-1], d))
        if b == hi:
            break
    return out


def _peel(pts, ids, target, P: LatticePolygon, sign: int):
    """All tilings of the region between ``pts`` and ``target``.

    Yields lists of unit cells ``(kind, vertices, fake_edges)``.
    """
    results = []

    def split(path, pid, i):
        return 0 < i < len(path) - 1 and pid[i - 1] is not None and pid[i - 1] == pid[i]

    def rec(path, pid, cells):
        if path == target:
            results.append(list(cells))
            return
        for j in range(1, len(path) - 1):
            u = vsub(path[j], path[j - 1])
            w = vsub(path[j + 1], path[j])
            if sign * wedge(u, w) > 0:
                break
        else:
            return
        a, v, b = path[j - 1], path[j], path[j + 1]
        sa, sb = split(path, pid, j - 1), split(path, pid, j + 1)
        # triangle move
        fake = [frozenset((a, b))] if (sa or sb) else []
        cells.append(("T", (a, v, b), fake))
        rec(path[:j] + path[j + 1:], pid[: j - 1] + [None] + pid[j + 1:], cells)
        cells.pop()
        # parallelogram move
        v2 = vsub(vadd(a, b), v)
        if P.contains(v2):
            fake = []
            if sa:
                fake.append(frozenset((a, v2)))
            if sb:
                fake.append(frozenset((v2, b)))
            cells.append(("P", (a, v, b, v2), fake))
            npid = list(pid)
            npid[j - 1], npid[j] = pid[j], pid[j - 1]
            rec(path[:j] + [v2] + path[j + 1:], npid, cells)
            cells.pop()

    rec(list(pts), list(ids), [])
    return results


def _cell_edges(vertices: Sequence[Vec]) -> list[frozenset]:
    n = len(vertices)
    return [frozenset((vertices[i], vertices[(i + 1) % n])) for i in range(n)]


def _merge_cells(unit_cells) -> list[Cell] | None:
    n = len(unit_cells)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    owners: dict[frozenset, list[int]] = {}
    for idx, (_, vs, _) in enumerate(unit_cells):
        for e in _cell_edges(vs):
            owners.setdefault(e, []).append(idx)
    for _, _, fakes in unit_cells:
        for e in fakes:
            own = owners.get(e, [])
            if len(own) != 2:
                return None
            ra, rb = find(own[0]), find(own[1])
            if ra != rb:
                parent[ra] = rb
    groups: dict[int, list[int]] = {}
    for idx in range(n):
        groups.setdefault(find(idx), []).append(idx)
    out = []
    for members in groups.values():
        if sum(1 for m in members if unit_cells[m][0] == "T") > 1:
            return None
        pts = [p for m in members for p in unit_cells[m][1]]
        hull = LatticePolygon.hull(pts)
        area = sum(polygon_metrics(LatticePolygon.hull(unit_cells[m][1])).lattice_area for m in members)
        if polygon_metrics(hull).lattice_area != area:
            return None
        cls = classify_cell(hull)
        if cls.tag not in ("Triangle", "Parallelogram", "MinkowskiTriangle"):
            return None
        out.append(Cell(hull.vertices, cls))
    return out


def _face_to_face(cells: Sequence[Cell], r: RagRug) -> bool:
    """No vertex of one cell lies in the relative interior of an edge of another."""
    polys = [c.vertices for c in cells] + [el.vertices for el in r]
    verts = {v for vs in polys for v in vs}
    for vs in polys:
        n = len(vs)
        for i in range(n):
            a, b = vs[i], vs[(i + 1) % n]
            d = primitive(vsub(b, a))
            cur = vadd(a, d)
            while cur != b:
                if cur in verts:
                    return False
                cur = vadd(cur, d)
    return True


def _curve_connected(unit_cells, r: RagRug) -> bool:
    """Whether the dual tropical curve is connected.

    Triangles and rag rug elements are vertices; a parallelogram carries two
    strands crossing without meeting. Nodes touching the same segment are
    joined, fake edges included since they only split a merged cell.
    """
    parent: list[int] = []

    def node():
        parent.append(len(parent))
        return len(parent) - 1

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    touch: dict[frozenset, list[int]] = {}
    for kind, vs, _ in unit_cells:
        sides = _cell_edges(vs)
        if kind == "T":
            n = node()
            owners = [n, n, n]
        else:
            n1, n2 = node(), node()
            owners = [n1, n2, n1, n2]
        for e, n in zip(sides, owners):
            touch.setdefault(e, []).append(n)
    for el in r:
        n = node()
        for a, b, parts in el.edges:
            d = primitive(vsub(b, a))
            cur = a
            for q in parts:
                nxt = vadd(cur, (d[0] * q, d[1] * q))
                touch.setdefault(frozenset((cur, nxt)), []).append(n)
                cur = nxt
    for ns in touch.values():
        for other in ns[1:]:
            ra, rb = find(ns[0]), find(other)
            if ra != rb:
                parent[ra] = rb
    return len({find(x) for x in range(len(parent))}) == 1


def complete_subdivision(r: RagRug, d: Degree, cfg: StretchedConfig | None = None) -> list[MarkedSubdivision]:
    cfg = cfg or StretchedConfig()
    P = newton_polygon(d)
    pts = order_lattice_points(P, cfg)
    lo, hi = pts[0], pts[-1]
    (lp, lid), (up, uid) = _chain_paths(r)
    alpha_minus = _boundary_chain(P, lo, hi, ccw=True)
    alpha_plus = _boundary_chain(P, lo, hi, ccw=False)
    lowers = _peel(lp, lid, alpha_minus, P, -1)
    if not lowers:
        return []
    uppers = _peel(up, uid, alpha_plus, P, +1)
    seen = {}
    tau = tuple(e.k for e in r)
    for low in lowers:
        for upp in uppers:
            cells = _merge_cells(low + upp)
            if cells is None or not _face_to_face(cells, r):
                continue
            if not _curve_connected(low + upp, r):
                continue
            s = MarkedSubdivision(r, cells, tau)
            seen.setdefault(s.key(), s)
    return [seen[k] for k in sorted(seen)]


# ------------------------------------------------------------------- weights


@dataclass
class Contribution:
    subdivision: MarkedSubdivision
    symmetry: int
    weight: RefinedValue
    classical: Fraction

    def to_json(self, nbar: MarkingProfile | None = None) -> dict:
        out = {
            "subdivision": self.subdivision.to_json(),
            "symmetry_order": self.symmetry,
            "weight": self.weight.to_json(),
            "weight_y": self.weight.to_string(),
        }
        if nbar is not None:
            nw = self.weight * normalization_factor(nbar)
            out["normalized"] = nw.to_json()
            out["normalized_y"] = nw.to_string()
        return out


def _boundary_symmetry(s: MarkedSubdivision, P: LatticePolygon) -> int:
    breaks = set()
    for c in s.cells:
        breaks.update(v for v in c.vertices if P.contains(v) and _on_boundary(P, v))
    for el in s.rag_rug:
        breaks.update(v for v in el.vertices if _on_boundary(P, v))
    order = 1
    for a, b in P.edges():
        dvec = primitive(vsub(b, a))
        run = 0
        cur = a
        for _ in range(lattice_length(vsub(b, a))):
            cur = vadd(cur, dvec)
            run += 1
            if cur in breaks or cur == b:
                order *= factorial(run)
                run = 0
    return order


def _on_boundary(P: LatticePolygon, v: Vec) -> bool:
    return any(wedge(vsub(b, a), vsub(v, a)) == 0 and P.contains(v) for a, b in P.edges())


def subdivision_weight(s: MarkedSubdivision, d: Degree) -> Contribution:
    if not validate_degree(d).primitive:
        raise Unsupported("symmetry orders are only implemented for primitive degrees")
    P = newton_polygon(d)
    g = _boundary_symmetry(s, P)
    w = RefinedValue(1)
    cl = Fraction(1)
    for c in s.cells:
        if c.cls.mu is not None:
            w = w * RefinedValue(bracket_minus(c.cls.mu))
            cl *= c.cls.mu
    for el in s.rag_rug:
        if el.k >= 1:
            ld = el.local_degree()
            w = w * vertex_weight_refined(ld, marked=True)
            cl *= vertex_weight_classical(ld, marked=True)
    return Contribution(s, g, w / g, cl / g)


def _tiling_ok(s: MarkedSubdivision, P: LatticePolygon) -> bool:
    total = sum(polygon_metrics(LatticePolygon.hull(c.vertices)).lattice_area for c in s.cells)
    total += sum(polygon_metrics(el.polygon()).lattice_area for el in s.rag_rug)
    return total == polygon_metrics(P).lattice_area


def _contributions_for(args) -> list[Contribution]:
    r, d, cfg = args
    P = newton_polygon(d)
    out = []
    for s in complete_subdivision(r, d, cfg):
        if not _tiling_ok(s, P):
            raise AssertionError("completion does not tile the polygon")
        out.append(subdivision_weight(s, d))
    return out


def worker_count(workers: int | None = None) -> int:
    if workers is not None:
        return max(1, workers)
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def enumerate_contributions(
    d: Degree, nbar, cfg: StretchedConfig | None = None, workers: int | None = None
) -> list[Contribution]:
    cfg = cfg or StretchedConfig()
    if not isinstance(nbar, MarkingProfile):
        nbar = MarkingProfile(tuple(nbar))
    if not validate_degree(d).primitive:
        raise Unsupported("the lattice-path backend supports primitive degrees only")
    rugs = enumerate_rag_rugs(d, nbar, cfg)
    jobs = [(r, d, cfg) for r in rugs]
    n = worker_count(workers)
    if n > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=n) as ex:
            chunks = list(ex.map(_contributions_for, jobs))
    else:
        chunks = [_contributions_for(j) for j in jobs]
    out = [c for chunk in chunks for c in chunk]
    out.sort(key=lambda c: c.subdivision.key())
    return out


@dataclass
class Result:
    degree: Degree
    nbar: MarkingProfile
    cfg: StretchedConfig
    contributions: list[Contribution] = field(default_factory=list)

    @property
    def rd(self) -> RefinedValue:
        total = RefinedValue(0)
        for c in self.contributions:
            total = total + c.weight
        return total

    @property
    def nrd(self) -> RefinedValue:
        return self.rd * normalization_factor(self.nbar)

    @property
    def classical_rd(self) -> Fraction:
        return sum((c.classical for c in self.contributions), Fraction(0))

    @property
    def rag_rug_count(self) -> int:
        return len({tuple(e.key() for e in c.subdivision.rag_rug) for c in self.contributions})


def compute(d: Degree, nbar, cfg: StretchedConfig | None = None, workers: int | None = None) -> Result:
    cfg = cfg or StretchedConfig()
    if not isinstance(nbar, MarkingProfile):
        nbar = MarkingProfile(tuple(nbar))
    return Result(d, nbar, cfg, enumerate_contributions(d, nbar, cfg, workers))


def compute_rd(d: Degree, nbar, cfg: StretchedConfig | None = None, workers: int | None = None) -> RefinedValue:
    return compute(d, nbar, cfg, workers).rd


def compute_nrd(d: Degree, nbar, cfg: StretchedConfig | None = None, workers: int | None = None) -> RefinedValue:
    return compute(d, nbar, cfg, workers).nrd


def classical_nrd(result: Result) -> Fraction:
    return result.classical_rd * normalization_factor(result.nbar)


