"""Command line front end.

Exit codes: 0 success, 1 a check failed, 2 invalid input, 3 unsupported
input or instance limits exceeded.
"""
from __future__ import annotations

import argparse
import json
import random
import re
import sys
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product
from pathlib import Path
from typing import Sequence

from . import closed_forms as cf
from .direct import Limits, compute_rd_direct
from .errors import LimitExceeded, NonGeneric, OddShape, PreconditionError, Unsupported
from .lattice import Degree, cubic_degree, newton_polygon, polygon_metrics
from .refined import (
    RefinedValue,
    bracket_minus,
    bracket_plus,
    canonicalize,
    eval_y1,
    eval_y_minus1,
    pole_analysis,
    to_y_form,
)
from .subdivision import StretchedConfig, compute
from .svg import render_svg
from .uniqueness import verify_uniqueness
from .weights import (
    MarkingProfile,
    normalization_factor,
    random_wall_multiset,
    vertex_weight_classical,
    vertex_weight_refined,
    wall_identity_sum,
)

SCHEMA_VERSION = 1

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_UNSUPPORTED = 0, 1, 2, 3

_PRESETS = {"line": 1, "conic": 2, "cubic": 3, "quartic": 4}


def load_degree(source) -> Degree:
    """A JSON file path, an inline list, or a preset such as ``cubic`` or ``projective:4``."""
    if isinstance(source, (list, dict)):
        return Degree.from_json(source)
    text = str(source)
    if text in _PRESETS:
        return cubic_degree(_PRESETS[text])
    m = re.fullmatch(r"projective:(\d+)", text)
    if m:
        return cubic_degree(int(m.group(1)))
    if text.lstrip().startswith(("[", "{")):
        try:
            return Degree.from_json(json.loads(text))
        except (json.JSONDecodeError, KeyError, TypeError, IndexError) as exc:
            raise PreconditionError(f"cannot read inline degree: {exc}") from exc
    path = Path(text)
    if not path.is_file():
        raise PreconditionError(f"degree file not found: {text}")
    try:
        return Degree.from_json(json.loads(path.read_text()))
    except (json.JSONDecodeError, KeyError, TypeError, IndexError) as exc:
        raise PreconditionError(f"cannot read degree from {text}: {exc}") from exc


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


@dataclass
class RunConfig:
    degree: Degree
    markings: MarkingProfile
    lam: str | None = None
    tau: tuple[int, ...] | None = None
    backend: str = "lattice"
    seed: int = 0
    limits: Limits = field(default_factory=Limits)
    workers: int | None = None
    svg_dir: str | None = None

    def stretched(self) -> StretchedConfig:
        if self.lam is None:
            return StretchedConfig(tau=self.tau)
        return StretchedConfig.parse_lambda(self.lam, self.tau)

    @classmethod
    def from_json(cls, data: dict) -> "RunConfig":
        unknown = set(data) - {"degree", "markings", "lambda", "tau", "backend", "seed", "limits"}
        if unknown:
            raise PreconditionError(f"unknown config keys: {sorted(unknown)}")
        if "degree" not in data or "markings" not in data:
            raise PreconditionError("config needs 'degree' and 'markings'")
        marks = data["markings"]
        nbar = MarkingProfile.parse(marks) if isinstance(marks, str) else MarkingProfile(tuple(marks))
        tau = data.get("tau")
        if isinstance(tau, str):
            tau = _int_list(tau)
        backend = data.get("backend", "lattice")
        if backend not in ("lattice", "direct"):
            raise PreconditionError(f"unknown backend {backend!r}")
        return cls(
            load_degree(data["degree"]),
            nbar,
            data.get("lambda"),
            None if tau is None else tuple(tau),
            backend,
            int(data.get("seed", 0)),
            Limits.parse(data.get("limits", "")),
        )


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.split(",") if t.strip())


def _geometry(d: Degree) -> dict:
    m = polygon_metrics(newton_polygon(d))
    return {"p_a": m.interior_points, "boundary_points": m.boundary_points, "num_ends": len(d)}


def diagnostics(rd: RefinedValue, d: Degree, nbar: MarkingProfile) -> dict | None:
    try:
        return pole_analysis(rd, _geometry(d), nbar.n).to_json()
    except OddShape:
        return None


def run(cfg: RunConfig) -> dict:
    """Evaluate one configuration and return the result document."""
    nbar = cfg.markings
    if cfg.backend == "direct":
        res = compute_rd_direct(cfg.degree, nbar, seed=cfg.seed, limits=cfg.limits)
        rd = res.rd
        contributions = [t.to_json() for t in res.types]
        subdivisions = []
        extra = {"backend": "direct", "seed": res.seed}
    else:
        res = compute(cfg.degree, nbar, cfg.stretched(), cfg.workers)
        rd = res.rd
        contributions = [c.to_json(nbar) for c in res.contributions]
        subdivisions = [c.subdivision for c in res.contributions]
        extra = {
            "backend": "lattice",
            "lambda": cfg.stretched().describe(),
            "rag_rugs": res.rag_rug_count,
            "subdivisions": len(res.contributions),
            "classical_normalized": str(res.classical_rd * normalization_factor(nbar)),
        }
    nrd = rd * normalization_factor(nbar)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "degree": cfg.degree.to_json(),
        "markings": list(nbar.n),
        "invariant": rd.to_json(),
        "invariant_y": rd.to_string(),
        "normalized": nrd.to_json(),
        "normalized_y": nrd.to_string(),
        "normalized_at_1": str(eval_y1(nrd)),
        "contributions": contributions,
        "diagnostics": diagnostics(rd, cfg.degree, nbar),
        "run": extra,
    }
    return {"doc": doc, "subdivisions": subdivisions}


def _write_svgs(subdivisions, out_dir: str) -> None:
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    for i, s in enumerate(subdivisions, 1):
        (path / f"subdivision_{i:02d}.svg").write_text(render_svg(s))
    (path / "all.svg").write_text(render_svg(subdivisions, [str(i) for i in range(1, len(subdivisions) + 1)]))


# ----------------------------------------------------------------- commands


def _cfg_from_args(a) -> RunConfig:
    return RunConfig(
        load_degree(a.degree),
        MarkingProfile.parse(a.markings),
        a.lam,
        None if a.tau is None else _int_list(a.tau),
        getattr(a, "backend", "lattice"),
        getattr(a, "seed", 0),
        Limits.parse(getattr(a, "limits", "") or ""),
        getattr(a, "workers", None),
        getattr(a, "svg_dir", None),
    )


def cmd_compute(a, out) -> int:
    cfg = _cfg_from_args(a)
    result = run(cfg)
    doc = result["doc"]
    if cfg.svg_dir:
        _write_svgs(result["subdivisions"], cfg.svg_dir)
    if a.json:
        out.write(dumps(doc))
    else:
        out.write(f"RD   = {doc['invariant_y']}\n")
        out.write(f"NRD  = {doc['normalized_y']}\n")
        out.write(f"NRD(1) = {doc['normalized_at_1']}\n")
        out.write(f"contributions: {len(doc['contributions'])}\n")
    return EXIT_OK


def cmd_verify_invariance(a, out) -> int:
    base = _cfg_from_args(a)
    lambdas = a.lambdas or [None]
    taus = [_int_list(t) for t in a.taus] if a.taus else [None]
    backends = a.backends.split(",")
    variants = []
    for b in backends:
        if b == "lattice":
            variants += [("lattice", lam, tau, None) for lam, tau in product(lambdas, taus)]
        elif b == "direct":
            variants += [("direct", None, None, s) for s in a.seeds]
        else:
            raise PreconditionError(f"unknown backend {b!r}")
    if len(variants) < 2:
        raise PreconditionError("need at least two variants to compare")
    rows = []
    for backend, lam, tau, seed in variants:
        cfg = RunConfig(
            base.degree, base.markings, lam, tau, backend, seed or 0, base.limits, base.workers
        )
        doc = run(cfg)["doc"]
        rows.append(({"backend": backend, "lambda": lam, "tau": tau, "seed": seed}, doc))
    ref = rows[0][1]["invariant"]
    ok = all(doc["invariant"] == ref for _, doc in rows)
    report = {
        "passed": ok,
        "variants": [dict(v, invariant_y=doc["invariant_y"]) for v, doc in rows],
    }
    if not ok:
        diffs = []
        first = rows[0][1]
        for v, doc in rows[1:]:
            if doc["invariant"] != ref:
                diffs.append(
                    {
                        "variant": v,
                        "expected": [c.get("weight_y", c.get("weight")) for c in first["contributions"]],
                        "got": [c.get("weight_y", c.get("weight")) for c in doc["contributions"]],
                    }
                )
        report["diff"] = diffs
    out.write(dumps(report))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_specialize(a, out) -> int:
    cfg = _cfg_from_args(a)
    res = compute(cfg.degree, cfg.markings, cfg.stretched(), cfg.workers)
    rd, nrd = res.rd, res.nrd
    classical = res.classical_rd * normalization_factor(cfg.markings)
    doc = {
        "rd_at_1": str(eval_y1(rd)),
        "nrd_at_1": str(eval_y1(nrd)),
        "classical_nrd": str(classical),
        "classical_matches": eval_y1(nrd) == classical,
        "pole": diagnostics(rd, cfg.degree, cfg.markings),
    }
    try:
        doc["rd_at_minus_1"] = str(eval_y_minus1(rd))
    except PreconditionError:
        doc["rd_at_minus_1"] = None
    out.write(dumps(doc))
    return EXIT_OK if doc["classical_matches"] else EXIT_FAIL


def cmd_render(a, out) -> int:
    cfg = _cfg_from_args(a)
    res = compute(cfg.degree, cfg.markings, cfg.stretched(), cfg.workers)
    subs = [c.subdivision for c in res.contributions]
    if a.svg_dir:
        _write_svgs(subs, a.svg_dir)
    text = render_svg(subs, [str(i) for i in range(1, len(subs) + 1)])
    if a.output:
        Path(a.output).write_text(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_batch(a, out) -> int:
    path = Path(a.table)
    if not path.is_file():
        raise PreconditionError(f"batch file not found: {a.table}")
    try:
        entries = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"batch file is not JSON: {exc}") from exc
    if not isinstance(entries, list):
        raise PreconditionError("batch file must hold a list of configurations")
    rows = []
    for entry in entries:
        cfg = RunConfig.from_json(entry)
        cfg.workers = a.workers
        doc = run(cfg)["doc"]
        rows.append(
            {
                "markings": doc["markings"],
                "ends": sum(e["mult"] for e in doc["degree"]),
                "invariant_y": doc["invariant_y"],
                "normalized_y": doc["normalized_y"],
                "normalized_at_1": doc["normalized_at_1"],
            }
        )
    if a.json:
        out.write(dumps(rows))
    else:
        for r in rows:
            marks = ",".join(map(str, r["markings"]))
            out.write(f"{r['ends']:>3}  ({marks})  NRD = {r['normalized_y']}  [y=1: {r['normalized_at_1']}]\n")
    return EXIT_OK


# ---------------------------------------------------------------- self tests


def _suite(name: str):
    return {"suite": name, "checks": 0, "failures": [], "notes": []}


def _check(rep: dict, ok: bool, msg: str) -> None:
    rep["checks"] += 1
    if not ok:
        rep["failures"].append(msg)


def suite_brackets(seed: int, trials: int) -> dict:
    rep = _suite("brackets")
    for a in range(-8, 9):
        m = RefinedValue(bracket_minus(a))
        _check(rep, eval_y1(m) == a, f"[{a}]^- at y=1 is {eval_y1(m)}")
        _check(rep, RefinedValue(bracket_minus(-a)) == -m, f"[{a}]^- is not odd")
        p = bracket_plus(abs(a))
        _check(rep, eval_y1(p) == 1, f"[{abs(a)}]^+ at y=1 is {eval_y1(p)}")
        _check(rep, p.invert_variable() == p, f"[{abs(a)}]^+ is not symmetric")
    rng = random.Random(seed)
    for _ in range(trials):
        v = RefinedValue(bracket_minus(rng.randint(0, 6))) * bracket_plus(rng.randint(0, 6))
        v = v * RefinedValue(1, rng.randint(0, 3))
        _check(rep, canonicalize(canonicalize(v)) == canonicalize(v), f"canonicalize not idempotent on {v}")
        _check(rep, RefinedValue.from_json(v.to_json()) == v, f"JSON round trip fails on {v}")
    return rep


def suite_closed_forms(seed: int, trials: int) -> dict:
    rep = _suite("closed-forms")
    for r in range(2, 7):
        for a in combinations_with_replacement((1, 2, 3), r):
            w = vertex_weight_refined(cf.star_degree(a), marked=True)
            s = cf.star_weight(r, a)
            _check(rep, w == s, f"star r={r} a={a}: closed {s} vs recursion {w}")
        _check(rep, cf.star_weight_recursive(r) == cf.star_weight(r), f"star recursion r={r}")
    for r in range(2, 5):
        for h in (1, 2, 3):
            for a in combinations_with_replacement((1, 2), r):
                w = vertex_weight_refined(cf.triangle_degree(h, a), marked=True)
                c = cf.triangle_family_closed(h, a)
                _check(rep, w == c, f"triangle h={h} a={a}: closed {c} vs recursion {w}")
                g = cf.triangle_family_recursive(h, a, literal=False)
                _check(rep, g == c, f"triangle splitting recursion h={h} a={a}: {g} vs {c}")
    lit = cf.triangle_family_recursive(2, (1, 1), literal=True)
    if lit != cf.triangle_family_closed(2, (1, 1)):
        rep["notes"].append(f"literal splitting grouping gives {lit} at h=2, a=(1,1)")
    for k in (1, 2, 3):
        c = cf.triangle_family_closed(2, (1,) * (2 * k))
        _check(rep, cf.ac1_even(k) == c, f"even family k={k}")
        _check(rep, to_y_form(c).m == k, f"even family k={k}: pole order {to_y_form(c).m}")
    for k, h in ((1, 3), (1, 5), (2, 3), (2, 5)):
        c = cf.triangle_family_closed(h, (1,) * (2 * k + 1))
        _check(rep, cf.ac1_odd_corrected(k, h) == c, f"odd family k={k} h={h}")
        _check(rep, to_y_form(c).m == k, f"odd family k={k} h={h}: pole order {to_y_form(c).m}")
        stated = cf.ac1_odd(k, h)
        if stated != c:
            rep["notes"].append(
                f"odd family k={k} h={h}: sum over y^(h i), i=-k..k gives {eval_y1(stated)} at y=1, "
                f"expected {eval_y1(c)}"
            )
    return rep


def suite_uniqueness(seed: int, trials: int, m_max: int = 6) -> dict:
    rep = _suite("uniqueness")
    rng = random.Random(seed)
    for m in range(3, m_max + 1):
        for _ in range(trials):
            vs = [(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(m - 1)]
            vs.append((-sum(v[0] for v in vs), -sum(v[1] for v in vs)))
            r = verify_uniqueness(vs, check_fixed_leaf=m <= 5)
            _check(rep, r.ok, f"m={m} {vs}: " + "; ".join(r.failures))
    return rep


def suite_wall(seed: int, trials: int) -> dict:
    rep = _suite("wall")
    rng = random.Random(seed)
    for i in range(trials):
        b = random_wall_multiset(rng, 4 + i % 4)
        total = wall_identity_sum(b)
        _check(rep, total == RefinedValue(0), f"{b}: sum is {total}")
    return rep


def suite_classical(seed: int, trials: int) -> dict:
    rep = _suite("classical-limit")
    rng = random.Random(seed)
    for _ in range(trials):
        m = rng.randint(3, 6)
        vs = [(rng.randint(-2, 2), rng.randint(-2, 2)) for _ in range(m - 1)]
        vs.append((-sum(v[0] for v in vs), -sum(v[1] for v in vs)))
        r, c = vertex_weight_refined(vs, True), vertex_weight_classical(vs, True)
        _check(rep, eval_y1(r) == c, f"{vs}: {eval_y1(r)} vs {c}")
    return rep


SUITES = {
    "brackets": suite_brackets,
    "closed-forms": suite_closed_forms,
    "uniqueness": suite_uniqueness,
    "wall": suite_wall,
    "classical-limit": suite_classical,
}


def cmd_selftest(a, out) -> int:
    names = a.suites or list(SUITES)
    for n in names:
        if n not in SUITES:
            raise PreconditionError(f"unknown suite {n!r}; choose from {sorted(SUITES)}")
    reports = []
    for n in names:
        if n == "uniqueness":
            rep = suite_uniqueness(a.seed, a.trials if a.trials is not None else 2, a.m)
        else:
            rep = SUITES[n](a.seed, a.trials if a.trials is not None else 20)
        rep["passed"] = not rep["failures"]
        reports.append(rep)
    ok = all(r["passed"] for r in reports)
    out.write(dumps({"passed": ok, "seed": a.seed, "suites": reports}))
    return EXIT_OK if ok else EXIT_FAIL


# -------------------------------------------------------------------- parser


def _instance_args(p: argparse.ArgumentParser, lam: bool = True) -> None:
    p.add_argument("--degree", required=True, help="JSON file, inline JSON list, or a preset: line, conic, cubic, quartic, projective:d")
    p.add_argument("--markings", required=True, help="n0,n1,... marked points per psi-index")
    if lam:
        p.add_argument("--lambda", dest="lam", default=None, help="order functional a,b/c,d")
        p.add_argument("--tau", default=None, help="psi-index order k1,k2,...")
    p.add_argument("--workers", type=int, default=None, help="worker processes (default $TROPICAL_WORKERS or 1)")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tropical-descendants", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="refined descendant invariant of one instance")
    _instance_args(c)
    c.add_argument("--backend", choices=("lattice", "direct"), default="lattice")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--limits", default="", help="e.g. degree=6,points=5,flows=200000")
    c.add_argument("--svg-dir", default=None)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_compute)

    v = sub.add_parser("verify-invariance", help="compare several order functionals, tau orders and backends")
    _instance_args(v, lam=False)
    v.add_argument("--lambda", dest="lambdas", action="append", default=None)
    v.add_argument("--tau", dest="taus", action="append", default=None)
    v.add_argument("--backends", default="lattice")
    v.add_argument("--seeds", type=int, nargs="+", default=[0])
    v.add_argument("--limits", default="")
    v.set_defaults(func=cmd_verify_invariance, lam=None, tau=None)

    s = sub.add_parser("specialize", help="values at y = 1 and y = -1 and the pole report")
    _instance_args(s)
    s.set_defaults(func=cmd_specialize)

    t = sub.add_parser("selftest", help="run the built-in consistency suites")
    t.add_argument("suites", nargs="*", help=f"subset of {', '.join(SUITES)}")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--trials", type=int, default=None)
    t.add_argument("--m", type=int, default=6, help="largest valency for the uniqueness suite")
    t.set_defaults(func=cmd_selftest)

    r = sub.add_parser("render", help="SVG drawing of all marked subdivisions")
    _instance_args(r)
    r.add_argument("--output", "-o", default=None)
    r.add_argument("--svg-dir", default=None)
    r.set_defaults(func=cmd_render)

    b = sub.add_parser("batch", help="evaluate a JSON list of configurations")
    b.add_argument("table")
    b.add_argument("--json", action="store_true")
    b.add_argument("--workers", type=int, default=None)
    b.set_defaults(func=cmd_batch)
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (Unsupported, LimitExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (PreconditionError, NonGeneric, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
