import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from tropical_descendants import cli, subdivision

GOLDEN = Path(__file__).parent / "golden"


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def test_compute_golden_json():
    code, text = run("compute", "--degree", "cubic", "--markings", "2,0,2", "--tau", "2,0,2,0", "--json")
    assert code == 0
    assert text == (GOLDEN / "cubic_202.json").read_text()
    doc = json.loads(text)
    assert set(doc) >= {"invariant", "normalized", "contributions", "diagnostics"}
    assert doc["normalized_at_1"] == "3"


def test_compute_from_degree_file(tmp_path):
    f = tmp_path / "deg.json"
    f.write_text(json.dumps({"degree": [{"vector": [1, 1], "mult": 2}, {"vector": [0, -1], "mult": 2}, {"vector": [-1, 0], "mult": 2}]}))
    code, text = run("compute", "--degree", str(f), "--markings", "5")
    assert code == 0
    assert "NRD  = 1" in text


def test_compute_from_inline_degree():
    code, text = run("compute", "--degree", "[[1,0],[0,1],[-1,-1]]", "--markings", "0,1")
    assert code == 0
    assert "NRD(1) = 1" in text
    assert run("compute", "--degree", "[[1,0", "--markings", "2")[0] == 2


def test_svg_dir(tmp_path):
    code, _ = run("compute", "--degree", "cubic", "--markings", "2,0,2", "--tau", "2,0,2,0", "--svg-dir", str(tmp_path))
    assert code == 0
    assert len(list(tmp_path.glob("subdivision_*.svg"))) == 6
    assert (tmp_path / "all.svg").read_text() == (GOLDEN / "cubic_202_all.svg").read_text()


def test_deterministic_across_worker_counts(monkeypatch):
    argv = ("compute", "--degree", "cubic", "--markings", "2,0,2", "--json")
    monkeypatch.setenv(subdivision.WORKERS_ENV, "1")
    a = run(*argv)[1]
    monkeypatch.setenv(subdivision.WORKERS_ENV, "3")
    b = run(*argv)[1]
    c = run(*argv, "--workers", "2")[1]
    assert a == b == c


@pytest.mark.parametrize(
    "argv",
    [
        ("compute", "--degree", "/does/not/exist.json", "--markings", "2"),
        ("compute", "--degree", "cubic", "--markings", "3"),
        ("compute", "--degree", "cubic", "--markings", "2,0,2", "--lambda", "1,0/2,0"),
        ("compute", "--degree", "cubic", "--markings", "2,0,2", "--tau", "1,1,1,1"),
        ("compute", "--degree", "cubic", "--markings", "x"),
        ("verify-invariance", "--degree", "cubic", "--markings", "8"),
        ("selftest", "nosuchsuite"),
        ("frobnicate",),
    ],
)
def test_exit_code_two(argv):
    assert run(*argv)[0] == 2


def test_bad_lambda_text_is_input_error():
    assert run("compute", "--degree", "cubic", "--markings", "8", "--lambda", "1,0")[0] == 2


def test_exit_code_three():
    assert run("compute", "--degree", "cubic", "--markings", "8", "--backend", "direct")[0] == 3
    assert run("compute", "--degree", '[[2,0],[0,2],[-2,-2]]', "--markings", "2")[0] == 3
    code, _ = run("compute", "--degree", "projective:1", "--markings", "2")
    assert code == 0


def test_non_primitive_is_unsupported(tmp_path):
    f = tmp_path / "d.json"
    f.write_text("[[2,0],[0,2],[-2,-2]]")
    assert run("compute", "--degree", str(f), "--markings", "2")[0] == 3


def test_verify_invariance_pass():
    code, text = run(
        "verify-invariance", "--degree", "cubic", "--markings", "2,0,2",
        "--lambda", "1,0/0,-1", "--lambda", "1,2/0,1", "--lambda", "2,-1/1,0",
        "--tau", "2,0,2,0", "--tau", "0,0,2,2",
    )
    assert code == 0
    assert len(json.loads(text)["variants"]) == 6


def test_verify_invariance_with_direct():
    code, text = run("verify-invariance", "--degree", "conic", "--markings", "3,1", "--backends", "lattice,direct", "--seeds", "1", "2")
    assert code == 0, text


def test_verify_invariance_detects_corruption(monkeypatch):
    real = subdivision.subdivision_weight
    calls = {"n": 0}

    def corrupted(s, d):
        c = real(s, d)
        calls["n"] += 1
        if calls["n"] > 3:
            c.weight = c.weight * 2
        return c

    monkeypatch.setattr(subdivision, "subdivision_weight", corrupted)
    code, text = run("verify-invariance", "--degree", "cubic", "--markings", "2,0,2", "--lambda", "1,0/0,-1", "--lambda", "1,2/0,1")
    assert code == 1
    assert json.loads(text)["diff"]


def test_specialize():
    code, text = run("specialize", "--degree", "cubic", "--markings", "8")
    doc = json.loads(text)
    assert code == 0
    assert (doc["rd_at_1"], doc["rd_at_minus_1"], doc["classical_matches"]) == ("12", "8", True)


def test_selftest_runs_all_suites():
    code, text = run("selftest", "--seed", "3", "--m", "5")
    doc = json.loads(text)
    assert code == 0, [s["failures"] for s in doc["suites"]]
    assert {s["suite"] for s in doc["suites"]} == set(cli.SUITES)


def test_selftest_reproducible():
    assert run("selftest", "wall", "--seed", "5")[1] == run("selftest", "wall", "--seed", "5")[1]


def test_selftest_flags_mismatch(monkeypatch):
    monkeypatch.setattr(cli.cf, "star_weight", lambda r, a=None: cli.RefinedValue(0))
    code, text = run("selftest", "closed-forms")
    assert code == 1
    fail = json.loads(text)["suites"][0]["failures"][0]
    assert "closed" in fail and "recursion" in fail


def test_render(tmp_path):
    out = tmp_path / "x.svg"
    code, _ = run("render", "--degree", "cubic", "--markings", "2,0,2", "--tau", "2,0,2,0", "-o", str(out))
    assert code == 0
    assert out.read_text() == (GOLDEN / "cubic_202_all.svg").read_text()


def test_batch(tmp_path):
    f = tmp_path / "b.json"
    f.write_text(json.dumps([{"degree": "conic", "markings": "5"}, {"degree": "cubic", "markings": [8]}]))
    code, text = run("batch", str(f), "--json")
    rows = json.loads(text)
    assert code == 0
    assert [r["normalized_y"] for r in rows] == ["1", "y + 10 + y^-1"]
    f.write_text(json.dumps([{"degree": "conic", "markings": "5", "colour": 1}]))
    assert run("batch", str(f))[0] == 2
    assert run("batch", str(tmp_path / "missing.json"))[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "tropical_descendants", "compute", "--degree", "line", "--markings", "2"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "RD   = 1" in proc.stdout
