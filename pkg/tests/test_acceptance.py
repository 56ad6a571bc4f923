"""The twelve acceptance criteria, each at its stated tolerance and time budget.

Every test prints one ``criterion N: PASS|FAIL`` line.  Run standalone with
``python tests/test_acceptance.py`` for just those lines.
"""
import json
import subprocess
import sys
import time

import pytest

from sasred import verify

SEED = 42
_regular_cache = {}
RESULTS = []  # read by the terminal summary hook in conftest.py
_capture = {}


@pytest.fixture(autouse=True)
def _uncaptured(capsys):
    _capture["capsys"] = capsys
    yield
    _capture.clear()


def report(num, name, passed, seconds, extra=""):
    line = f"criterion {num:>2} {name}: {'PASS' if passed else 'FAIL'} ({seconds:.2f}s){' ' + extra if extra else ''}"
    RESULTS.append(line)
    capsys = _capture.get("capsys")
    if capsys is None:
        print(line)
        return
    with capsys.disabled():
        print("\n" + line, flush=True)


def timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def check(num, name, result, seconds, budget, extra=""):
    ok = result["passed"] and (budget is None or seconds < budget)
    report(num, name, ok, seconds, extra)
    assert result["passed"], json.dumps(result, default=str)[:2000]
    if budget is not None:
        assert seconds < budget, f"took {seconds:.2f}s, budget {budget}s"


def regular():
    if "res" not in _regular_cache:
        (c6, reg), dt = timed(verify.criterion_regular_values, SEED, 1)
        _regular_cache["res"] = (c6, reg, dt)
    return _regular_cache["res"]


def test_criterion_01_box_identity():
    r, dt = timed(verify.criterion_box_identity, SEED)
    check(1, "box identity on 1000 random matrices", r, dt, 1.0)


def test_criterion_02_obstruction():
    r, dt = timed(verify.criterion_obstruction)
    check(2, "smoothness obstruction", r, dt, 1.0, f"counts={r['counts']}")
    # the count of +-3 boxes is one per assignment; the discrepancy is flagged
    assert r["discrepancy"]


def test_criterion_03_admissibility():
    r, dt = timed(verify.criterion_admissibility, 30)
    check(3, "admissibility and oracle enumeration", r, dt, 5.0, f"count={r['count']}")


def test_criterion_04_parity():
    r, dt = timed(verify.criterion_parity, 30)
    check(4, "parity impossibility", r, dt, 30.0)


def test_criterion_05_quads():
    r, dt = timed(verify.criterion_quads, 15)
    check(5, "quadruple freeness", r, dt, 10.0)


def test_criterion_06_regular_values():
    c6, _, dt = regular()
    check(6, "regular values", c6, dt, 60.0,
          " ".join(f"{k}:rank={v['ranks']},nullity={v['nullities']}" for k, v in c6.items()
                   if isinstance(v, dict)))


def test_criterion_07_freeness_and_singular_stratum():
    _, reg, _ = regular()
    r, dt = timed(verify.criterion_freeness, reg, SEED)
    check(7, "freeness vs singular stratum", r, dt, 30.0, f"singular killing rank={r['singular'].get('killing_rank')}")


def test_criterion_08_vertices():
    r, dt = timed(verify.criterion_vertices, SEED)
    check(8, "vertex support scan", r, dt, 120.0, f"feasible={len(r['feasible'])} infeasible={r['infeasible_count']}")


def test_criterion_09_octonions():
    r, dt = timed(verify.criterion_octonions, SEED)
    check(9, "octonionic moment map", r, dt, 10.0, f"max diff={r['max_abs_difference']:.1e}")


def test_criterion_10_coassociativity():
    r, dt = timed(verify.criterion_coassociativity, SEED, 1)
    pw = r["pointwise"]
    check(10, "co-associativity (pointwise |phi| = 1)", r, dt, 60.0,
          f"within 1e-6: {pw['within_tol']}/{r['samples']}, contrast departing: "
          f"{r['contrast']['pointwise']['departing_1e-3']}/100")


def test_criterion_10_orbit_aligned():
    """Companion check: the maximum of |phi| over each circle orbit is 1."""
    r, dt = timed(verify.criterion_coassociativity, SEED, 1)
    al = r["orbit_aligned"]
    ok = r["orbit_aligned_passed"] and r["contrast"]["orbit_aligned"]["departing_1e-3"] >= 95
    report(10, "co-associativity (orbit-aligned)", ok and dt < 60.0, dt,
           f"within 1e-6: {al['within_tol']}/{r['samples']}")
    assert ok and dt < 60.0


def test_criterion_11_dimensions():
    _, reg, _ = regular()
    r, dt = timed(verify.criterion_dimensions, reg)
    check(11, "dimension accounting", r, dt, None)


@pytest.mark.slow
def test_criterion_12_determinism(tmp_path):
    t0 = time.perf_counter()
    outs = []
    for threads in ("1", "1", "8"):
        proc = subprocess.run([sys.executable, "-m", "sasred.cli", "suite", "--seed", "42", "--format", "json",
                               "--threads", threads], capture_output=True)
        assert proc.returncode in (0, 1), proc.stderr.decode()
        outs.append(proc.stdout)
    dt = time.perf_counter() - t0
    same = outs[0] == outs[1] == outs[2] and len(outs[0]) > 0
    report(12, "byte-identical suite JSON (2 runs, threads 1 and 8)", same, dt)
    assert same


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
