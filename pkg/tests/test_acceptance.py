"""Acceptance criteria 1-15, one test each.

Every test records a single ``CRITERION n: PASS|FAIL ...`` line.  The lines
are printed in the pytest terminal summary (see ``conftest.py``), and live
with ``-s``.  The checks reuse the harness suite groups with seed 0, so the
sampled points are exactly the ones the CLI reports.
"""
import json
import math
import subprocess
import sys
import time

import pytest

from ellhyp import harness as H

RESULTS = {}


def _ctx(suite):
    return H.make_context(suite)


def _verdict(n, reports, limit=None, elapsed=None, allow=("pass",)):
    ok = all(r.verdict in allow for r in reports)
    if limit is not None and elapsed is not None:
        ok = ok and elapsed < limit
    worst = max((r.rel_residual for r in reports if not math.isnan(r.rel_residual)), default=0.0)
    bad = [r.id for r in reports if r.verdict not in allow]
    line = f"CRITERION {n:2d}: {'PASS' if ok else 'FAIL'}  checks={len(reports)} worst_rel={worst:.2e}"
    if elapsed is not None:
        line += f" time={elapsed:.1f}s" + (f" (limit {limit:g}s)" if limit else "")
    if bad:
        line += f" failing={bad}"
    RESULTS[n] = line
    print(line)
    return ok


def _timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


def test_criterion_01_theta_layer():
    reps, dt = _timed(H.theta_group, _ctx("core-qseries"), samples=100)
    assert all(r.tolerance == 1e-13 and r.meta["instances"] == 100 for r in reps)
    assert _verdict(1, reps, 1.0, dt)


def test_criterion_02_gamma_layer():
    reps, dt = _timed(H.gamma_group, _ctx("elliptic-gamma"), samples=100)
    tols = {r.id: r.tolerance for r in reps}
    assert tols["mod_egamma.representations"] == 1e-10 and tols["egamma.reflection"] == 1e-12
    assert _verdict(2, reps, 10.0, dt)


def test_criterion_03_frenkel_turaev():
    reps, dt = _timed(H.frenkel_turaev_group, _ctx("series"), per_order=20)
    assert len(reps) == 9 and all(r.meta["instances"] == 20 for r in reps)
    assert _verdict(3, reps, 5.0, dt)


def test_criterion_04_elliptic_beta():
    reps, dt = _timed(H.elliptic_beta_group, _ctx("beta-univariate"), count=10)
    assert len(reps) == 11
    assert _verdict(4, reps, 30.0, dt)


def test_criterion_05_degenerations():
    reps = H.degenerations_group(_ctx("beta-univariate"), count=5)
    assert sum("rahman" in r.id for r in reps) == 5 and sum("askey" in r.id for r in reps) == 5
    assert _verdict(5, reps)


def test_criterion_06_residue_identity():
    reps = H.residue_group(_ctx("beta-univariate"))
    assert [r.meta["crossed"] for r in reps] == [[0], [0, 1]]
    assert _verdict(6, reps)


def test_criterion_07_modified_beta():
    reps = H.modified_beta_group(_ctx("beta-univariate"))
    assert [r.tolerance for r in reps] == [1e-8, 1e-9]
    assert _verdict(7, reps)


def test_criterion_08_vfunction():
    reps = H.vfunction_group(_ctx("beta-univariate"), count=5)
    for kind in ("i", "ii", "iii"):
        assert sum(r.id.startswith(f"beta.E7_{kind}.") for r in reps) == 5
    assert _verdict(8, reps)


def test_criterion_09_contiguous_and_ehe():
    reps, dt = _timed(H.contiguous_V_group, _ctx("beta-univariate"), count=3)
    assert len(reps) == 9
    assert _verdict(9, reps, 120.0, dt)


def test_criterion_10_series_relations():
    ctx = _ctx("series")
    reps = H.contiguous_12v11_group(ctx) + H.recurrence_group(ctx)
    assert _verdict(10, reps)


def test_criterion_11_gram_matrix():
    reps, dt = _timed(H.gram_group, _ctx("biorthogonal"))
    assert reps[0].meta["max_offdiag"] <= 1e-7 and reps[0].meta["max_diag_err"] <= 1e-7
    assert _verdict(11, reps, 120.0, dt)


def test_criterion_12_multivariate():
    t0 = time.perf_counter()
    reps = H.multivariate_group(_ctx("multivariate"))
    dt = time.perf_counter() - t0
    ids = {r.id for r in reps}
    assert {"multi.C_I_vs_univariate", "multi.C_I.n2", "multi.C_II.n2", "multi.A_II1.n2", "multi.A_II2.n2"} <= ids
    assert {f"multi.{f}.n1" for f in ("A_I1", "A_I2", "A_II1", "A_II2")} <= ids
    # ten minutes per integral is the budget; all of them together should stay well inside it
    assert _verdict(12, reps, 600.0, dt)


def test_criterion_13_van_diejen():
    reps = H.diejen_group(_ctx("multivariate"))
    const = next(r for r in reps if r.id == "multi.diejen_constant")
    assert const.abs_residual == 0.0
    assert _verdict(13, reps)


def test_criterion_14_bailey():
    reps = H.bailey_lemma_group(_ctx("bailey"))
    assert reps[0].meta["samples"] == 3
    assert _verdict(14, reps)


def test_criterion_15_determinism_and_exit_codes(tmp_path):
    cfg = lambda: H.SuiteConfig(suites=["core-qseries", "series", "elliptic-gamma"], seed=11)
    a = H.render_json(H.run_suites(cfg()), cfg())
    b = H.render_json(H.run_suites(cfg()), cfg())
    c = H.render_json(H.run_suites(H.SuiteConfig(suites=["series", "elliptic-gamma", "core-qseries"], seed=11, workers=3)), cfg())
    same = a == b == c
    # exit codes through the real console entry point
    run = lambda *args: subprocess.run([sys.executable, "-m", "ellhyp", *args], capture_output=True, text=True)
    codes = {
        "pass": run("core-qseries", "--out", str(tmp_path / "ok.json")).returncode,
        "fail": run("series", "--tol", "series.frenkel_turaev=1e-15", "--out", str(tmp_path / "f.json")).returncode,
        "unknown": run("core-qseries", "nope").returncode,
        "floor": run("core-qseries", "--tol", "1e-18").returncode,
        "empty": run("--config", str(_write(tmp_path / "e.cfg", "suites =\n"))).returncode,
    }
    files = [json.loads((tmp_path / n).read_text()) for n in ("ok.json", "f.json")]
    ok = same and codes == {"pass": 0, "fail": 1, "unknown": 2, "floor": 2, "empty": 0}
    ok = ok and all(set(d) == {"meta", "results"} for d in files)
    line = f"CRITERION 15: {'PASS' if ok else 'FAIL'}  byte_identical={same} exit_codes={codes}"
    RESULTS[15] = line
    print(line)
    assert ok


def _write(path, text):
    path.write_text(text)
    return path


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
