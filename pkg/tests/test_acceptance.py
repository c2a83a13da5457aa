"""Acceptance suite: one PASS/FAIL line per criterion, at the stated tolerances."""

import contextlib
import io
import math
import time

import numpy as np

from infconc import cli
from infconc.laplace import LaplaceParams, laplace_H, laplace_T
from infconc.lemma_audit import run_audit
from infconc.mc_oracle import cdf_by_density_quadrature, estimate_laplace_T
from infconc.special_functions import gauss_2f1, student_t_cdf, t_cdf_hypergeometric
from infconc.tinf import J_TOL, G_with_error, J, QuadratureSpec
from infconc.lemma_audit import contiguous_identity_residual


def test_worked_values_reproduced(acceptance):
    t0 = time.perf_counter()
    rows = [r for r in cli.reproduce_remark() if r["kind"] == "value"]
    dt = time.perf_counter() - t0
    bad = [f"{r['quantity']}({r['y']:g})={r['computed']:.7g} vs {r['reported']:g} "
           f"(diff {r['abs_diff']:.2e} > {r['tolerance']:g}, at {r['attained_at']})"
           for r in rows if not r["within_tol"]]
    ok = not bad and dt < 60
    detail = f"{len(rows) - len(bad)}/6 values and argmins match, {dt:.1f}s"
    if bad:
        detail += "; mismatches: " + "; ".join(bad)
    acceptance(1, "worked Student-t values", ok, detail)
    assert ok, detail


def test_ledger_reproduced(acceptance):
    rows = [r for r in cli.reproduce_remark() if r["kind"] == "ledger"]
    worst = max(r["abs_diff"] for r in rows)
    ok = len(rows) == 14 and all(r["within_tol"] for r in rows)
    acceptance(2, "constant ledgers y=2,3", ok, f"14 entries, max abs diff {worst:.2e} <= 0.01")
    assert ok


def test_laplace_closed_forms(acceptance):
    t0 = time.perf_counter()
    grid = [10 ** (-3 + 5 * i / 99) for i in range(100)]
    comp = max(abs(laplace_T(y) + laplace_H(y) - 1.0) for y in grid)
    zs = []
    k = 0
    for mu, b in ((0.0, 1.0), (2.0, 3.0), (-1.0, 0.5)):
        for y in (0.5, 1.0, 2.0):
            est = estimate_laplace_T(LaplaceParams(mu, b), y, 10**6, 7_000 + k)
            zs.append((est.p_hat - laplace_T(y)) / est.std_err)
            k += 1
    dt = time.perf_counter() - t0
    ok = comp <= 1e-15 and all(abs(z) <= 4.0 for z in zs) and dt < 30
    acceptance(3, "Laplace closed forms", ok,
               f"max |T+H-1| {comp:.1e}, MC max |z| {max(map(abs, zs)):.2f} over 9 scenarios, {dt:.1f}s")
    assert ok


def test_G_J_sign_equivalence(acceptance):
    t0 = time.perf_counter()
    q = QuadratureSpec()
    tested = skipped = violations = 0
    for y in (0.5, 1.0, 1.2, 1.5, 2.0, 3.0):
        for v in range(3, 61):
            g, _ = G_with_error(v, y, q)
            g_tol = max(q.abs_tol, q.rel_tol * abs(g))
            dj = J(v, y) - J(v + 2, y)
            if abs(g - 1.0) <= 5 * g_tol or abs(dj) <= 5 * J_TOL:
                skipped += 1
                continue
            tested += 1
            violations += (g > 1.0) != (dj > 0.0)
    dt = time.perf_counter() - t0
    ok = violations == 0 and dt < 20
    acceptance(4, "G-J sign equivalence", ok,
               f"{tested} pairs tested, {skipped} near-zero skipped, {violations} violations, {dt:.1f}s")
    assert ok


def test_full_audit(acceptance):
    t0 = time.perf_counter()
    rep = run_audit("full")
    dt = time.perf_counter() - t0
    min_slack = min(c.slack for c in rep.checks)
    ok = rep.all_pass and min_slack > 0 and dt < 60
    acceptance(5, "remainder-bound audit (full)", ok,
               f"{len(rep.checks)} checks, {len(rep.failures)} failures, min slack {min_slack:.2e}, {dt:.2f}s")
    assert ok


def test_hypergeometric_identities(acceptance):
    contig = max(contiguous_identity_residual(v, y)
                 for v in (3.0, 5.0, 10.0, 50.0, 200.0) for y in (0.5, 1.0, 2.0)
                 if y * y < v - 2.0)
    degen = 0.0
    for b in np.linspace(0.5, 5.0, 10):
        for z in np.linspace(-0.9, 0.9, 19):
            for a in (0.5, 1.5, 3.0):
                ref = (1.0 - z) ** (-b)
                degen = max(degen, abs(gauss_2f1(a, b, a, z) - ref) / ref)
    series = 0.0
    for v in (3, 4, 5, 7, 10, 30, 100, 1000):
        for k in range(-20, 21):
            x = k / 20 * 0.999 * math.sqrt(v)
            series = max(series, abs(student_t_cdf(v, x) - t_cdf_hypergeometric(v, x)))
    ok = contig <= 1e-10 and degen <= 1e-12 and series <= 1e-10
    acceptance(6, "hypergeometric identities", ok,
               f"contiguous {contig:.1e}, F(a,b;a;z) rel {degen:.1e}, series vs beta {series:.1e}")
    assert ok


def test_density_oracle_equivalence(acceptance):
    worst = 0.0
    for v in (3.0, 7.0, 50.0, 1000.0):
        for x in np.linspace(-10.0, 10.0, 50):
            worst = max(worst, abs(cdf_by_density_quadrature(v, float(x)) - student_t_cdf(v, float(x))))
    ok = worst <= 1e-9
    acceptance(7, "density-quadrature oracle", ok, f"max discrepancy {worst:.1e} over 200 points")
    assert ok


def test_small_y_monotonicity(acceptance):
    g_fail = j_fail = 0
    min_g = math.inf
    for y in (0.1, 0.5, 0.9, 1.0):
        js = [J(v, y) for v in range(3, 502)]
        for v in range(3, 501):
            g = G_with_error(v, y)[0]
            min_g = min(min_g, g)
            g_fail += not g > 1.0
        j_fail += sum(not b < a for a, b in zip(js, js[1:]))
    ok = g_fail == 0 and j_fail == 0
    acceptance(8, "y<=1 monotonicity", ok,
               f"min G {min_g:.6f} over 1992 points, {g_fail} G<=1, {j_fail} non-decreasing J steps")
    assert ok


def _capture(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(io.StringIO()):
        code = cli.main(argv)
    return code, buf.getvalue()


def test_determinism(acceptance):
    commands = [
        ["compute", "--family", "laplace", "--fn", "T", "--y", "1.3"],
        ["compute", "--family", "student-t", "--fn", "T", "--y", "2"],
        ["compute", "--family", "student-t", "--fn", "H", "--y", "sqrt3"],
        ["compute", "--family", "student-t", "--fn", "C", "--y", "0.4"],
        ["reproduce-remark"],
        ["audit", "--preset", "full"],
        ["verify", "--seed", "12345", "--n", "200000"],
    ]
    mismatched = []
    for cmd in commands:
        outs = {_capture(cmd + ["--format", "json", "--threads", str(t)]) for t in (1, 1, 3, 8)}
        if len(outs) != 1:
            mismatched.append(" ".join(cmd))
    ok = not mismatched
    acceptance(9, "byte-identical JSON", ok,
               f"{len(commands)} commands x threads 1,1,3,8; mismatches: {mismatched or 'none'}")
    assert ok
