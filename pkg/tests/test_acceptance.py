"""Acceptance criteria 1-12, one PASS/FAIL line each (shown in the terminal summary).

All suites run once in-process (session fixture); criterion 12 reruns
`qeverify verify all` in a fresh process and compares the JSONL bytes.
"""
import json
import subprocess
import sys
import time

import pytest

from qeverify import verify

pytestmark = pytest.mark.slow

# tolerances pinned from the acceptance criteria
TOL_CLOSED_VS_QUADRATURE = 1e-8
TOL_WHITTAKER_CROSS = 1e-10
TOL_ASYMPTOTIC_NORMALIZATION = 1e-6
TOL_LOCAL_MODELS = 1e-6
TOL_LOCAL_VANISHING = 1e-8
TOL_UNFOLD_IDENTITY = 1e-6
TOL_UNFOLD_CENTRAL = 1e-4
TOL_UNFOLD_MAASS_FLOOR = 1e-4
TOL_ZETA2 = 1e-20
TOL_AFE_ZETA = 1e-8
TOL_RANKIN_SELBERG = 1e-8
TOL_L1AD = 1e-3
TOL_TRIPLE_RATIO = 1e-2
WEYL_FACTOR = 2.0


@pytest.fixture(scope="session")
def run_all(tmp_path_factory):
    out = tmp_path_factory.mktemp("run_in_process")
    cfg = verify.RunConfig(out=str(out), suite="all")
    t0 = time.time()
    reps = verify.run_suite("all", cfg)
    elapsed = time.time() - t0
    jpath, _ = verify.write_reports(reps, str(out), timestamp=0.0)
    return reps, jpath, elapsed


def select(reps, pred):
    return [r for r in reps if pred(r.label)]


def judge(record, number, title, reps, tolerance=None, expected=None):
    """Record one line for the criterion and assert it."""
    assert reps, f"criterion {number}: no reports selected"
    ok = all(r.passed for r in reps)
    if tolerance is not None:
        ok = ok and all(r.tolerance == pytest.approx(tolerance) for r in reps if r.mode != "bound")
    if expected is not None:
        ok = ok and len(reps) == expected
    worst = max(reps, key=lambda r: r.abs_err if r.mode == "absolute" else r.rel_err)
    err = worst.abs_err if worst.mode == "absolute" else worst.rel_err
    record(f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {title} "
           f"({len(reps)} reports, worst {worst.mode} err {err:.2e})")
    bad = [str(r) for r in reps if not r.passed]
    assert ok, bad or f"count {len(reps)} != {expected} or tolerance mismatch"


def test_criterion_01_nonholomorphic_closed_form(run_all, record_criterion):
    reps, _, _ = run_all
    grid = select(reps, lambda s: s.startswith("I_") and not s.startswith("I_{") and "closed vs quadrature" in s)
    judge(record_criterion, 1, "I_k closed form vs quadrature, 48-point grid, 1e-8", grid,
          TOL_CLOSED_VS_QUADRATURE, expected=48)


def test_criterion_02_holomorphic_closed_form(run_all, record_criterion):
    reps, _, _ = run_all
    grid = select(reps, lambda s: s.startswith("I_{") and "closed vs quadrature" in s)
    judge(record_criterion, 2, "I_{k,l} closed form vs quadrature, 15-point grid, 1e-8", grid,
          TOL_CLOSED_VS_QUADRATURE, expected=15)


def test_criterion_03_decay_bounded(run_all, record_criterion):
    reps, _, _ = run_all
    judge(record_criterion, 3, "decay ratios bounded by recorded constants",
          select(reps, lambda s: s.startswith("decay ratio")), expected=2)


def test_criterion_04_whittaker_cross_strategy(run_all, record_criterion):
    reps, _, _ = run_all
    cross = select(reps, lambda s: " ode vs " in s)
    judge(record_criterion, 4, "Whittaker ODE vs Bessel/Laguerre on y in {0.1,1,10,40}, 1e-10", cross,
          TOL_WHITTAKER_CROSS, expected=8)


@pytest.mark.xfail(strict=True, reason="y^-a e^{y/2} W(y) = 1 + O(1/y); at y = 200 the gap is 2.1e-2, not 1e-6")
def test_criterion_04_asymptotic_normalization_limit(run_all, record_criterion):
    reps, _, _ = run_all
    judge(record_criterion, "4b", "asymptotic normalization within 1e-6 of 1 at y = 200 (literal)",
          select(reps, lambda s: s.startswith("asymptotic normalization") and s.endswith("vs 1")),
          TOL_ASYMPTOTIC_NORMALIZATION, expected=1)


def test_criterion_05_local_models(run_all, record_criterion):
    reps, _, _ = run_all
    local = select(reps, lambda s: s.startswith(("local-principal", "local-discrete", "induced-identity")))
    for r in local:
        want = TOL_LOCAL_VANISHING if r.mode == "absolute" else TOL_LOCAL_MODELS
        assert r.tolerance == pytest.approx(want), r.label
    assert any(r.mode == "absolute" for r in local)
    judge(record_criterion, 5, "local Whittaker models and induced identity, 1e-6 (vanishing branch 1e-8 abs)",
          local, expected=11)


def test_criterion_06_unfolding_identity_hol(run_all, record_criterion):
    reps, _, _ = run_all
    judge(record_criterion, 6, "unfolding identity tier for Delta, 1e-6",
          select(reps, lambda s: s.startswith("unfold hol") and "s=(" not in s), TOL_UNFOLD_IDENTITY, expected=3)


def test_criterion_07_unfolding_central_hol(run_all, record_criterion):
    reps, _, _ = run_all
    judge(record_criterion, 7, "unfolding central tier for Delta at s = 1/2 - it, 1e-4",
          select(reps, lambda s: s.startswith("unfold hol") and "s=(0.5" in s), TOL_UNFOLD_CENTRAL, expected=2)


def test_criterion_08_unfolding_identity_maass(run_all, record_criterion, first_maass):
    reps, _, _ = run_all
    tol = max(TOL_UNFOLD_MAASS_FLOOR, 10 * float(first_maass.coeff_precision))
    judge(record_criterion, 8, "unfolding identity tier for the r = 9.534 fixture form",
          select(reps, lambda s: s.startswith("unfold maass r=")), tol, expected=2)


def test_criterion_08_missing_fixture_exit_code(tmp_path):
    res = subprocess.run([sys.executable, "-m", "qeverify.cli", "verify", "unfolding", "--fixtures",
                          str(tmp_path / "absent.txt"), "--out", str(tmp_path)], capture_output=True, text=True)
    assert res.returncode == 3 and "SKIPPED" in res.stderr and "absent.txt" in res.stderr


def test_criterion_09_l_machinery(run_all, record_criterion):
    reps, _, _ = run_all
    sel = {
        "zeta(2)": TOL_ZETA2, "AFE zeta(1/2)": TOL_AFE_ZETA, "Rankin-Selberg": TOL_RANKIN_SELBERG,
        "L(1, ad Delta)": TOL_L1AD,
    }
    chosen = select(reps, lambda s: s.startswith(tuple(sel)))
    for r in chosen:
        tol = next(v for k, v in sel.items() if r.label.startswith(k))
        assert r.tolerance == pytest.approx(tol), r.label
    judge(record_criterion, 9, "zeta(2), AFE zeta(1/2), Rankin-Selberg at s = 2.2, 2.5, L(1, ad Delta)",
          chosen, expected=7)


def test_criterion_10_triple_structure(run_all, record_criterion):
    reps, _, _ = run_all
    ratios = select(reps, lambda s: " ratio k=" in s)
    parity = select(reps, lambda s: s.startswith("triple parity vanishing"))
    assert len(ratios) == 3 and len(parity) == 2
    assert all(r.tolerance == pytest.approx(TOL_TRIPLE_RATIO) for r in ratios)
    judge(record_criterion, 10, "cross-k ratio constancy (k = 0,1,2 and 6,7) and parity vanishing",
          ratios + parity)


def test_criterion_11_weyl_tail(run_all, record_criterion):
    reps, _, _ = run_all
    (rep,) = select(reps, lambda s: s.startswith("weyl tail"))
    assert float(rep.rhs) == WEYL_FACTOR
    judge(record_criterion, 11, "Weyl-law tail sum times r_j within a factor 2 over r_j in {10,50,100,200}",
          [rep])


def _strip_timestamp(path):
    lines = open(path, encoding="utf-8").read().splitlines()
    last = json.loads(lines[-1])
    last.pop("timestamp")
    return lines[:-1] + [json.dumps(last, sort_keys=True)]


def test_criterion_12_determinism(run_all, record_criterion, tmp_path):
    _, jpath, _ = run_all
    res = subprocess.run([sys.executable, "-m", "qeverify.cli", "verify", "all", "--out", str(tmp_path)],
                         capture_output=True, text=True)
    assert res.returncode in (0, 1), res.stderr
    first = _strip_timestamp(jpath)
    second = _strip_timestamp(tmp_path / "reports.jsonl")
    same = first == second
    record_criterion(f"{'PASS' if same else 'FAIL'} criterion 12: verify all twice gives identical JSONL "
                     f"modulo timestamp ({len(first) - 1} reports)")
    assert same
