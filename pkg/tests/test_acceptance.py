"""Acceptance checks, one test per criterion.

Run with ``pytest tests/test_acceptance.py -s`` to see the PASS/FAIL lines.
"""

import subprocess
import sys
import time
from math import log, pi

import numpy as np
import pytest

from condwork.energetics import energy_reports
from condwork.measurement import Povm, RepeatableSpec, make_ideal_model
from condwork.opcore import DensityState
from condwork.scenarios import QubitScenarioConfig, build_qubit_model, default_grid, figure2_sweep, initial_state
from condwork.thermo import projective_comparison, thermo_report
from condwork.verify import VerifyOptions, run_suite
from condwork.workstats import work_reports

LN2 = log(2)


def verdict(n: int, ok: bool, detail: str) -> None:
    print(f"\ncriterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def suites(names, trials, **kw):
    opts = VerifyOptions(seed=42, trials=trials, **kw)
    return {n: run_suite(n, opts) for n in names}


def describe(results) -> str:
    return ", ".join(f"{n}={r.max_residual:.2e}" for n, r in results.items())


def test_criterion_01_equal_energies_at_zero_offset():
    t0 = time.perf_counter()
    cfg = QubitScenarioConfig(theta1=pi / 2, theta2=pi / 2)
    rep = {r.outcome: r for r in energy_reports(build_qubit_model(cfg), initial_state(cfg))}[("+", "e")]
    dt = time.perf_counter() - t0
    gap = abs(rep.delta_E - rep.delta_E_reference)
    verdict(1, gap <= 1e-10 and dt < 1.0, f"|dE - dE_ref| = {gap:.2e}, {dt:.3f} s")


def test_criterion_02_no_work_when_unitary_commutes():
    t0 = time.perf_counter()
    cfg = QubitScenarioConfig(theta2=0.0)
    works = [r.work for r in work_reports(build_qubit_model(cfg), initial_state(cfg))]
    dt = time.perf_counter() - t0
    worst = max(abs(w) for w in works)
    verdict(2, len(works) == 4 and worst <= 1e-10 and dt < 1.0, f"max |W| = {worst:.2e}, {dt:.3f} s")


def test_criterion_03_reference_change_is_half():
    worst = 0.0
    for q in (0.5, 0.2, 0.85):
        rows = figure2_sweep(QubitScenarioConfig(q=q), default_grid())
        worst = max(worst, max(abs(r.dE_ref_plus_e - 0.5) for r in rows))
    verdict(3, worst <= 1e-12, f"max |dE_ref - 1/2| = {worst:.2e} over 3 x 181 points")


def test_criterion_04_tpm_reduction():
    t0 = time.perf_counter()
    res = suites(["tpm_exactness"], 100)
    dt = time.perf_counter() - t0
    r = res["tpm_exactness"]
    verdict(4, r.passed and r.trials == 100 and dt < 5.0, f"{describe(res)}, {dt:.2f} s")


def test_criterion_05_quasiprobabilities():
    res = suites(["quasiprob_identity", "quasiprob_negativity"], 100)
    ident, neg = res["quasiprob_identity"], res["quasiprob_negativity"]
    ok = ident.passed and ident.trials == 100 and neg.passed and neg.trials == 1000
    verdict(5, ok, f"identity residual {ident.max_residual:.2e}, most negative p~ = {-neg.max_residual:.3f}")


def test_criterion_06_requirements():
    t0 = time.perf_counter()
    names = ["requirement1", "requirement2", "requirement3",
             "naive_violates_requirement1", "reference_violates_requirement2"]
    res = suites(names, 200)
    dt = time.perf_counter() - t0
    ok = all(r.passed for r in res.values()) and res["requirement1"].trials == 200 and dt < 30.0
    verdict(6, ok, f"{describe(res)}, {dt:.2f} s")


def test_criterion_07_sequential_additivity():
    res = suites(["sequential_additivity", "trajectory_start"], 100)
    ok = all(r.passed and r.trials == 100 for r in res.values())
    verdict(7, ok, describe(res))


def test_criterion_08_vanishing_work():
    res = suites(["vanishing_work"], 100)
    r = res["vanishing_work"]
    verdict(8, r.passed and r.trials == 100, describe(res))


def test_criterion_09_second_law():
    names = ["second_law_noninclusive", "second_law_inclusive", "irr_ordering", "free_energy_decomposition"]
    res = suites(names, 200)
    ok = all(r.passed and r.trials == 200 for r in res.values())
    verdict(9, ok, describe(res))


def test_criterion_10_projective_cases():
    sz = Povm(("g", "e"), [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
    plus = DensityState.pure([1, 1])
    zero = np.zeros((2, 2))
    ideal = thermo_report(make_ideal_model(sz, zero, zero), plus, 1.0)
    cmp = projective_comparison(sz, RepeatableSpec.trivial(sz), np.diag([0.7, 0.3]), plus, 1.0)
    closed = max(
        abs(ideal.W_irr - 2 * LN2), abs(ideal.W_inc_irr - LN2),
        abs(cmp.W_irr_ideal - 2 * LN2), abs(cmp.W_inc_ideal - LN2),
        abs(cmp.W_irr_noisy - LN2), abs(cmp.W_inc_noisy - LN2),
    )
    res = suites(["projective_orderings", "repeatable_entropy", "uhlmann_gap", "uhlmann_equality"], 50)
    ok = closed <= 1e-12 and all(r.passed and r.trials == 50 for r in res.values())
    verdict(10, ok, f"closed forms {closed:.2e}, {describe(res)}")


def test_criterion_11_extension_invariance():
    res = suites(["extension_invariance"], 50)
    r = res["extension_invariance"]
    verdict(11, r.passed and r.trials == 50, describe(res))


@pytest.mark.slow
def test_criterion_12_cli_determinism():
    cmd = [sys.executable, "-m", "condwork", "verify", "--seed", "42", "--trials", "200"]
    t0 = time.perf_counter()
    runs = [subprocess.run(cmd, capture_output=True, timeout=300) for _ in range(2)]
    dt = time.perf_counter() - t0
    codes = [r.returncode for r in runs]
    same = runs[0].stdout == runs[1].stdout and len(runs[0].stdout) > 0
    verdict(12, codes == [0, 0] and same, f"exit codes {codes}, identical output {same}, {dt:.1f} s for two runs")
