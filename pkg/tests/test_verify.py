import pytest

from condwork.verify import SUITES, VerifyOptions, run_all, run_suite

SMALL = VerifyOptions(seed=7, trials=12, max_dim_S=3, max_dim_A=3)


@pytest.mark.parametrize("name", sorted(n for n, (_, kind, _) in SUITES.items() if kind == "bound"))
def test_bound_suites_hold_on_small_runs(name):
    r = run_suite(name, SMALL)
    assert r.passed, r
    assert r.trials > 0


def test_search_suites_find_violations():
    opts = VerifyOptions(seed=7, trials=60, max_dim_S=3, max_dim_A=3)
    for name, (_, kind, _) in SUITES.items():
        if kind == "search":
            assert run_suite(name, opts).passed, name


def test_override_forces_failure():
    (r,) = run_all(SMALL, {"requirement1": -1.0}, names=["requirement1"])
    assert not r.passed and r.tolerance == -1.0


def test_unknown_override_rejected():
    with pytest.raises(KeyError):
        run_all(SMALL, {"nope": 1.0})


def test_runs_are_deterministic():
    a = [r.as_dict() for r in run_all(SMALL, names=["tpm_exactness", "uhlmann_gap"])]
    b = [r.as_dict() for r in run_all(SMALL, names=["tpm_exactness", "uhlmann_gap"])]
    assert a == b
