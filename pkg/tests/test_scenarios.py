from math import pi, sqrt

import numpy as np
import pytest

from condwork.energetics import energy_reports, sequential_energy_chain
from condwork.errors import DimensionMismatch
from condwork.opcore import commutator_norm, validate
from condwork.scenarios import (
    OUTCOMES,
    QubitScenarioConfig,
    build_qubit_model,
    build_qubit_stages,
    default_grid,
    figure2_sweep,
    initial_state,
    random_model,
    theta_state,
)
from condwork.workstats import work_reports


def ket(v):
    return np.asarray(v, dtype=complex)


def oracle_unitary(theta2):
    """Basis-by-basis construction of the scenario unitary on S (x) A (x) B."""
    def idx(s, a, b):
        return s * 8 + a * 4 + b

    plus, minus = theta_state(theta2, "+"), theta_state(theta2, "-")
    phi = {"+": ket([1, 1]) / sqrt(2), "-": ket([1, -1]) / sqrt(2)}
    # S+A: |theta2,s>|0> -> |theta2,s>|phi_s>, |theta2,s>|1> -> |theta2,s>|phi_-s>
    U_A = np.zeros((16, 16), dtype=complex)
    for s, vs in (("+", plus), ("-", minus)):
        other = "-" if s == "+" else "+"
        for a_in, target in ((0, phi[s]), (1, phi[other])):
            for b in range(4):
                out = np.zeros(16, dtype=complex)
                inp = np.zeros(16, dtype=complex)
                for i in range(2):
                    for a in range(2):
                        out[idx(i, a, b)] += vs[i] * target[a]
                    inp[idx(i, a_in, b)] += vs[i]
                U_A += np.outer(out, inp.conj())
    # S+B permutation, g = 0, e = 1
    perm = {(0, 1): (1, 0), (1, 1): (1, 1), (0, 2): (0, 2), (1, 2): (0, 3),
            (0, 0): (0, 0), (1, 3): (1, 3), (1, 0): (0, 1), (0, 3): (1, 2)}
    U_B = np.zeros((16, 16))
    for (s, b), (s2, b2) in perm.items():
        for a in range(2):
            U_B[idx(s2, a, b2), idx(s, a, b)] = 1.0
    return U_B @ U_A


@pytest.mark.parametrize("theta2", [0.0, 0.3, pi / 4, pi / 2, 2.0])
def test_model_unitary_matches_oracle(theta2):
    m = build_qubit_model(QubitScenarioConfig(theta2=theta2))
    assert np.allclose(m.U.data, oracle_unitary(theta2), atol=1e-12)
    assert validate(m.U, "unitary").max_violation <= 1e-12


@pytest.mark.parametrize("q", [0.2, 0.5, 0.9])
@pytest.mark.parametrize("theta2", [0.0, 0.7, pi / 2])
def test_induced_povm_and_post_states(q, theta2):
    cfg = QubitScenarioConfig(theta1=1.1, theta2=theta2, q=q)
    m = build_qubit_model(cfg)
    rho = initial_state(cfg)
    psi = theta_state(1.1, "+")
    for s, b in OUTCOMES:
        v = theta_state(theta2, s)
        weight = q if b == "e" else 1 - q
        assert np.allclose(m.effect((s, b)), weight * np.outer(v, v.conj()), atol=1e-12)
        p = np.trace(m.effect((s, b)) @ rho.data).real
        assert p == pytest.approx(weight * abs(v.conj() @ psi) ** 2, abs=1e-10)
        post = m.apply((s, b), rho.data)
        target = np.diag([0.0, 1.0]) if b == "e" else np.diag([1.0, 0.0])
        if p > 1e-12:
            assert np.allclose(post / p, target, atol=1e-10)


def test_instrument_trace_at_equator():
    # p(+,e) = q |<pi/2,+|pi/2,+>|^2 = q
    cfg = QubitScenarioConfig(theta1=pi / 2, theta2=pi / 2, q=0.5)
    m = build_qubit_model(cfg)
    assert np.trace(m.apply(("+", "e"), initial_state(cfg).data)).real == pytest.approx(0.5, abs=1e-12)


def dE_oracle(theta1, theta2):
    """Closed form for outcome (+, e): weak value of H on the pair of pure states."""
    return 0.5 + 0.5 * np.cos((theta1 + theta2) / 2) / np.cos((theta1 - theta2) / 2)


def test_sweep_against_closed_form():
    rows = figure2_sweep(QubitScenarioConfig(q=0.3), default_grid(37))
    for r in rows:
        theta2 = pi / 2 - r.delta_theta
        if r.probs[("+", "e")] > 1e-9:
            assert r.dE_plus_e == pytest.approx(dE_oracle(pi / 2, theta2), abs=1e-9)
        assert r.dE_ref_plus_e == pytest.approx(0.5, abs=1e-12)
        assert sum(r.probs.values()) == pytest.approx(1.0, abs=1e-10)


def test_frozen_sweep_point():
    cfg = QubitScenarioConfig(theta2=pi / 4, q=0.5)
    rho = initial_state(cfg)
    m = build_qubit_model(cfg)
    dE = {r.outcome: r.delta_E for r in energy_reports(m, rho)}
    assert dE[("+", "e")] == pytest.approx(1 / sqrt(2), abs=1e-12)
    W = {r.outcome: r.work for r in work_reports(m, rho)}
    assert W[("+", "e")] == pytest.approx(-(2 - sqrt(2)) / 4, abs=1e-12)
    assert W[("-", "e")] == pytest.approx(-(2 + sqrt(2)) / 4, abs=1e-12)


def test_sweep_anchor_points():
    rows = {round(r.delta_theta, 12): r for r in figure2_sweep(QubitScenarioConfig(), default_grid())}
    assert len(rows) == 181
    r0 = rows[0.0]
    assert r0.dE_plus_e == pytest.approx(r0.dE_ref_plus_e, abs=1e-10)
    r_half = rows[round(pi / 2, 12)]
    assert all(abs(w) <= 1e-10 for w in r_half.work.values())


def test_unitary_commutes_with_energy_at_theta2_zero():
    m = build_qubit_model(QubitScenarioConfig(theta2=0.0))
    assert commutator_norm(m.U, m.H_total("0")) <= 1e-12


def test_stage_chain_matches_combined_model():
    cfg = QubitScenarioConfig(theta1=0.9, theta2=0.4, q=0.35)
    rho = initial_state(cfg)
    first, second = build_qubit_stages(cfg)
    combined = {r.outcome: r for r in energy_reports(build_qubit_model(cfg), rho)}
    for s, b in OUTCOMES:
        H = first.H_S0
        chain = sequential_energy_chain([first, second], rho, [s, b], [H, H, H])
        assert sum(c.delta for c in chain) == pytest.approx(combined[(s, b)].delta_E, abs=1e-10)


def test_config_validation():
    with pytest.raises(ValueError):
        QubitScenarioConfig(q=1.0)
    with pytest.raises(ValueError):
        QubitScenarioConfig(theta1=float("inf"))
    with pytest.raises(ValueError):
        default_grid(1)


def test_random_model_determinism_and_flags():
    a = random_model(99, 3, 4, 3, True, True)
    b = random_model(99, 3, 4, 3, True, True)
    assert np.array_equal(a.U.data, b.U.data) and np.array_equal(a.xi.data, b.xi.data)
    assert commutator_norm(a.U, a.H_total("0")) <= 1e-9
    assert a.pointer_commutator_norm() <= 1e-12
    assert not np.array_equal(random_model(100, 3, 4, 3).U.data, a.U.data)
    with pytest.raises(DimensionMismatch):
        random_model(1, 2, 2, 3)
