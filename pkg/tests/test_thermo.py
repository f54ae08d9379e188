import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from condwork.errors import CommutatorViolation, NonPositiveTemperature
from condwork.measurement import Povm, RepeatableSpec, make_ideal_model
from condwork.opcore import DensityState, von_neumann_entropy as S
from condwork.scenarios import random_density, random_hermitian, random_model, random_pvm, rng_for
from condwork.thermo import free_energy, projective_comparison, thermo_report
from condwork.verify import random_repeatable_spec
from condwork.workstats import average_work

LN2 = np.log(2)
SZ = Povm(("g", "e"), [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
PLUS = DensityState.pure([1, 1])
seeds = st.integers(min_value=0, max_value=2**31 - 1)


def test_free_energy_examples():
    H = np.diag([0.0, 2.0])
    assert free_energy(np.diag([0.0, 1.0]), H, 0.7) == pytest.approx(2.0, abs=1e-12)
    assert free_energy(np.eye(2) / 2, np.zeros((2, 2)), 1.0) == pytest.approx(-LN2, abs=1e-12)
    with pytest.raises(NonPositiveTemperature):
        free_energy(np.eye(2) / 2, H, 0.0)


def test_gibbs_state_minimises_free_energy():
    rng = rng_for(42)
    H, kT = random_hermitian(rng, 3), 0.8
    gibbs = expm(-H / kT)
    gibbs /= np.trace(gibbs).real
    f_gibbs = free_energy(gibbs, H, kT)
    assert f_gibbs == pytest.approx(-kT * np.log(np.trace(expm(-H / kT)).real), abs=1e-10)
    assert all(free_energy(random_density(rng, 3), H, kT) >= f_gibbs - 1e-12 for _ in range(500))


def test_ideal_sigma_z_on_plus():
    # closed forms: H = ln 2, S(rho_tau) = ln 2, S(rho) = 0
    t = thermo_report(make_ideal_model(SZ, np.zeros((2, 2)), np.zeros((2, 2))), PLUS, 1.0)
    assert t.shannon_H == pytest.approx(LN2, abs=1e-12)
    assert t.W_irr == pytest.approx(2 * LN2, abs=1e-12)
    assert t.W_inc_irr == pytest.approx(LN2, abs=1e-12)
    assert t.E_cost == pytest.approx(t.W_irr + t.dF_S, abs=1e-15)


def test_deterministic_outcome():
    t = thermo_report(make_ideal_model(SZ, np.zeros((2, 2)), np.zeros((2, 2))), np.diag([0.0, 1.0]), 1.0)
    assert t.shannon_H == pytest.approx(0.0, abs=1e-12)
    assert t.W_irr == pytest.approx(t.I_SA, abs=1e-12)


def test_report_quantities_against_direct_entropies():
    m = random_model(6, 2, 3, 2, commuting_pointer=True)
    rho = random_density(rng_for(6), 2)
    t = thermo_report(m, rho, 1.3)
    X = m.U.data @ np.kron(rho, m.xi.data) @ m.U.data.conj().T
    P = [np.kron(np.eye(2), p.data) for p in m.pointer.projectors]
    gem = sum(p @ X @ p for p in P)
    assert t.W_inc_irr == pytest.approx(1.3 * (S(gem) - S(np.kron(rho, m.xi.data))), abs=1e-9)
    assert t.avg_work == pytest.approx(average_work(m, rho), abs=1e-12)
    assert t.W_irr == pytest.approx(1.3 * (t.I_SA + t.shannon_H - t.holevo_X), abs=1e-9)
    assert t.W_inc_irr == pytest.approx(t.W_irr - 1.3 * t.I_SA_prime, abs=1e-9)


def test_commutator_required():
    with pytest.raises(CommutatorViolation):
        thermo_report(random_model(6, 2, 3, 2), PLUS, 1.0)


@settings(max_examples=40, deadline=None)
@given(seeds, st.floats(0.1, 5.0))
def test_second_law_and_orderings(seed, kT):
    rng = rng_for(seed, 2)
    dS, dA = int(rng.integers(2, 4)), int(rng.integers(2, 5))
    m = random_model(seed, dS, dA, int(rng.integers(1, dA + 1)), commuting_pointer=True)
    t = thermo_report(m, random_density(rng, dS), kT)
    assert t.W_irr >= -1e-9 and t.W_inc_irr >= -1e-9
    assert t.W_irr >= t.W_inc_irr - 1e-9
    assert t.I_SA >= -1e-9 and t.I_SA_prime >= -1e-9
    assert t.shannon_H >= t.holevo_X - 1e-9 and t.holevo_X >= -1e-9
    assert t.decomposition_residual_1 <= 1e-9 and t.decomposition_residual_2 <= 1e-9


def test_projective_sigma_z_on_plus():
    c = projective_comparison(SZ, RepeatableSpec.trivial(SZ), np.diag([0.6, 0.4]), PLUS, 1.0)
    assert (c.W_irr_rep, c.W_inc_rep) == pytest.approx((2 * LN2, LN2), abs=1e-12)
    assert (c.W_irr_ideal, c.W_inc_ideal) == pytest.approx((2 * LN2, LN2), abs=1e-12)
    assert (c.W_irr_noisy, c.W_inc_noisy) == pytest.approx((LN2, LN2), abs=1e-12)


def test_projective_commuting_state_has_no_inclusive_cost():
    rho = np.diag([0.3, 0.7])
    c = projective_comparison(SZ, RepeatableSpec.trivial(SZ), np.diag([0.5, 0.5]), rho, 1.0)
    assert c.shannon_H == pytest.approx(-(0.3 * np.log(0.3) + 0.7 * np.log(0.7)), abs=1e-12)
    for v in (c.W_inc_rep, c.W_inc_ideal, c.W_inc_noisy):
        assert v == pytest.approx(0.0, abs=1e-9)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_projective_orderings(seed):
    rng = rng_for(seed)
    d = int(rng.integers(2, 5))
    pvm = random_pvm(rng, d, int(rng.integers(2, d + 1)))
    spec = random_repeatable_spec(rng, pvm, int(rng.integers(1, 3)))
    c = projective_comparison(pvm, spec, random_density(rng, d), random_density(rng, d), 1.0)
    assert c.W_irr_rep >= c.W_irr_ideal - 1e-9 >= c.W_irr_noisy - 2e-9
    assert c.W_inc_rep == pytest.approx(c.W_inc_ideal, abs=1e-9)
    assert c.W_inc_ideal == pytest.approx(c.W_inc_noisy, abs=1e-9)
    assert c.W_irr_ideal - c.W_irr_noisy == pytest.approx(c.shannon_H, abs=1e-9)
    assert c.closed_form_residual <= 1e-9
    assert c.max_entropy_shift <= 1e-9


def test_uhlmann_gap():
    # degenerate PVM on a qutrit: the two-dimensional block gets a random-unitary mixture
    pvm = Povm(("a", "b"), [np.diag([1.0, 1.0, 0.0]), np.diag([0.0, 0.0, 1.0])])
    rho = DensityState.pure([1.0, 0.0, 1.0])
    X = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]], dtype=float)
    spec = RepeatableSpec((0.5, 0.5), {"a": [np.eye(3), X], "b": [np.eye(3), np.eye(3)]})
    c = projective_comparison(pvm, spec, np.eye(3) / 3, rho, 1.0)
    # conditional state |0><0| is mixed into (|0><0| + |1><1|)/2: gap = p(a) ln 2 = ln2 / 2
    assert c.uhlmann_gap == pytest.approx(LN2 / 2, abs=1e-12)
    assert c.W_irr_rep - c.W_irr_ideal == pytest.approx(LN2 / 2, abs=1e-9)
    same = RepeatableSpec((0.5, 0.5), {"a": [X, X], "b": [np.eye(3), np.eye(3)]})
    c2 = projective_comparison(pvm, same, np.eye(3) / 3, rho, 1.0)
    assert c2.uhlmann_gap == pytest.approx(0.0, abs=1e-12)
    assert c2.W_irr_rep == pytest.approx(c2.W_irr_ideal, abs=1e-9)
