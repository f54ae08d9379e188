"""Free energies, correlation measures and the non-recoverable work of measurement."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveTemperature
from .measurement import (
    COMMUTATOR_TOL,
    P_FLOOR,
    MeasurementModel,
    Povm,
    RepeatableSpec,
    make_ideal_model,
    make_noisy_model,
    make_repeatable_model,
)
from .opcore import as_array, as_state, shannon_entropy, von_neumann_entropy as S
from .workstats import average_work

CLAMP = 1e-12


def free_energy(rho, H, kT: float) -> float:
    """``tr[H rho] - kT S(rho)``."""
    if not kT > 0:
        raise NonPositiveTemperature(f"kT must be positive, got {kT}")
    r = as_array(rho)
    return float(np.real(np.trace(as_array(H) @ r))) - kT * S(r)


def _clamp(v: float) -> float:
    return 0.0 if -CLAMP < v < 0.0 else v


@dataclass(frozen=True)
class ThermoReport:
    kT: float
    avg_work: float
    dF_S: float
    dF_A: float
    dF_SA: float
    I_SA: float
    I_SA_prime: float
    shannon_H: float
    holevo_X: float
    W_irr: float
    W_inc_irr: float
    E_cost: float
    # residuals of the two free-energy decompositions against avg_work
    decomposition_residual_1: float
    decomposition_residual_2: float


def thermo_report(model: MeasurementModel, rho, kT: float, p_floor: float = P_FLOOR,
                  tol: float = COMMUTATOR_TOL) -> ThermoReport:
    if not kT > 0:
        raise NonPositiveTemperature(f"kT must be positive, got {kT}")
    model.require_commuting_pointer(tol)
    rho = as_state(rho).data
    xi = model.xi.data
    X = model.premeasured(rho)
    rho_tau = model._trace_apparatus(X)
    xi_prime = model._trace_system(X)

    probs, gemenge, xi_tau, cond_entropy = [], np.zeros_like(X), np.zeros_like(xi), 0.0
    for x in model.outcomes:
        P = model.full_pointer(x)
        jx = P @ X @ P
        p = float(np.real(np.trace(jx)))
        gemenge += jx
        xi_tau += model._trace_system(jx)
        probs.append(max(p, 0.0))
        if p >= p_floor:
            cond_entropy += p * S(model._trace_system(jx) / p)

    joint0 = np.kron(rho, xi)
    s_joint0 = S(joint0)
    I = _clamp(S(rho_tau) + S(xi_prime) - s_joint0)  # S(U X U^+) = S(rho (x) xi)
    I_prime = _clamp(S(rho_tau) + S(xi_tau) - S(gemenge))
    H = shannon_entropy(probs)
    chi = _clamp(S(xi_prime) - cond_entropy)

    dF_S = free_energy(rho_tau, model.H_Stau, kT) - free_energy(rho, model.H_S0, kT)
    dF_A = free_energy(xi_tau, model.H_Atau, kT) - free_energy(xi, model.H_A0, kT)
    dF_SA = free_energy(gemenge, model.H_total("tau"), kT) - free_energy(joint0, model.H_total("0"), kT)

    avg = average_work(model, rho)
    W_irr = avg - dF_S - dF_A
    W_inc = avg - dF_SA
    line1 = dF_S + dF_A + kT * (I + H - chi)
    line2 = dF_SA + kT * (I - I_prime + H - chi)
    return ThermoReport(
        kT=kT,
        avg_work=avg,
        dF_S=dF_S,
        dF_A=dF_A,
        dF_SA=dF_SA,
        I_SA=I,
        I_SA_prime=I_prime,
        shannon_H=H,
        holevo_X=chi,
        W_irr=W_irr,
        W_inc_irr=W_inc,
        E_cost=W_irr + dF_S,
        decomposition_residual_1=abs(line1 - avg),
        decomposition_residual_2=abs(line2 - avg),
    )


@dataclass(frozen=True)
class ProjectiveComparison:
    W_irr_rep: float
    W_irr_ideal: float
    W_irr_noisy: float
    W_inc_rep: float
    W_inc_ideal: float
    W_inc_noisy: float
    shannon_H: float
    uhlmann_gap: float          # closed-form W_irr_rep - W_irr_ideal
    closed_form_residual: float  # max deviation of the general formulas from the closed forms
    max_entropy_shift: float     # max_x |S(xi(x)) - S(xi)| on the repeatable model


def projective_comparison(pvm: Povm, spec: RepeatableSpec, xi_noisy, rho, kT: float,
                          H_S0=None, H_Stau=None, p_floor: float = P_FLOOR) -> ProjectiveComparison:
    """Non-recoverable work of repeatable, ideal and noisy realisations of one PVM.

    Hamiltonians default to zero; the projective results do not depend on them.
    """
    rho = as_state(rho).data
    d = pvm.dim
    H_S0 = np.zeros((d, d)) if H_S0 is None else as_array(H_S0)
    H_Stau = H_S0 if H_Stau is None else as_array(H_Stau)

    rep_model = make_repeatable_model(pvm, spec, H_S0, H_Stau)
    ideal_model = make_ideal_model(pvm, H_S0, H_Stau)
    noisy_model = make_noisy_model(pvm, xi_noisy, H_S0, H_Stau)
    rep, ideal, noisy = (thermo_report(m, rho, kT, p_floor) for m in (rep_model, ideal_model, noisy_model))

    # closed forms from system-only quantities
    probs = np.array([max(float(np.real(np.trace(e.data @ rho))), 0.0) for e in pvm.effects])
    H = shannon_entropy(probs)
    s0 = S(rho)
    rho_ideal = sum(e.data @ rho @ e.data for e in pvm.effects)
    rho_rep = sum(rep_model.apply(x, rho) for x in rep_model.outcomes)
    irr_rep = kT * (H + S(rho_rep) - s0)
    inc_all = kT * (S(rho_ideal) - s0)
    irr_ideal = kT * (H + S(rho_ideal) - s0)

    gap = 0.0
    for x, e, p in zip(pvm.outcomes, pvm.effects, probs):
        if p < p_floor:
            continue
        cond_ideal = e.data @ rho @ e.data / p
        cond_rep = rep_model.apply(x, rho) / p
        gap += p * (S(cond_rep) - S(cond_ideal))
    gap = float(gap * kT)

    residual = max(
        abs(rep.W_irr - irr_rep),
        abs(rep.W_inc_irr - inc_all),
        abs(ideal.W_irr - irr_ideal),
        abs(ideal.W_inc_irr - inc_all),
        abs(noisy.W_irr - inc_all),
        abs(noisy.W_inc_irr - inc_all),
    )

    X = rep_model.premeasured(rho)
    s_xi = S(rep_model.xi.data)
    shift = 0.0
    for x in rep_model.outcomes:
        P = rep_model.full_pointer(x)
        jx = P @ X @ P
        p = float(np.real(np.trace(jx)))
        if p >= p_floor:
            shift = max(shift, abs(S(rep_model._trace_system(jx) / p) - s_xi))

    return ProjectiveComparison(
        W_irr_rep=rep.W_irr,
        W_irr_ideal=ideal.W_irr,
        W_irr_noisy=noisy.W_irr,
        W_inc_rep=rep.W_inc_irr,
        W_inc_ideal=ideal.W_inc_irr,
        W_inc_noisy=noisy.W_inc_irr,
        shannon_H=H,
        uhlmann_gap=gap,
        closed_form_residual=residual,
        max_entropy_shift=shift,
    )
