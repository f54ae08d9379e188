"""Conditional work done on system plus apparatus.

Work for outcome ``x`` is the conditional energy change of the compound, using
the apparatus pointer as postselection. It is only interpretable as work when
the pointer commutes with the final apparatus Hamiltonian; otherwise
:func:`total_energy_change` still reports the raw compound energy change.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ZeroProbability
from .measurement import COMMUTATOR_TOL, P_FLOOR, Label, MeasurementModel
from .opcore import as_state


@dataclass(frozen=True)
class WorkReport:
    outcome: Label
    prob: float
    work: float | None  # None when the pointer does not commute with H_A(tau)
    total_delta: float
    commutator_norm: float


def _branch_terms(model: MeasurementModel, rho, x, p_floor: float):
    """Probability, ``tr[P H(tau) X]`` and ``Re tr[P U H(0)(rho (x) xi) U^+]``."""
    r = as_state(rho).data
    u = model.U.data
    X = model.premeasured(r)
    P = model.full_pointer(x)
    p = float(np.real(np.trace(P @ X)))
    if p < p_floor:
        raise ZeroProbability(f"outcome {x!r} has probability {p:.3g}")
    h0, ht = model.H_total("0"), model.H_total("tau")
    joint0 = np.kron(r, model.xi.data)
    before = float(np.real(np.trace(P @ u @ h0 @ joint0 @ u.conj().T)))
    return p, X, P, ht, before


def total_energy_change(model: MeasurementModel, rho, x, p_floor: float = P_FLOOR) -> float:
    """Conditional energy change of S+A with the pointer projection applied after ``U``."""
    p, X, P, ht, before = _branch_terms(model, rho, x, p_floor)
    after = float(np.real(np.trace(ht @ P @ X @ P)))
    return (after - before) / p


def conditional_work(model: MeasurementModel, rho, x, p_floor: float = P_FLOOR,
                     tol: float = COMMUTATOR_TOL) -> WorkReport:
    """Work for outcome ``x``; raises :class:`CommutatorViolation` for a non-commuting pointer."""
    model.require_commuting_pointer(tol)
    p, X, P, ht, before = _branch_terms(model, rho, x, p_floor)
    work = (float(np.real(np.trace(P @ ht @ X))) - before) / p
    total = (float(np.real(np.trace(ht @ P @ X @ P))) - before) / p
    return WorkReport(x, p, work, total, model.pointer_commutator_norm())


def work_reports(model: MeasurementModel, rho, p_floor: float = P_FLOOR,
                 tol: float = COMMUTATOR_TOL) -> list[WorkReport]:
    """Reports for every defined branch.

    Never raises on a non-commuting pointer: ``work`` is then ``None`` and only
    ``total_delta`` is filled in.
    """
    rho = as_state(rho)
    comm = model.pointer_commutator_norm()
    out = []
    for x in model.outcomes:
        try:
            if comm <= tol:
                out.append(conditional_work(model, rho, x, p_floor, tol))
            else:
                p = float(np.real(np.trace(model.effect(x) @ rho.data)))
                out.append(WorkReport(x, p, None, total_energy_change(model, rho, x, p_floor), comm))
        except ZeroProbability:
            continue
    return out


def average_work(model: MeasurementModel, rho) -> float:
    """``tr[(U^+ H(tau) U - H(0)) (rho (x) xi)]``."""
    u = model.U.data
    joint = np.kron(as_state(rho).data, model.xi.data)
    gen = u.conj().T @ model.H_total("tau") @ u - model.H_total("0")
    return float(np.real(np.trace(gen @ joint)))


def apparatus_energy_change(model: MeasurementModel, rho, x, p_floor: float = P_FLOOR) -> float:
    """Conditional energy change of the apparatus alone.

    Uses ``tr[H_A(tau) xi(x)]`` after and the real weak value of
    ``1 (x) H_A(0)`` before, so that it adds to the system's conditional
    energy change to give the compound's.
    """
    r = as_state(rho).data
    u = model.U.data
    X = model.premeasured(r)
    P = model.full_pointer(x)
    p = float(np.real(np.trace(P @ X)))
    if p < p_floor:
        raise ZeroProbability(f"outcome {x!r} has probability {p:.3g}")
    ha0 = np.kron(np.eye(model.dim_S), model.H_A0.data)
    hat = np.kron(np.eye(model.dim_S), model.H_Atau.data)
    after = float(np.real(np.trace(hat @ P @ X @ P)))
    before = float(np.real(np.trace(P @ u @ ha0 @ np.kron(r, model.xi.data) @ u.conj().T)))
    return (after - before) / p
