"""Conditional energies of the measured system.

For outcome ``x`` of a measurement with instrument ``I_x`` and effect ``M_x``:

* energy after:  ``E_{x,tau} = tr[H(tau) rho(x)]``
* energy before: ``E_{x,0} = Re(tr[M_x H(0) rho]) / p(x)``, the real part of
  the weak value of ``H(0)`` postselected on ``x``
* change:        ``dE(x) = E_{x,tau} - E_{x,0}``

Any object exposing ``outcomes``, ``system_dim``, ``apply(x, op)``,
``effect(x)`` and ``dual(x, op)`` works as an instrument here, in particular
:class:`~condwork.measurement.MeasurementModel` and
:class:`~condwork.measurement.KrausInstrument`. Hamiltonians default to the
model's own ``H_S0`` / ``H_Stau`` when it has them.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from .errors import BadEnsemble, ZeroProbability
from .measurement import P_FLOOR, KrausInstrument, Label, normalize_label
from .opcore import TOL_HERM, as_array, as_state, hermiticity_violation, spectral_decompose

CLASSICAL_LIMIT_TOL = 1e-9


@dataclass(frozen=True)
class EnergeticsConfig:
    """Parameters of the conditional-energy family.

    ``lam`` mixes the weak value with its conjugate; it only moves the
    imaginary part, so headline results use the real part regardless. The
    ``gamma_*`` weights mix the post-measurement expectation into the energy
    before / after; the admissible choice is 0 before and 1 after.
    """

    lam: float = 0.5
    gamma_before: float = 0.0
    gamma_after: float = 1.0
    p_floor: float = P_FLOOR

    def __post_init__(self):
        for name in ("lam", "gamma_before", "gamma_after"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")


DEFAULT_CONFIG = EnergeticsConfig()


@dataclass(frozen=True)
class EnergyReport:
    outcome: Label
    prob: float
    E_before: float
    E_after: float
    delta_E: float
    delta_E_reference: float
    weak_value: complex


def _hamiltonians(model, H0, Htau):
    H0 = getattr(model, "H_S0", None) if H0 is None else H0
    Htau = getattr(model, "H_Stau", None) if Htau is None else Htau
    if H0 is None or Htau is None:
        raise ValueError("Hamiltonians must be given for instruments that do not carry them")
    return as_array(H0), as_array(Htau)


def _prob(instrument, x, rho) -> float:
    return float(np.real(np.trace(instrument.effect(x) @ as_array(rho))))


def weak_value(rho, effect, H, p_floor: float = P_FLOOR) -> complex:
    """``tr[M_x H rho] / tr[M_x rho]``."""
    r, M, h = as_array(rho), as_array(effect), as_array(H)
    p = float(np.real(np.trace(M @ r)))
    if p < p_floor:
        raise ZeroProbability(f"outcome probability {p:.3g} below floor {p_floor:g}")
    return complex(np.trace(M @ h @ r) / p)


def conditional_energy_before(rho, effect, H0, config: EnergeticsConfig = DEFAULT_CONFIG) -> float:
    w = weak_value(rho, effect, H0, config.p_floor)
    return float((config.lam * w + (1.0 - config.lam) * np.conj(w)).real)


def conditional_energy_after(model, rho, x, Htau=None, p_floor: float = P_FLOOR) -> float:
    if Htau is None:
        Htau = model.H_Stau
    out = model.apply(x, as_state(rho))
    p = float(np.real(np.trace(out)))
    if p < p_floor:
        raise ZeroProbability(f"outcome {x!r} has probability {p:.3g}")
    return float(np.real(np.trace(as_array(Htau) @ out))) / p


def energy_reports(model, rho, config: EnergeticsConfig = DEFAULT_CONFIG, H0=None, Htau=None) -> list[EnergyReport]:
    """One report per outcome whose probability clears ``config.p_floor``."""
    rho = as_state(rho)
    h0, ht = _hamiltonians(model, H0, Htau)
    e_ref0 = float(np.real(np.trace(h0 @ rho.data)))
    reports = []
    for x in model.outcomes:
        M = model.effect(x)
        p = _prob(model, x, rho)
        if p < config.p_floor:
            continue
        wv = weak_value(rho, M, h0, config.p_floor)
        before = conditional_energy_before(rho, M, h0, config)
        post = model.apply(x, rho.data)
        after = float(np.real(np.trace(ht @ post))) / float(np.real(np.trace(post)))
        reports.append(EnergyReport(x, p, before, after, after - before, after - e_ref0, wv))
    return reports


def _family_energy(model, rho, x, H, gamma, lam, p) -> complex:
    # gamma * tr[H I_x(rho)] + (1 - gamma) * (lam * tr[I_x(H rho)] + (1 - lam) * conj)
    r, h = as_array(rho), as_array(H)
    post = complex(np.trace(h @ model.apply(x, r)))
    pre = complex(np.trace(model.apply(x, h @ r)))
    return (gamma * post + (1 - gamma) * (lam * pre + (1 - lam) * np.conj(pre))) / p


def _naive_energy_before(model, rho, x, H0) -> float:
    # ideal energy measurement first, then the instrument
    spec = spectral_decompose(H0)
    r = as_array(rho)
    weights = np.array(
        [float(np.real(np.trace(model.apply(x, P.data @ r @ P.data)))) for P in spec.projectors]
    )
    total = weights.sum()
    if total <= 0:
        raise ZeroProbability(f"outcome {x!r} unreachable after energy measurement")
    return float(np.dot(spec.eigenvalues, weights) / total)


def conditional_energy(model, rho, x, t: str, definition: str = "weak",
                       config: EnergeticsConfig = DEFAULT_CONFIG, H0=None, Htau=None) -> complex:
    """Conditional energy at ``t`` in {"0", "tau"} under a named definition.

    ``definition`` is one of

    * ``"weak"``: the (gamma, lambda) family from ``config``;
    * ``"naive"``: classical conditional expectation (energy measured first
      for ``t = "0"``, last for ``t = "tau"``);
    * ``"reference"``: trajectory convention, unconditional ``tr[H(0) rho]``
      before and ``tr[H(tau) rho(x)]`` after.
    """
    h0, ht = _hamiltonians(model, H0, Htau)
    p = _prob(model, x, rho)
    if p < config.p_floor:
        raise ZeroProbability(f"outcome {x!r} has probability {p:.3g}")
    H = h0 if t == "0" else ht
    if definition == "weak":
        gamma = config.gamma_before if t == "0" else config.gamma_after
        return _family_energy(model, rho, x, H, gamma, config.lam, p)
    if t == "tau":
        return complex(_family_energy(model, rho, x, ht, 1.0, 0.5, p))
    if definition == "naive":
        return complex(_naive_energy_before(model, rho, x, h0))
    if definition == "reference":
        return complex(np.trace(h0 @ as_array(rho)).real)
    raise ValueError(f"unknown definition {definition!r}")


@dataclass(frozen=True)
class RequirementResiduals:
    req1: float
    req2: float
    req3: float | None  # None when the classical-limit condition never holds


def classical_limit_holds(model, H, x, tol: float = CLASSICAL_LIMIT_TOL) -> bool:
    """Whether ``tr[I_x(P_j rho P_j)] = tr[P_j I_x(rho)]`` for all states and all j.

    Equivalent to ``P_j M_x P_j = I_x^*(P_j)`` for every spectral projection.
    """
    M = model.effect(x)
    for P in spectral_decompose(H).projectors:
        p = P.data
        if np.linalg.norm(p @ M @ p - model.dual(x, p)) > tol:
            return False
    return True


def requirement_residuals(model, rho, ensemble: Sequence[tuple[float, object]],
                          config: EnergeticsConfig = DEFAULT_CONFIG, definition: str = "weak",
                          H0=None, Htau=None) -> RequirementResiduals:
    """Residuals of the three physical requirements on conditional energies.

    * req1: ``|sum_x p(x) E_{x,t} - tr[H(t) rho_t]|``, max over both times;
    * req2: mixing invariance against ``ensemble`` (pairs ``(p_k, rho_k)``
      averaging to ``rho``), max over outcomes and times;
    * req3: deviation from ``tr[H(t) rho(x)]`` over the outcomes and times for
      which the classical-limit condition holds.
    """
    rho = as_state(rho)
    h0, ht = _hamiltonians(model, H0, Htau)
    weights = np.array([float(pk) for pk, _ in ensemble])
    states = [as_state(rk).data for _, rk in ensemble]
    if abs(weights.sum() - 1.0) > 1e-10 or np.any(weights < 0):
        raise BadEnsemble("ensemble weights must be a probability distribution")
    mix = sum(pk * rk for pk, rk in zip(weights, states))
    if np.linalg.norm(mix - rho.data) > 1e-10:
        raise BadEnsemble("ensemble does not average to rho")

    kw = dict(definition=definition, config=config, H0=h0, Htau=ht)
    rho_tau = sum(model.apply(x, rho.data) for x in model.outcomes)
    targets = {"0": float(np.real(np.trace(h0 @ rho.data))), "tau": float(np.real(np.trace(ht @ rho_tau)))}
    req1 = req2 = 0.0
    req3 = None
    for t, H in (("0", h0), ("tau", ht)):
        avg = 0.0
        for x in model.outcomes:
            p = _prob(model, x, rho)
            if p < config.p_floor:
                continue
            E = conditional_energy(model, rho, x, t, **kw)
            avg += p * E
            mixed = 0.0
            for pk, rk in zip(weights, states):
                pkx = _prob(model, x, rk)
                if pkx >= config.p_floor:
                    mixed += pk * pkx * conditional_energy(model, rk, x, t, **kw)
            req2 = max(req2, abs(mixed / p - E))
            if classical_limit_holds(model, H, x):
                post = model.apply(x, rho.data)
                dev = abs(E - np.trace(H @ post).real / p)
                req3 = dev if req3 is None else max(req3, dev)
        req1 = max(req1, abs(avg - targets[t]))
    return RequirementResiduals(float(req1), float(req2), None if req3 is None else float(req3))


@dataclass(frozen=True)
class ChainStep:
    index: int
    outcome: Label
    energy: float
    delta: float


def _chain_operator(models, outcomes, start: int, op) -> np.ndarray:
    a = as_array(op)
    for m, x in zip(models[start:], outcomes[start:]):
        a = m.apply(x, a)
    return a


def sequential_energy_chain(models: Sequence, rho, outcomes: Sequence, hamiltonians: Sequence,
                            config: EnergeticsConfig = DEFAULT_CONFIG) -> list[ChainStep]:
    """Additive per-step conditional energies for a sequence of measurements.

    ``hamiltonians`` holds ``H(t_1), ..., H(t_{I+1})``: the system Hamiltonian
    before each measurement and after the last. The energy before step ``i``
    is the real weak value of ``H(t_i)`` evaluated on ``rho(x_{i-1})`` and
    postselected on all remaining outcomes; a trailing trivial measurement
    closes the sequence, so the final energy is ``tr[H(t_{I+1}) rho(x_I)]``.
    """
    models = list(models)
    outcomes = [normalize_label(x) for x in outcomes]
    if len(models) != len(outcomes) or len(hamiltonians) != len(models) + 1:
        raise ValueError("need one outcome per model and len(models) + 1 Hamiltonians")
    state = as_state(rho).data
    energies = []
    for i, H in enumerate(hamiltonians[:-1]):
        norm = float(np.real(np.trace(_chain_operator(models, outcomes, i, state))))
        if norm < config.p_floor:
            raise ZeroProbability(f"outcome sequence {outcomes[i:]} has probability {norm:.3g}")
        num = np.trace(_chain_operator(models, outcomes, i, as_array(H) @ state))
        energies.append(float(np.real(num)) / norm)
        state = models[i].apply(outcomes[i], state)
        state = state / np.trace(state).real
    energies.append(float(np.real(np.trace(as_array(hamiltonians[-1]) @ state))))
    return [
        ChainStep(i + 1, outcomes[i], energies[i], energies[i + 1] - energies[i])
        for i in range(len(models))
    ]


class SequenceInstrument:
    """Instruments applied one after another, viewed as a single instrument.

    Outcomes are tuples with one label per stage. Effects are assembled in the
    Heisenberg picture, independently of the forward ``apply`` route.
    """

    def __init__(self, stages: Sequence):
        if not stages:
            raise ValueError("need at least one stage")
        self.stages = tuple(stages)
        self.outcomes = tuple(product(*(st.outcomes for st in self.stages)))
        self.system_dim = self.stages[0].system_dim

    def apply(self, x, op) -> np.ndarray:
        a = as_array(op)
        for st, y in zip(self.stages, x):
            a = st.apply(y, a)
        return a

    def dual(self, x, op) -> np.ndarray:
        a = as_array(op)
        for st, y in reversed(list(zip(self.stages, x))):
            a = st.dual(y, a)
        return a

    def effect(self, x) -> np.ndarray:
        return self.dual(x, np.eye(self.system_dim))


def sequence_energy_change(models: Sequence, rho, outcomes: Sequence, H_first, H_last,
                           config: EnergeticsConfig = DEFAULT_CONFIG) -> float:
    """Conditional energy change of a whole outcome sequence, treated as one measurement."""
    seq = SequenceInstrument(models)
    x = tuple(normalize_label(y) for y in outcomes)
    rho = as_state(rho)
    before = conditional_energy_before(rho, seq.effect(x), H_first, config)
    return conditional_energy_after(seq, rho, x, H_last, config.p_floor) - before


def tpm_instrument(U, H0, Htau) -> tuple[KrausInstrument, np.ndarray, np.ndarray]:
    """Two-point-measurement instrument ``P^n(tau) U P^m(0) . P^m(0) U^+ P^n(tau)``.

    Returns the instrument (labels ``(str(m), str(n))``) together with the two
    sets of energy eigenvalues.
    """
    u = as_array(U)
    s0, st = spectral_decompose(H0), spectral_decompose(Htau)
    labels, kraus = [], []
    for m, Pm in enumerate(s0.projectors):
        for n, Pn in enumerate(st.projectors):
            labels.append((str(m), str(n)))
            kraus.append([Pn.data @ u @ Pm.data])
    return KrausInstrument(tuple(labels), tuple(kraus)), s0.eigenvalues, st.eigenvalues


@dataclass(frozen=True)
class TpmBranch:
    m: int
    n: int
    prob: float
    delta_E: float
    defined: bool


def tpm_distribution(U, H0, Htau, rho, config: EnergeticsConfig = DEFAULT_CONFIG) -> list[TpmBranch]:
    inst, _, _ = tpm_instrument(U, H0, Htau)
    rho = as_state(rho)
    reports = {r.outcome: r for r in energy_reports(inst, rho, config, H0=H0, Htau=Htau)}
    out = []
    for label in inst.outcomes:
        m, n = int(label[0]), int(label[1])
        if label in reports:
            r = reports[label]
            out.append(TpmBranch(m, n, r.prob, r.delta_E, True))
        else:
            out.append(TpmBranch(m, n, max(_prob(inst, label, rho), 0.0), float("nan"), False))
    return out


@dataclass(frozen=True)
class QuasiProbResult:
    eps0: np.ndarray
    eps_tau: np.ndarray
    p_n: np.ndarray          # probabilities of the Heisenberg-picture energy measurement
    delta_E_n: np.ndarray    # conditional energy change per n (nan when undefined)
    quasi: np.ndarray        # quasi[m, n] = Re tr[U^+ P^n U P^m rho]

    @property
    def min_quasi(self) -> float:
        return float(self.quasi.min())


def quasiprob_distribution(U, H0, Htau, rho, config: EnergeticsConfig = DEFAULT_CONFIG) -> QuasiProbResult:
    """Ideal measurement of ``U^+ H(tau) U`` next to the quasi-probabilities it reproduces."""
    u = as_array(U)
    r = as_state(rho).data
    s0, st = spectral_decompose(H0), spectral_decompose(Htau)
    inst = KrausInstrument(
        tuple(str(n) for n in range(len(st))),
        tuple([P.data @ u] for P in st.projectors),
    )
    reports = {rep.outcome: rep for rep in energy_reports(inst, r, config, H0=H0, Htau=Htau)}
    p_n = np.array([_prob(inst, str(n), r) for n in range(len(st))])
    dE = np.array([reports[str(n)].delta_E if str(n) in reports else np.nan for n in range(len(st))])
    quasi = np.empty((len(s0), len(st)))
    for m, Pm in enumerate(s0.projectors):
        for n, Pn in enumerate(st.projectors):
            heis = u.conj().T @ Pn.data @ u
            quasi[m, n] = float(np.real(np.trace(heis @ Pm.data @ r)))
    return QuasiProbResult(s0.eigenvalues, st.eigenvalues, p_n, dE, quasi)


def is_hermitian_product(effect, H, rho, tol: float = TOL_HERM) -> bool:
    """Whether ``M_x H rho`` is Hermitian, in which case the weak value is real."""
    return hermiticity_violation(as_array(effect) @ as_array(H) @ as_array(rho)) <= tol
