"""Two-level sequential-measurement scenario and seeded random generators.

Energies are in units of ``hbar * omega`` with ``hbar = 1``. Qubit basis
ordering is ``|g> = index 0``, ``|e> = index 1``.

The qubit scenario measures first along the ``theta2`` direction with a
two-level pointer A, then measures energy with a four-level register B whose
initial state is a ``q``-weighted mixture; outcomes are ``(s, b)`` with
``s`` in ``{"+", "-"}`` and ``b`` in ``{"e", "g"}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import pi

import numpy as np
from scipy.linalg import expm
from scipy.stats import unitary_group

from .energetics import DEFAULT_CONFIG, energy_reports
from .errors import DimensionMismatch
from .measurement import MeasurementModel, PointerObservable, Povm
from .opcore import DensityState, spectral_decompose
from .workstats import work_reports

OUTCOMES = (("+", "e"), ("+", "g"), ("-", "e"), ("-", "g"))


def rng_for(seed: int, *stream: int) -> np.random.Generator:
    """Counter-based generator; the only source of randomness in the package.

    ``stream`` selects an independent substream of the same seed.
    """
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    key = np.random.SeedSequence([seed, *stream]) if stream else seed
    return np.random.Generator(np.random.Philox(key))


# -- qubit scenario ---------------------------------------------------------


@dataclass(frozen=True)
class QubitScenarioConfig:
    theta1: float = pi / 2
    theta2: float = pi / 2
    q: float = 0.5
    omega: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise ValueError(f"q must lie strictly inside (0, 1), got {self.q}")
        if not (np.isfinite(self.theta1) and np.isfinite(self.theta2) and np.isfinite(self.omega)):
            raise ValueError("angles and omega must be finite")


def theta_state(theta: float, sign: str = "+") -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    if sign == "+":
        return np.array([c, s], dtype=complex)
    if sign == "-":
        return np.array([s, -c], dtype=complex)
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def _system_hamiltonian(omega: float) -> np.ndarray:
    return 0.5 * omega * np.diag([-1.0, 1.0])


def _unitary_SA(theta2: float) -> np.ndarray:
    plus, minus = theta_state(theta2, "+"), theta_state(theta2, "-")
    r = 1 / np.sqrt(2)
    V_plus = np.array([[r, r], [r, -r]])    # |0> -> |phi+>, |1> -> |phi->
    V_minus = np.array([[r, r], [-r, r]])   # |0> -> |phi->, |1> -> |phi+>
    return np.kron(np.outer(plus, plus.conj()), V_plus) + np.kron(np.outer(minus, minus.conj()), V_minus)


def _unitary_SB() -> np.ndarray:
    # energy-conserving permutation of |s>|n>, index s*4 + n, s in {g=0, e=1}
    g, e = 0, 1
    moves = {
        (g, 1): (e, 0), (e, 1): (e, 1), (g, 2): (g, 2), (e, 2): (g, 3),
        (g, 0): (g, 0), (e, 3): (e, 3), (e, 0): (g, 1), (g, 3): (e, 2),
    }
    U = np.zeros((8, 8))
    for (s, n), (s2, n2) in moves.items():
        U[s2 * 4 + n2, s * 4 + n] = 1.0
    return U


def _pointer_A() -> list[np.ndarray]:
    r = 1 / np.sqrt(2)
    return [np.outer(v, v) for v in (np.array([r, r]), np.array([r, -r]))]


def _pointer_B() -> dict[str, np.ndarray]:
    return {"e": np.diag([1.0, 1.0, 0.0, 0.0]), "g": np.diag([0.0, 0.0, 1.0, 1.0])}


def _xi_B(q: float) -> np.ndarray:
    return np.diag([0.0, q, 1.0 - q, 0.0])


def _H_B(omega: float) -> np.ndarray:
    return omega * np.diag([0.0, 1.0, 2.0, 3.0])


def build_qubit_model(cfg: QubitScenarioConfig) -> MeasurementModel:
    """System with composite apparatus ``A (x) B`` of dimensions 2 and 4."""
    u_sa = np.kron(_unitary_SA(cfg.theta2), np.eye(4))
    # U_SB acts on S and B; sandwich the identity on A between them
    u_sb = _unitary_SB().reshape(2, 4, 2, 4)
    u_sb = np.einsum("sbtc,ad->sabtdc", u_sb, np.eye(2)).reshape(16, 16)
    H_S = _system_hamiltonian(cfg.omega)
    H_app = np.kron(cfg.omega * np.eye(2), np.eye(4)) + np.kron(np.eye(2), _H_B(cfg.omega))
    pa, pb = _pointer_A(), _pointer_B()
    projs = [np.kron(pa[0 if s == "+" else 1], pb[b]) for s, b in OUTCOMES]
    xi_A = np.diag([1.0, 0.0])
    return MeasurementModel(
        system_dim=2,
        apparatus_dims=(2, 4),
        xi=np.kron(xi_A, _xi_B(cfg.q)),
        U=u_sb @ u_sa,
        pointer=PointerObservable(OUTCOMES, projs),
        H_S0=H_S,
        H_Stau=H_S,
        H_A0=H_app,
        H_Atau=H_app,
    )


def build_qubit_stages(cfg: QubitScenarioConfig) -> tuple[MeasurementModel, MeasurementModel]:
    """The two measurements of the scenario as separate models (A first, then B)."""
    H_S = _system_hamiltonian(cfg.omega)
    pa, pb = _pointer_A(), _pointer_B()
    first = MeasurementModel(
        system_dim=2,
        apparatus_dims=(2,),
        xi=np.diag([1.0, 0.0]),
        U=_unitary_SA(cfg.theta2),
        pointer=PointerObservable(("+", "-"), pa),
        H_S0=H_S,
        H_Stau=H_S,
        H_A0=cfg.omega * np.eye(2),
        H_Atau=cfg.omega * np.eye(2),
    )
    second = MeasurementModel(
        system_dim=2,
        apparatus_dims=(4,),
        xi=_xi_B(cfg.q),
        U=_unitary_SB(),
        pointer=PointerObservable(("e", "g"), [pb["e"], pb["g"]]),
        H_S0=H_S,
        H_Stau=H_S,
        H_A0=_H_B(cfg.omega),
        H_Atau=_H_B(cfg.omega),
    )
    return first, second


def initial_state(cfg: QubitScenarioConfig) -> DensityState:
    return DensityState.pure(theta_state(cfg.theta1, "+"))


@dataclass(frozen=True)
class SweepRow:
    delta_theta: float
    dE_plus_e: float          # nan where the branch is undefined
    dE_ref_plus_e: float
    work: dict = field(default_factory=dict)
    probs: dict = field(default_factory=dict)


def default_grid(n: int = 181) -> np.ndarray:
    """``theta2`` values giving ``delta_theta = pi/2 - theta2`` evenly in ``[-pi/2, pi/2]``."""
    if n < 2:
        raise ValueError("grid needs at least two points")
    return pi / 2 - np.linspace(-pi / 2, pi / 2, n)


def figure2_sweep(base: QubitScenarioConfig, theta2_grid) -> list[SweepRow]:
    rho = initial_state(base)
    rows = []
    for theta2 in theta2_grid:
        cfg = QubitScenarioConfig(base.theta1, float(theta2), base.q, base.omega)
        model = build_qubit_model(cfg)
        energy = {r.outcome: r for r in energy_reports(model, rho, DEFAULT_CONFIG)}
        work = {r.outcome: r.work for r in work_reports(model, rho)}
        probs = {x: max(float(np.real(np.trace(model.effect(x) @ rho.data))), 0.0) for x in OUTCOMES}
        pe = energy.get(("+", "e"))
        rows.append(
            SweepRow(
                delta_theta=pi / 2 - float(theta2),
                dE_plus_e=pe.delta_E if pe else float("nan"),
                dE_ref_plus_e=pe.delta_E_reference if pe else float("nan"),
                work={x: work.get(x, float("nan")) for x in OUTCOMES},
                probs=probs,
            )
        )
    return rows


# -- random generators --------------------------------------------------------


def haar_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    if d == 1:
        return np.exp(2j * pi * rng.random()) * np.ones((1, 1))
    return unitary_group.rvs(d, random_state=rng)


def random_density(rng: np.random.Generator, d: int, rank: int | None = None) -> np.ndarray:
    """Induced-measure random state; full rank unless ``rank`` is given."""
    k = d if rank is None else rank
    G = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


def random_pure(rng: np.random.Generator, d: int) -> np.ndarray:
    return random_density(rng, d, rank=1)


def random_hermitian(rng: np.random.Generator, d: int, scale: float = 1.0) -> np.ndarray:
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return scale * 0.5 * (G + G.conj().T)


def _partition(rng: np.random.Generator, d: int, n: int) -> list[list[int]]:
    """Split ``range(d)`` into ``n`` nonempty groups."""
    if n > d or n < 1:
        raise DimensionMismatch(f"cannot split {d} levels into {n} outcomes")
    order = rng.permutation(d)
    groups = [[int(order[k])] for k in range(n)]
    for j in order[n:]:
        groups[int(rng.integers(n))].append(int(j))
    return [sorted(g) for g in groups]


def random_pvm(rng: np.random.Generator, d: int, n_outcomes: int | None = None) -> Povm:
    """Random-basis PVM; fewer outcomes than ``d`` gives degenerate projectors."""
    n = d if n_outcomes is None else n_outcomes
    V = haar_unitary(rng, d)
    groups = _partition(rng, d, n)
    return Povm(tuple(str(k) for k in range(n)), [V[:, g] @ V[:, g].conj().T for g in groups])


def _integer_hamiltonian(rng: np.random.Generator, basis: np.ndarray, levels: int = 3) -> np.ndarray:
    w = rng.integers(0, levels, size=basis.shape[0]).astype(float)
    return (basis * w) @ basis.conj().T


def energy_conserving_unitary(rng: np.random.Generator, H: np.ndarray) -> np.ndarray:
    """``exp(-iG)`` with ``G`` block diagonal in the eigenspaces of ``H``."""
    G = random_hermitian(rng, H.shape[0])
    G = sum(P.data @ G @ P.data for P in spectral_decompose(H).projectors)
    return expm(-1j * G)


def random_model(seed: int, dim_S: int, dim_A: int, n_outcomes: int,
                 commuting_pointer: bool = False, energy_conserving: bool = False) -> MeasurementModel:
    """Reproducible random measurement model.

    ``energy_conserving`` gives time-independent Hamiltonians with integer
    spectra, so the total Hamiltonian is degenerate and ``U`` can mix within
    its eigenspaces. ``commuting_pointer`` makes ``H_A(tau)`` diagonal in the
    pointer basis.
    """
    if n_outcomes > dim_A:
        raise DimensionMismatch(f"{n_outcomes} outcomes need dim_A >= {n_outcomes}, got {dim_A}")
    rng = rng_for(seed)
    basis_A = haar_unitary(rng, dim_A)
    groups = _partition(rng, dim_A, n_outcomes)
    projs = [basis_A[:, g] @ basis_A[:, g].conj().T for g in groups]
    xi = random_density(rng, dim_A)
    if energy_conserving:
        H_S0 = H_Stau = _integer_hamiltonian(rng, haar_unitary(rng, dim_S))
        basis_H = basis_A if commuting_pointer else haar_unitary(rng, dim_A)
        H_A0 = H_Atau = _integer_hamiltonian(rng, basis_H)
        H = np.kron(H_S0, np.eye(dim_A)) + np.kron(np.eye(dim_S), H_A0)
        U = energy_conserving_unitary(rng, H)
    else:
        H_S0, H_Stau = random_hermitian(rng, dim_S), random_hermitian(rng, dim_S)
        H_A0 = random_hermitian(rng, dim_A)
        if commuting_pointer:
            H_Atau = (basis_A * rng.standard_normal(dim_A)) @ basis_A.conj().T
        else:
            H_Atau = random_hermitian(rng, dim_A)
        U = haar_unitary(rng, dim_S * dim_A)
    return MeasurementModel(
        system_dim=dim_S,
        apparatus_dims=(dim_A,),
        xi=xi,
        U=U,
        pointer=PointerObservable(tuple(str(k) for k in range(n_outcomes)), projs),
        H_S0=H_S0,
        H_Stau=H_Stau,
        H_A0=H_A0,
        H_Atau=H_Atau,
    )


def random_dims(rng: np.random.Generator, max_dim: int = 4, max_app: int = 4) -> tuple[int, int, int]:
    """``(dim_S, dim_A, n_outcomes)`` with ``2 <= dim <= max`` and ``n <= dim_A``."""
    dS = int(rng.integers(2, max_dim + 1))
    dA = int(rng.integers(2, max_app + 1))
    return dS, dA, int(rng.integers(2, dA + 1))
