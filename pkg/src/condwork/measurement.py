"""Measurement models ``(H_A, xi, U, Z_A)``, the instruments they induce, and constructors.

A model couples the system to an apparatus with a premeasurement unitary and
then reads the apparatus with a sharp pointer observable. Outcome labels are
opaque strings, or tuples of strings for sequences such as ``("+", "e")``.

Two instrument flavours share one duck-typed interface (``outcomes``,
``system_dim``, ``apply``, ``effect``, ``dual``):

* :class:`MeasurementModel`, evaluated through the dilation, and
* :class:`KrausInstrument`, for instruments given directly by Kraus operators
  (two-point measurements, Lüders instruments, composed sequences).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Mapping, Sequence, Union

import numpy as np

from .errors import (
    CommutatorViolation,
    DimensionMismatch,
    InvalidModel,
    NotFullRank,
    NotProjective,
    RankBoundViolation,
    SpecMismatch,
    UnknownOutcome,
)
from .opcore import (
    TOL_HERM,
    TOL_PSD,
    DensityState,
    Operator,
    as_array,
    as_state,
    commutator_norm,
    hermiticity_violation,
    kron,
    psd_sqrt,
    validate,
)

Label = Union[str, tuple]

P_FLOOR = 1e-12
POVM_TOL = 1e-9
COMMUTATOR_TOL = 1e-9


def normalize_label(x) -> Label:
    if isinstance(x, str):
        return x
    if isinstance(x, (tuple, list)):
        return tuple(normalize_label(v) for v in x)
    return str(x)


def _index_of(outcomes: tuple, x) -> int:
    try:
        return outcomes.index(normalize_label(x))
    except ValueError:
        raise UnknownOutcome(f"unknown outcome {x!r}; known outcomes: {list(outcomes)}") from None


@dataclass(frozen=True)
class PointerObservable:
    """Sharp apparatus observable given by orthogonal projectors, one per outcome."""

    outcomes: tuple
    projectors: tuple

    def __post_init__(self):
        outcomes = tuple(normalize_label(x) for x in self.outcomes)
        projs = tuple(p if isinstance(p, Operator) else Operator(p) for p in self.projectors)
        if len(outcomes) != len(projs) or not projs:
            raise InvalidModel("pointer needs exactly one projector per outcome")
        if len(set(outcomes)) != len(outcomes):
            raise InvalidModel(f"duplicate pointer outcomes in {outcomes}")
        d = projs[0].dim
        total = np.zeros((d, d), dtype=complex)
        for x, p in zip(outcomes, projs):
            if p.dim != d:
                raise InvalidModel("pointer projectors have inconsistent dimensions")
            rep = validate(p, "projector")
            if not rep.passed:
                raise InvalidModel(f"pointer projector for outcome {x!r} is not a projector ({rep.max_violation:.3g})")
            total += p.data
        err = float(np.linalg.norm(total - np.eye(d)))
        if err > TOL_HERM * len(projs):
            raise InvalidModel(f"pointer projectors do not sum to identity (error {err:.3g})")
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "projectors", projs)

    @property
    def dim(self) -> int:
        return self.projectors[0].dim

    def projector(self, x) -> Operator:
        return self.projectors[_index_of(self.outcomes, x)]

    def observable(self) -> np.ndarray:
        """``Z_A = sum_k k P_k`` with outcomes enumerated in order."""
        return sum(k * p.data for k, p in enumerate(self.projectors))


@dataclass(frozen=True)
class Povm:
    outcomes: tuple
    effects: tuple

    def __post_init__(self):
        outcomes = tuple(normalize_label(x) for x in self.outcomes)
        effects = tuple(e if isinstance(e, Operator) else Operator(e) for e in self.effects)
        if len(outcomes) != len(effects) or not effects:
            raise InvalidModel("POVM needs exactly one effect per outcome")
        d = effects[0].dim
        for x, e in zip(outcomes, effects):
            rep = validate(e, "povm_element")
            if not rep.passed:
                raise InvalidModel(f"effect {x!r} is not a POVM element: {rep.detail}")
        err = float(np.linalg.norm(sum(e.data for e in effects) - np.eye(d)))
        if err > POVM_TOL:
            raise InvalidModel(f"effects do not sum to identity (error {err:.3g})")
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "effects", effects)

    @property
    def dim(self) -> int:
        return self.effects[0].dim

    def effect(self, x) -> Operator:
        return self.effects[_index_of(self.outcomes, x)]

    def is_projective(self, tol: float = TOL_HERM) -> bool:
        return all(validate(e, "projector").max_violation <= tol for e in self.effects)

    def probabilities(self, rho) -> np.ndarray:
        r = as_array(rho)
        return np.array([float(np.real(np.trace(e.data @ r))) for e in self.effects])


@dataclass(frozen=True)
class KrausInstrument:
    """Instrument ``I_x(A) = sum_k K_{x,k} A K_{x,k}^dagger``."""

    outcomes: tuple
    kraus: tuple

    def __post_init__(self):
        outcomes = tuple(normalize_label(x) for x in self.outcomes)
        kraus = tuple(tuple(np.array(as_array(k)) for k in ks) for ks in self.kraus)
        if len(outcomes) != len(kraus):
            raise InvalidModel("one Kraus list per outcome required")
        d = kraus[0][0].shape[1]
        total = sum(k.conj().T @ k for ks in kraus for k in ks)
        err = float(np.linalg.norm(total - np.eye(d)))
        if err > POVM_TOL:
            raise InvalidModel(f"Kraus operators are not trace preserving (error {err:.3g})")
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "kraus", kraus)

    @classmethod
    def lueders(cls, povm: Povm) -> "KrausInstrument":
        return cls(povm.outcomes, [[psd_sqrt(e)] for e in povm.effects])

    @property
    def system_dim(self) -> int:
        return self.kraus[0][0].shape[1]

    def apply(self, x, op) -> np.ndarray:
        a = as_array(op)
        return sum(k @ a @ k.conj().T for k in self.kraus[_index_of(self.outcomes, x)])

    def effect(self, x) -> np.ndarray:
        return sum(k.conj().T @ k for k in self.kraus[_index_of(self.outcomes, x)])

    def dual(self, x, op) -> np.ndarray:
        a = as_array(op)
        return sum(k.conj().T @ a @ k for k in self.kraus[_index_of(self.outcomes, x)])

    def povm(self) -> Povm:
        return Povm(self.outcomes, [self.effect(x) for x in self.outcomes])

    def then(self, later: "KrausInstrument") -> "KrausInstrument":
        """Sequential composition: ``self`` first, ``later`` second; labels become tuples."""
        outcomes, kraus = [], []
        for x, ks in zip(self.outcomes, self.kraus):
            xt = x if isinstance(x, tuple) else (x,)
            for y, ls in zip(later.outcomes, later.kraus):
                yt = y if isinstance(y, tuple) else (y,)
                outcomes.append(xt + yt)
                kraus.append([l @ k for k in ks for l in ls])
        return KrausInstrument(tuple(outcomes), tuple(kraus))


def _hermitian_operator(h, dim: int, name: str) -> Operator:
    op = h if isinstance(h, Operator) else Operator(h)
    if op.dim != dim:
        raise InvalidModel(f"{name} has dimension {op.dim}, expected {dim}")
    if hermiticity_violation(op) > TOL_HERM:
        raise InvalidModel(f"{name} is not Hermitian")
    return op


@dataclass(frozen=True, eq=False)
class MeasurementModel:
    """Physical realisation of a POVM.

    ``U`` acts on ``S (x) A`` where the apparatus may itself be composite
    (``apparatus_dims``). Hamiltonians are given before (``*0``) and after
    (``*tau``) the premeasurement interaction.
    """

    system_dim: int
    apparatus_dims: tuple
    xi: DensityState
    U: Operator
    pointer: PointerObservable
    H_S0: Operator
    H_Stau: Operator
    H_A0: Operator
    H_Atau: Operator
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        dS = int(self.system_dim)
        adims = (int(self.apparatus_dims),) if np.isscalar(self.apparatus_dims) else tuple(int(d) for d in self.apparatus_dims)
        dA = prod(adims)
        try:
            xi = DensityState(as_array(self.xi), adims)
        except Exception as exc:
            raise InvalidModel(f"apparatus state xi invalid: {exc}") from exc
        U = Operator(as_array(self.U), (dS,) + adims)
        rep = validate(U, "unitary")
        if not rep.passed:
            raise InvalidModel(f"premeasurement U is not unitary (violation {rep.max_violation:.3g})")
        pointer = self.pointer
        if not isinstance(pointer, PointerObservable):
            raise InvalidModel("pointer must be a PointerObservable")
        if pointer.dim != dA:
            raise InvalidModel(f"pointer acts on dimension {pointer.dim}, apparatus has {dA}")
        set_ = lambda k, v: object.__setattr__(self, k, v)  # noqa: E731
        set_("system_dim", dS)
        set_("apparatus_dims", adims)
        set_("xi", xi)
        set_("U", U)
        set_("H_S0", Operator(_hermitian_operator(self.H_S0, dS, "H_S0").data))
        set_("H_Stau", Operator(_hermitian_operator(self.H_Stau, dS, "H_Stau").data))
        set_("H_A0", Operator(_hermitian_operator(self.H_A0, dA, "H_A0").data, adims))
        set_("H_Atau", Operator(_hermitian_operator(self.H_Atau, dA, "H_Atau").data, adims))
        total = sum(self.effect(x) for x in self.outcomes)
        err = float(np.linalg.norm(total - np.eye(dS)))
        if err > POVM_TOL:
            raise InvalidModel(f"induced effects do not sum to identity (error {err:.3g})")

    @property
    def dim_S(self) -> int:
        return self.system_dim

    @property
    def dim_A(self) -> int:
        return prod(self.apparatus_dims)

    @property
    def dims(self) -> tuple:
        return (self.system_dim,) + self.apparatus_dims

    @property
    def outcomes(self) -> tuple:
        return self.pointer.outcomes

    def _memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def full_pointer(self, x) -> np.ndarray:
        """``1_S (x) P_A^x``."""
        k = _index_of(self.outcomes, x)
        return self._memo(("P", k), lambda: kron(np.eye(self.dim_S), self.pointer.projectors[k].data))

    @property
    def _sqrt_xi(self) -> np.ndarray:
        return self._memo("sqrt_xi", lambda: kron(np.eye(self.dim_S), psd_sqrt(self.xi)))

    def H_total(self, t: str) -> np.ndarray:
        """Total Hamiltonian of S+A at ``t`` in {"0", "tau"}."""
        hs, ha = (self.H_S0, self.H_A0) if t == "0" else (self.H_Stau, self.H_Atau)
        return self._memo(("H", t), lambda: kron(hs, np.eye(self.dim_A)) + kron(np.eye(self.dim_S), ha))

    def premeasured(self, op) -> np.ndarray:
        """``U (op (x) xi) U^dagger``, linear in ``op``."""
        u = self.U.data
        return u @ kron(op, self.xi.data) @ u.conj().T

    def _trace_apparatus(self, a) -> np.ndarray:
        d, e = self.dim_S, self.dim_A
        return np.trace(a.reshape(d, e, d, e), axis1=1, axis2=3)

    def _trace_system(self, a) -> np.ndarray:
        d, e = self.dim_S, self.dim_A
        return np.trace(a.reshape(d, e, d, e), axis1=0, axis2=2)

    def apply(self, x, op) -> np.ndarray:
        """Unnormalised instrument ``tr_A[(1 (x) P^x) U (op (x) xi) U^dagger (1 (x) P^x)]``."""
        P = self.full_pointer(x)
        return self._trace_apparatus(P @ self.premeasured(op) @ P)

    def effect(self, x) -> np.ndarray:
        k = _index_of(self.outcomes, x)

        def build():
            u, s = self.U.data, self._sqrt_xi
            m = self._trace_apparatus(s @ u.conj().T @ self.full_pointer(x) @ u @ s)
            return 0.5 * (m + m.conj().T)

        return self._memo(("M", k), build)

    def dual(self, x, op) -> np.ndarray:
        """Heisenberg-picture instrument, ``tr[dual(x, A) rho] = tr[A apply(x, rho)]``."""
        u, s = self.U.data, self._sqrt_xi
        big = kron(op, self.pointer.projector(x).data)
        return self._trace_apparatus(s @ u.conj().T @ big @ u @ s)

    def pointer_commutator_norm(self) -> float:
        """``||[Z_A, H_A(tau)]||_F``."""
        return commutator_norm(self.pointer.observable(), self.H_Atau)

    def require_commuting_pointer(self, tol: float = COMMUTATOR_TOL) -> None:
        c = self.pointer_commutator_norm()
        if c > tol:
            raise CommutatorViolation(f"[Z_A, H_A(tau)] has norm {c:.3g} > {tol:g}")

    def replace(self, **changes) -> "MeasurementModel":
        kw = dict(
            system_dim=self.system_dim,
            apparatus_dims=self.apparatus_dims,
            xi=self.xi,
            U=self.U,
            pointer=self.pointer,
            H_S0=self.H_S0,
            H_Stau=self.H_Stau,
            H_A0=self.H_A0,
            H_Atau=self.H_Atau,
        )
        kw.update(changes)
        return MeasurementModel(**kw)


@dataclass(frozen=True)
class OutcomeBranch:
    outcome: Label
    prob: float
    defined: bool
    rho_x: DensityState | None = None
    xi_x: DensityState | None = None
    joint_x: DensityState | None = None


def instrument_apply(model: MeasurementModel, rho, x) -> Operator:
    return Operator(model.apply(x, as_state(rho)), (model.dim_S,))


def induced_povm(model: MeasurementModel) -> Povm:
    return Povm(model.outcomes, [model.effect(x) for x in model.outcomes])


def outcome_branches(model: MeasurementModel, rho, p_floor: float = P_FLOOR) -> list[OutcomeBranch]:
    """Born-rule probabilities and conditional states of S, A and S+A per outcome."""
    rho = as_state(rho)
    joint = model.premeasured(rho)
    out = []
    for x in model.outcomes:
        P = model.full_pointer(x)
        jx = P @ joint @ P
        p = float(np.real(np.trace(jx)))
        if p < p_floor:
            out.append(OutcomeBranch(x, max(p, 0.0), False))
            continue
        jx = jx / p
        out.append(
            OutcomeBranch(
                x,
                p,
                True,
                rho_x=DensityState(model._trace_apparatus(jx), (model.dim_S,)),
                xi_x=DensityState(model._trace_system(jx), model.apparatus_dims),
                joint_x=DensityState(jx, model.dims),
            )
        )
    return out


def _as_pvm(pvm) -> Povm:
    if not isinstance(pvm, Povm):
        raise TypeError("expected a Povm")
    if not pvm.is_projective(1e-9):
        raise NotProjective("every effect must be an orthogonal projector")
    return pvm


@dataclass(frozen=True)
class RepeatableSpec:
    """Mixing weights ``q_i`` and intra-block unitaries ``V_{x,i}`` of a repeatable instrument."""

    weights: tuple
    unitaries: Mapping

    def __post_init__(self):
        w = tuple(float(q) for q in self.weights)
        if not w or any(q < 0 for q in w) or abs(sum(w) - 1.0) > 1e-12:
            raise SpecMismatch(f"weights must be nonnegative and sum to 1, got {w}")
        table = {}
        for x, vs in dict(self.unitaries).items():
            vs = tuple(np.array(as_array(v)) for v in vs)
            if len(vs) != len(w):
                raise SpecMismatch(f"outcome {x!r}: {len(vs)} unitaries for {len(w)} weights")
            table[normalize_label(x)] = vs
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "unitaries", table)

    @property
    def rank(self) -> int:
        return len(self.weights)

    @classmethod
    def trivial(cls, pvm: Povm, weights: Sequence[float] = (1.0,)) -> "RepeatableSpec":
        eye = np.eye(pvm.dim)
        return cls(tuple(weights), {x: [eye] * len(weights) for x in pvm.outcomes})


def _type3_unitary(pvm: Povm, spec: RepeatableSpec, dim_A: int) -> np.ndarray:
    # apparatus basis |phi_{k,i}> at index k*r + i; ready states are |phi_{0,i}>
    n, r, dS = len(pvm.outcomes), spec.rank, pvm.dim
    U = np.zeros((dS * dim_A, dS * dim_A), dtype=complex)
    for k, x in enumerate(pvm.outcomes):
        M = pvm.effects[k].data
        shift = np.zeros((dim_A, dim_A), dtype=complex)
        for y in range(n):
            for i in range(r):
                shift[((y + k) % n) * r + i, y * r + i] = 1.0
        for i in range(r):
            sector = np.zeros((dim_A, dim_A))
            for y in range(n):
                sector[y * r + i, y * r + i] = 1.0
            U += np.kron(spec.unitaries[x][i] @ M, shift @ sector)
    extra = np.zeros((dim_A, dim_A))
    for j in range(n * r, dim_A):
        extra[j, j] = 1.0
    return U + np.kron(np.eye(dS), extra)


def _check_support(pvm: Povm, spec: RepeatableSpec) -> None:
    eye = np.eye(pvm.dim)
    for x, M in zip(pvm.outcomes, pvm.effects):
        if x not in spec.unitaries:
            raise SpecMismatch(f"no unitaries given for outcome {x!r}")
        M = M.data
        for i, V in enumerate(spec.unitaries[x]):
            if V.shape != M.shape:
                raise SpecMismatch(f"V[{x!r}][{i}] has shape {V.shape}, expected {M.shape}")
            if np.linalg.norm(V.conj().T @ V - eye) > 1e-9:
                raise SpecMismatch(f"V[{x!r}][{i}] is not unitary")
            if np.linalg.norm(V @ M @ V.conj().T - M) > 1e-9:
                raise SpecMismatch(f"V[{x!r}][{i}] does not preserve the support of M_{x}")
            if np.linalg.norm(V @ (eye - M) - (eye - M)) > 1e-9:
                raise SpecMismatch(f"V[{x!r}][{i}] acts outside the support of M_{x}")


def _type3_model(pvm, spec, H_S0, H_Stau, dim_A, apparatus_energy) -> MeasurementModel:
    n, r = len(pvm.outcomes), spec.rank
    dim_A = n * r if dim_A is None else int(dim_A)
    if n * r > dim_A:
        raise RankBoundViolation(f"rank {r} with {n} outcomes needs dim_A >= {n * r}, got {dim_A}")
    _check_support(pvm, spec)
    projs = []
    for k in range(n):
        p = np.zeros((dim_A, dim_A))
        for i in range(r):
            p[k * r + i, k * r + i] = 1.0
        projs.append(p)
    for j in range(n * r, dim_A):
        projs[-1][j, j] = 1.0
    xi = np.diag([spec.weights[i] if i < r else 0.0 for i in range(dim_A)])
    h_a = apparatus_energy * np.eye(dim_A)
    return MeasurementModel(
        system_dim=pvm.dim,
        apparatus_dims=(dim_A,),
        xi=xi,
        U=_type3_unitary(pvm, spec, dim_A),
        pointer=PointerObservable(pvm.outcomes, projs),
        H_S0=H_S0,
        H_Stau=H_Stau,
        H_A0=h_a,
        H_Atau=h_a,
    )


def make_ideal_model(pvm: Povm, H_S0, H_Stau, apparatus_energy: float = 0.0) -> MeasurementModel:
    """Lüders realisation with a pure ready state and an |X|-dimensional pointer register."""
    pvm = _as_pvm(pvm)
    return _type3_model(pvm, RepeatableSpec.trivial(pvm), H_S0, H_Stau, None, apparatus_energy)


def make_repeatable_model(
    pvm: Povm,
    spec: RepeatableSpec,
    H_S0,
    H_Stau,
    dim_A: int | None = None,
    apparatus_energy: float = 0.0,
) -> MeasurementModel:
    """Type-3 realisation of ``sum_i q_i V_{x,i} M_x rho M_x V_{x,i}^dagger``.

    The apparatus needs ``rank(xi) * |X|`` orthogonal pointer states; ``dim_A``
    defaults to exactly that and smaller values raise
    :class:`RankBoundViolation`.
    """
    pvm = _as_pvm(pvm)
    return _type3_model(pvm, spec, H_S0, H_Stau, dim_A, apparatus_energy)


def make_noisy_model(pvm: Povm, xi_full_rank, H_S0, H_Stau, H_A=None) -> MeasurementModel:
    """SWAP premeasurement followed by a local basis change on the apparatus.

    The apparatus has the system's dimension and a full-rank initial state.
    The local unitary maps an eigenbasis of the PVM onto the computational
    basis, so pointer projectors are diagonal.
    """
    pvm = _as_pvm(pvm)
    d = pvm.dim
    xi = as_array(xi_full_rank)
    if xi.shape != (d, d):
        raise DimensionMismatch(f"apparatus state must be {d}x{d}, got {xi.shape}")
    xi = DensityState(xi)
    if np.linalg.eigvalsh(xi.data)[0] <= TOL_PSD:
        raise NotFullRank("noisy measurements need a full-rank apparatus state")
    cols, blocks = [], []
    for M in pvm.effects:
        w, v = np.linalg.eigh(M.data)
        sel = v[:, w > 0.5]
        blocks.append(range(len(cols), len(cols) + sel.shape[1]))
        cols.extend(sel.T)
    W = np.array(cols).conj()
    swap = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            swap[j * d + i, i * d + j] = 1.0
    U = np.kron(np.eye(d), W) @ swap
    projs = [np.diag([1.0 if k in b else 0.0 for k in range(d)]) for b in blocks]
    h_a = np.zeros((d, d)) if H_A is None else as_array(H_A)
    return MeasurementModel(
        system_dim=d,
        apparatus_dims=(d,),
        xi=xi,
        U=U,
        pointer=PointerObservable(pvm.outcomes, projs),
        H_S0=H_S0,
        H_Stau=H_Stau,
        H_A0=h_a,
        H_Atau=h_a,
    )


def extend_model_commuting(model: MeasurementModel, tol: float = COMMUTATOR_TOL) -> MeasurementModel:
    """Append a register B that copies the pointer sector label.

    B has ``|X| + 1`` levels with ``|b_0>`` as ready state and a Hamiltonian
    of zero. The copy unitary ``V = sum_x P_A^x (x) T_x``, with ``T_x``
    swapping ``|b_0>`` and ``|b_x>``, commutes with ``H_A(tau) (x) 1_B``.
    """
    model.require_commuting_pointer(tol)
    n = len(model.outcomes)
    dB, dA, dS = n + 1, model.dim_A, model.dim_S
    V = np.zeros((dA * dB, dA * dB), dtype=complex)
    projs_B = []
    for k, P in enumerate(model.pointer.projectors):
        T = np.eye(dB)
        T[[0, k + 1]] = T[[k + 1, 0]]
        V += np.kron(P.data, T)
        pb = np.zeros((dB, dB))
        pb[k + 1, k + 1] = 1.0
        projs_B.append(pb)
    projs_B[0][0, 0] = 1.0
    U = np.kron(np.eye(dS), V) @ np.kron(model.U.data, np.eye(dB))
    xi_B = np.zeros((dB, dB))
    xi_B[0, 0] = 1.0
    eye_B = np.eye(dB)
    return MeasurementModel(
        system_dim=dS,
        apparatus_dims=model.apparatus_dims + (dB,),
        xi=np.kron(model.xi.data, xi_B),
        U=U,
        pointer=PointerObservable(model.outcomes, [np.kron(np.eye(dA), pb) for pb in projs_B]),
        H_S0=model.H_S0,
        H_Stau=model.H_Stau,
        H_A0=np.kron(model.H_A0.data, eye_B),
        H_Atau=np.kron(model.H_Atau.data, eye_B),
    )


def trivial_model(dim_S: int, H_S0=None, H_Stau=None, label: str = "1") -> MeasurementModel:
    """Single-outcome model with ``U = 1``: equivalent to not measuring."""
    h0 = np.zeros((dim_S, dim_S)) if H_S0 is None else H_S0
    ht = h0 if H_Stau is None else H_Stau
    return MeasurementModel(
        system_dim=dim_S,
        apparatus_dims=(1,),
        xi=np.eye(1),
        U=np.eye(dim_S),
        pointer=PointerObservable((label,), [np.eye(1)]),
        H_S0=h0,
        H_Stau=ht,
        H_A0=np.zeros((1, 1)),
        H_Atau=np.zeros((1, 1)),
    )
