"""Dense operators with tensor-product structure, spectra, partial traces and entropies.

Everything here is a thin layer over numpy. :class:`Operator` carries a
read-only complex matrix together with the list of subsystem dimensions it
acts on; :class:`DensityState` is an operator that passed the state checks.
Functions accept either wrapped operators or plain 2-D arrays.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence, Union

import numpy as np
from scipy.special import xlogy

from .errors import BadSubsystemIndex, InvalidState, NonHermitianInput

TOL_HERM = 1e-10
TOL_UNITARY = 1e-10
TOL_TRACE = 1e-10
TOL_PSD = 1e-9
DEGENERACY_TOL = 1e-8


class Operator:
    """Square complex matrix on a tensor product of subsystems.

    Parameters
    ----------
    data : array_like
        Square matrix. It is copied and frozen.
    dims : sequence of int, optional
        Subsystem dimensions; their product must equal the matrix side.
        Defaults to a single subsystem.
    """

    __slots__ = ("_data", "_dims")

    def __init__(self, data, dims: Sequence[int] | None = None):
        a = np.array(data, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"operator must be a square matrix, got shape {a.shape}")
        if dims is None:
            dims = (a.shape[0],)
        dims = tuple(int(d) for d in dims)
        if any(d < 1 for d in dims) or prod(dims) != a.shape[0]:
            raise ValueError(f"dims {dims} incompatible with matrix side {a.shape[0]}")
        a.setflags(write=False)
        self._data = a
        self._dims = dims

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def dims(self) -> tuple[int, ...]:
        return self._dims

    @property
    def dim(self) -> int:
        return self._data.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self._data.shape

    def dag(self) -> "Operator":
        return Operator(self._data.conj().T, self._dims)

    def tr(self) -> complex:
        return complex(np.trace(self._data))

    def expect(self, state) -> float:
        """Real part of ``tr[self @ state]``."""
        return float(np.real(np.trace(self._data @ as_array(state))))

    def __array__(self, dtype=None, copy=None):
        return self._data if dtype is None else self._data.astype(dtype)

    def _wrap(self, other):
        if isinstance(other, Operator):
            return other._data
        return np.asarray(other)

    def __matmul__(self, other):
        return Operator(self._data @ self._wrap(other), self._dims)

    def __rmatmul__(self, other):
        return Operator(self._wrap(other) @ self._data, self._dims)

    def __add__(self, other):
        return Operator(self._data + self._wrap(other), self._dims)

    __radd__ = __add__

    def __sub__(self, other):
        return Operator(self._data - self._wrap(other), self._dims)

    def __rsub__(self, other):
        return Operator(self._wrap(other) - self._data, self._dims)

    def __mul__(self, scalar):
        if isinstance(scalar, (Operator, np.ndarray)):
            return NotImplemented
        return Operator(self._data * scalar, self._dims)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return Operator(self._data / scalar, self._dims)

    def __neg__(self):
        return Operator(-self._data, self._dims)

    def allclose(self, other, atol: float = 1e-10) -> bool:
        return bool(np.linalg.norm(self._data - as_array(other)) <= atol)

    def __repr__(self):
        return f"{type(self).__name__}(dims={list(self._dims)}, data=\n{self._data})"


OperatorLike = Union[Operator, np.ndarray]


def as_array(obj) -> np.ndarray:
    if isinstance(obj, Operator):
        return obj.data
    return np.asarray(obj, dtype=complex)


def dims_of(obj) -> tuple[int, ...]:
    if isinstance(obj, Operator):
        return obj.dims
    return (np.asarray(obj).shape[0],)


class DensityState(Operator):
    """Positive, unit-trace operator.

    Eigenvalues in ``[-TOL_PSD, 0)`` are clipped to zero and the state is
    renormalised; anything worse raises :class:`InvalidState`.
    """

    __slots__ = ()

    def __init__(self, data, dims: Sequence[int] | None = None):
        if isinstance(data, Operator) and dims is None:
            dims = data.dims
        a = np.array(as_array(data), dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InvalidState(f"state must be a square matrix, got shape {a.shape}")
        herm = hermiticity_violation(a)
        if herm > TOL_HERM:
            raise InvalidState(f"state is not Hermitian (violation {herm:.3g})")
        a = 0.5 * (a + a.conj().T)
        trace = float(np.real(np.trace(a)))
        if abs(trace - 1.0) > TOL_TRACE:
            raise InvalidState(f"state trace is {trace!r}, expected 1")
        w, v = np.linalg.eigh(a)
        if w[0] < -TOL_PSD:
            raise InvalidState(f"state has negative eigenvalue {w[0]:.3g}")
        if w[0] < 0:
            w = np.clip(w, 0.0, None)
            w = w / w.sum()
            a = (v * w) @ v.conj().T
        super().__init__(a, dims)

    @classmethod
    def pure(cls, ket, dims: Sequence[int] | None = None) -> "DensityState":
        psi = np.asarray(ket, dtype=complex).ravel()
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()), dims)

    @classmethod
    def maximally_mixed(cls, dims: Sequence[int] | int) -> "DensityState":
        dims = (dims,) if isinstance(dims, int) else tuple(dims)
        d = prod(dims)
        return cls(np.eye(d) / d, dims)


def as_state(obj) -> DensityState:
    return obj if isinstance(obj, DensityState) else DensityState(obj)


def identity(dims: Sequence[int] | int) -> Operator:
    dims = (dims,) if isinstance(dims, int) else tuple(dims)
    return Operator(np.eye(prod(dims)), dims)


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def projector(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=complex).ravel()
    return np.outer(v, v.conj())


def hermiticity_violation(a) -> float:
    a = as_array(a)
    return float(np.linalg.norm(a - a.conj().T))


def commutator_norm(a, b) -> float:
    """Frobenius norm of ``[a, b]``."""
    a, b = as_array(a), as_array(b)
    return float(np.linalg.norm(a @ b - b @ a))


@dataclass(frozen=True)
class SpectralDecomposition:
    """``H = sum_j eigenvalues[j] * projectors[j]`` with merged degeneracies."""

    eigenvalues: np.ndarray
    projectors: tuple[Operator, ...]

    def __len__(self):
        return len(self.eigenvalues)

    def reconstruct(self) -> np.ndarray:
        return sum(e * p.data for e, p in zip(self.eigenvalues, self.projectors))


def spectral_decompose(H, degeneracy_tol: float = DEGENERACY_TOL) -> SpectralDecomposition:
    a = as_array(H)
    if hermiticity_violation(a) > TOL_HERM:
        raise NonHermitianInput(
            f"cannot decompose non-Hermitian operator (violation {hermiticity_violation(a):.3g})"
        )
    dims = dims_of(H)
    w, v = np.linalg.eigh(0.5 * (a + a.conj().T))
    groups: list[list[int]] = []
    for k, val in enumerate(w):
        if groups and val - w[groups[-1][0]] <= degeneracy_tol:
            groups[-1].append(k)
        else:
            groups.append([k])
    values = np.array([w[g].mean() for g in groups])
    projs = tuple(Operator(v[:, g] @ v[:, g].conj().T, dims) for g in groups)
    return SpectralDecomposition(values, projs)


def kron(a, b) -> np.ndarray:
    """Kronecker product of two matrices (leaner than ``np.kron`` for 2-D input)."""
    a, b = as_array(a), as_array(b)
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])


def tensor(*ops) -> Operator:
    """Kronecker product; subsystem dims are concatenated."""
    if not ops:
        raise ValueError("tensor() needs at least one operator")
    data = as_array(ops[0])
    dims = list(dims_of(ops[0]))
    for op in ops[1:]:
        data = kron(data, op)
        dims.extend(dims_of(op))
    return Operator(data, dims)


def partial_trace(op, keep: Iterable[int], dims: Sequence[int] | None = None) -> Operator:
    """Trace out every subsystem not listed in ``keep``.

    ``dims`` overrides the operator's own dims (useful for bare arrays).
    """
    a = as_array(op)
    dims = tuple(dims) if dims is not None else dims_of(op)
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if not keep or any(k < 0 or k >= n for k in keep):
        raise BadSubsystemIndex(f"keep={keep} invalid for {n} subsystems")
    if prod(dims) != a.shape[0]:
        raise ValueError(f"dims {dims} incompatible with matrix side {a.shape[0]}")
    letters = string.ascii_letters
    row = [letters[i] for i in range(n)]
    col = [letters[i] if i not in keep else letters[n + i] for i in range(n)]
    out = [letters[i] for i in keep] + [letters[n + i] for i in keep]
    spec = "".join(row) + "".join(col) + "->" + "".join(out)
    kept_dims = tuple(dims[i] for i in keep)
    d = prod(kept_dims)
    res = np.einsum(spec, a.reshape(dims + dims)).reshape(d, d)
    return Operator(res, kept_dims)


def psd_sqrt(a) -> np.ndarray:
    """Square root of a positive semidefinite matrix (negative roundoff clipped)."""
    a = as_array(a)
    w, v = np.linalg.eigh(0.5 * (a + a.conj().T))
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def von_neumann_entropy(rho) -> float:
    """``-tr[rho ln rho]`` in nats."""
    a = as_array(rho)
    p = np.clip(np.linalg.eigvalsh(0.5 * (a + a.conj().T)), 0.0, 1.0)
    return float(max(-np.sum(xlogy(p, p)), 0.0))


def shannon_entropy(probs) -> float:
    p = np.clip(np.asarray(probs, dtype=float), 0.0, 1.0)
    return float(max(-np.sum(xlogy(p, p)), 0.0))


@dataclass(frozen=True)
class ValidationReport:
    kind: str
    passed: bool
    max_violation: float
    detail: str = ""

    def __bool__(self):
        return self.passed


def validate(obj, kind: str) -> ValidationReport:
    """Check ``obj`` against one of: hermitian, unitary, projector, state, povm_element."""
    a = as_array(obj)
    d = a.shape[0]
    herm = hermiticity_violation(a)
    if kind == "hermitian":
        return ValidationReport(kind, herm <= TOL_HERM, herm)
    if kind == "unitary":
        v = float(np.linalg.norm(a.conj().T @ a - np.eye(d)))
        return ValidationReport(kind, v <= TOL_UNITARY, v)
    if kind == "projector":
        idem = float(np.linalg.norm(a @ a - a))
        v = max(herm, idem)
        return ValidationReport(kind, v <= TOL_HERM, v, "" if v <= TOL_HERM else "not an orthogonal projection")
    if kind == "state":
        if herm > TOL_HERM:
            return ValidationReport(kind, False, herm, "not Hermitian")
        w = np.linalg.eigvalsh(0.5 * (a + a.conj().T))
        trace_err = abs(float(np.real(np.trace(a))) - 1.0)
        neg = max(-w[0], 0.0)
        ok = trace_err <= TOL_TRACE and neg <= TOL_PSD
        detail = "" if ok else ("trace != 1" if trace_err > TOL_TRACE else "negative eigenvalue")
        return ValidationReport(kind, ok, max(trace_err, neg), detail)
    if kind == "povm_element":
        if herm > TOL_HERM:
            return ValidationReport(kind, False, herm, "not Hermitian")
        w = np.linalg.eigvalsh(0.5 * (a + a.conj().T))
        v = max(-w[0], w[-1] - 1.0, 0.0)
        return ValidationReport(kind, v <= TOL_PSD, v, "" if v <= TOL_PSD else "eigenvalue outside [0, 1]")
    raise ValueError(f"unknown validation kind {kind!r}")
