"""Dense linear-algebra substrate: tensor products, partial traces, trace
distance, Helstrom probability and Hermitian matrix exponentials.

States are plain numpy arrays. A 1-d array is a pure state vector, a 2-d
square array is a density matrix. Tensor products use the row-major (first
factor slowest) convention of :func:`numpy.kron`, and subsystem indices are
0-based.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .config import DEFAULT_TOL, MAX_DIM, Tolerances
from .errors import CapacityError, NumericalError, ValidationError


def hermitian_defect(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def check_hermitian(m: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix has non-finite entries")
    if hermitian_defect(m) > tol.herm * max(1.0, float(np.max(np.abs(m)))):
        raise ValidationError(f"matrix is not Hermitian (defect {hermitian_defect(m):.3e})")
    return m


def check_unitary(u: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {u.shape}")
    defect = unitarity_defect(u)
    if defect > tol.unit:
        raise ValidationError(f"matrix is not unitary (defect {defect:.3e})")
    return u


def unitarity_defect(u: np.ndarray) -> float:
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def normalize(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    n = np.linalg.norm(v)
    if n == 0:
        raise ValidationError("cannot normalize the zero vector")
    return v / n


def check_pure(v: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if v.ndim != 1:
        raise ValidationError(f"pure state must be a vector, got shape {v.shape}")
    if abs(np.linalg.norm(v) - 1.0) > tol.norm:
        raise ValidationError(f"state vector not normalized (norm {np.linalg.norm(v):.12f})")
    return v


def check_density(rho: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    rho = check_hermitian(rho, tol)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > tol.norm:
        raise ValidationError(f"density matrix trace {tr:.12f} != 1")
    if np.linalg.eigvalsh(rho)[0] < -tol.psd:
        raise ValidationError("density matrix has a negative eigenvalue")
    return rho


def to_density(state: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Return a validated density matrix for a pure vector or a matrix."""
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        v = check_pure(state, tol)
        return np.outer(v, v.conj())
    return check_density(state, tol)


def expectation(state: np.ndarray, op: np.ndarray) -> complex:
    state = np.asarray(state)
    if state.ndim == 1:
        return complex(np.vdot(state, op @ state))
    return complex(np.trace(state @ op))


def variance(state: np.ndarray, op: np.ndarray) -> float:
    """<op^2> - <op>^2 for a Hermitian ``op`` in a pure or mixed state."""
    state = np.asarray(state)
    if state.ndim == 1:
        w = op @ state
        mean = np.vdot(state, w).real
        return float(np.vdot(w, w).real - mean**2)
    mean = np.trace(state @ op).real
    return float(np.trace(state @ op @ op).real - mean**2)


# --------------------------------------------------------------------------
# tensor structure
# --------------------------------------------------------------------------


def tensor_product(a: np.ndarray, b: np.ndarray, max_dim: int = MAX_DIM) -> np.ndarray:
    """Kronecker product, index ``i_a * dim_b + i_b``.

    Works for vectors and matrices. The result's row dimension is capped at
    ``max_dim``.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    rows = a.shape[0] * b.shape[0]
    if rows > max_dim:
        raise CapacityError(f"tensor product dimension {rows} exceeds cap {max_dim}")
    return np.kron(a, b)


def kron_all(factors: Sequence[np.ndarray], max_dim: int = MAX_DIM) -> np.ndarray:
    return reduce(lambda x, y: tensor_product(x, y, max_dim), factors)


def tensor_power(a: np.ndarray, n: int, max_dim: int = MAX_DIM) -> np.ndarray:
    if n < 1:
        raise ValidationError("tensor power needs n >= 1")
    if a.shape[0] ** n > max_dim:
        raise CapacityError(f"dimension {a.shape[0]}**{n} exceeds cap {max_dim}")
    return kron_all([a] * n, max_dim)


def partial_trace(state: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Reduced density matrix on the factors listed in ``keep``.

    ``state`` is a pure vector or a density matrix on ``prod(dims)``. Kept
    factors stay in increasing order. Keeping nothing returns the 1x1 trace.
    """
    dims = [int(d) for d in dims]
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep):
        raise ValidationError(f"keep indices {keep} out of range for {n} factors")
    total = int(np.prod(dims))
    state = np.asarray(state, dtype=complex)
    drop = [i for i in range(n) if i not in keep]
    dk = int(np.prod([dims[k] for k in keep])) if keep else 1

    if state.ndim == 1:
        if state.shape[0] != total:
            raise ValidationError("state length does not match dims")
        psi = state.reshape(dims).transpose(keep + drop).reshape(dk, -1)
        return psi @ psi.conj().T

    if state.shape != (total, total):
        raise ValidationError("density matrix shape does not match dims")
    t = state.reshape(dims + dims)
    # contract dropped factors one at a time, highest index first
    for ax in sorted(drop, reverse=True):
        m = t.ndim // 2
        t = np.trace(t, axis1=ax, axis2=ax + m)
    return t.reshape(dk, dk)


def reduced_trace_norm_pure(
    a: np.ndarray, b: np.ndarray, dims: Sequence[int], keep: Iterable[int]
) -> float:
    """``||tr_rest |a><a| - tr_rest |b><b| ||_1`` without forming the RDMs.

    The difference ``X X^+ - Y Y^+`` (columns of X, Y are the unnormalized
    conditional states) has the same nonzero spectrum as ``R S R^+`` where
    ``[X Y] = Q R`` and ``S = diag(1, .., -1, ..)``.
    """
    dims = [int(d) for d in dims]
    keep = sorted(set(int(k) for k in keep))
    drop = [i for i in range(len(dims)) if i not in keep]
    dk = int(np.prod([dims[k] for k in keep])) if keep else 1
    x = np.asarray(a).reshape(dims).transpose(keep + drop).reshape(dk, -1)
    y = np.asarray(b).reshape(dims).transpose(keep + drop).reshape(dk, -1)
    w = np.hstack([x, y])
    r = np.linalg.qr(w, mode="r")
    s = np.concatenate([np.ones(x.shape[1]), -np.ones(y.shape[1])])
    m = (r * s) @ r.conj().T
    return float(np.sum(np.abs(np.linalg.eigvalsh((m + m.conj().T) / 2))))


# --------------------------------------------------------------------------
# distinguishability
# --------------------------------------------------------------------------


def trace_norm_distance(
    rho_a: np.ndarray, rho_b: np.ndarray, tol: Tolerances = DEFAULT_TOL
) -> float:
    """``||rho_a - rho_b||_1`` from the eigenvalues of the Hermitian difference.

    Pure-state vectors are accepted and handled in their two-dimensional span.
    """
    rho_a = np.asarray(rho_a, dtype=complex)
    rho_b = np.asarray(rho_b, dtype=complex)
    if rho_a.shape != rho_b.shape:
        raise ValidationError(f"shape mismatch {rho_a.shape} vs {rho_b.shape}")
    if rho_a.ndim == 1:
        ov = abs(np.vdot(check_pure(rho_a, tol), check_pure(rho_b, tol))) ** 2
        return float(2.0 * np.sqrt(max(0.0, 1.0 - ov)))
    diff = check_hermitian(rho_a, tol) - check_hermitian(rho_b, tol)
    diff = (diff + diff.conj().T) / 2
    return float(np.sum(np.abs(np.linalg.eigvalsh(diff))))


def helstrom_probability(
    rho_a: np.ndarray, rho_b: np.ndarray, tol: Tolerances = DEFAULT_TOL
) -> float:
    """Optimal equal-prior success probability ``1/2 + ||rho_a - rho_b||_1 / 4``."""
    return 0.5 + 0.25 * trace_norm_distance(rho_a, rho_b, tol)


# --------------------------------------------------------------------------
# exponentials
# --------------------------------------------------------------------------


def matrix_exponential(
    generator: np.ndarray, scale: complex, tol: Tolerances = DEFAULT_TOL
) -> np.ndarray:
    """``exp(scale * M)`` for Hermitian ``M`` via ``M = Q diag(w) Q^+``."""
    m = check_hermitian(generator, tol)
    try:
        w, q = np.linalg.eigh((m + m.conj().T) / 2)
    except np.linalg.LinAlgError as exc:
        cond = np.linalg.cond(m)
        raise NumericalError(f"eigendecomposition failed (condition {cond:.3e})") from exc
    return (q * np.exp(complex(scale) * w)) @ q.conj().T


def unitary_evolution(h: np.ndarray, t: float, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``exp(-i H t)`` with hbar = 1."""
    return matrix_exponential(h, -1j * t, tol)


# --------------------------------------------------------------------------
# 1-local observables
# --------------------------------------------------------------------------


def apply_local(vec: np.ndarray, op: np.ndarray, site: int, n_modes: int) -> np.ndarray:
    """Apply a single-mode operator to mode ``site`` of an ``n_modes`` state."""
    d = op.shape[0]
    t = np.asarray(vec).reshape((d,) * n_modes)
    t = np.tensordot(op, t, axes=([1], [site]))
    return np.moveaxis(t, 0, site).reshape(-1)


@dataclass(frozen=True)
class OneLocal:
    """``sum_i A^(i) (x) I`` with identical per-mode terms ``single``."""

    single: np.ndarray
    n_modes: int

    @property
    def local_dim(self) -> int:
        return self.single.shape[0]

    @property
    def dim(self) -> int:
        return self.local_dim**self.n_modes

    def apply(self, vec: np.ndarray) -> np.ndarray:
        out = np.zeros(self.dim, dtype=complex)
        for i in range(self.n_modes):
            out += apply_local(vec, self.single, i, self.n_modes)
        return out

    def matrix(self, max_dim: int = MAX_DIM) -> np.ndarray:
        if self.dim > max_dim:
            raise CapacityError(f"1-local observable dimension {self.dim} exceeds cap {max_dim}")
        d = self.local_dim
        eye = np.eye(d)
        total = np.zeros((self.dim, self.dim), dtype=complex)
        for i in range(self.n_modes):
            total += kron_all([self.single if j == i else eye for j in range(self.n_modes)], max_dim)
        return total


def one_local_matrix(per_mode: Sequence[np.ndarray], max_dim: int = MAX_DIM) -> np.ndarray:
    """Dense ``sum_i A_i (x) I`` for possibly different per-mode terms."""
    n = len(per_mode)
    d = per_mode[0].shape[0]
    if d**n > max_dim:
        raise CapacityError(f"dimension {d**n} exceeds cap {max_dim}")
    eye = np.eye(d)
    total = np.zeros((d**n, d**n), dtype=complex)
    for i, a in enumerate(per_mode):
        total += kron_all([a if j == i else eye for j in range(n)], max_dim)
    return total
