"""Quantum Fisher information and Fisher-based size measures.

The QFI is a quadratic form in the generator: for ``H = sum_a c_a G_a`` with
real ``c``, ``F(rho, H) = c^T F c`` where ``F`` is the Fisher matrix of the
operators ``G_a`` (four times the symmetrized covariance for pure states).
Maximizing over a family with ``|c| = 1`` is therefore a largest-eigenvalue
problem, which is how N^F is evaluated here::

    N^F(rho)  = max_c c^T F c / (4N)
    N^rF(Psi) = N^F(Psi) / ((N^F(Phi) + N^F(V Phi)) / 2)
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from . import fock
from .config import DEFAULT_TOL, MAX_DIM, Tolerances
from .errors import (
    CapacityError,
    DegenerateSuperpositionError,
    NormalizationRequiredError,
    ValidationError,
)
from .operators import OneLocal, apply_local, check_hermitian, to_density
from .superposition import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    GeneralSuperposition,
    Space,
    StateName,
    product_covariance,
    superposition_covariance,
    superposition_expectation,
)

# --------------------------------------------------------------------------
# QFI
# --------------------------------------------------------------------------


def qfi(rho: np.ndarray, H: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> float:
    """QFI of ``rho`` (vector or density matrix) along ``exp(-i H t)``.

    Pure vectors use ``4 Var(H)``; density matrices use the symmetric
    logarithmic derivative sum over eigenpairs with ``p_j + p_k > eps_psd``.
    """
    H = check_hermitian(H, tol)
    return float(fisher_matrix(rho, [H], tol)[0, 0])


def fisher_matrix(state: np.ndarray, ops: Sequence[np.ndarray], tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``F_ab`` with ``F(state, sum c_a G_a) = c^T F c`` for real ``c``."""
    state = np.asarray(state, dtype=complex)
    k = len(ops)
    if state.ndim == 1:
        w = [g @ state for g in ops]
        mean = np.array([np.vdot(state, wa).real for wa in w])
        gram = np.array([[np.vdot(w[a], w[b]).real for b in range(k)] for a in range(k)])
        return 4.0 * (gram - np.outer(mean, mean))
    rho = to_density(state, tol)
    p, vecs = np.linalg.eigh(rho)
    p = np.clip(p, 0.0, None)
    s = p[:, None] + p[None, :]
    mask = s > tol.psd
    weight = np.zeros_like(s)
    weight[mask] = (p[:, None] - p[None, :])[mask] ** 2 / s[mask]
    elems = [vecs.conj().T @ g @ vecs for g in ops]
    out = np.zeros((k, k))
    for a in range(k):
        for b in range(a, k):
            val = 2.0 * np.sum(weight * (elems[a] * elems[b].T).real)
            out[a, b] = out[b, a] = val
    return out


# --------------------------------------------------------------------------
# observable families
# --------------------------------------------------------------------------


class Normalization(str, enum.Enum):
    OPERATOR_NORM_ONE = "operator_norm_one"
    COEFFICIENT_NORM_ONE = "coefficient_norm_one"
    # first coefficient fixed to 1, next two on the unit circle, rest zero:
    # the L(1, beta) = n + (conj(beta) a + beta a^+)/sqrt(2) parameterization
    UNIT_FREQUENCY = "unit_frequency"


@dataclass(frozen=True, eq=False)
class AlgebraBasis:
    name: str
    ops: tuple
    labels: tuple
    normalization: Normalization = Normalization.COEFFICIENT_NORM_ONE
    bounded: bool = False

    @property
    def dim(self) -> int:
        return self.ops[0].shape[0]

    def observable(self, coeffs: Sequence[float]) -> np.ndarray:
        return sum(float(c) * g for c, g in zip(coeffs, self.ops))

    def check(self, tol: Tolerances = DEFAULT_TOL) -> "AlgebraBasis":
        if not self.ops:
            raise ValidationError("algebra basis is empty")
        for g in self.ops:
            check_hermitian(g, tol)
        if self.normalization is Normalization.OPERATOR_NORM_ONE and not _clifford(self.ops):
            raise NormalizationRequiredError(
                f"family {self.name!r} has no finite maximum under unit operator norm; "
                "use coefficient_norm_one"
            )
        if self.normalization is Normalization.UNIT_FREQUENCY and len(self.ops) < 3:
            raise ValidationError("unit_frequency needs at least three basis operators")
        return self


def _clifford(ops) -> bool:
    """True when the basis is a set of anticommuting involutions, so that
    ``||sum c_a g_a|| = |c|``."""
    eye = np.eye(ops[0].shape[0])
    for i, a in enumerate(ops):
        if np.max(np.abs(a @ a - eye)) > 1e-10:
            return False
        for b in ops[i + 1:]:
            if np.max(np.abs(a @ b + b @ a)) > 1e-10:
                return False
    return True


def qubit_bloch() -> AlgebraBasis:
    return AlgebraBasis("qubit_bloch", (PAULI_X, PAULI_Y, PAULI_Z), ("sx", "sy", "sz"),
                        Normalization.OPERATOR_NORM_ONE, True)


def h3(dim: int, normalization: Normalization = Normalization.COEFFICIENT_NORM_ONE) -> AlgebraBasis:
    """Quadratures ``x(0), x(pi/2)``."""
    return AlgebraBasis("h3", (fock.quadrature(dim, 0.0), fock.quadrature(dim, math.pi / 2)),
                        ("x0", "x90"), Normalization(normalization))


def h4(dim: int, normalization: Normalization = Normalization.UNIT_FREQUENCY) -> AlgebraBasis:
    """``n, x(0), x(pi/2), I``; default family ``L(1, beta)``."""
    return AlgebraBasis(
        "h4",
        (fock.number(dim), fock.quadrature(dim, 0.0), fock.quadrature(dim, math.pi / 2),
         np.eye(dim, dtype=complex)),
        ("n", "x0", "x90", "I"),
        Normalization(normalization),
    )


def sl2_operators(dim: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``J0 = (2n+1)/4``, ``X = (P a^2 + a^+2 P)/2``, ``Y = i(P a^2 - a^+2 P)/2``
    with ``P = exp(i pi n)``."""
    a = fock.annihilation(dim)
    p = fock.parity(dim)
    k = p @ a @ a
    return (
        (2 * fock.number(dim) + np.eye(dim)) / 4,
        (k + k.conj().T) / 2,
        1j * (k - k.conj().T) / 2,
    )


def sl2(dim: int, normalization: Normalization = Normalization.COEFFICIENT_NORM_ONE) -> AlgebraBasis:
    return AlgebraBasis("sl2", sl2_operators(dim), ("J0", "X", "Y"), Normalization(normalization))


def custom(ops: Sequence[np.ndarray], labels: Sequence[str] | None = None,
           normalization: Normalization = Normalization.COEFFICIENT_NORM_ONE) -> AlgebraBasis:
    ops = tuple(np.asarray(g, dtype=complex) for g in ops)
    labels = tuple(labels) if labels is not None else tuple(f"g{i}" for i in range(len(ops)))
    return AlgebraBasis("custom", ops, labels, Normalization(normalization))


def algebra(name: str, dim: int, normalization: str | None = None) -> AlgebraBasis:
    name = name.lower()
    if name in ("qubit", "qubit_bloch"):
        if dim != 2:
            raise ValidationError("qubit_bloch family needs a two-level mode")
        fam = qubit_bloch()
        return fam if normalization is None else AlgebraBasis(
            fam.name, fam.ops, fam.labels, Normalization(normalization), True)
    makers = {"h3": h3, "h4": h4, "sl2": sl2}
    if name not in makers:
        raise ValidationError(f"unknown algebra {name!r}")
    return makers[name](dim) if normalization is None else makers[name](dim, normalization)


# --------------------------------------------------------------------------
# maximization
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    method: str
    residual: float

    def to_dict(self) -> dict:
        return {"method": self.method, "residual": self.residual}


def _canonical_sign(v: np.ndarray) -> np.ndarray:
    i = int(np.argmax(np.abs(v)))
    return v if v[i] >= 0 else -v


def maximize_form(F: np.ndarray, normalization: Normalization) -> tuple[float, np.ndarray, Certificate]:
    """Maximize ``c^T F c`` over the normalized coefficient set."""
    F = (np.asarray(F) + np.asarray(F).T) / 2
    if normalization is Normalization.UNIT_FREQUENCY:
        def f(t):
            c = np.zeros(F.shape[0])
            c[0], c[1], c[2] = 1.0, math.cos(t), math.sin(t)
            return c @ F @ c, c

        grid = np.linspace(0, 2 * math.pi, 721)[:-1]
        vals = [f(t)[0] for t in grid]
        t0 = grid[int(np.argmax(vals))]
        step = grid[1] - grid[0]
        res = minimize_scalar(lambda t: -f(t)[0], bounds=(t0 - step, t0 + step),
                              method="bounded", options={"xatol": 1e-12})
        t = res.x if -res.fun >= max(vals) else t0
        val, c = f(t)
        # stationarity residual of the angle
        h = 1e-6
        resid = abs(f(t + h)[0] - f(t - h)[0]) / (2 * h)
        return float(val), c, Certificate("angle_grid_bounded_refine", float(resid))
    w, v = np.linalg.eigh(F)
    c = _canonical_sign(v[:, -1])
    resid = float(np.linalg.norm(F @ c - w[-1] * c))
    return float(w[-1]), c, Certificate("symmetric_eigensolver", resid)


def _sphere_ascent_step(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    """argmax ``x^T A x + 2 b^T x`` on the unit sphere (trust-region subproblem)."""
    w, q = np.linalg.eigh((A + A.T) / 2)
    g = q.T @ b
    top = w[-1]
    if np.linalg.norm(b) < 1e-14:
        return q[:, -1]

    def norm_minus_one(lam):
        return np.sqrt(np.sum((g / (lam - w)) ** 2)) - 1.0

    lo = top + 1e-15 * max(1.0, abs(top))
    if norm_minus_one(lo) <= 0:
        # hard case: b nearly orthogonal to the top eigenspace
        mask = np.abs(w - top) >= 1e-12
        x = np.zeros_like(g)
        x[mask] = g[mask] / (top - w[mask])
        x[np.flatnonzero(~mask)[-1]] = math.sqrt(max(0.0, 1 - np.sum(x**2)))
        return q @ x
    hi = top + np.linalg.norm(b) + 1.0
    lam = brentq(norm_minus_one, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=500)
    return q @ (g / (lam - w))


def maximize_blocks(F: np.ndarray, k: int, n_modes: int, start: np.ndarray,
                    sweeps: int = 200, tol: float = 1e-13) -> tuple[float, np.ndarray, Certificate]:
    """Per-mode-independent maximization of ``c^T F c`` with each mode's
    k-vector on the unit sphere, by block coordinate ascent from ``start``."""
    c = np.tile(start, n_modes).astype(float)
    val = c @ F @ c
    change = math.inf
    for _ in range(sweeps):
        old = val
        for i in range(n_modes):
            sl = slice(i * k, (i + 1) * k)
            A = F[sl, sl]
            b = F[sl, :] @ c - A @ c[sl]
            c[sl] = _sphere_ascent_step(A, b)
        val = c @ F @ c
        change = val - old
        if abs(change) < tol * max(1.0, abs(val)):
            break
    return float(val), c, Certificate("block_coordinate_ascent", float(abs(change)))


# --------------------------------------------------------------------------
# N^F and N^rF
# --------------------------------------------------------------------------


@dataclass
class NFResult:
    value: float
    coefficients: np.ndarray
    certificate: Certificate
    independent: bool = False

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "coefficients": [float(c) for c in self.coefficients],
            "certificate": self.certificate.to_dict(),
            "per_mode_independent": self.independent,
        }


def _resolve(family, dim: int) -> AlgebraBasis:
    fam = algebra(family, dim) if isinstance(family, str) else family
    if fam.dim != dim:
        raise ValidationError(f"family acts on dimension {fam.dim}, state modes have {dim}")
    return fam.check()


def _superposition_blocks(state: GeneralSuperposition, ops) -> np.ndarray:
    """Full per-mode Fisher matrix (k N x k N) of a superposition."""
    n, k = state.n_modes, len(ops)
    vecs = (state.phi, state.chi)
    norm = state.norm_sq
    mean = np.zeros(k)
    same = np.zeros((k, k))
    cross = np.zeros((k, k))
    for x in vecs:
        for y in vecs:
            s = np.vdot(x, y)
            gy = [g @ y for g in ops]
            el = np.array([np.vdot(x, v) for v in gy])
            mean += (el * s ** (n - 1)).real
            same += (np.array([[np.vdot(ops[a] @ x, gy[b]) for b in range(k)] for a in range(k)])
                     * s ** (n - 1)).real
            if n > 1:
                cross += (np.outer(el, el) * s ** (n - 2)).real
    mean /= norm
    same = same / norm - np.outer(mean, mean)
    cross = cross / norm - np.outer(mean, mean)
    F = np.kron(np.ones((n, n)), cross) + np.kron(np.eye(n), same - cross)
    return 4.0 * (F + F.T) / 2


def _dense_blocks(state: np.ndarray, ops, n_modes: int, tol: Tolerances) -> np.ndarray:
    d = ops[0].shape[0]
    if state.ndim == 1:
        per = [apply_local(state, g, i, n_modes) for i in range(n_modes) for g in ops]
        mean = np.array([np.vdot(state, w).real for w in per])
        gram = np.array([[np.vdot(u, w).real for w in per] for u in per])
        return 4.0 * (gram - np.outer(mean, mean))
    if d**n_modes > MAX_DIM:
        raise CapacityError("dense mixed-state Fisher matrix exceeds capacity")
    eye = np.eye(d)
    full = []
    for i in range(n_modes):
        for g in ops:
            m = np.array([[1.0]])
            for j in range(n_modes):
                m = np.kron(m, g if j == i else eye)
            full.append(m)
    return fisher_matrix(state, full, tol)


def _identical_from_blocks(F_full: np.ndarray, k: int, n_modes: int) -> np.ndarray:
    return F_full.reshape(n_modes, k, n_modes, k).sum(axis=(0, 2))


def nf_measure(
    state,
    family,
    n_modes: int | None = None,
    independent: bool = False,
    tol: Tolerances = DEFAULT_TOL,
) -> NFResult:
    """``max F / (4N)`` over identical (default) or per-mode-independent 1-local
    observables built from ``family``.

    ``state`` is a :class:`GeneralSuperposition`, or a pure vector / density
    matrix on ``n_modes`` identical modes.
    """
    if isinstance(state, GeneralSuperposition):
        n_modes = state.n_modes
        fam = _resolve(family, state.local_dim)
        if independent:
            F_full = _superposition_blocks(state, fam.ops)
        else:
            F = 4.0 * superposition_covariance(state, fam.ops)
    else:
        state = np.asarray(state, dtype=complex)
        if n_modes is None:
            raise ValidationError("n_modes is required for a bare state")
        d = round(state.shape[0] ** (1.0 / n_modes))
        if d**n_modes != state.shape[0]:
            raise ValidationError("state dimension is not a power of the mode dimension")
        fam = _resolve(family, d)
        F_full = _dense_blocks(state, fam.ops, n_modes, tol)
        F = _identical_from_blocks(F_full, len(fam.ops), n_modes)
    if not independent:
        val, c, cert = maximize_form(F, fam.normalization)
        return NFResult(val / (4 * n_modes), c, cert, False)
    if fam.normalization is Normalization.UNIT_FREQUENCY:
        raise ValidationError("per-mode-independent ascent needs a spherical normalization")
    k = len(fam.ops)
    _, c0, _ = maximize_form(_identical_from_blocks(F_full, k, n_modes), fam.normalization)
    val, c, cert = maximize_blocks(F_full, k, n_modes, c0)
    return NFResult(val / (4 * n_modes), c, cert, True)


def product_nf(vec: np.ndarray, family: AlgebraBasis, n_modes: int) -> NFResult:
    """N^F of ``|vec>^N``; identical terms are optimal for product states."""
    F = 4.0 * product_covariance(vec, family.ops, n_modes)
    val, c, cert = maximize_form(F, family.normalization)
    return NFResult(val / (4 * n_modes), c, cert)


@dataclass
class RFResult:
    family: str
    normalization: str
    nf_superposition: float
    nf_branch1: float
    nf_branch2: float
    nf_branch_mean: float
    nrf: float
    coefficients: list
    labels: list
    optimizer_certificate: dict
    normalization_dependent: bool
    per_mode_independent: bool = False
    witness: dict = field(default_factory=dict)
    argmax_observable: np.ndarray | None = None

    def to_dict(self) -> dict:
        d = {k: v for k, v in self.__dict__.items() if k != "argmax_observable"}
        return d


def nrf_measure(
    state: GeneralSuperposition,
    family,
    independent: bool = False,
    tol: Tolerances = DEFAULT_TOL,
) -> RFResult:
    """Relative Fisher size: superposition N^F over the mean branch N^F, all
    three maximized over the same family."""
    fam = _resolve(family, state.local_dim)
    top = nf_measure(state, fam, independent=independent, tol=tol)
    b1 = product_nf(state.phi, fam, state.n_modes)
    b2 = product_nf(state.chi, fam, state.n_modes)
    mean = 0.5 * (b1.value + b2.value)
    if mean <= 0:
        raise DegenerateSuperpositionError("branches have zero Fisher information in this family")
    single = fam.observable(top.coefficients[: len(fam.ops)])
    return RFResult(
        fam.name, fam.normalization.value, top.value, b1.value, b2.value, mean,
        top.value / mean, [float(c) for c in top.coefficients], list(fam.labels),
        top.certificate.to_dict(), not fam.bounded, independent,
        witness_report(state), single,
    )


def witness_report(state: GeneralSuperposition) -> dict:
    """Variance per mode of the hand-picked witness observable of a named state."""
    d = state.local_dim
    if state.name == StateName.ECS.value:
        theta = float(np.angle(complex(state.params["alpha"])))
        op, label = fock.quadrature(d, theta), "x(Arg alpha)"
    elif state.name == StateName.FOCK_GHZ.value:
        op, label = 2 * fock.number(d) - state.params["n"] * np.eye(d), "2n - n I"
    elif state.name == StateName.HCS.value:
        op, label = 2 * sl2_operators(d)[1], "P a^2 + a^+2 P"
    else:
        return {}
    var = superposition_covariance(state, [op])[0, 0]
    return {"operator": label, "variance": var, "variance_per_mode": var / state.n_modes}


def qfi_of_argmax(state: GeneralSuperposition, result: RFResult) -> float:
    """QFI of ``|Psi>`` for the returned single-mode observable, summed over modes."""
    return 4.0 * float(superposition_covariance(state, [result.argmax_observable])[0, 0])


# --------------------------------------------------------------------------
# constructed observable with N^2 variance
# --------------------------------------------------------------------------


def theorem3_single(phi: np.ndarray, U: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``P+ - P-`` for the positive/negative eigenvectors of
    ``|phi><phi| - U|phi><phi|U^+``."""
    chi = U @ phi
    z = np.vdot(phi, chi)
    if 1 - abs(z) <= tol.degen:
        raise DegenerateSuperpositionError("|z| = 1: difference of projectors vanishes")
    diff = np.outer(phi, phi.conj()) - np.outer(chi, chi.conj())
    w, v = np.linalg.eigh((diff + diff.conj().T) / 2)
    plus, minus = v[:, -1], v[:, 0]
    return np.outer(plus, plus.conj()) - np.outer(minus, minus.conj())


def theorem3_observable(phi: np.ndarray, U: np.ndarray, n_modes: int,
                        tol: Tolerances = DEFAULT_TOL) -> OneLocal:
    return OneLocal(theorem3_single(phi, U, tol), int(n_modes))


def theorem3_eigenvectors(phi: np.ndarray, U: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form ``xi+-`` in the span of ``phi`` and ``U phi`` (needs z != 0)."""
    chi = U @ phi
    z = complex(np.vdot(phi, chi))
    if z == 0:
        raise ValidationError("closed form needs z != 0")
    a = abs(z)
    s = math.sqrt(1 - a * a)
    plus = a / math.sqrt(2 - 2 * s) * (phi / s + (s - 1) / (z * s) * chi)
    minus = a / math.sqrt(2 + 2 * s) * (-phi / s + (s + 1) / (z * s) * chi)
    return plus, minus


def theorem3_variance(z: complex, n_modes: int) -> float:
    """``[N^2 (1-|z|^2) + N(|z|^2 + Re z^N)] / (1 + Re z^N)``."""
    z = complex(z)
    n = n_modes
    zn = (z**n).real
    return (n * n * (1 - abs(z) ** 2) + n * (abs(z) ** 2 + zn)) / (1 + zn)


def theorem3_variance_printed(z: complex, n_modes: int) -> float:
    """Published variant with ``Re z`` in the numerator (disagrees for N >= 2)."""
    z = complex(z)
    n = n_modes
    return (n * n * (1 - abs(z) ** 2) + n * (abs(z) ** 2 + z.real)) / (1 + (z**n).real)


@dataclass(frozen=True)
class Theorem3Check:
    formula: float
    numeric: float
    deviation: float
    mean: float
    printed: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def theorem3_variance_check(state: GeneralSuperposition, tol: Tolerances = DEFAULT_TOL) -> Theorem3Check:
    """Formula against the variance of the constructed observable in ``|Psi>``."""
    a = theorem3_single(state.phi, state.U, tol)
    mean = superposition_expectation(state, a)
    var = float(superposition_covariance(state, [a])[0, 0])
    f = theorem3_variance(state.z, state.n_modes)
    return Theorem3Check(f, var, abs(f - var), mean, theorem3_variance_printed(state.z, state.n_modes))


# --------------------------------------------------------------------------
# compressions onto two-dimensional subspaces
# --------------------------------------------------------------------------


def compress_observable(O: np.ndarray, basis: tuple[np.ndarray, np.ndarray],
                        tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """2x2 matrix of ``P_K O P_K`` in the orthonormal basis of K."""
    u, v = (np.asarray(b, dtype=complex) for b in basis)
    gram = np.array([[np.vdot(u, u), np.vdot(u, v)], [np.vdot(v, u), np.vdot(v, v)]])
    if np.max(np.abs(gram - np.eye(2))) > tol.num * 10:
        raise ValidationError("subspace basis is not orthonormal")
    k = np.stack([u, v], axis=1)
    return k.conj().T @ O @ k


def ecs_compression_constant(alpha: complex) -> float:
    """``c`` with ``sigma_x = c P_K x(Arg alpha) P_K`` on the cat subspace."""
    a = abs(alpha)
    return math.sqrt(0.5 - 0.5 * math.exp(-4 * a * a)) / a


@dataclass(frozen=True)
class WeakEquivalenceCase:
    """Subspace K, target Pauli ``sigma = P+ - P-`` on K, and unbounded ``O``
    with ``sigma = c P_K O P_K``."""

    name: str
    basis: tuple
    sigma: np.ndarray
    O: np.ndarray
    c: float
    projectors: tuple
    compressed_povm: tuple
    printed_povm: tuple


def _on_k(basis, m2: np.ndarray) -> np.ndarray:
    k = np.stack(basis, axis=1)
    return k @ m2 @ k.conj().T


def weak_equivalence_case(case: str, alpha: complex = 1.0, n: int = 3, dim: int | None = None,
                          tol: Tolerances = DEFAULT_TOL) -> WeakEquivalenceCase:
    """Operators for the ``ecs``, ``fock`` and ``hcs`` subspaces.

    POVMs are returned as full-space operators: the projector pair, the
    compressed-observable pair (consistent with the compression identities),
    and the pair as published.
    """
    case = case.lower()
    if case == "fock":
        d = dim or n + 4
        basis = (fock.basis_state(d, n), fock.basis_state(d, 0))
        pk = np.outer(basis[0], basis[0].conj()) + np.outer(basis[1], basis[1].conj())
        sz = np.diag([1.0, -1.0]).astype(complex)
        nn = fock.number(d) / n
        povm = (pk @ nn @ pk, pk - pk @ nn @ pk)
        proj = (np.outer(basis[0], basis[0].conj()), np.outer(basis[1], basis[1].conj()))
        return WeakEquivalenceCase("fock", basis, sz, 2 * fock.number(d) - n * np.eye(d),
                                   1.0 / n, proj, povm, povm)

    alpha = complex(alpha)
    d = dim or fock.required_dim(abs(alpha) ** 2, floor=40)
    even, odd = fock.cat_state_pair(d, alpha, tol)
    basis = (even, odd)
    pk = np.outer(even, even.conj()) + np.outer(odd, odd.conj())
    a = fock.annihilation(d)
    ad = a.conj().T
    if case == "ecs":
        th = float(np.angle(alpha))
        r = abs(alpha)
        sx = np.array([[0, 1], [1, 0]], dtype=complex)
        x = fock.quadrature(d, th)
        quad2 = (a @ a * np.exp(-2j * th) + ad @ ad * np.exp(2j * th)) / (4 * r * r)
        lin = (a * np.exp(-1j * th) + ad * np.exp(1j * th)) / (4 * r)
        good = math.sqrt(1 - math.exp(-4 * r * r))
        bad = math.sqrt(1 + math.exp(-4 * r * r))
        povm = tuple(pk @ (quad2 + s * good * lin) @ pk for s in (1, -1))
        printed = tuple(pk @ (quad2 + s * bad * lin) @ pk for s in (1, -1))
        proj = tuple(_on_k(basis, (np.eye(2) + s * sx) / 2) for s in (1, -1))
        return WeakEquivalenceCase("ecs", basis, sx, x, ecs_compression_constant(alpha),
                                   proj, povm, printed)
    if case == "hcs":
        re2 = (alpha**2).real
        if abs(re2) < tol.num:
            raise ValidationError("Re(alpha^2) = 0: the compression vanishes")
        sz = np.diag([1.0, -1.0]).astype(complex)
        k = fock.parity(d) @ a @ a
        O = k + k.conj().T
        povm = tuple(pk / 2 + s * pk @ O @ pk / (4 * re2) for s in (1, -1))
        printed = tuple(pk / 2 + s * pk @ O @ pk / (2 * re2) for s in (1, -1))
        proj = (np.outer(even, even.conj()), np.outer(odd, odd.conj()))
        return WeakEquivalenceCase("hcs", basis, sz, O, 1 / (2 * re2), proj, povm, printed)
    raise ValidationError(f"unknown case {case!r}")


@dataclass(frozen=True)
class PovmCheck:
    case: str
    deviation: float
    printed_deviation: float
    compression_deviation: float
    min_variance_gain: float
    samples: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def povm_equivalence_check(case: str, alpha: complex = 1.0, n: int = 3, dim: int | None = None,
                           samples: int = 100, seed: int = 0,
                           tol: Tolerances = DEFAULT_TOL) -> PovmCheck:
    """Compare projector and compressed POVMs on K; test the variance gain.

    ``deviation`` uses the compressed pair consistent with the compression
    identity; ``printed_deviation`` uses the published pair verbatim.
    ``min_variance_gain`` is the smallest ``Var(O) - Var(sigma)/c^2`` over
    random states of K (non-negative when the inequality holds).
    """
    w = weak_equivalence_case(case, alpha, n, dim, tol)

    def dev(pair):
        return max(
            float(np.max(np.abs(compress_observable(p, w.basis, tol) - compress_observable(q, w.basis, tol))))
            for p, q in zip(w.projectors, pair)
        )

    comp = compress_observable(w.O, w.basis, tol)
    comp_dev = float(np.max(np.abs(w.c * comp - w.sigma)))
    rng = np.random.default_rng(seed)
    sigma_full = _on_k(w.basis, w.sigma)
    gains = []
    for _ in range(samples):
        c2 = rng.normal(size=2) + 1j * rng.normal(size=2)
        c2 /= np.linalg.norm(c2)
        vec = c2[0] * w.basis[0] + c2[1] * w.basis[1]
        var_o = float(superposition_free_variance(vec, w.O))
        var_s = float(superposition_free_variance(vec, sigma_full))
        gains.append(var_o - var_s / w.c**2)
    return PovmCheck(w.name, dev(w.compressed_povm), dev(w.printed_povm), comp_dev,
                     float(min(gains)), samples)


def superposition_free_variance(vec: np.ndarray, op: np.ndarray) -> float:
    w = op @ vec
    m = np.vdot(vec, w).real
    return float(np.vdot(w, w).real - m * m)


def sl2_commutator_check(dim: int) -> dict:
    """Deviation of the three published commutators on the low block
    (top quarter of levels excluded)."""
    a = fock.annihilation(dim)
    n = fock.number(dim)
    p = fock.parity(dim)
    k = p @ a @ a
    kd = a.conj().T @ a.conj().T @ p.conj().T
    low = dim - max(1, dim // 4)

    def comm(x, y):
        return x @ y - y @ x

    devs = {
        "[P a^2, a^+2 P^+] = 4n + 2": comm(k, kd) - (4 * n + 2 * np.eye(dim)),
        "[n, P a^2] = -2 P a^2": comm(n, k) + 2 * k,
        "[n, a^+2 P^+] = 2 a^+2 P^+": comm(n, kd) - 2 * kd,
    }
    out = {key: float(np.max(np.abs(m[:low, :low]))) for key, m in devs.items()}
    out["max"] = max(out.values())
    return out
