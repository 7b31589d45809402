"""Two-branch superpositions ``(I + U^{(x)N}) |phi>^{(x)N}`` and named examples.

A :class:`GeneralSuperposition` keeps the single-mode data (phi, U) and only
realizes N-mode vectors on request. Moments of identical 1-local observables
are evaluated from single-mode matrix elements, so they are available far
beyond the dense capacity cap.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import fock
from .config import DEFAULT_TOL, MAX_DIM, Tolerances
from .errors import (
    CapacityError,
    DegenerateSuperpositionError,
    TruncationError,
    ValidationError,
)
from .operators import check_pure, check_unitary, reduced_trace_norm_pure, tensor_power

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class Space(str, enum.Enum):
    SPIN = "spin"
    FOCK = "fock"


@dataclass(frozen=True, eq=False)
class GeneralSuperposition:
    """``|Psi> = (|phi>^N + (U|phi>)^N) / sqrt(2 + 2 Re z^N)`` with ``z = <phi|U|phi>``.

    ``z_exact`` holds a closed-form overlap when the state came from a named
    factory; ``z`` is always the numerical inner product at the stored
    truncation.
    """

    phi: np.ndarray
    U: np.ndarray
    n_modes: int
    z: complex
    space: Space = Space.SPIN
    name: str = "custom"
    params: dict = field(default_factory=dict)
    z_exact: complex | None = None
    certificate: fock.ConvergenceCertificate | None = None

    @property
    def local_dim(self) -> int:
        return self.phi.shape[0]

    @property
    def dim(self) -> int:
        return self.local_dim**self.n_modes

    @property
    def z_abs(self) -> float:
        """|z|, preferring the closed form when one is known."""
        return abs(self.z_exact if self.z_exact is not None else self.z)

    @property
    def branch_overlap(self) -> complex:
        """N-mode branch overlap ``z^N``."""
        return self.z**self.n_modes

    @property
    def norm_sq(self) -> float:
        return float(2.0 + 2.0 * (self.z**self.n_modes).real)

    @property
    def chi(self) -> np.ndarray:
        """Second-branch single-mode state ``U|phi>``."""
        return self.U @ self.phi

    def branches(self, max_dim: int = MAX_DIM) -> tuple[np.ndarray, np.ndarray]:
        """Realized normalized branch vectors ``|Phi>`` and ``V|Phi>``."""
        if self.dim > max_dim:
            raise CapacityError(
                f"{self.n_modes} modes of dimension {self.local_dim} exceed cap {max_dim}"
            )
        return tensor_power(self.phi, self.n_modes, max_dim), tensor_power(
            self.chi, self.n_modes, max_dim
        )

    def psi(self, max_dim: int = MAX_DIM) -> np.ndarray:
        a, b = self.branches(max_dim)
        return (a + b) / math.sqrt(self.norm_sq)

    def describe(self) -> dict:
        return {
            "name": self.name,
            "space": self.space.value,
            "modes": self.n_modes,
            "local_dim": self.local_dim,
            "params": {k: _jsonable(v) for k, v in self.params.items()},
            "z": _jsonable(self.z),
            "z_abs": self.z_abs,
            "z_closed_form": None if self.z_exact is None else _jsonable(self.z_exact),
            "truncation": None if self.certificate is None else self.certificate.to_dict(),
        }


def _jsonable(v):
    if isinstance(v, (complex, np.complexfloating)):
        v = complex(v)
        return v.real if v.imag == 0 else {"re": v.real, "im": v.imag}
    if isinstance(v, np.generic):
        return v.item()
    if isinstance(v, enum.Enum):
        return v.value
    return v


def overlap_z(phi: np.ndarray, U: np.ndarray) -> complex:
    return complex(np.vdot(phi, U @ phi))


def build_superposition(
    phi: np.ndarray,
    U: np.ndarray,
    n_modes: int,
    space: Space | str = Space.SPIN,
    tol: Tolerances = DEFAULT_TOL,
    **meta,
) -> GeneralSuperposition:
    phi = check_pure(np.asarray(phi, dtype=complex), tol)
    U = check_unitary(U, tol)
    if U.shape[0] != phi.shape[0]:
        raise ValidationError("phi and U dimensions differ")
    if int(n_modes) < 1:
        raise ValidationError("mode count must be positive")
    z = overlap_z(phi, U)
    if abs(z) > 1 + tol.num:
        raise ValidationError(f"|z| = {abs(z)} exceeds 1")
    if 1 - abs(z) <= tol.degen:
        raise DegenerateSuperpositionError("U|phi> equals |phi> up to a phase (|z| = 1)")
    if 2 + 2 * (z**n_modes).real <= tol.degen:
        raise DegenerateSuperpositionError("branches cancel (z^N = -1)")
    return GeneralSuperposition(phi, U, int(n_modes), z, Space(space), **meta)


def two_path_reduce(U1: np.ndarray, U2: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``U1^+ U2``: the single-mode unitary of the equivalent canonical form."""
    U1 = check_unitary(U1, tol)
    U2 = check_unitary(U2, tol)
    return U1.conj().T @ U2


# --------------------------------------------------------------------------
# moments of identical 1-local observables
# --------------------------------------------------------------------------


def _pair_terms(x, y, ga, gb, gab, n):
    """``<x^N| G_a G_b |y^N>`` with ``G = sum_i g^(i)``."""
    s = np.vdot(x, y)
    one = n * np.vdot(x, gab @ y) * s ** (n - 1)
    if n < 2:
        return one
    return one + n * (n - 1) * np.vdot(x, ga @ y) * np.vdot(x, gb @ y) * s ** (n - 2)


def _single_terms(x, y, g, n):
    return n * np.vdot(x, g @ y) * np.vdot(x, y) ** (n - 1)


def superposition_covariance(state: GeneralSuperposition, basis: Sequence[np.ndarray]) -> np.ndarray:
    """Symmetrized covariance matrix of ``G_a = sum_i g_a^(i)`` in ``|Psi>``.

    ``C_ab = Re<G_a G_b> - <G_a><G_b>``; the variance of ``sum_a c_a G_a`` for
    real ``c`` is ``c^T C c``.
    """
    vecs = (state.phi, state.chi)
    n = state.n_modes
    norm = state.norm_sq
    k = len(basis)
    mean = np.zeros(k)
    for a, g in enumerate(basis):
        mean[a] = sum(_single_terms(x, y, g, n) for x in vecs for y in vecs).real / norm
    cov = np.zeros((k, k))
    for a in range(k):
        for b in range(a, k):
            gab = basis[a] @ basis[b]
            val = sum(
                _pair_terms(x, y, basis[a], basis[b], gab, n) for x in vecs for y in vecs
            ).real / norm
            cov[a, b] = cov[b, a] = val - mean[a] * mean[b]
    return cov


def product_covariance(vec: np.ndarray, basis: Sequence[np.ndarray], n_modes: int) -> np.ndarray:
    """Covariance of identical 1-local observables in ``|vec>^{(x)N}``: N times single-mode."""
    k = len(basis)
    w = [g @ vec for g in basis]
    mean = np.array([np.vdot(vec, wa).real for wa in w])
    cov = np.array([[np.vdot(w[a], w[b]).real for b in range(k)] for a in range(k)])
    return n_modes * (cov - np.outer(mean, mean))


def superposition_expectation(state: GeneralSuperposition, g: np.ndarray) -> float:
    vecs = (state.phi, state.chi)
    return float(
        sum(_single_terms(x, y, g, state.n_modes) for x in vecs for y in vecs).real / state.norm_sq
    )


# --------------------------------------------------------------------------
# reduced-state distinguishability (brute-force oracle)
# --------------------------------------------------------------------------


def rdm_success_probability(
    state: GeneralSuperposition, n: int, max_dim: int = MAX_DIM
) -> float:
    """Helstrom probability between the n-mode reduced states of the two
    realized branches (the explicit counterpart of the closed form)."""
    if not 1 <= n <= state.n_modes:
        raise ValidationError(f"subsystem size {n} outside 1..{state.n_modes}")
    a, b = state.branches(max_dim)
    dims = [state.local_dim] * state.n_modes
    return 0.5 + 0.25 * reduced_trace_norm_pure(a, b, dims, range(n))


# --------------------------------------------------------------------------
# named states
# --------------------------------------------------------------------------


class StateName(str, enum.Enum):
    GHZ = "ghz"
    ECS = "ecs"
    FOCK_GHZ = "fockghz"
    HCS = "hcs"
    PSI0 = "psi0"
    PSI1 = "psi1"
    PSI2_PLUS = "psi2plus"
    PSI2_MINUS = "psi2minus"
    ITERATED_SD = "iteratedsd"


GAUSSIAN_CATS = (StateName.PSI0, StateName.PSI1, StateName.PSI2_PLUS, StateName.PSI2_MINUS)


@dataclass(frozen=True)
class NamedState:
    name: StateName
    n_modes: int = 2
    alpha: complex = 1.0
    xi: float = 0.0
    n: int = 2
    dim: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "name", StateName(self.name))


def gaussian_cat_factors(name: StateName, alpha: float, xi: float) -> tuple[complex, complex]:
    """``(eta, beta)`` with canonical ``U = S(eta) D(beta)`` for real alpha, xi.

    Branch pairs ``B1, B2`` and ``U = B1^+ B2``:

    * psi0:  S(-xi)D(a),  S(xi)D(-a)   ->  S(2xi)  D(-a(1+e^{2xi}))
    * psi1:  S(xi)D(a),   S(-xi)D(-a)  ->  S(-2xi) D(-a(1+e^{-2xi}))
    * psi2+: D(a)S(xi),   D(-a)S(xi)   ->          D(-2a e^{xi})
    * psi2-: D(a)S(xi),   D(-a)S(-xi)  ->  S(-2xi) D(-2a e^{-xi})
    """
    name = StateName(name)
    a, x = float(np.real(alpha)), float(xi)
    if name is StateName.PSI0:
        return 2 * x, -a * (1 + math.exp(2 * x))
    if name is StateName.PSI1:
        return -2 * x, -a * (1 + math.exp(-2 * x))
    if name is StateName.PSI2_PLUS:
        return 0.0, -2 * a * math.exp(x)
    if name is StateName.PSI2_MINUS:
        return -2 * x, -2 * a * math.exp(-x)
    raise ValidationError(f"{name.value} is not a Gaussian cat")


def gaussian_cat_branch_pair(name: StateName, alpha: float, xi: float):
    """The two branch operator products as lists of ``(kind, arg)``, rightmost last."""
    name = StateName(name)
    a, x = float(np.real(alpha)), float(xi)
    table = {
        StateName.PSI0: ([("S", -x), ("D", a)], [("S", x), ("D", -a)]),
        StateName.PSI1: ([("S", x), ("D", a)], [("S", -x), ("D", -a)]),
        StateName.PSI2_PLUS: ([("D", a), ("S", x)], [("D", -a), ("S", x)]),
        StateName.PSI2_MINUS: ([("D", a), ("S", x)], [("D", -a), ("S", -x)]),
    }
    return table[name]


def _product(dim: int, factors, tol: Tolerances) -> np.ndarray:
    u = np.eye(dim, dtype=complex)
    for kind, arg in factors:
        op = fock.squeeze_operator if kind == "S" else fock.displacement_operator
        u = u @ op(dim, arg, tol, check=False)
    return u


def gaussian_overlap_oracle(
    name: StateName, alpha: float, xi: float, tol: Tolerances = DEFAULT_TOL, dim: int = 40
) -> tuple[complex, fock.ConvergenceCertificate]:
    """``<0|B1^+ B2|0>`` from the two branch states built with truncated
    exponentials, converged by doubling the truncation."""
    b1, b2 = gaussian_cat_branch_pair(name, alpha, xi)

    def value(d: int) -> complex:
        v1 = _product(d, b1, tol)[:, 0]
        v2 = _product(d, b2, tol)[:, 0]
        fock.check_tail(v1, "branch 1", tol)
        fock.check_tail(v2, "branch 2", tol)
        return complex(np.vdot(v1, v2))

    return fock.converge(value, dim, tol)


def iterated_sd_terms(alpha: float, xi: float, rel: float = 1e-12) -> list[float]:
    """Displacements ``alpha e^{k xi} / k!`` of the product factors, truncated
    once a term adds less than ``rel`` relative to the running sum."""
    terms: list[float] = []
    total = 0.0
    k = 0
    while True:
        t = float(alpha) * math.exp(k * xi - math.lgamma(k + 1))
        terms.append(t)
        total += t
        if k > 0 and abs(t) < rel * abs(total):
            return terms
        k += 1
        if k > 1000:
            raise ValidationError("iterated product does not converge")


def iterated_sd_displacement(alpha: float, xi: float) -> float:
    """Collapsed displacement ``alpha exp(e^xi)`` of the infinite product."""
    return float(alpha) * math.exp(math.exp(xi))


def _fock_start(mean: float, dim: int | None) -> int:
    return dim if dim is not None else fock.required_dim(mean)


def _realize(dim0: int, build, tol: Tolerances, max_dim: int = 2048):
    """Call ``build(d)`` on doubling truncations until no TruncationError."""
    d = dim0
    while d <= max_dim:
        try:
            return d, build(d)
        except TruncationError:
            d *= 2
    raise TruncationError(f"state needs truncation above {max_dim}")


def _swap_unitary(dim: int, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Unitary exchanging orthonormal ``u`` and ``v``, identity on the rest."""
    pu, pv = np.outer(u, u.conj()), np.outer(v, v.conj())
    return np.eye(dim) - pu - pv + np.outer(v, u.conj()) + np.outer(u, v.conj())


def named_state(spec: NamedState, tol: Tolerances = DEFAULT_TOL) -> GeneralSuperposition:
    """Canonical ``(phi, U, N)`` form of a named superposition."""
    name, n_modes = spec.name, int(spec.n_modes)
    params = {"alpha": spec.alpha, "xi": spec.xi, "n": spec.n}

    if name is StateName.GHZ:
        return build_superposition(
            np.array([1, 0], dtype=complex), PAULI_X, n_modes, Space.SPIN, tol,
            name=name.value, params={}, z_exact=0.0,
        )

    if name is StateName.ECS:
        alpha = complex(spec.alpha)
        d, phi = _realize(_fock_start(abs(alpha) ** 2, spec.dim),
                          lambda d: fock.coherent_state(d, alpha, tol), tol)
        return build_superposition(
            phi, fock.parity(d), n_modes, Space.FOCK, tol, name=name.value,
            params={"alpha": alpha}, z_exact=math.exp(-2 * abs(alpha) ** 2),
            certificate=fock.ConvergenceCertificate(d, fock.tail_mass(phi), 1),
        )

    if name is StateName.FOCK_GHZ:
        n = int(spec.n)
        d = spec.dim if spec.dim is not None else max(n + 2, int(math.ceil(1.2 * (n + 1))))
        if n < 1 or n >= d:
            raise ValidationError(f"Fock level n={n} must lie in 1..{d - 1}")
        vac, top = fock.basis_state(d, 0), fock.basis_state(d, n)
        return build_superposition(
            vac, _swap_unitary(d, vac, top), n_modes, Space.FOCK, tol,
            name=name.value, params={"n": n}, z_exact=0.0,
        )

    if name is StateName.HCS:
        alpha = complex(spec.alpha)
        d, (even, odd) = _realize(_fock_start(abs(alpha) ** 2, spec.dim),
                                  lambda d: fock.cat_state_pair(d, alpha, tol), tol)
        return build_superposition(
            even, _swap_unitary(d, even, odd), n_modes, Space.FOCK, tol,
            name=name.value, params={"alpha": alpha}, z_exact=0.0,
        )

    if name in GAUSSIAN_CATS:
        alpha, xi = float(np.real(spec.alpha)), float(spec.xi)
        eta, beta = gaussian_cat_factors(name, alpha, xi)
        mean = beta**2 + math.sinh(abs(eta)) ** 2 + beta**2 * math.exp(2 * abs(eta))

        def build(d):
            u = fock.squeeze_operator(d, eta, tol, check=False) @ fock.displacement_operator(
                d, beta, tol, check=False
            )
            fock.check_tail(u[:, 0], f"{name.value} branch", tol)
            return u

        d, U = _realize(_fock_start(mean, spec.dim), build, tol)
        return build_superposition(
            fock.basis_state(d, 0), U, n_modes, Space.FOCK, tol, name=name.value,
            params={"alpha": alpha, "xi": xi, "eta": eta, "beta": beta},
            z_exact=fock.vacuum_element(eta, beta),
            certificate=fock.ConvergenceCertificate(d, fock.tail_mass(U[:, 0]), 1),
        )

    if name is StateName.ITERATED_SD:
        alpha, xi = float(np.real(spec.alpha)), float(spec.xi)
        terms = iterated_sd_terms(alpha, xi)
        beta = iterated_sd_displacement(alpha, xi)

        def build(d):
            u = np.eye(d, dtype=complex)
            for t in terms:
                u = u @ fock.displacement_operator(d, t, tol, check=False)
            fock.check_tail(u[:, 0], "iterated branch", tol)
            return u

        d, U = _realize(_fock_start(beta**2, spec.dim), build, tol)
        return build_superposition(
            fock.basis_state(d, 0), U, n_modes, Space.FOCK, tol, name=name.value,
            params={"alpha": alpha, "xi": xi, "k_max": len(terms) - 1, "beta": beta},
            z_exact=math.exp(-0.5 * beta**2),
        )

    raise ValidationError(f"unknown state {name!r}")
