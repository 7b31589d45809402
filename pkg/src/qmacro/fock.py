"""Truncated single-mode Fock space: ladder/number/parity/quadrature
operators, displacement and squeeze unitaries, coherent, squeezed and cat
states.

Conventions::

    x(theta) = (a e^{-i theta} + a^+ e^{i theta}) / sqrt(2)    (vacuum variance 1/2)
    D(alpha) = exp(alpha a^+ - conj(alpha) a)
    S(xi)    = exp((conj(xi) a^2 - xi a^+2) / 2)

so that for real alpha, xi: S^+(xi) D(alpha) S(xi) = D(alpha e^xi), and a
real positive xi squeezes the x(0) quadrature.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import gammaln

from .config import DEFAULT_TOL, MAX_DIM, Tolerances
from .errors import CapacityError, TruncationError, ValidationError
from .operators import matrix_exponential

TAIL_FRACTION = 0.1


def _check_dim(dim: int) -> int:
    dim = int(dim)
    if dim < 2:
        raise ValidationError(f"Fock truncation must be >= 2, got {dim}")
    return dim


def annihilation(dim: int) -> np.ndarray:
    dim = _check_dim(dim)
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)


def creation(dim: int) -> np.ndarray:
    return annihilation(dim).conj().T


def number(dim: int) -> np.ndarray:
    return np.diag(np.arange(_check_dim(dim), dtype=float)).astype(complex)


def parity(dim: int) -> np.ndarray:
    """``exp(i pi n)``; equal to ``exp(-i pi n)`` since the spectrum is integer."""
    return np.diag((-1.0) ** np.arange(_check_dim(dim))).astype(complex)


def quadrature(dim: int, theta: float = 0.0) -> np.ndarray:
    a = annihilation(dim)
    return (a * np.exp(-1j * theta) + a.conj().T * np.exp(1j * theta)) / math.sqrt(2)


def basis_state(dim: int, n: int) -> np.ndarray:
    dim = _check_dim(dim)
    if not 0 <= n < dim:
        raise ValidationError(f"level {n} outside truncation {dim}")
    v = np.zeros(dim, dtype=complex)
    v[n] = 1.0
    return v


def mode_operator(dim: int, kind: str, theta: float = 0.0) -> np.ndarray:
    """Dispatch by name: annihilation, creation, number, parity, quadrature."""
    table: dict[str, Callable[[], np.ndarray]] = {
        "annihilation": lambda: annihilation(dim),
        "creation": lambda: creation(dim),
        "number": lambda: number(dim),
        "parity": lambda: parity(dim),
        "quadrature": lambda: quadrature(dim, theta),
    }
    try:
        return table[kind]()
    except KeyError:
        raise ValidationError(f"unknown mode operator {kind!r}") from None


# --------------------------------------------------------------------------
# truncation control
# --------------------------------------------------------------------------


def tail_mass(vec: np.ndarray, fraction: float = TAIL_FRACTION) -> float:
    """Probability in the top ``fraction`` of Fock levels (at least one level)."""
    vec = np.asarray(vec)
    k = max(1, int(math.ceil(fraction * vec.shape[0])))
    return float(np.sum(np.abs(vec[-k:]) ** 2))


def check_tail(vec: np.ndarray, what: str, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    mass = tail_mass(vec)
    if mass > tol.tail:
        raise TruncationError(
            f"{what}: tail mass {mass:.2e} > {tol.tail:.0e} at truncation {len(vec)}; "
            f"increase the truncation (try {2 * len(vec)})"
        )
    return vec


@dataclass(frozen=True)
class ConvergenceCertificate:
    """Truncation at which a scalar was accepted, and its change on doubling."""

    dim: int
    change_on_doubling: float
    attempts: int

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "change_on_doubling": self.change_on_doubling,
            "attempts": self.attempts,
        }


def converge(
    fn: Callable[[int], complex | float],
    dim: int = 20,
    tol: Tolerances = DEFAULT_TOL,
    max_dim: int = 2048,
) -> tuple[complex | float, ConvergenceCertificate]:
    """Evaluate ``fn(dim)`` on doubling truncations until it is stable.

    Truncations that raise :class:`TruncationError` are skipped. The value is
    accepted once doubling moves it by less than ``tol.conv``. Reports the
    value at the smaller of the two agreeing truncations.
    """
    dim = _check_dim(dim)
    prev = None
    attempts = 0
    while dim <= max_dim:
        attempts += 1
        try:
            val = fn(dim)
        except TruncationError:
            prev = None
            dim *= 2
            continue
        if prev is not None:
            change = float(np.max(np.abs(np.asarray(val) - np.asarray(prev[1]))))
            if change < tol.conv:
                return prev[1], ConvergenceCertificate(prev[0], change, attempts)
        prev = (dim, val)
        dim *= 2
    raise TruncationError(f"no convergence up to truncation {max_dim}")


# --------------------------------------------------------------------------
# unitaries
# --------------------------------------------------------------------------


def displacement_operator(
    dim: int, alpha: complex, tol: Tolerances = DEFAULT_TOL, check: bool = True
) -> np.ndarray:
    """Truncated ``D(alpha)``; exactly unitary, accurate on the low block."""
    a = annihilation(dim)
    alpha = complex(alpha)
    gen = 1j * (alpha * a.conj().T - alpha.conjugate() * a)
    u = matrix_exponential(gen, -1j, tol)
    if check:
        check_tail(u[:, 0], f"D({alpha:.4g})|0>", tol)
    return u


def squeeze_operator(
    dim: int, xi: complex, tol: Tolerances = DEFAULT_TOL, check: bool = True
) -> np.ndarray:
    """Truncated ``S(xi)``; exactly unitary, accurate on the low block."""
    a = annihilation(dim)
    xi = complex(xi)
    gen = 0.5j * (xi.conjugate() * a @ a - xi * a.conj().T @ a.conj().T)
    u = matrix_exponential(gen, -1j, tol)
    if check:
        check_tail(u[:, 0], f"S({xi:.4g})|0>", tol)
    return u


# --------------------------------------------------------------------------
# states
# --------------------------------------------------------------------------


def coherent_state(dim: int, alpha: complex, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Closed-form ``|alpha>`` amplitudes ``e^{-|alpha|^2/2} alpha^n / sqrt(n!)``."""
    dim = _check_dim(dim)
    alpha = complex(alpha)
    n = np.arange(dim)
    if alpha == 0:
        return basis_state(dim, 0)
    logmag = n * math.log(abs(alpha)) - 0.5 * gammaln(n + 1) - 0.5 * abs(alpha) ** 2
    vec = np.exp(logmag) * np.exp(1j * n * np.angle(alpha))
    return check_tail(vec.astype(complex), f"|{alpha:.4g}>", tol)


def squeezed_vacuum(dim: int, xi: complex, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Closed-form ``S(xi)|0>``.

    ``S(xi)|0> = cosh(r)^{-1/2} sum_m (-e^{i t} tanh r)^m sqrt((2m)!)/(2^m m!) |2m>``
    for ``xi = r e^{i t}``.
    """
    dim = _check_dim(dim)
    xi = complex(xi)
    r, t = abs(xi), np.angle(xi)
    vec = np.zeros(dim, dtype=complex)
    if r == 0:
        vec[0] = 1.0
        return vec
    m = np.arange((dim + 1) // 2)
    logc = (
        m * math.log(math.tanh(r))
        + 0.5 * gammaln(2 * m + 1)
        - m * math.log(2.0)
        - gammaln(m + 1)
        - 0.5 * math.log(math.cosh(r))
    )
    vec[2 * m] = np.exp(logc) * (-np.exp(1j * t)) ** m
    return check_tail(vec, f"S({xi:.4g})|0>", tol)


def cat_state_pair(
    dim: int, alpha: complex, tol: Tolerances = DEFAULT_TOL
) -> tuple[np.ndarray, np.ndarray]:
    """Even and odd cats ``psi_pm ~ |alpha> +- |-alpha>``, each normalized."""
    coh = coherent_state(dim, alpha, tol)
    n = np.arange(dim)
    even = np.where(n % 2 == 0, coh, 0)
    odd = np.where(n % 2 == 1, coh, 0)
    if np.linalg.norm(odd) == 0:
        raise ValidationError("odd cat state undefined for alpha = 0")
    return even / np.linalg.norm(even), odd / np.linalg.norm(odd)


class BranchOrder(str, enum.Enum):
    """Operator applied first to the vacuum (rightmost factor)."""

    SQUEEZE_THEN_DISPLACE = "squeeze_then_displace"  # D(alpha) S(xi) |0>
    DISPLACE_THEN_SQUEEZE = "displace_then_squeeze"  # S(xi) D(alpha) |0>


@dataclass(frozen=True)
class GaussianBranchSpec:
    xi: complex = 0.0
    alpha: complex = 0.0
    order: BranchOrder = BranchOrder.SQUEEZE_THEN_DISPLACE


def gaussian_branch_state(
    dim: int, spec: GaussianBranchSpec, tol: Tolerances = DEFAULT_TOL
) -> np.ndarray:
    """Single-mode Gaussian branch built from a closed-form state and one
    truncated unitary; the result is tail-checked."""
    order = BranchOrder(spec.order)
    if order is BranchOrder.SQUEEZE_THEN_DISPLACE:
        vec = displacement_operator(dim, spec.alpha, tol, check=False) @ squeezed_vacuum(
            dim, spec.xi, tol
        )
    else:
        vec = squeeze_operator(dim, spec.xi, tol, check=False) @ coherent_state(
            dim, spec.alpha, tol
        )
    return check_tail(vec, f"branch {spec}", tol)


def vacuum_element(eta: complex, beta: complex) -> complex:
    """Closed form of ``<0| S(eta) D(beta) |0>``.

    ``= cosh(r)^{-1/2} exp(-|beta|^2/2 + e^{-i t} tanh(r) beta^2 / 2)`` with
    ``eta = r e^{i t}``; it is the overlap of the squeezed vacuum
    ``S(-eta)|0>`` with the coherent state ``|beta>``.
    """
    eta = complex(eta)
    beta = complex(beta)
    r, t = abs(eta), np.angle(eta)
    return complex(
        np.exp(-0.5 * abs(beta) ** 2 + 0.5 * np.exp(-1j * t) * math.tanh(r) * beta**2)
        / math.sqrt(math.cosh(r))
    )


def required_dim(mean_photons: float, floor: int = 20) -> int:
    """Heuristic starting truncation for a state with the given mean photon number."""
    return int(max(floor, math.ceil(4 * mean_photons + 12 * math.sqrt(mean_photons + 1) + 10)))


def check_capacity(dim: int, n_modes: int, max_dim: int = MAX_DIM) -> None:
    if dim**n_modes > max_dim:
        raise CapacityError(f"{n_modes} modes at truncation {dim} exceed dimension cap {max_dim}")
