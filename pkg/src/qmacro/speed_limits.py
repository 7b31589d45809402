"""Distinguishability times and the bounds around them (hbar = 1).

A state evolving under ``exp(-i H t)`` becomes distinguishable from its
initial value with probability ``1 - delta`` no earlier than::

    tau_dist    = 2 arcsin(1 - 2 delta) / sqrt(F(rho, H))
    tau_dist_ml = pi (1 - sqrt(1 - (1 - 2 delta)^2)) / (2 <H - E_min>_rho)

The energy form is only claimed for crossings with ``t <= 1 / max(E - E_min)``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq, minimize

from .config import DEFAULT_TOL, Tolerances
from .errors import NumericalError, ValidationError, WindowError
from .fisher import AlgebraBasis, Normalization, _resolve, product_covariance, qfi
from .operators import check_hermitian, to_density
from .superposition import GeneralSuperposition, superposition_covariance


def _check_delta(delta: float, allow_half: bool = True) -> float:
    delta = float(delta)
    hi_ok = delta <= 0.5 if allow_half else delta < 0.5
    if not (delta > 0 and hi_ok):
        raise ValidationError(f"delta must lie in (0, 1/2], got {delta}")
    return delta


def tau_dist(rho: np.ndarray, H: np.ndarray, delta: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """``2 arcsin(1 - 2 delta) / sqrt(F)``; infinite for a stationary state."""
    delta = _check_delta(delta)
    f = qfi(rho, H, tol)
    if f <= tol.num:
        return math.inf
    return 2 * math.asin(1 - 2 * delta) / math.sqrt(f)


def shifted_hamiltonian(H: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, float]:
    """``H - E_min`` and its largest eigenvalue."""
    H = check_hermitian(H, tol)
    w = np.linalg.eigvalsh(H)
    return H - w[0] * np.eye(H.shape[0]), float(w[-1] - w[0])


def tau_dist_ml(rho: np.ndarray, H: np.ndarray, delta: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """Energy-based time with the spectrum shifted to start at zero.

    Every purification gives ``<H (x) I> = tr(rho H)``, so that is the
    energy used.
    """
    delta = _check_delta(delta)
    hs, _ = shifted_hamiltonian(H, tol)
    e = float(np.trace(to_density(rho, tol) @ hs).real)
    if e <= tol.num:
        return math.inf
    return math.pi * (1 - math.sqrt(max(0.0, 1 - (1 - 2 * delta) ** 2))) / (2 * e)


def ml_window(H: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> float:
    """Largest time ``1 / max(E - E_min)`` for which the energy bound is claimed."""
    _, top = shifted_hamiltonian(H, tol)
    return math.inf if top <= tol.num else 1.0 / top


# --------------------------------------------------------------------------
# evolution and crossing times
# --------------------------------------------------------------------------


class Evolution:
    """``rho(t) = exp(-iHt) rho exp(iHt)`` via one eigendecomposition of H."""

    def __init__(self, rho: np.ndarray, H: np.ndarray, tol: Tolerances = DEFAULT_TOL):
        self.rho = to_density(rho, tol)
        self.energies, self.vecs = np.linalg.eigh(check_hermitian(H, tol))
        self.rho_e = self.vecs.conj().T @ self.rho @ self.vecs

    def at(self, times: np.ndarray) -> np.ndarray:
        """Stack of ``rho(t)`` in the energy basis."""
        times = np.atleast_1d(times)
        ph = np.exp(-1j * np.outer(times, self.energies))
        return ph[:, :, None] * self.rho_e[None] * ph[:, None, :].conj()

    def distance(self, times) -> np.ndarray:
        """``||rho - rho(t)||_1`` for each time."""
        diff = self.rho_e[None] - self.at(times)
        return np.sum(np.abs(np.linalg.eigvalsh(diff)), axis=-1)


def crossing_time(
    rho: np.ndarray,
    H: np.ndarray,
    delta: float,
    t_max: float | None = None,
    steps: int = 4000,
    tol: Tolerances = DEFAULT_TOL,
) -> float | None:
    """First time at which ``p(t) = 1/2 + ||rho - rho(t)||_1 / 4`` reaches
    ``1 - delta`` (grid scan then bisection); ``None`` if not reached."""
    delta = _check_delta(delta)
    ev = Evolution(rho, H, tol)
    spread = float(ev.energies[-1] - ev.energies[0])
    if spread <= tol.num:
        return None
    t_max = t_max if t_max is not None else 4 * math.pi / spread
    grid = np.linspace(0.0, t_max, steps + 1)
    target = 2 - 4 * delta  # trace distance at p = 1 - delta
    d = ev.distance(grid) - target
    hit = np.flatnonzero(d >= 0)
    if hit.size == 0:
        return None
    i = int(hit[0])
    if i == 0:
        return 0.0
    f = lambda t: float(ev.distance([t])[0] - target)
    return float(brentq(f, grid[i - 1], grid[i], xtol=1e-14, rtol=1e-15))


def frowis_gap(rho: np.ndarray, H: np.ndarray, t: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """``(1 - ||rho(t) - rho||^2 / 4) - cos^2(sqrt(F) t / 2)``.

    Non-negative for ``sqrt(F) t <= pi``; beyond that the cosine turns back up
    and the comparison is no longer claimed.
    """
    if t < 0:
        raise ValidationError("time must be non-negative")
    f = qfi(rho, H, tol)
    dist = float(Evolution(rho, H, tol).distance([t])[0])
    return (1 - 0.25 * dist**2) - math.cos(math.sqrt(max(f, 0.0)) * t / 2) ** 2


@dataclass
class SpeedLimitReport:
    delta: float
    qfi: float
    tau_dist: float
    tau_dist_ml: float
    ml_window: float
    actual_crossing_time: float | None
    ml_applicable: bool
    bound_satisfied: bool
    gap: float | None
    gap_ml: float | None

    def to_dict(self) -> dict:
        return asdict(self)


def speed_limit_report(rho, H, delta: float, tol: Tolerances = DEFAULT_TOL,
                       t_max: float | None = None) -> SpeedLimitReport:
    """Both times, the measured crossing, and whether the bounds hold.

    ``ml_applicable`` is true when the crossing lies inside the energy-bound
    window; otherwise that bound makes no claim about this crossing.
    """
    f = qfi(rho, H, tol)
    td = tau_dist(rho, H, delta, tol)
    tm = tau_dist_ml(rho, H, delta, tol)
    win = ml_window(H, tol)
    tc = crossing_time(rho, H, delta, t_max=t_max, tol=tol)
    if tc is None:
        return SpeedLimitReport(delta, f, td, tm, win, None, False, True, None, None)
    applicable = tc <= win
    ok = tc >= td - tol.num and (not applicable or tc >= tm - tol.num)
    return SpeedLimitReport(delta, f, td, tm, win, tc, applicable, ok, tc - td,
                            tc - tm if applicable else None)


# --------------------------------------------------------------------------
# finite differences
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Derivative:
    value: float
    error: float


def one_sided_derivative(f: Callable[[float], float], h0: float, levels: int = 6,
                         sign: float = 1.0) -> Derivative:
    """``f'(0+)`` (or ``f'(0-)`` for ``sign=-1``) from the 3-point one-sided
    stencil on halving steps, Richardson-extrapolated. ``error`` is the last
    change of the extrapolated estimate."""
    f0 = f(0.0)
    est = []
    for k in range(levels):
        h = h0 / 2**k
        est.append(sign * (-3 * f0 + 4 * f(sign * h) - f(sign * 2 * h)) / (2 * h))
    table = [est]
    for order in range(1, levels):
        prev = table[-1]
        fac = 2 ** (order + 1)
        table.append([(fac * prev[i + 1] - prev[i]) / (fac - 1) for i in range(len(prev) - 1)])
    best = table[-1][0]
    # error from the two most extrapolated estimates available
    lastrow = table[-2]
    err = abs(lastrow[-1] - lastrow[-2]) if len(lastrow) > 1 else abs(best - est[-1])
    err = max(err, abs(best - table[-2][-1]))
    if not np.isfinite(best):
        raise NumericalError("finite-difference stencil did not converge")
    return Derivative(float(best), float(err))


def _one_minus_fidelity(weights: np.ndarray, energies: np.ndarray, t: float) -> float:
    """``1 - |sum_n p_n e^{-i E_n t}|^2`` without cancellation."""
    d = energies[:, None] - energies[None, :]
    return float(np.sum(weights[:, None] * weights[None, :] * 2 * np.sin(d * t / 2) ** 2))


def _spectral_weights(phi: np.ndarray, H: np.ndarray, tol: Tolerances):
    w, v = np.linalg.eigh(check_hermitian(H, tol))
    return np.abs(v.conj().T @ phi) ** 2, w


def _sigma(phi: np.ndarray, H: np.ndarray) -> float:
    m = np.vdot(phi, H @ phi).real
    return math.sqrt(max(0.0, np.vdot(H @ phi, H @ phi).real - m * m))


@dataclass
class BoundCheck:
    lhs: float
    rhs: float
    error: float
    satisfied: bool

    def to_dict(self) -> dict:
        return asdict(self)


def rate_bound_check(phi: np.ndarray, H: np.ndarray, delta: float, n_modes: int,
                     tol: Tolerances = DEFAULT_TOL, h0: float | None = None) -> BoundCheck:
    """Growth rate of ``sqrt(C_delta(t))`` at ``0+`` against ``sigma_H(phi)``.

    ``lhs = sqrt(-log(4d - 4d^2)) (d sqrt(C_delta)/dt)(0+) / sqrt(N)`` with
    ``C_delta(t) = 2N log|z(t)| / log(4d - 4d^2)`` and ``z(t) = <phi|e^{-iHt}|phi>``.
    """
    delta = _check_delta(delta, allow_half=False)
    phi = np.asarray(phi, dtype=complex)
    p, e = _spectral_weights(phi, H, tol)
    sigma = _sigma(phi, H)
    ld = math.log(4 * delta - 4 * delta**2)
    if sigma <= tol.num:
        return BoundCheck(0.0, sigma, 0.0, True)

    def sqrt_c(t: float) -> float:
        x = _one_minus_fidelity(p, e, abs(t))
        log_abs_z = 0.5 * math.log1p(-x)
        return math.sqrt(max(0.0, 2 * n_modes * log_abs_z / ld))

    h0 = h0 if h0 is not None else 0.05 / max(sigma, float(np.max(np.abs(e - e @ p))))
    d = one_sided_derivative(sqrt_c, h0)
    lhs = math.sqrt(-ld) * d.value / math.sqrt(n_modes)
    err = math.sqrt(-ld) * d.error / math.sqrt(n_modes)
    slack = err + tol.num * max(1.0, sigma)
    return BoundCheck(lhs, sigma, err, lhs <= sigma + slack)


def reverse_triangle_window(rho_a, h_a, rho_b, h_b, tol: Tolerances = DEFAULT_TOL) -> float:
    """Times ``t <= pi / max(sqrt(F_A), sqrt(F_B))`` where each one-state
    distance bound ``||rho - rho(t)|| <= 2 sin(sqrt(F) t / 2)`` applies."""
    top = max(math.sqrt(max(qfi(rho_a, h_a, tol), 0.0)), math.sqrt(max(qfi(rho_b, h_b, tol), 0.0)))
    return math.inf if top <= tol.num else math.pi / top


def reverse_triangle_check(rho_a, h_a, rho_b, h_b, t: float, tol: Tolerances = DEFAULT_TOL) -> BoundCheck:
    """``| ||rA - rB|| - ||rA(t) - rB(t)|| | <= 2 sum_k sin(sqrt(F_k) t / 2)``."""
    win = reverse_triangle_window(rho_a, h_a, rho_b, h_b, tol)
    if not 0 <= t <= win:
        raise WindowError(f"t = {t} outside [0, {win:.6g}] where the bound applies")
    ea, eb = Evolution(rho_a, h_a, tol), Evolution(rho_b, h_b, tol)
    lhs = abs(_pair_distance(ea, eb, 0.0) - _pair_distance(ea, eb, t))
    rhs = sum(2 * math.sin(math.sqrt(max(qfi(r, h, tol), 0.0)) * t / 2)
              for r, h in ((rho_a, h_a), (rho_b, h_b)))
    return BoundCheck(lhs, rhs, 0.0, lhs <= rhs + tol.num)


def _pair_distance(ea: "Evolution", eb: "Evolution", t: float) -> float:
    ra = ea.vecs @ ea.at([t])[0] @ ea.vecs.conj().T
    rb = eb.vecs @ eb.at([t])[0] @ eb.vecs.conj().T
    d = ra - rb
    return float(np.sum(np.abs(np.linalg.eigvalsh((d + d.conj().T) / 2))))


@dataclass
class DerivativeCheck:
    dp_dt: float
    dp_dt_forward: float
    dp_dt_backward: float
    error: float
    fisher_rhs: float
    variance_rhs: float
    pure_equality_deviation: float | None
    satisfied: bool

    def to_dict(self) -> dict:
        return asdict(self)


def derivative_bound_check(rho_a, h_a, rho_b, h_b, tol: Tolerances = DEFAULT_TOL,
                           h0: float | None = None) -> DerivativeCheck:
    """``|dp/dt|_0 <= (sqrt F_A + sqrt F_B)/4 <= (sigma_A + sigma_B)/2``.

    ``p`` is the Helstrom probability of the two independently evolving
    states. Both one-sided derivatives are estimated, since the trace norm
    may have a kink at t = 0.
    """
    ea, eb = Evolution(rho_a, h_a, tol), Evolution(rho_b, h_b, tol)
    if np.max(np.abs(ea.rho - eb.rho)) <= tol.num:
        raise ValidationError("the two states coincide")
    p = lambda t: 0.5 + 0.25 * _pair_distance(ea, eb, t)
    scale = max(np.ptp(ea.energies), np.ptp(eb.energies), 1e-3)
    h0 = h0 if h0 is not None else 0.02 / scale
    fw = one_sided_derivative(p, h0, sign=1.0)
    bw = one_sided_derivative(p, h0, sign=-1.0)
    fa, fb = qfi(rho_a, h_a, tol), qfi(rho_b, h_b, tol)
    fisher_rhs = 0.25 * (math.sqrt(max(fa, 0.0)) + math.sqrt(max(fb, 0.0)))

    def sd(rho, h):
        r = to_density(rho, tol)
        m = np.trace(r @ h).real
        return math.sqrt(max(0.0, np.trace(r @ h @ h).real - m * m))

    variance_rhs = 0.5 * (sd(rho_a, h_a) + sd(rho_b, h_b))
    pure = np.asarray(rho_a).ndim == 1 and np.asarray(rho_b).ndim == 1
    dp = max(abs(fw.value), abs(bw.value))
    err = max(fw.error, bw.error)
    ok = dp <= fisher_rhs + err + tol.num and fisher_rhs <= variance_rhs + tol.num
    return DerivativeCheck(dp, fw.value, bw.value, err, fisher_rhs, variance_rhs,
                           abs(fisher_rhs - variance_rhs) if pure else None, ok)


@dataclass
class FubiniStudyResult:
    ratios: list
    limit: float
    error: float
    ratio_to_printed_element: float

    def to_dict(self) -> dict:
        return asdict(self)


def fubini_study_ratio(phi: np.ndarray, H: np.ndarray, dts: Sequence[float] | None = None,
                       tol: Tolerances = DEFAULT_TOL) -> FubiniStudyResult:
    """``r(dt) = (2p - 1)^2 / (sigma^2 dt^2)`` with ``p`` the Helstrom
    probability of ``phi`` against ``phi(dt)``; the limit is extrapolated in
    ``dt^2``. ``ratio_to_printed_element`` divides ``(2p-1)^2`` by
    ``4 sigma^2 dt^2`` instead."""
    phi = np.asarray(phi, dtype=complex)
    sigma = _sigma(phi, H)
    if sigma <= tol.num:
        raise ValidationError("sigma_H = 0: the state is stationary")
    p, e = _spectral_weights(phi, H, tol)
    if dts is None:
        dts = [0.1 / sigma / 2**k for k in range(6)]
    dts = sorted((float(d) for d in dts), reverse=True)
    ratios = [_one_minus_fidelity(p, e, d) / (sigma * d) ** 2 for d in dts]
    # Richardson in dt^2 assuming geometric ratio between steps
    table = [ratios]
    for _ in range(len(ratios) - 1):
        prev = table[-1]
        new = []
        for i in range(len(prev) - 1):
            q = (dts[i] / dts[i + 1]) ** (2 * len(table))
            new.append((q * prev[i + 1] - prev[i]) / (q - 1))
        table.append(new)
    limit = table[-1][0]
    err = abs(table[-1][0] - table[-2][-1])
    return FubiniStudyResult(ratios, float(limit), float(err), float(limit / 4))


# --------------------------------------------------------------------------
# relative Fisher size as a ratio of distinguishability times
# --------------------------------------------------------------------------


@dataclass
class TimeRatioResult:
    delta: float
    tau_superposition: float
    tau_branch: float
    tau_phi: float
    ratio: float
    ratio_phi_only: float

    def to_dict(self) -> dict:
        return asdict(self)


def _min_time(variance: Callable[[np.ndarray], float], k: int, normalization: Normalization,
              s: float, restarts: int = 8, seed: int = 0) -> float:
    """Minimum of ``s / sqrt(Var)`` over normalized coefficients by direct
    search (independent of the eigen-solution used for N^F)."""
    rng = np.random.default_rng(seed)
    if normalization is Normalization.UNIT_FREQUENCY:
        def coeffs(x):
            c = np.zeros(k)
            c[0], c[1], c[2] = 1.0, math.cos(x[0]), math.sin(x[0])
            return c
        starts = [np.array([t]) for t in np.linspace(0, 2 * math.pi, restarts, endpoint=False)]
    else:
        def coeffs(x):
            return x / np.linalg.norm(x)
        starts = [rng.normal(size=k) for _ in range(restarts)]

    def obj(x):
        v = variance(coeffs(x))
        return -v

    best = -math.inf
    for x0 in starts:
        res = minimize(obj, x0, method="BFGS", options={"gtol": 1e-12, "maxiter": 2000})
        best = max(best, -res.fun)
    if best <= 0:
        return math.inf
    return s / math.sqrt(best)


def nrf_time_ratio(state: GeneralSuperposition, family, delta: float,
                   tol: Tolerances = DEFAULT_TOL) -> TimeRatioResult:
    """``(tau_branch / tau_Psi)^2`` with each time minimized over the family.

    The branch time uses the mean of the two branch maximal variances, which
    matches the mean-of-branches denominator of N^rF for any family; with
    branches of equal maximal variance it is the time of ``|Phi>`` alone
    (also reported as ``ratio_phi_only``).
    """
    delta = _check_delta(delta)
    fam: AlgebraBasis = _resolve(family, state.local_dim)
    k = len(fam.ops)
    s = math.asin(1 - 2 * delta)
    s = s if s > 0 else 1.0  # delta = 1/2: the arcsin factor cancels in the limit
    c_psi = superposition_covariance(state, fam.ops)
    c_phi = product_covariance(state.phi, fam.ops, state.n_modes)
    c_chi = product_covariance(state.chi, fam.ops, state.n_modes)
    var = lambda C: (lambda c: float(c @ C @ c))
    t_psi = _min_time(var(c_psi), k, fam.normalization, s)
    t_phi = _min_time(var(c_phi), k, fam.normalization, s)
    t_chi = _min_time(var(c_chi), k, fam.normalization, s)
    mean_var = 0.5 * (s**2 / t_phi**2 + s**2 / t_chi**2)
    t_branch = s / math.sqrt(mean_var)
    return TimeRatioResult(delta, t_psi, t_branch, t_phi, (t_branch / t_psi) ** 2,
                           (t_phi / t_psi) ** 2)
