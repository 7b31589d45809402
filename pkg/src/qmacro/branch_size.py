"""Branch-distinguishability size.

For ``|Psi> ~ |phi>^N + (U|phi>)^N`` the n-mode reduced branch states are
pure products with overlap ``z^n``, so the Helstrom success probability is
``p(n) = 1/2 + 1/2 sqrt(1 - |z|^{2n})``. The size is N divided by the
smallest n reaching ``1 - delta``::

    n_eff   = ceil(log(4 delta - 4 delta^2) / (2 log|z|))
    C_delta = 2 N log|z| / log(4 delta - 4 delta^2)

``C~ = -C_delta log(4 delta - 4 delta^2) = -2 N log|z|`` is the
delta-independent part. Orthogonal branches (z = 0) admit only delta = 0,
where the size is the number of elementary particles.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np

from . import fock
from .config import DEFAULT_TOL, MAX_DIM, Tolerances
from .errors import ConventionError, ValidationError, WindowError
from .superposition import (
    GAUSSIAN_CATS,
    GeneralSuperposition,
    NamedState,
    Space,
    StateName,
    gaussian_cat_factors,
    gaussian_overlap_oracle,
    named_state,
    rdm_success_probability,
    superposition_expectation,
)

SNAP = 1e-12


def n_mode_success_probability(z: complex | float, n: int) -> float:
    if n < 1:
        raise ValidationError("subsystem size must be >= 1")
    a = min(abs(z), 1.0)
    return 0.5 + 0.5 * math.sqrt(max(0.0, 1.0 - a ** (2 * n)))


class DeltaWindow(NamedTuple):
    lower: float
    upper: float
    orthogonal: bool = False

    def contains(self, delta: float) -> bool:
        return self.lower <= delta <= self.upper


def delta_window(z: complex | float, n_modes: int) -> DeltaWindow:
    """Precisions for which ``1 <= n_eff <= N``.

    ``z = 0`` collapses the window to ``{0}`` (flagged ``orthogonal``).
    """
    a = abs(z)
    if a == 0:
        return DeltaWindow(0.0, 0.0, True)
    if a > 1:
        raise ValidationError(f"|z| = {a} exceeds 1")
    lower = 0.5 - 0.5 * math.sqrt(max(0.0, 1 - a ** (2 * n_modes)))
    upper = 0.5 - 0.5 * math.sqrt(max(0.0, 1 - a**2))
    return DeltaWindow(lower, upper)


def _check_delta(delta: float) -> float:
    delta = float(delta)
    if not 0 <= delta < 0.5:
        raise ValidationError(f"delta must lie in [0, 1/2), got {delta}")
    return delta


def n_eff_real(z: complex | float, delta: float) -> float:
    """Unrounded ``log(4d - 4d^2) / (2 log|z|)``."""
    return math.log(4 * delta - 4 * delta**2) / (2 * math.log(abs(z)))


def n_eff(z: complex | float, delta: float, n_modes: int) -> int:
    """Smallest n with ``p(n) >= 1 - delta``.

    Precisions above the window give 1; precisions below it (not even all N
    modes suffice) raise :class:`WindowError`.
    """
    delta = _check_delta(delta)
    a = abs(z)
    if a == 0:
        if delta != 0:
            raise ConventionError("orthogonal branches admit only delta = 0")
        return 1
    if delta == 0:
        raise WindowError("delta = 0 needs orthogonal branches (z = 0)")
    if a >= 1:
        raise ValidationError("identical branches (|z| = 1) are never distinguishable")
    x = n_eff_real(a, delta)
    k = round(x)
    n = int(k) if abs(x - k) < SNAP else math.ceil(x)
    n = max(n, 1)
    if n > n_modes:
        w = delta_window(a, n_modes)
        raise WindowError(
            f"delta = {delta} below the admissible window [{w.lower:.6g}, {w.upper:.6g}] "
            f"for N = {n_modes}: n_eff = {n} > N"
        )
    return n


def brute_force_n_eff(probabilities: list[float], delta: float) -> int | None:
    """First (1-based) n whose success probability reaches ``1 - delta``."""
    for i, p in enumerate(probabilities, start=1):
        if p >= 1 - delta - SNAP:
            return i
    return None


def c_delta_value(z: complex | float, delta: float, n_modes: int) -> float:
    return 2 * n_modes * math.log(abs(z)) / math.log(4 * delta - 4 * delta**2)


def c_tilde_value(z: complex | float, n_modes: int) -> float:
    return -2 * n_modes * math.log(abs(z))


def elementary_particle_count(state: GeneralSuperposition) -> float:
    """Spin systems count modes; Fock systems use the mean total photon number."""
    if state.space is Space.SPIN:
        return float(state.n_modes)
    return superposition_expectation(state, fock.number(state.local_dim))


@dataclass
class SizeReport:
    delta: float
    n_modes: int
    z_abs: float
    convention: str
    c_delta: float
    c_delta_integer: float | None
    c_tilde: float | None
    n_eff: int | None
    in_window: bool
    delta_window: tuple[float, float]
    p_succ_by_n: list[tuple[int, float]]
    convention_note: str
    oracle_deviation: float | None = None
    oracle_n_eff: int | None = None
    state: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["delta_window"] = list(self.delta_window)
        d["p_succ_by_n"] = [list(p) for p in self.p_succ_by_n]
        return d


def c_delta(
    state: GeneralSuperposition,
    delta: float,
    oracle: bool = False,
    tol: Tolerances = DEFAULT_TOL,
    max_dim: int = MAX_DIM,
) -> SizeReport:
    """Size report. ``c_delta`` is the continuum value; ``c_delta_integer``
    is ``N / n_eff``.

    With ``oracle=True`` and a realizable state, p(n) is also obtained from the
    explicit n-mode reduced branch states and the deviation is reported.
    """
    delta = _check_delta(delta)
    n = state.n_modes
    a = state.z_abs
    orth = a <= tol.degen
    window = delta_window(0.0 if orth else a, n)
    probs = [n_mode_success_probability(0.0 if orth else a, k) for k in range(1, n + 1)]

    if orth:
        if delta > 0:
            raise ConventionError(
                "branches are orthogonal (z = 0); the only meaningful precision is delta = 0"
            )
        c0 = elementary_particle_count(state)
        report = SizeReport(
            delta, n, a, "orthogonal", c0, c0, None, 1, True, (0.0, 0.0),
            list(enumerate(probs, 1)),
            "z = 0: size equals the number of elementary particles"
            + (" (modes)" if state.space is Space.SPIN else " (mean total photon number)"),
            state=state.describe(),
        )
    else:
        if delta == 0:
            raise WindowError("delta = 0 needs orthogonal branches (z = 0)")
        k = n_eff(a, delta, n)
        report = SizeReport(
            delta, n, a, "branch_overlap", c_delta_value(a, delta, n), n / k,
            c_tilde_value(a, n), k, window.contains(delta),
            (window.lower, window.upper), list(enumerate(probs, 1)),
            "continuum value 2N log|z| / log(4d - 4d^2); integer value N / n_eff"
            + ("" if window.contains(delta) else "; delta above the window, n_eff = 1"),
            state=state.describe(),
        )

    if oracle:
        brute = [rdm_success_probability(state, k, max_dim) for k in range(1, n + 1)]
        report.oracle_deviation = float(max(abs(p - q) for p, q in zip(probs, brute)))
        report.oracle_n_eff = brute_force_n_eff(brute, delta)
    return report


# --------------------------------------------------------------------------
# squeezed / displaced cats
# --------------------------------------------------------------------------


def gaussian_cat_c_tilde(name: StateName, alpha: float, xi: float, n_modes: int) -> float:
    """``-2N log|z|`` from the closed-form vacuum element of ``S(eta)D(beta)``."""
    eta, beta = gaussian_cat_factors(name, alpha, xi)
    return -2 * n_modes * math.log(abs(fock.vacuum_element(eta, beta)))


def printed_c_tilde(name: StateName, alpha: float, xi: float, n_modes: int) -> float:
    """Published closed forms, evaluated verbatim."""
    name = StateName(name)
    a2, t, lc = alpha**2, math.tanh(2 * xi), math.log(math.cosh(2 * xi))
    if name is StateName.PSI0:
        return n_modes * (a2 * (1 + math.exp(2 * xi)) ** 2 * (1 + t) - lc)
    if name is StateName.PSI1:
        return n_modes * (a2 * (1 + math.exp(-2 * xi)) ** 2 * (1 - t) - lc)
    if name is StateName.PSI2_PLUS:
        return n_modes * a2 * math.exp(2 * xi)
    if name is StateName.PSI2_MINUS:
        return n_modes * (4 * a2 * math.exp(-2 * xi) * (1 - t) - lc)
    raise ValidationError(f"{name.value} is not a Gaussian cat")


def printed_normalization_c_tilde(name: StateName, alpha: float, xi: float, n_modes: int) -> float:
    """``-2 log`` of the overlap term inside the published normalization constants."""
    name = StateName(name)
    a2, t, lc = alpha**2, math.tanh(2 * xi), math.log(math.cosh(2 * xi))
    if name is StateName.PSI0:
        return n_modes * (lc + a2 * (1 + math.exp(-2 * xi)) ** 2 * (1 + t))
    if name is StateName.PSI1:
        return n_modes * (lc + a2 * (1 + math.exp(2 * xi)) ** 2 * (1 - t))
    if name is StateName.PSI2_PLUS:
        return 4 * n_modes * a2 * math.exp(2 * xi)
    if name is StateName.PSI2_MINUS:
        return n_modes * (-lc + 4 * a2 * math.exp(-2 * xi) * (1 - t))
    raise ValidationError(f"{name.value} is not a Gaussian cat")


@dataclass
class GaussianCatReport:
    name: str
    alpha: float
    xi: float
    n_modes: int
    z_abs: float
    z_abs_oracle: float
    oracle_relative_deviation: float
    truncation: dict
    c_tilde: float
    c_tilde_printed: float
    c_tilde_printed_normalization: float
    ratio_printed: float
    ratio_printed_normalization: float
    size: dict | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def _ratio(a: float, b: float) -> float:
    return a / b if b != 0 else (1.0 if a == 0 else math.inf)


def gaussian_cat_size(
    name: StateName | str,
    alpha: float,
    xi: float,
    n_modes: int,
    delta: float | None = None,
    tol: Tolerances = DEFAULT_TOL,
) -> GaussianCatReport:
    """First-principles size of a squeezed/displaced cat, with the truncated-Fock
    overlap as oracle and the published expressions evaluated alongside."""
    name = StateName(name)
    if name not in GAUSSIAN_CATS:
        raise ValidationError(f"{name.value} is not a Gaussian cat")
    alpha, xi = float(alpha), float(xi)
    eta, beta = gaussian_cat_factors(name, alpha, xi)
    za = abs(fock.vacuum_element(eta, beta))
    zo, cert = gaussian_overlap_oracle(name, alpha, xi, tol)
    ct = gaussian_cat_c_tilde(name, alpha, xi, n_modes)
    cp = printed_c_tilde(name, alpha, xi, n_modes)
    cn = printed_normalization_c_tilde(name, alpha, xi, n_modes)
    size = None
    if delta is not None:
        state = named_state(NamedState(name, n_modes, alpha, xi), tol)
        size = c_delta(state, delta, tol=tol).to_dict()
    return GaussianCatReport(
        name.value, alpha, xi, n_modes, za, abs(zo), abs(abs(zo) - za) / za,
        cert.to_dict(), ct, cp, cn, _ratio(ct, cp), _ratio(ct, cn), size,
    )


# --------------------------------------------------------------------------
# phase-space ellipses
# --------------------------------------------------------------------------

PANELS = {
    "a": StateName.PSI0,
    "b": StateName.PSI1,
    "c": StateName.PSI2_PLUS,
    "d": StateName.PSI2_MINUS,
}

CSV_COLUMNS = [
    "label", "cx", "cp", "semi_u", "semi_v", "convention",
    "mean_x", "mean_p", "var_x", "var_p",
]


@dataclass(frozen=True)
class EllipseRecord:
    """One branch ellipse.

    ``cx, cp, semi_u, semi_v`` follow the figure caption: the center is the
    printed displacement argument and the axes are ``e^{+-4 xi}`` for a
    squeeze argument ``+-2 xi``. ``mean_*`` and ``var_*`` are the actual
    quadrature moments of the branch in the ``x(theta)`` convention (vacuum
    variance 1/2).
    """

    label: str
    cx: float
    cp: float
    semi_u: float
    semi_v: float
    convention: str
    mean_x: float
    mean_p: float
    var_x: float
    var_p: float

    def row(self) -> list:
        return [getattr(self, c) for c in CSV_COLUMNS]


def caption_unitary(name: StateName, alpha: float, xi: float) -> tuple[float, float]:
    """``(eta, beta)`` of ``U = S(eta) D(beta)`` as printed in the figure caption."""
    name = StateName(name)
    if name is StateName.PSI1:
        # the caption prints the same displacement as panel a
        return -2 * xi, -alpha * (1 + math.exp(2 * xi))
    return gaussian_cat_factors(name, alpha, xi)


def branch_moments(eta: float, beta: complex) -> tuple[float, float, float, float]:
    """Quadrature means and variances of ``S(eta)D(beta)|0>`` for real eta."""
    mean_a = complex(beta) * math.exp(-eta)
    return (
        math.sqrt(2) * mean_a.real,
        math.sqrt(2) * mean_a.imag,
        0.5 * math.exp(-2 * eta),
        0.5 * math.exp(2 * eta),
    )


def ellipse_data(name: StateName | str, alpha: float, xi: float) -> list[EllipseRecord]:
    """Vacuum branch and transformed branch of ``(I + U)|0>`` for one panel."""
    name = StateName(name)
    panel = next(k for k, v in PANELS.items() if v is name)
    eta, beta = caption_unitary(name, float(alpha), float(xi))
    vac = EllipseRecord(f"{panel}_{name.value}_vacuum", 0.0, 0.0, 0.5, 0.5, "caption",
                        0.0, 0.0, 0.5, 0.5)
    if eta == 0:
        su = sv = 0.5
    else:
        # positive squeeze argument narrows x
        su, sv = math.exp(-2 * eta), math.exp(2 * eta)
    _, beta_true = gaussian_cat_factors(name, float(alpha), float(xi))
    mx, mp, vx, vp = branch_moments(eta, beta_true)
    br = EllipseRecord(f"{panel}_{name.value}_branch", float(beta), 0.0, su, sv, "caption",
                       mx, mp, vx, vp)
    return [vac, br]


def figure_ellipses(alpha: float, xi: float) -> list[EllipseRecord]:
    out: list[EllipseRecord] = []
    for name in PANELS.values():
        out.extend(ellipse_data(name, alpha, xi))
    return out


def ellipse_csv(records: list[EllipseRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow([f"{v:.12g}" if isinstance(v, float) else v for v in r.row()])
    return buf.getvalue()


def quadrature_moments_oracle(eta: float, beta: float, dim: int = 80) -> tuple[float, float, float, float]:
    """Fock-space means and variances of x(0), x(pi/2) in ``S(eta)D(beta)|0>``."""
    v = fock.squeeze_operator(dim, eta, check=False) @ fock.coherent_state(dim, beta)
    fock.check_tail(v, "ellipse branch")
    out = []
    for theta in (0.0, math.pi / 2):
        x = fock.quadrature(dim, theta)
        m = np.vdot(v, x @ v).real
        out.append((m, np.vdot(x @ v, x @ v).real - m**2))
    return out[0][0], out[1][0], out[0][1], out[1][1]
