"""Acceptance suite shared by ``qmacro verify`` and the test-suite.

Each criterion returns a :class:`CriterionResult` made of named checks. A
criterion passes only if every check passes; published expressions that
disagree with the independent oracle are evaluated verbatim and reported as
failing checks next to the corrected companion check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .branch_size import (
    PANELS,
    c_delta,
    caption_unitary,
    delta_window,
    figure_ellipses,
    gaussian_cat_size,
    quadrature_moments_oracle,
)
from .config import DEFAULT_TOL, MAX_DIM, Tolerances
from .ensembles import random_density, random_hermitian, random_pure, random_unitary, rng_from
from .errors import CapacityError, TruncationError
from .fisher import (
    nrf_measure,
    povm_equivalence_check,
    qfi,
    sl2_commutator_check,
    theorem3_observable,
    theorem3_variance,
    theorem3_variance_printed,
)
from .speed_limits import (
    crossing_time,
    derivative_bound_check,
    frowis_gap,
    ml_window,
    nrf_time_ratio,
    rate_bound_check,
    reverse_triangle_check,
    reverse_triangle_window,
    tau_dist,
    tau_dist_ml,
)
from .superposition import (
    GAUSSIAN_CATS,
    GeneralSuperposition,
    NamedState,
    Space,
    StateName,
    build_superposition,
    gaussian_cat_factors,
    named_state,
)


@dataclass
class Check:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), "detail": self.detail}


@dataclass
class CriterionResult:
    number: int
    title: str
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def line(self) -> str:
        failed = [c.name for c in self.checks if not c.passed]
        tail = "" if not failed else "  failing: " + "; ".join(failed)
        return f"AC{self.number} {'PASS' if self.passed else 'FAIL'}  {self.title}{tail}"

    def to_dict(self) -> dict:
        return {
            "criterion": self.number,
            "title": self.title,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }


def _f(x: float) -> float:
    """Round for reports so that output is stable across BLAS builds."""
    x = float(x)
    if not math.isfinite(x) or x == 0:
        return x
    return float(f"{x:.10g}")


# --------------------------------------------------------------------------
# shared ensembles
# --------------------------------------------------------------------------


def qubit_instances(rng: np.random.Generator, count: int = 200, max_modes: int = 8,
                    tol: Tolerances = DEFAULT_TOL) -> list[GeneralSuperposition]:
    out = []
    while len(out) < count:
        phi = random_pure(2, rng)
        U = random_unitary(2, rng)
        n = int(rng.integers(1, max_modes + 1))
        if abs(np.vdot(phi, U @ phi)) > 1 - 1e-6:
            continue
        out.append(build_superposition(phi, U, n, Space.SPIN, tol, name="random_qubit"))
    return out


_FOCK_CHOICES = [StateName.ECS, StateName.HCS, StateName.PSI0, StateName.PSI1,
                 StateName.PSI2_PLUS, StateName.PSI2_MINUS]


def fock_instances(rng: np.random.Generator, count: int = 20,
                   tol: Tolerances = DEFAULT_TOL) -> list[GeneralSuperposition]:
    """Named Fock superpositions with N <= 3 and D <= 40 (D^N within capacity)."""
    out = []
    while len(out) < count:
        n_modes = int(rng.integers(1, 4))
        dim = 40 if n_modes <= 2 else int(math.floor(MAX_DIM ** (1 / 3)))
        if n_modes == 3:
            name = [StateName.ECS, StateName.HCS][int(rng.integers(0, 2))]
        else:
            name = _FOCK_CHOICES[int(rng.integers(0, len(_FOCK_CHOICES)))]
        alpha = float(rng.uniform(0.3, 1.0 if name in (StateName.ECS, StateName.HCS) else 0.7))
        xi = float(rng.uniform(0.0, 0.3)) if name in GAUSSIAN_CATS else 0.0
        try:
            s = named_state(NamedState(name, n_modes, alpha, xi, dim=dim), tol)
        except (TruncationError, CapacityError):
            continue
        if s.local_dim > 40 or s.local_dim**n_modes > MAX_DIM:
            continue
        out.append(s)
    return out


def _pick_delta(state: GeneralSuperposition, rng: np.random.Generator, tol: Tolerances) -> float:
    a = state.z_abs
    if a <= tol.degen:
        return 0.0
    w = delta_window(a, state.n_modes)
    return float(rng.uniform(w.lower, w.upper))


# --------------------------------------------------------------------------
# 1. n_eff and C_delta against explicit reduced states
# --------------------------------------------------------------------------


def criterion_1(seed: int, tol: Tolerances = DEFAULT_TOL) -> CriterionResult:
    rng = rng_from(seed)
    checks = []
    for label, states in (("qubit", qubit_instances(rng, 200, 8, tol)),
                          ("fock", fock_instances(rng, 20, tol))):
        mismatches, cdev, count = 0, 0.0, 0
        for s in states:
            delta = _pick_delta(s, rng, tol)
            rep = c_delta(s, delta, oracle=True, tol=tol)
            if rep.oracle_n_eff != rep.n_eff:
                mismatches += 1
            if delta > 0:
                # |z| from the explicit N-mode branch overlap, independent of s.z
                a, b = s.branches()
                za = abs(np.vdot(a, b)) ** (1.0 / s.n_modes)
                ref = 2 * s.n_modes * math.log(za) / math.log(4 * delta - 4 * delta**2)
                cdev = max(cdev, abs(rep.c_delta - ref) / max(1.0, abs(ref)))
            count += 1
        checks.append(Check(f"{label}: n_eff formula equals brute-force n-RDM scan",
                            mismatches == 0, {"instances": count, "mismatches": mismatches}))
        checks.append(Check(f"{label}: C_delta equals 2N log|z| / log(4d-4d^2) to 1e-10",
                            cdev <= 1e-10, {"max_relative_deviation": _f(cdev)}))
    return CriterionResult(1, "branch-distinguishability size vs n-RDM oracle", checks)


# --------------------------------------------------------------------------
# 2. observable with N^2 variance
# --------------------------------------------------------------------------


def _dense_moments(state: GeneralSuperposition, tol: Tolerances) -> tuple[float, float]:
    psi = state.psi()
    A = theorem3_observable(state.phi, state.U, state.n_modes, tol)
    w = A.apply(psi)
    mean = np.vdot(psi, w).real
    return float(mean), float(np.vdot(w, w).real - mean**2)


def criterion_2(seed: int, tol: Tolerances = DEFAULT_TOL) -> CriterionResult:
    rng = rng_from(seed)
    states = qubit_instances(rng, 200, 8, tol) + fock_instances(rng, 20, tol)
    dev_corr = dev_print = max_mean = 0.0
    for s in states:
        mean, var = _dense_moments(s, tol)
        dev_corr = max(dev_corr, abs(theorem3_variance(s.z, s.n_modes) - var))
        dev_print = max(dev_print, abs(theorem3_variance_printed(s.z, s.n_modes) - var))
        max_mean = max(max_mean, abs(mean))

    # endpoints: orthogonal branches give N^2, nearly identical branches give N
    end = []
    for n in (2, 4, 6):
        ghz = named_state(NamedState(StateName.GHZ, n), tol)
        _, v0 = _dense_moments(ghz, tol)
        eps = 1e-5
        u = np.array([[math.cos(eps), -math.sin(eps)], [math.sin(eps), math.cos(eps)]], dtype=complex)
        near = build_superposition(np.array([1, 0], dtype=complex), u, n, Space.SPIN, tol)
        _, v1 = _dense_moments(near, tol)
        end.append((n, v0, v1))
    end_dev = max(max(abs(v0 - n * n), abs(v1 - n)) for n, v0, v1 in end)

    return CriterionResult(2, "1-local observable variance and mean", [
        Check("published variance formula (Re z in numerator) matches direct variance to 1e-9",
              dev_print <= 1e-9, {"max_abs_deviation": _f(dev_print), "instances": len(states)}),
        Check("companion: formula with Re z^N matches direct variance to 1e-9",
              dev_corr <= 1e-9, {"max_abs_deviation": _f(dev_corr)}),
        Check("<Psi|A|Psi> = 0 to 1e-10", max_mean <= 1e-10, {"max_abs_mean": _f(max_mean)}),
        Check("endpoints: N^2 at z = 0 and N as |z| -> 1", end_dev <= 1e-6,
              {"points": [[n, _f(v0), _f(v1)] for n, v0, v1 in end], "max_deviation": _f(end_dev)}),
    ])


# --------------------------------------------------------------------------
# 3. distinguishability times
# --------------------------------------------------------------------------


def _random_rho(rng: np.random.Generator, dim: int) -> np.ndarray:
    if rng.random() < 0.4:
        return random_pure(dim, rng)
    return random_density(dim, rng, rank=int(rng.integers(1, dim + 1)))


def criterion_3(seed: int, tol: Tolerances = DEFAULT_TOL) -> CriterionResult:
    rng = rng_from(seed)
    eps = 1e-8
    viol_mt = viol_ml = applicable = crossed = 0
    outside_claim_viol = wide_viol = 0
    worst_mt = worst_ml = math.inf
    worst_gap = math.inf
    limit_dev = 0.0
    for _ in range(500):
        d = int(rng.integers(2, 5))
        rho, H = _random_rho(rng, d), random_hermitian(d, rng)
        delta = float(rng.uniform(0.01, 0.49))
        tc = crossing_time(rho, H, delta, tol=tol)
        td, tm, win = tau_dist(rho, H, delta, tol), tau_dist_ml(rho, H, delta, tol), ml_window(H, tol)
        f = qfi(rho, H, tol)
        if tc is not None:
            crossed += 1
            worst_mt = min(worst_mt, tc - td)
            viol_mt += tc < td - eps
            if tc <= win:
                applicable += 1
                worst_ml = min(worst_ml, tc - tm)
                viol_ml += tc < tm - eps
            elif tc < tm - eps:
                outside_claim_viol += 1
                wide_viol += tc <= math.pi * win
        if f > tol.num:
            limit_dev = max(limit_dev, abs(tau_dist(rho, H, 1e-16, tol) - math.pi / math.sqrt(f)))
            for t in np.linspace(0.0, math.pi / math.sqrt(f), 12):
                worst_gap = min(worst_gap, frowis_gap(rho, H, float(t), tol))
    return CriterionResult(3, "distinguishability-time bounds", [
        Check("crossing time >= tau_dist (500 instances)", viol_mt == 0,
              {"crossed": crossed, "violations": viol_mt, "min_margin": _f(worst_mt)}),
        Check("crossing time >= tau_dist_ml (shifted) on every crossed instance",
              viol_ml + outside_claim_viol == 0,
              {"crossed": crossed, "violations": viol_ml + outside_claim_viol,
               "violations_with_t_le_pi_over_max_E": wide_viol}),
        Check("crossing time >= tau_dist_ml inside t <= 1/max(E - E_min)", viol_ml == 0,
              {"applicable": applicable, "violations": viol_ml, "min_margin": _f(worst_ml),
               "violations_outside_window": outside_claim_viol,
               "violations_with_t_le_pi_over_max_E": wide_viol}),
        Check("tau_dist(delta -> 0+) = pi / sqrt(F) to 1e-6", limit_dev <= 1e-6,
              {"max_deviation": _f(limit_dev)}),
        Check("Frowis gap >= -1e-9 for sqrt(F) t in [0, pi]", worst_gap >= -1e-9,
              {"min_gap": _f(worst_gap)}),
    ])


# --------------------------------------------------------------------------
# 4. rate, reverse-triangle and derivative bounds
# --------------------------------------------------------------------------


def criterion_4(seed: int, tol: Tolerances = DEFAULT_TOL) -> CriterionResult:
    rng = rng_from(seed)
    rate_fail, rate_ratio = 0, []
    for _ in range(200):
        d = int(rng.integers(2, 6))
        chk = rate_bound_check(random_pure(d, rng), random_hermitian(d, rng),
                               float(rng.uniform(0.01, 0.49)), int(rng.integers(1, 9)), tol)
        rate_fail += not chk.satisfied
        rate_ratio.append(chk.lhs / chk.rhs)

    tri_fail, tri_min = 0, math.inf
    for _ in range(200):
        d = int(rng.integers(2, 5))
        ra, rb = _random_rho(rng, d), _random_rho(rng, d)
        ha, hb = random_hermitian(d, rng), random_hermitian(d, rng)
        t = float(rng.uniform(0, 1)) * reverse_triangle_window(ra, ha, rb, hb, tol)
        chk = reverse_triangle_check(ra, ha, rb, hb, t, tol)
        tri_fail += not chk.satisfied
        tri_min = min(tri_min, chk.rhs - chk.lhs)

    der_fail, eq_dev, der_min = 0, 0.0, math.inf
    for i in range(200):
        d = int(rng.integers(2, 5))
        pure = i % 2 == 0
        make = (lambda: random_pure(d, rng)) if pure else (lambda: _random_rho(rng, d))
        ra, rb = make(), make()
        chk = derivative_bound_check(ra, random_hermitian(d, rng), rb, random_hermitian(d, rng), tol)
        der_fail += not chk.satisfied
        der_min = min(der_min, chk.fisher_rhs - chk.dp_dt)
        if chk.pure_equality_deviation is not None:
            eq_dev = max(eq_dev, chk.pure_equality_deviation)

    return CriterionResult(4, "rate, reverse-triangle and derivative bounds", [
        Check("size growth rate <= sigma_H within stencil error (200)", rate_fail == 0,
              {"failures": rate_fail, "max_lhs_over_rhs": _f(max(rate_ratio))}),
        Check("reverse triangle inequality (200)", tri_fail == 0,
              {"failures": tri_fail, "min_slack": _f(tri_min)}),
        Check("|dp/dt| <= fisher_rhs <= variance_rhs (200)", der_fail == 0,
              {"failures": der_fail, "min_slack": _f(der_min)}),
        Check("pure inputs: fisher_rhs = variance_rhs to 1e-8", eq_dev <= 1e-8,
              {"max_deviation": _f(eq_dev)}),
    ])


# --------------------------------------------------------------------------
# 5. relative Fisher sizes of the example states
# --------------------------------------------------------------------------


def fock_ghz_printed(n: int, n_modes: int) -> float:
    return n_modes * n / (4 * (1 + 1 / n)) + 0.5


def ecs_printed_bound(n_modes: int, alpha: float) -> float:
    x = n_modes * alpha**2
    return x * math.tanh(x) + alpha**2 + 1 / (2 * n_modes)


HCS_GRID = [(n, a) for n in (2, 3) for a in (2.0, 2.5, 3.0)]


def criterion_5(seed: int, tol: Tolerances = DEFAULT_TOL) -> CriterionResult:
    rows, lit_dev, sum_dev = [], 0.0, 0.0
    for n in (3, 4, 5):
        for N in (2, 3):
            r = nrf_measure(named_state(NamedState(StateName.FOCK_GHZ, N, n=n), tol), "h4", tol=tol)
            printed = fock_ghz_printed(n, N)
            to_sum = r.nf_superposition / (r.nf_branch1 + r.nf_branch2)
            lit_dev = max(lit_dev, abs(r.nrf - printed))
            sum_dev = max(sum_dev, abs(to_sum - printed))
            rows.append([n, N, _f(r.nrf), _f(printed), _f(to_sum)])

    ecs_rows, ecs_ok = [], True
    for N in (2, 3, 4):
        for a in (0.5, 1.0, 1.5):
            r = nrf_measure(named_state(NamedState(StateName.ECS, N, a), tol), "h3", tol=tol)
            b = ecs_printed_bound(N, a)
            ecs_ok &= r.nrf >= b - tol.num
            ecs_rows.append([N, a, _f(r.nrf), _f(b)])

    xs, ys = [], []
    for N, a in HCS_GRID:
        r = nrf_measure(named_state(NamedState(StateName.HCS, N, a), tol), "sl2", tol=tol)
        xs.append(math.log(N * a * a))
        ys.append(math.log(r.nrf))
    slope = float(np.polyfit(xs, ys, 1)[0])

    return CriterionResult(5, "relative Fisher size of the example states", [
        Check("FockGHZ h4: nrf equals Nn/(4(1+1/n)) + 1/2 to 1e-6", lit_dev <= 1e-6,
              {"max_abs_deviation": _f(lit_dev),
               "rows[n, N, nrf, published, N^F(Psi)/(N^F(b1)+N^F(b2))]": rows}),
        Check("companion: published value equals N^F(Psi) over the sum of branch N^F",
              sum_dev <= 1e-6, {"max_abs_deviation": _f(sum_dev)}),
        Check("ECS h3: nrf >= N a^2 tanh(N a^2) + a^2 + 1/(2N)", bool(ecs_ok),
              {"rows[N, alpha, nrf, bound]": ecs_rows}),
        Check("HCS sl2: fitted exponent vs N|alpha|^2 in [0.9, 1.1]", 0.9 <= slope <= 1.1,
              {"exponent": _f(slope), "grid[N, alpha]": [list(g) for g in HCS_GRID]}),
    ])


# --------------------------------------------------------------------------
# 6. two-level compressions
# --------------------------------------------------------------------------


def criterion_6(seed: int, tol: Tolerances = DEFAULT_TOL) -> CriterionResult:
    checks = []
    for case, kw in (("fock", {"n": 3}), ("ecs", {"alpha": 1.0, "dim": 40}),
                     ("hcs", {"alpha": 1.0, "dim": 40})):
        r = povm_equivalence_check(case, samples=100, seed=seed, tol=tol, **kw)
        checks.append(Check(f"{case}: published POVM pair reproduces the projectors to 1e-8",
                            r.printed_deviation <= 1e-8, {"deviation": _f(r.printed_deviation)}))
        if case != "fock":
            checks.append(Check(f"{case}: companion corrected POVM pair to 1e-8", r.deviation <= 1e-8,
                                {"deviation": _f(r.deviation)}))
        checks.append(Check(f"{case}: compression c P_K O P_K = sigma to 1e-8",
                            r.compression_deviation <= 1e-8, {"deviation": _f(r.compression_deviation)}))
        checks.append(Check(f"{case}: Var(O) >= Var(sigma)/c^2 on 100 random states of K",
                            r.min_variance_gain >= -1e-9, {"min_gain": _f(r.min_variance_gain)}))
    comm = sl2_commutator_check(40)
    checks.append(Check("sl2 commutators on the low block (D = 40) to 1e-8", comm["max"] <= 1e-8,
                        {k: _f(v) for k, v in comm.items()}))
    return CriterionResult(6, "two-level compressions and sl2 algebra", checks)


# --------------------------------------------------------------------------
# 7. N^rF as a ratio of distinguishability times
# --------------------------------------------------------------------------

TIME_RATIO_STATES = [
    (NamedState(StateName.GHZ, 4), "qubit"),
    (NamedState(StateName.ECS, 3, 1.0), "h3"),
    (NamedState(StateName.FOCK_GHZ, 2, n=4), "h4"),
    (NamedState(StateName.HCS, 2, 1.5), "sl2"),
    (NamedState(StateName.PSI0, 2, 0.5, 0.3), "h3"),
    (NamedState(StateName.PSI1, 2, 0.5, 0.3), "h3"),
    (NamedState(StateName.PSI2_PLUS, 2, 0.5, 0.3), "h3"),
    (NamedState(StateName.PSI2_MINUS, 2, 0.5, 0.3), "h3"),
    (NamedState(StateName.ITERATED_SD, 2, 0.5, 0.3), "h3"),
]


def criterion_7(seed: int, tol: Tolerances = DEFAULT_TOL) -> CriterionResult:
    rows, worst = [], 0.0
    for spec, fam in TIME_RATIO_STATES:
        s = named_state(spec, tol)
        ref = nrf_measure(s, fam, tol=tol).nrf
        vals = [nrf_time_ratio(s, fam, d, tol).ratio for d in (0.05, 0.1, 0.25)]
        dev = max(abs(v - ref) / max(1.0, abs(ref)) for v in vals)
        worst = max(worst, dev)
        rows.append([spec.name.value, fam, _f(ref), [_f(v) for v in vals]])
    return CriterionResult(7, "nrf as squared ratio of distinguishability times", [
        Check("time ratio equals nrf_measure to 1e-8 for delta in {0.05, 0.1, 0.25}", worst <= 1e-8,
              {"max_relative_deviation": _f(worst), "rows[state, family, nrf, ratios]": rows}),
    ])


# --------------------------------------------------------------------------
# 8. squeezed / displaced cats and the phase-space figure
# --------------------------------------------------------------------------


def caption_table(alpha: float, xi: float) -> dict[str, tuple[float, float, float]]:
    """Branch centers and axes read off the figure caption."""
    e = math.exp
    return {
        "a": (-alpha * (1 + e(2 * xi)), e(-4 * xi), e(4 * xi)),
        "b": (-alpha * (1 + e(2 * xi)), e(4 * xi), e(-4 * xi)),
        "c": (-2 * alpha * e(xi), 0.5, 0.5),
        "d": (-2 * alpha * e(-xi), e(4 * xi), e(-4 * xi)),
    }


def criterion_8(seed: int, tol: Tolerances = DEFAULT_TOL) -> CriterionResult:
    worst, rows = 0.0, []
    for name in GAUSSIAN_CATS:
        for a in (0.25, 0.5, 1.0):
            for xi in (0.0, 0.2, 0.5):
                for N in (1, 2, 4):
                    r = gaussian_cat_size(name, a, xi, N, tol=tol)
                    worst = max(worst, r.oracle_relative_deviation)
                    if N == 2 and a == 0.5:
                        rows.append([name.value, xi, _f(r.c_tilde), _f(r.c_tilde_printed),
                                     _f(r.ratio_printed)])
    alpha, xi = 0.5, 0.3
    recs = figure_ellipses(alpha, xi)
    cap = caption_table(alpha, xi)
    fig_dev, mom_dev = 0.0, 0.0
    for panel in PANELS:
        vac, br = [r for r in recs if r.label.startswith(panel + "_")]
        cx, su, sv = cap[panel]
        fig_dev = max(fig_dev, abs(vac.cx), abs(vac.cp), abs(vac.semi_u - 0.5), abs(vac.semi_v - 0.5),
                      abs(br.cx - cx), abs(br.cp), abs(br.semi_u - su), abs(br.semi_v - sv))
        eta, _ = caption_unitary(PANELS[panel], alpha, xi)
        _, beta = gaussian_cat_factors(PANELS[panel], alpha, xi)
        mo = quadrature_moments_oracle(eta, float(np.real(beta)))
        mom_dev = max(mom_dev, *(abs(x - y) for x, y in zip(mo, (br.mean_x, br.mean_p, br.var_x, br.var_p))))
    return CriterionResult(8, "squeezed/displaced cats and phase-space panels", [
        Check("first-principles |z| matches truncated-Fock overlap to 1e-6 relative",
              worst <= 1e-6, {"max_relative_deviation": _f(worst), "grid_points": 4 * 27}),
        Check("computed vs published size report generated for all four states", len(rows) == 12,
              {"rows[state, xi, computed, published, ratio] (alpha=0.5, N=2)": rows}),
        Check("eight ellipse records match the caption's centers and axes", len(recs) == 8 and fig_dev <= 1e-12,
              {"max_deviation": _f(fig_dev)}),
        Check("attached quadrature moments match the Fock oracle to 1e-8", mom_dev <= 1e-8,
              {"max_deviation": _f(mom_dev)}),
    ])


# --------------------------------------------------------------------------
# 9. determinism
# --------------------------------------------------------------------------


def criterion_9(seed: int, tol: Tolerances = DEFAULT_TOL,
                runner: Callable[[], bytes] | None = None) -> CriterionResult:
    """Two runs of ``runner`` must agree byte for byte.

    The CLI passes a runner that executes the other criteria; by default a
    cheap seeded computation is repeated.
    """
    if runner is None:
        def runner() -> bytes:
            import json
            res = [criterion_1(seed, tol).to_dict()]
            return json.dumps(res, sort_keys=True).encode()
    a, b = runner(), runner()
    return CriterionResult(9, "deterministic output for a fixed seed", [
        Check("two runs produce byte-identical output", a == b, {"bytes": len(a)}),
    ])


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8,
}


def run_all(seed: int = 7, tol: Tolerances = DEFAULT_TOL,
            only: list[int] | None = None) -> list[CriterionResult]:
    """Criteria 1-8 in order (criterion 9 is a property of this whole run)."""
    keys = sorted(CRITERIA) if only is None else sorted(only)
    return [CRITERIA[k](seed, tol) for k in keys if k in CRITERIA]
