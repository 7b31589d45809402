from __future__ import annotations

import math

import numpy as np
import pytest

from qmacro.branch_size import (
    brute_force_n_eff,
    c_delta,
    c_delta_value,
    delta_window,
    elementary_particle_count,
    ellipse_csv,
    ellipse_data,
    figure_ellipses,
    gaussian_cat_size,
    n_eff,
    n_mode_success_probability,
    quadrature_moments_oracle,
)
from qmacro.errors import ConventionError, WindowError
from qmacro.superposition import NamedState, build_superposition, named_state


def test_success_probability_endpoints():
    assert n_mode_success_probability(0.0, 3) == 1.0
    assert n_mode_success_probability(1.0, 3) == 0.5
    assert n_mode_success_probability(0.5, 1) == pytest.approx(0.5 + 0.5 * math.sqrt(0.75))


def test_n_eff_exact_boundary():
    # |z| = 0.5, delta from p(2) exactly: the ceiling must not overshoot
    delta = 1 - n_mode_success_probability(0.5, 2)
    assert n_eff(0.5, delta, 4) == 2


def test_n_eff_above_window_and_below_window():
    w = delta_window(0.9, 3)
    assert n_eff(0.9, 0.49, 3) == 1
    with pytest.raises(WindowError, match="window"):
        n_eff(0.9, w.lower / 2, 3)


def test_orthogonal_convention():
    ghz = named_state(NamedState("ghz", 5))
    assert c_delta(ghz, 0.0).c_delta == 5
    with pytest.raises(ConventionError):
        c_delta(ghz, 0.1)
    fg = named_state(NamedState("fockghz", 2, n=4))
    # mean photon number of (|0>^N + |n>^N)/sqrt 2 is N n / 2
    assert elementary_particle_count(fg) == pytest.approx(4.0)
    assert c_delta(fg, 0.0).c_delta == pytest.approx(4.0)


def test_ecs_size():
    s = named_state(NamedState("ecs", 4, 1.0))
    rep = c_delta(s, 0.1)
    assert rep.z_abs == pytest.approx(math.exp(-2))
    assert rep.c_tilde == pytest.approx(16.0)
    assert rep.n_eff == 1 and not rep.in_window


def test_ceiling_formula_matches_rdm_scan(rng):
    for _ in range(25):
        phi = rng.normal(size=2) + 1j * rng.normal(size=2)
        phi /= np.linalg.norm(phi)
        th = rng.uniform(0.2, 1.4)
        U = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]], dtype=complex)
        n = int(rng.integers(2, 8))
        s = build_superposition(phi, U, n)
        w = delta_window(s.z_abs, n)
        delta = float(rng.uniform(w.lower, w.upper))
        rep = c_delta(s, delta, oracle=True)
        assert rep.oracle_n_eff == rep.n_eff
        assert rep.oracle_deviation < 1e-10
        assert rep.c_delta == pytest.approx(c_delta_value(s.z, delta, n), rel=1e-12)


def test_integer_and_continuum_sizes_are_ordered():
    for a in (0.3, 0.7, 0.95):
        for n in (3, 6):
            w = delta_window(a, n)
            d = 0.5 * (w.lower + w.upper)
            assert n / n_eff(a, d, n) <= c_delta_value(a, d, n) + 1e-12


def test_brute_force_helper():
    assert brute_force_n_eff([0.6, 0.8, 0.95], 0.1) == 3
    assert brute_force_n_eff([0.6, 0.8], 0.1) is None


def test_gaussian_report_logs_published_values():
    r = gaussian_cat_size("psi2plus", 0.5, 0.0, 2)
    assert r.c_tilde == pytest.approx(4 * 2 * 0.25)
    assert r.c_tilde_printed == pytest.approx(2 * 0.25)
    assert r.ratio_printed == pytest.approx(4.0)
    assert r.oracle_relative_deviation < 1e-6


def test_xi_zero_limit_is_coherent_cat():
    for name in ("psi0", "psi1", "psi2plus", "psi2minus"):
        r = gaussian_cat_size(name, 0.5, 0.0, 3)
        assert r.c_tilde == pytest.approx(4 * 3 * 0.25)


def test_figure_has_eight_records_and_caption_geometry():
    recs = figure_ellipses(0.5, 0.3)
    assert len(recs) == 8
    c = ellipse_data("psi2plus", 0.5, 0.3)[1]
    assert c.cx == pytest.approx(-2 * 0.5 * math.exp(0.3))
    d = ellipse_data("psi2minus", 0.5, 0.3)[1]
    assert d.cx == pytest.approx(-2 * 0.5 * math.exp(-0.3))
    assert (d.semi_u, d.semi_v) == pytest.approx((math.exp(1.2), math.exp(-1.2)))
    assert ellipse_csv(recs).splitlines()[0].startswith("label,cx,cp,semi_u,semi_v,convention")


def test_ellipse_zero_parameters_are_coincident_circles():
    vac, br = ellipse_data("psi0", 0.0, 0.0)
    assert (br.cx, br.semi_u, br.semi_v) == (0.0, 0.5, 0.5)
    assert (vac.cx, vac.semi_u) == (0.0, 0.5)


def test_ellipse_moments_against_fock():
    rec = ellipse_data("psi0", 0.5, 0.2)[1]
    mo = quadrature_moments_oracle(0.4, -0.5 * (1 + math.exp(0.4)))
    assert np.allclose(mo, (rec.mean_x, rec.mean_p, rec.var_x, rec.var_p), atol=1e-9)
