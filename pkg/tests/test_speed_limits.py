from __future__ import annotations

import math

import numpy as np
import pytest

from qmacro import fock
from qmacro.errors import ValidationError, WindowError
from qmacro.fisher import nrf_measure
from qmacro.speed_limits import (
    crossing_time,
    derivative_bound_check,
    frowis_gap,
    fubini_study_ratio,
    ml_window,
    nrf_time_ratio,
    rate_bound_check,
    reverse_triangle_check,
    reverse_triangle_window,
    speed_limit_report,
    tau_dist,
    tau_dist_ml,
)
from qmacro.superposition import NamedState, named_state

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.diag([1.0, -1.0]).astype(complex)
ZERO = np.array([1, 0], dtype=complex)
ONE = np.array([0, 1], dtype=complex)
PLUS = np.array([1, 1], dtype=complex) / math.sqrt(2)


def test_qubit_time_is_saturated():
    r = speed_limit_report(PLUS, SZ, 0.1)
    expected = math.asin(0.8)
    assert r.tau_dist == pytest.approx(expected, abs=1e-12)
    assert r.tau_dist == pytest.approx(0.92729521800, abs=1e-10)
    assert r.actual_crossing_time == pytest.approx(expected, abs=1e-10)
    assert r.bound_satisfied


def test_frowis_gap_vanishes_for_qubit_rotation():
    assert abs(frowis_gap(PLUS, SZ, math.pi / 4)) < 1e-12


def test_tau_dist_monotone_and_limits():
    ds = [0.05, 0.1, 0.2, 0.3, 0.4, 0.5]
    ts = [tau_dist(PLUS, SZ, d) for d in ds]
    assert all(a > b for a, b in zip(ts, ts[1:]))
    assert ts[-1] == 0.0
    # delta -> 0 approaches pi / sqrt(F)
    assert tau_dist(PLUS, SZ, 1e-12) == pytest.approx(math.pi / 2, abs=1e-5)
    with pytest.raises(ValidationError):
        tau_dist(PLUS, SZ, 0.0)


def test_stationary_state_has_infinite_times():
    assert tau_dist(ZERO, SZ, 0.1) == math.inf
    assert crossing_time(ZERO, SZ, 0.1) is None


def test_energy_bound_outside_its_window():
    # crossing below the energy time but after 1/max(E - E_min)
    H = np.diag([0.0, 1.0]).astype(complex)
    phi = np.array([math.sqrt(0.7), math.sqrt(0.3)], dtype=complex)
    tc = crossing_time(phi, H, 0.05)
    assert ml_window(H) == pytest.approx(1.0)
    assert 1.0 < tc < math.pi
    assert tc < tau_dist_ml(phi, H, 0.05)
    r = speed_limit_report(phi, H, 0.05)
    assert not r.ml_applicable and r.bound_satisfied and r.gap_ml is None


def test_energy_bound_inside_window():
    H = np.diag([0.0, 1.0]).astype(complex)
    phi = np.array([math.sqrt(0.7), math.sqrt(0.3)], dtype=complex)
    r = speed_limit_report(phi, H, 0.4)
    assert r.ml_applicable and r.bound_satisfied and r.gap_ml >= 0


def test_rate_bound_saturates_for_qubit_and_coherent():
    r = rate_bound_check(ZERO, SX, 0.1, 4)
    assert r.lhs == pytest.approx(1.0, abs=1e-8) and r.satisfied
    c = fock.coherent_state(40, 0.8)
    r = rate_bound_check(c, fock.number(40), 0.1, 3)
    assert r.rhs == pytest.approx(0.8, abs=1e-9)
    assert r.lhs == pytest.approx(r.rhs, abs=1e-7) and r.satisfied


def test_derivative_bound_for_orthogonal_pair():
    r = derivative_bound_check(ZERO, SX, ONE, SX)
    assert r.fisher_rhs == pytest.approx(1.0)
    assert r.variance_rhs == pytest.approx(1.0)
    assert r.pure_equality_deviation < 1e-12
    assert r.satisfied
    with pytest.raises(ValidationError):
        derivative_bound_check(ZERO, SX, ZERO, SX)


def test_derivative_bound_random_mixed(rng):
    from qmacro.ensembles import random_density, random_hermitian

    for _ in range(5):
        r = derivative_bound_check(random_density(3, rng), random_hermitian(3, rng),
                                   random_density(3, rng), random_hermitian(3, rng))
        assert r.satisfied


def test_fubini_study_limit():
    for phi, H in ((PLUS, SZ), (fock.coherent_state(40, 0.8), fock.number(40))):
        r = fubini_study_ratio(phi, H)
        assert r.limit == pytest.approx(1.0, abs=1e-8)
        assert r.ratio_to_printed_element == pytest.approx(0.25, abs=1e-8)
    with pytest.raises(ValidationError):
        fubini_study_ratio(ZERO, SZ)


def test_reverse_triangle_window_and_commuting_case():
    win = reverse_triangle_window(ZERO, SX, ONE, SX)
    assert win == pytest.approx(math.pi / 2)
    r = reverse_triangle_check(ZERO, SX, ONE, SX, 0.5)
    # a common unitary keeps the pair distance fixed
    assert r.lhs < 1e-12 and r.satisfied
    with pytest.raises(WindowError):
        reverse_triangle_check(ZERO, SX, ONE, SX, 2.0)


@pytest.mark.parametrize("spec,family", [
    (NamedState("ghz", 3), "qubit"),
    (NamedState("ecs", 2, 1.0), "h3"),
])
def test_time_ratio_equals_relative_size_for_all_delta(spec, family):
    s = named_state(spec)
    nrf = nrf_measure(s, family).nrf
    for d in (0.05, 0.2, 0.5):
        r = nrf_time_ratio(s, family, d)
        assert r.ratio == pytest.approx(nrf, rel=1e-6)
