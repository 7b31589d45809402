from __future__ import annotations

import math

import numpy as np
import pytest

from qmacro import fock
from qmacro.ensembles import random_pure, random_unitary
from qmacro.errors import NormalizationRequiredError
from qmacro.fisher import (
    Normalization,
    custom,
    h3,
    nf_measure,
    nrf_measure,
    povm_equivalence_check,
    qfi,
    qfi_of_argmax,
    sl2_commutator_check,
    theorem3_eigenvectors,
    theorem3_single,
    theorem3_variance,
    theorem3_variance_check,
    theorem3_variance_printed,
    weak_equivalence_case,
)
from qmacro.operators import OneLocal
from qmacro.superposition import NamedState, build_superposition, named_state

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.diag([1.0, -1.0]).astype(complex)


def test_qfi_basic_cases():
    plus = np.array([1, 1], dtype=complex) / math.sqrt(2)
    assert qfi(plus, SZ) == pytest.approx(4.0)
    assert qfi(np.eye(2) / 2, SZ) == pytest.approx(0.0, abs=1e-14)
    assert qfi(fock.coherent_state(40, 0.7), fock.quadrature(40, 0.0)) == pytest.approx(2.0, abs=1e-9)


def test_qfi_mixed_state_is_convex_bound():
    plus = np.array([1, 1], dtype=complex) / math.sqrt(2)
    rho = 0.8 * np.outer(plus, plus) + 0.2 * np.eye(2) / 2
    # Bloch length r = 0.8 in the equatorial plane: F = 4 r^2
    assert qfi(rho, SZ) == pytest.approx(4 * 0.8**2, rel=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_ghz_relative_size_equals_mode_count(n):
    r = nrf_measure(named_state(NamedState("ghz", n)), "qubit")
    assert r.nrf == pytest.approx(n, rel=1e-10)
    assert r.nf_superposition == pytest.approx(n, rel=1e-10)


def test_nf_dense_matches_analytic(rng):
    s = build_superposition(random_pure(2, rng), random_unitary(2, rng), 3)
    fam = custom([SX, SZ])
    a = nf_measure(s, fam)
    b = nf_measure(s.psi(), fam, n_modes=3)
    assert a.value == pytest.approx(b.value, rel=1e-10)


def test_n_squared_observable_formula_against_four_dim_oracle():
    # N = 2, two-level branch space with real overlap 0.5
    th = math.acos(0.5)
    phi = np.array([1, 0], dtype=complex)
    U = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]], dtype=complex)
    s = build_superposition(phi, U, 2)
    a = theorem3_single(phi, U)
    psi = s.psi()
    A = OneLocal(a, 2).matrix()
    m = np.vdot(psi, A @ psi).real
    var = np.vdot(psi, A @ A @ psi).real - m * m
    assert var == pytest.approx(3.2, abs=1e-12)
    assert theorem3_variance(0.5, 2) == pytest.approx(3.2, abs=1e-12)
    assert theorem3_variance_printed(0.5, 2) == pytest.approx(3.6, abs=1e-12)


def test_n_squared_observable_random_instances(rng):
    for n in (1, 2, 3, 5):
        s = build_superposition(random_pure(3, rng), random_unitary(3, rng), n)
        chk = theorem3_variance_check(s)
        assert chk.deviation < 1e-10
        assert abs(chk.mean) < 1e-10


def test_n_squared_observable_closed_form_eigenvectors(rng):
    phi, U = random_pure(3, rng), random_unitary(3, rng)
    plus, minus = theorem3_eigenvectors(phi, U)
    a = theorem3_single(phi, U)
    ref = np.outer(plus, plus.conj()) - np.outer(minus, minus.conj())
    assert np.allclose(a, ref, atol=1e-10)


def test_normalization_required_for_unbounded_family():
    fam = h3(20, Normalization.OPERATOR_NORM_ONE)
    with pytest.raises(NormalizationRequiredError):
        fam.check()


def test_argmax_observable_reproduces_value():
    s = named_state(NamedState("ecs", 2, 1.0))
    r = nrf_measure(s, "h3")
    assert qfi_of_argmax(s, r) / (4 * s.n_modes) == pytest.approx(r.nf_superposition, rel=1e-10)


def test_fock_compression_is_exact():
    w = weak_equivalence_case("fock", n=3)
    chk = povm_equivalence_check("fock", n=3)
    assert chk.compression_deviation < 1e-12
    assert chk.deviation < 1e-12
    assert w.c == pytest.approx(1 / 3)


@pytest.mark.parametrize("case", ["ecs", "hcs"])
def test_cat_subspace_compressions(case):
    chk = povm_equivalence_check(case, alpha=1.0)
    assert chk.compression_deviation < 1e-9
    assert chk.deviation < 1e-9
    assert chk.min_variance_gain >= -1e-9
    # the published pairs do not reproduce the projectors
    assert chk.printed_deviation > 1e-3


def test_sl2_commutators_on_low_block():
    devs = sl2_commutator_check(40)
    assert max(devs.values()) < 1e-10
