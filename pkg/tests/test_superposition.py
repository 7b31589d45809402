from __future__ import annotations

import math

import numpy as np
import pytest

from qmacro import fock
from qmacro.ensembles import random_hermitian, random_pure, random_unitary
from qmacro.errors import DegenerateSuperpositionError, ValidationError
from qmacro.operators import OneLocal
from qmacro.superposition import (
    GAUSSIAN_CATS,
    PAULI_X,
    NamedState,
    Space,
    StateName,
    build_superposition,
    gaussian_overlap_oracle,
    iterated_sd_displacement,
    named_state,
    overlap_z,
    superposition_covariance,
    superposition_expectation,
    two_path_reduce,
)


def test_ghz_state_vector():
    s = named_state(NamedState("ghz", 3))
    psi = s.psi()
    expected = np.zeros(8)
    expected[0] = expected[7] = 1 / math.sqrt(2)
    assert np.allclose(psi, expected)
    assert s.z == 0


def test_normalization_of_random_superpositions(rng):
    for n in (1, 2, 5):
        s = build_superposition(random_pure(2, rng), random_unitary(2, rng), n)
        assert np.linalg.norm(s.psi()) == pytest.approx(1.0, abs=1e-12)


def test_degenerate_superpositions_rejected():
    with pytest.raises(DegenerateSuperpositionError):
        build_superposition(np.array([1, 0]), np.eye(2), 3)
    # z = -1 on one mode with odd N cancels the branches
    with pytest.raises(DegenerateSuperpositionError):
        build_superposition(np.array([1, 0]), -np.eye(2), 1)
    with pytest.raises(ValidationError):
        build_superposition(np.array([1, 0]), PAULI_X, 0)


def test_two_path_reduce_preserves_overlap(rng):
    phi = random_pure(3, rng)
    u1, u2 = random_unitary(3, rng), random_unitary(3, rng)
    v = two_path_reduce(u1, u2)
    assert overlap_z(phi, v) == pytest.approx(np.vdot(u1 @ phi, u2 @ phi), abs=1e-12)


def test_ecs_overlap_and_parity_branch():
    s = named_state(NamedState("ecs", 2, 1.0))
    assert s.z_abs == pytest.approx(math.exp(-2))
    assert abs(s.z) == pytest.approx(math.exp(-2), abs=1e-12)
    coh = fock.coherent_state(s.local_dim, -1.0)
    assert abs(np.vdot(coh, s.chi)) == pytest.approx(1.0, abs=1e-12)


def test_fock_ghz_and_hcs_are_orthogonal():
    for spec in (NamedState("fockghz", 2, n=4), NamedState("hcs", 2, 1.5)):
        s = named_state(spec)
        assert abs(s.z) < 1e-12


@pytest.mark.parametrize("name", [s.value for s in GAUSSIAN_CATS])
@pytest.mark.parametrize("alpha,xi", [(0.25, 0.0), (0.5, 0.2), (1.0, 0.5)])
def test_gaussian_cat_overlap_matches_branch_oracle(name, alpha, xi):
    s = named_state(NamedState(name, 2, alpha, xi))
    z_oracle, cert = gaussian_overlap_oracle(StateName(name), alpha, xi)
    assert abs(s.z_exact) == pytest.approx(abs(z_oracle), rel=1e-8)
    assert abs(s.z) == pytest.approx(abs(z_oracle), rel=1e-8)
    assert cert.change_on_doubling < 1e-8


def test_psi0_and_psi1_sizes_are_linear_not_exponential():
    # -2 log|z| = log cosh 2xi + 2 a^2 (1 + sech 2xi) for both states
    for name in ("psi0", "psi1"):
        for xi in (0.1, 0.4):
            s = named_state(NamedState(name, 1, 0.5, xi))
            closed = math.log(math.cosh(2 * xi)) + 2 * 0.25 * (1 + 1 / math.cosh(2 * xi))
            assert -2 * math.log(s.z_abs) == pytest.approx(closed, rel=1e-12)


def test_iterated_sd_collapses_to_single_displacement():
    alpha, xi = 0.4, 0.3
    assert iterated_sd_displacement(alpha, xi) == pytest.approx(alpha * math.exp(math.exp(xi)), rel=1e-12)
    s = named_state(NamedState("iteratedsd", 2, alpha, xi))
    assert abs(s.z) == pytest.approx(s.z_abs, rel=1e-9)


def test_analytic_moments_match_dense(rng):
    phi, U = random_pure(3, rng), random_unitary(3, rng)
    s = build_superposition(phi, U, 3, Space.FOCK)
    g1, g2 = random_hermitian(3, rng), random_hermitian(3, rng)
    psi = s.psi()
    G1, G2 = OneLocal(g1, 3).matrix(), OneLocal(g2, 3).matrix()
    cov = superposition_covariance(s, [g1, g2])
    m1, m2 = np.vdot(psi, G1 @ psi).real, np.vdot(psi, G2 @ psi).real
    assert superposition_expectation(s, g1) == pytest.approx(m1, abs=1e-12)
    assert cov[0, 0] == pytest.approx(np.vdot(psi, G1 @ G1 @ psi).real - m1**2, abs=1e-11)
    sym = 0.5 * np.vdot(psi, (G1 @ G2 + G2 @ G1) @ psi).real - m1 * m2
    assert cov[0, 1] == pytest.approx(sym, abs=1e-11)
