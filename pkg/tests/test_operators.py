from __future__ import annotations

import math

import numpy as np
import pytest

from qmacro.ensembles import random_density, random_hermitian, random_pure, random_unitary
from qmacro.errors import CapacityError, ValidationError
from qmacro.operators import (
    OneLocal,
    check_hermitian,
    check_unitary,
    helstrom_probability,
    matrix_exponential,
    one_local_matrix,
    partial_trace,
    reduced_trace_norm_pure,
    tensor_power,
    tensor_product,
    to_density,
    trace_norm_distance,
    unitary_evolution,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.diag([1.0, -1.0]).astype(complex)


def test_tensor_product_index_order():
    a = np.array([1, 0], dtype=complex)
    b = np.array([0, 1], dtype=complex)
    assert np.allclose(tensor_product(a, b), [0, 1, 0, 0])


def test_tensor_product_capacity():
    with pytest.raises(CapacityError):
        tensor_power(np.eye(2), 15, max_dim=1024)


def test_partial_trace_bell_is_maximally_mixed():
    bell = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
    assert np.allclose(partial_trace(bell, [2, 2], [0]), np.eye(2) / 2, atol=1e-14)


def test_partial_trace_product_state_returns_factor(rng):
    a, b, c = random_pure(2, rng), random_pure(3, rng), random_pure(2, rng)
    psi = tensor_product(tensor_product(a, b), c)
    red = partial_trace(psi, [2, 3, 2], [1])
    assert np.allclose(red, np.outer(b, b.conj()), atol=1e-12)
    # density-matrix input gives the same result
    red2 = partial_trace(np.outer(psi, psi.conj()), [2, 3, 2], [0, 2])
    assert np.allclose(red2, np.kron(np.outer(a, a.conj()), np.outer(c, c.conj())), atol=1e-12)


def test_partial_trace_rejects_bad_index():
    with pytest.raises(ValidationError):
        partial_trace(np.ones(4) / 2, [2, 2], [2])


def test_reduced_trace_norm_pure_matches_explicit(rng):
    dims = [2, 3, 2]
    a = random_pure(12, rng)
    b = random_pure(12, rng)
    for keep in ([0], [1, 2], [0, 2]):
        ra, rb = partial_trace(a, dims, keep), partial_trace(b, dims, keep)
        explicit = np.sum(np.abs(np.linalg.eigvalsh(ra - rb)))
        assert reduced_trace_norm_pure(a, b, dims, keep) == pytest.approx(explicit, abs=1e-12)


def test_trace_norm_orthogonal_and_identical():
    z, o = np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)
    assert trace_norm_distance(z, o) == pytest.approx(2.0)
    assert trace_norm_distance(z, z) == pytest.approx(0.0)
    assert helstrom_probability(z, o) == pytest.approx(1.0)
    assert helstrom_probability(np.eye(2) / 2, np.eye(2) / 2) == pytest.approx(0.5)


def test_trace_norm_vector_form_agrees_with_matrix_form(rng):
    a, b = random_pure(4, rng), random_pure(4, rng)
    m = trace_norm_distance(to_density(a), to_density(b))
    assert trace_norm_distance(a, b) == pytest.approx(m, abs=1e-12)


def test_helstrom_bounds(rng):
    for _ in range(20):
        p = helstrom_probability(random_density(3, rng), random_density(3, rng))
        assert 0.5 <= p <= 1.0


def test_matrix_exponential_matches_closed_form():
    u = matrix_exponential(SX, -1j * 0.3)
    expected = math.cos(0.3) * np.eye(2) - 1j * math.sin(0.3) * SX
    assert np.allclose(u, expected, atol=1e-14)
    assert np.allclose(unitary_evolution(SZ, math.pi), -np.eye(2), atol=1e-14)


def test_matrix_exponential_is_unitary(rng):
    h = random_hermitian(6, rng)
    check_unitary(matrix_exponential(h, -2.7j))


def test_validators():
    with pytest.raises(ValidationError):
        check_hermitian(np.array([[0, 1], [0, 0]], dtype=complex))
    with pytest.raises(ValidationError):
        check_unitary(2 * np.eye(2))
    with pytest.raises(ValidationError):
        to_density(np.array([1.0, 1.0]))


def test_one_local_apply_matches_dense(rng):
    a = random_hermitian(3, rng)
    op = OneLocal(a, 3)
    v = random_pure(27, rng)
    assert np.allclose(op.apply(v), op.matrix() @ v, atol=1e-12)
    assert np.allclose(op.matrix(), one_local_matrix([a, a, a]), atol=1e-14)


def test_random_unitary_is_unitary(rng):
    check_unitary(random_unitary(5, rng))
