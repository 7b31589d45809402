from __future__ import annotations

import math

import numpy as np
import pytest

from qmacro import fock
from qmacro.errors import TruncationError, ValidationError


def test_ladder_commutator_on_low_block():
    a = fock.annihilation(30)
    comm = a @ a.conj().T - a.conj().T @ a
    assert np.allclose(comm[:-1, :-1], np.eye(29), atol=1e-13)


def test_mode_operator_dispatch():
    assert np.allclose(fock.mode_operator(5, "number"), np.diag(np.arange(5)))
    assert np.allclose(fock.mode_operator(4, "parity"), np.diag([1, -1, 1, -1]))
    with pytest.raises(ValidationError):
        fock.mode_operator(4, "bogus")


def test_coherent_state_matches_displaced_vacuum():
    d = 40
    alpha = 0.8 - 0.5j
    v = fock.displacement_operator(d, alpha) @ fock.basis_state(d, 0)
    assert abs(np.vdot(fock.coherent_state(d, alpha), v)) == pytest.approx(1.0, abs=1e-10)


def test_displacement_adjoint_identity_on_low_block():
    d = 40
    alpha = 0.7
    D = fock.displacement_operator(d, alpha, check=False)
    a = fock.annihilation(d)
    lhs = D.conj().T @ a @ D
    k = d // 4
    assert np.max(np.abs(lhs[:k, :k] - (a + alpha * np.eye(d))[:k, :k])) < 1e-6


def test_squeezed_vacuum_closed_form_and_variance():
    d = 60
    xi = 0.3
    v = fock.squeeze_operator(d, xi) @ fock.basis_state(d, 0)
    assert abs(np.vdot(fock.squeezed_vacuum(d, xi), v)) == pytest.approx(1.0, abs=1e-10)
    x = fock.quadrature(d, 0.0)
    var = np.vdot(v, x @ x @ v).real - np.vdot(v, x @ v).real ** 2
    assert var == pytest.approx(math.exp(-2 * xi) / 2, rel=1e-9)


def test_displacement_after_squeeze_reorders_with_grown_amplitude():
    # D(alpha) S(xi)|0> = S(xi) D(alpha e^{xi})|0> for real parameters
    d = 80
    alpha, xi = 0.6, 0.3
    lhs = fock.displacement_operator(d, alpha, check=False) @ fock.squeezed_vacuum(d, xi)
    rhs = fock.squeeze_operator(d, xi, check=False) @ fock.coherent_state(d, alpha * math.exp(xi))
    assert abs(np.vdot(lhs, rhs)) == pytest.approx(1.0, abs=1e-9)
    wrong = fock.squeeze_operator(d, xi, check=False) @ fock.coherent_state(d, alpha * math.exp(-xi))
    assert abs(np.vdot(lhs, wrong)) < 0.99


def test_cat_pair_orthonormal_and_parity():
    even, odd = fock.cat_state_pair(40, 1.2)
    assert abs(np.vdot(even, odd)) < 1e-14
    p = fock.parity(40)
    assert np.allclose(p @ even, even) and np.allclose(p @ odd, -odd)


def test_vacuum_element_against_fock():
    d = 80
    for eta, beta in [(0.4, -1.1), (-0.6, 0.5), (0.0, 1.3)]:
        u = fock.squeeze_operator(d, eta, check=False) @ fock.displacement_operator(d, beta, check=False)
        assert u[0, 0] == pytest.approx(fock.vacuum_element(eta, beta), abs=1e-10)


def test_gaussian_branch_orders():
    d = 60
    spec = fock.GaussianBranchSpec(xi=0.2, alpha=0.5, order="displace_then_squeeze")
    v = fock.gaussian_branch_state(d, spec)
    ref = fock.squeeze_operator(d, 0.2) @ fock.coherent_state(d, 0.5)
    assert abs(np.vdot(v, ref)) == pytest.approx(1.0, abs=1e-10)


def test_truncation_error_and_convergence():
    with pytest.raises(TruncationError):
        fock.coherent_state(10, 3.0)
    val, cert = fock.converge(lambda d: np.vdot(fock.coherent_state(d, 2.0), fock.coherent_state(d, -2.0)))
    assert val == pytest.approx(math.exp(-8), abs=1e-12)
    assert cert.change_on_doubling < 1e-8
