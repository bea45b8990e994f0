import numpy as np
import pytest

from conftest import constructed
from drazin import resolvent as rv
from drazin.errors import ContourError, NotAnEigenvalueError, OnSpectrumError
from drazin.numkernel import block_diag, jordan_block

A_EXACT = np.array([[0, 0, 2], [-1 / 3, 2 / 3, 1 / 3], [2 / 3, -4 / 3, 4 / 3]])
# Residues of (lam - l0)^(k-1) (lam I - A)^-1 computed symbolically (sympy)
# and frozen: principal coefficients at 0 (pole of order 2) and at 2 (order 1).
B_AT_0 = [
    np.array([[2 / 3, 2 / 3, -2 / 3], [0, 1, 0], [-1 / 3, 2 / 3, 1 / 3]]),
    np.array([[-2 / 3, 4 / 3, 2 / 3], [-1 / 3, 2 / 3, 1 / 3], [0, 0, 0]]),
]
B_AT_2 = [np.array([[1 / 3, -2 / 3, 2 / 3], [0, 0, 0], [1 / 3, -2 / 3, 2 / 3]])]


@pytest.mark.parametrize("center, expected", [(0.0, B_AT_0), (2.0, B_AT_2)])
def test_frozen_principal_parts(center, expected):
    exp = rv.laurent_algebraic(A_EXACT, center)
    assert exp.pole_order == len(expected)
    for got, want in zip(exp.principal, expected):
        np.testing.assert_allclose(got, want, atol=1e-12)
    for k, want in enumerate(expected, start=1):
        np.testing.assert_allclose(rv.laurent_contour(A_EXACT, center, k), want, atol=1e-10)


def test_jordan_block_principal_part():
    # (lam - J_3(l0))^-1 = sum_k N^(k-1) / (lam - l0)^k exactly
    lam0 = 1.5 - 0.5j
    a = block_diag(jordan_block(3, lam0), np.array([[4.0]]))
    exp = rv.laurent_crosscheck(a, lam0)
    n = a - lam0 * np.eye(4)
    p = np.diag([1.0, 1, 1, 0])
    assert exp.pole_order == 3
    for k in range(3):
        np.testing.assert_allclose(exp.principal[k], np.linalg.matrix_power(n, k) @ p, atol=1e-12)
    assert exp.cross_residual < 1e-8


def test_resolvent_at():
    a = np.diag([1.0, 2.0])
    np.testing.assert_allclose(rv.resolvent_at(a, 3.0), np.diag([0.5, 1.0]))
    with pytest.raises(OnSpectrumError):
        rv.resolvent_at(a, 1.0)


def test_not_an_eigenvalue():
    with pytest.raises(NotAnEigenvalueError):
        rv.laurent_algebraic(np.diag([1.0, 2.0]), 5.0)


def test_contour_config_validation():
    with pytest.raises(ValueError):
        rv.ContourConfig(radius_frac=1.0)
    with pytest.raises(ValueError):
        rv.ContourConfig(nodes=48)


def test_contour_refuses_crowded_spectrum():
    with pytest.raises(ContourError):
        rv.contour_radius(np.diag([0.0, 1e-7]), 0.0, rv.ContourConfig(), rv.DEFAULT_TOL)


def test_poles_and_ies(rng):
    a, _, k = constructed(5, 2, rng)
    ps = rv.poles(a)
    zero = [order for z, order in ps if abs(z) < 1e-8]
    assert zero == [2]
    assert sum(1 for _ in ps) >= 1
    assert rv.ies(a).points == ()


def test_pole_transfer_to_lifts(rng):
    a, _, _ = constructed(3, 2, rng)
    rep = rv.theorem11_check(a)
    assert rep.passed, rep.mismatches


def test_node_doubling_on_well_separated_spectrum():
    a = block_diag(jordan_block(2, 0.0), np.array([[2.0]]), np.array([[-1.5j]]))
    coarse = rv.contour_coefficients(a, 0.0, [1, 2, 3], rv.ContourConfig(0.25, 32))
    fine = rv.contour_coefficients(a, 0.0, [1, 2, 3], rv.ContourConfig(0.25, 64))
    for c, f in zip(coarse, fine):
        assert np.linalg.norm(c - f) <= 1e-9 * (1 + np.linalg.norm(f))
