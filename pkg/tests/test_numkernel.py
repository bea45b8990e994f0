import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drazin import numkernel as nk
from drazin.errors import DimensionError, MatrixFormatError, SingularMatrixError


def test_tolerance_config_validates():
    assert nk.DEFAULT_TOL.rank_rtol == 1e-10
    assert nk.DEFAULT_TOL.residual_atol == 1e-8
    assert nk.DEFAULT_TOL.eig_cluster_tol == 1e-8
    for bad in (0.0, -1.0, math.nan, math.inf):
        with pytest.raises(ValueError):
            nk.ToleranceConfig(rank_rtol=bad)
    with pytest.raises(ValueError):
        nk.ToleranceConfig(residual_atol=0.0)


def test_as_matrix_rejects_bad_input():
    with pytest.raises(DimensionError):
        nk.as_matrix([1.0, 2.0])
    with pytest.raises(MatrixFormatError):
        nk.as_matrix([[1.0, np.nan]])
    a = nk.as_matrix([[1, 2], [3, 4]])
    assert a.dtype == np.complex128


def test_mat_mul_dimension_mismatch():
    with pytest.raises(DimensionError):
        nk.mat_mul(np.ones((2, 3)), np.ones((2, 3)))


def test_solve_linear(rng):
    a = rng.standard_normal((5, 5)) + 3 * np.eye(5)
    b = rng.standard_normal((5, 2))
    x = nk.solve_linear(a, b)
    assert np.allclose(a @ x, b)


def test_solve_linear_singular_reports_pivot():
    with pytest.raises(SingularMatrixError) as info:
        nk.solve_linear(nk.jordan_block(3), np.eye(3))
    assert info.value.pivot == pytest.approx(0.0, abs=1e-12)


def test_rank_and_nullity():
    assert nk.rank(np.zeros((3, 3))) == 0
    assert nk.rank(nk.jordan_block(4)) == 3
    assert nk.nullity(nk.jordan_block(4)) == 1
    assert nk.rank(np.eye(3)) == 3


def test_pseudoinverse_penrose(rng):
    a = rng.standard_normal((4, 2)) @ rng.standard_normal((2, 5))
    x = nk.pseudoinverse(a)
    assert max(nk.penrose_residuals(a, x)) < 1e-10
    assert np.allclose(x, np.linalg.pinv(a))


def test_null_chain_of_jordan_blocks():
    a = nk.block_diag(nk.jordan_block(3), nk.jordan_block(1), 2 * np.eye(2))
    chain = nk.null_chain(a, 1e-10)
    assert chain.dims == (0, 2, 3, 4)
    assert chain.ascent == 3
    assert chain.basis.shape == (6, 4)
    # the basis spans N(a^3)
    a3 = np.linalg.matrix_power(a, 3)
    assert np.linalg.norm(a3 @ chain.basis) < 1e-12


def test_null_chain_of_invertible_matrix():
    chain = nk.null_chain(np.eye(3) * 2, 1e-10)
    assert chain.dims == (0,)
    assert chain.ascent == 0


def test_power_sequence_matches_matrix_power(rng):
    a = rng.standard_normal((3, 3))
    for k, p in enumerate(nk.power_sequence(a, 4)):
        assert np.allclose(p, np.linalg.matrix_power(a, k))


def test_eigenvalue_clusters_coalesce_defective_eigenvalue(rng):
    # J_4(1) under a similarity splits numerically by ~eps^(1/4)
    s = rng.standard_normal((6, 6))
    a = s @ nk.block_diag(nk.jordan_block(4, 1.0), np.diag([3.0, -2.0])) @ np.linalg.inv(s)
    raw = nk.raw_eigenvalues(a)
    assert np.max(np.abs(raw[np.abs(raw - 1) < 0.5] - 1)) > 1e-8  # genuinely split
    eig = dict((round(z.real, 6), m) for z, m in nk.eigenvalues(a))
    assert eig == {1.0: 4, 3.0: 1, -2.0: 1}


def test_eigenvalue_clusters_keep_close_simple_eigenvalues_apart():
    a = np.diag([1.0, 1.0 + 1e-3, 5.0])
    assert [m for _, m in nk.eigenvalues(a)] == [1, 1, 1]


def test_matrix_roundtrip_and_hash(rng):
    a = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    doc = json.loads(json.dumps(nk.matrix_to_dict(a)))
    assert np.array_equal(nk.matrix_from_dict(doc), a)
    assert nk.matrix_hash(a) == nk.matrix_hash(nk.matrix_from_dict(doc))
    assert len(nk.matrix_hash(a)) == 16


@pytest.mark.parametrize("doc", [
    {"rows": 2, "cols": 2, "data": [[1, 0]] * 3},
    {"rows": 1, "cols": 1, "data": [[1]]},
    {"rows": 1, "cols": 1, "data": [[True, 0]]},
    {"rows": 1, "cols": 1, "data": [["1", 0]]},
    {"rows": 1, "cols": 1, "data": [[float("inf"), 0]]},
    {"rows": 0, "cols": 1, "data": []},
    {"cols": 1, "data": [[1, 0]]},
    [[1, 0]],
])
def test_matrix_from_dict_rejects(doc):
    with pytest.raises(MatrixFormatError):
        nk.matrix_from_dict(doc)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_rank_plus_nullity(n, seed):
    g = np.random.default_rng(seed)
    r = int(g.integers(0, n + 1))
    a = g.standard_normal((n, r)) @ g.standard_normal((r, n))
    assert nk.rank(a) + nk.nullity(a) == n
    assert nk.rank(a) == r
