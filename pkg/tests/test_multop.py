import numpy as np
import pytest

from conftest import constructed
from drazin import multop
from drazin.errors import LiftTooLargeError, NoFactorizationError
from drazin.numkernel import block_diag, jordan_block


def test_vec_is_column_stacking():
    x = np.array([[1, 2], [3, 4]])
    assert multop.vec(x).ravel().tolist() == [1, 3, 2, 4]
    np.testing.assert_array_equal(multop.unvec(multop.vec(x), 2), x)


def test_lifts_act_as_multiplication(rng):
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    x = rng.standard_normal((3, 3))
    np.testing.assert_allclose(multop.left_mult(a).apply(x), a @ x, atol=1e-13)
    np.testing.assert_allclose(multop.right_mult(a).apply(x), x @ a, atol=1e-13)
    # R_a uses the plain transpose, not the conjugate one
    np.testing.assert_allclose(multop.right_mult(a).matrix, np.kron(a.T, np.eye(3)))


def test_lift_cap():
    with pytest.raises(LiftTooLargeError):
        multop.left_mult(np.eye(5), lift_cap=4)
    with pytest.raises(LiftTooLargeError):
        multop.right_mult(np.eye(5), lift_cap=4)


def test_transfer_index_on_constructed(rng):
    for k in range(4):
        a, _, _ = constructed(4, k, rng)
        rep = multop.transfer_index_check(a)
        assert rep.passed, rep.mismatches
        assert rep.indices == (k, k, k)


def test_prop7_value_example():
    # t = diag(1, J_2(0)) at lambda = 1: t - 1 = diag(0, J_2(-1)), all values 1
    t = block_diag(np.array([[1.0]]), jordan_block(2))
    rep = multop.prop7_value_check(t, 1.0)
    assert rep.passed
    assert set(rep.values.values()) == {1}


def test_value_checks_off_spectrum(rng):
    t = rng.standard_normal((3, 3))
    lam = 100.0
    assert set(multop.prop7_value_check(t, lam).values.values()) == {0}
    assert multop.theorem9_value_check(t, lam).passed


def test_theorem9_value_on_nilpotent():
    rep = multop.theorem9_value_check(jordan_block(3), 0.0)
    assert rep.values == {"index_s": 3, "asc_L": 3, "asc_R": 3}


def test_right_factor_examples():
    b = np.diag([1.0, 0.0])
    res = multop.right_factor(np.diag([5.0, 0.0]), b)
    np.testing.assert_allclose(res.factor, np.diag([5.0, 0.0]), atol=1e-14)
    assert res.residual < 1e-14 and res.certified
    with pytest.raises(NoFactorizationError) as info:
        multop.right_factor(np.eye(2), b)
    assert (info.value.rank_joint, info.value.rank_b) == (2, 1)


def test_left_factor_examples():
    b = np.diag([1.0, 0.0])
    res = multop.left_factor(np.diag([7.0, 0.0]), b)
    np.testing.assert_allclose(res.factor, np.diag([7.0, 0.0]), atol=1e-14)
    with pytest.raises(NoFactorizationError):
        multop.left_factor(np.diag([0.0, 1.0]), b)


def test_factor_of_self_is_projector(rng):
    b = rng.standard_normal((4, 2)) @ rng.standard_normal((2, 4))
    c = multop.right_factor(b, b).factor
    np.testing.assert_allclose(b @ c, b, atol=1e-12)
    np.testing.assert_allclose(c @ c, c, atol=1e-10)


def test_factor_shape_mismatch():
    with pytest.raises(ValueError):
        multop.right_factor(np.ones((3, 2)), np.ones((2, 2)))
    with pytest.raises(ValueError):
        multop.left_factor(np.ones((2, 3)), np.ones((2, 2)))
