import warnings

import numpy as np
import pytest

from drazin.numkernel import ConditioningWarning, block_diag, jordan_block


def cn(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def constructed(n, k, rng):
    """Matrix with known Drazin inverse: a = S diag(C, N) S^-1, a^D = S diag(C^-1, 0) S^-1.

    Built here independently of the harness generator so tests have their
    own ground truth.  Returns (a, a_drazin, index).
    """
    while True:
        s = cn(rng, (n, n))
        if np.linalg.cond(s) < 50:
            break
    m = n if k == n else (k + int(rng.integers(0, n - k + 1)) if k else 0)
    blocks = [k] + [1] * (m - k) if k else []
    c = n - m
    core = cn(rng, (c, c)) + 2 * np.eye(c) if c else np.zeros((0, 0))
    d = block_diag(*([core] if c else []), *[jordan_block(b) for b in blocks])
    dd = block_diag(*([np.linalg.inv(core)] if c else []), *[np.zeros((b, b)) for b in blocks])
    si = np.linalg.inv(s)
    return s @ d @ si, s @ dd @ si, k


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(autouse=True)
def _conditioning_is_an_error():
    # the corpus is engineered to be well conditioned; a flagged chain
    # decision in a test means something regressed
    with warnings.catch_warnings():
        warnings.simplefilter("error", ConditioningWarning)
        yield
