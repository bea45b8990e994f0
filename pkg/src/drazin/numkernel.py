"""Dense complex matrix kernels.

Every matrix in the package is a 2-D ``numpy.ndarray`` of dtype complex128.
The functions here validate their inputs, never mutate them, and return
fresh arrays.  Rank decisions follow one policy: a singular value counts
when it exceeds ``rank_rtol`` times the largest one (or an explicit
absolute threshold supplied by the caller).
"""
from __future__ import annotations

import hashlib
import json
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg as sla
from scipy.cluster.hierarchy import fcluster, linkage
from scipy.spatial.distance import pdist

from .errors import (
    ConvergenceError,
    DimensionError,
    MatrixFormatError,
    SingularMatrixError,
)

# Fraction of max(1, ||a||_2) inside which numerically split eigenvalues are
# candidates for coalescing into one defective cluster.
DEFECT_MERGE_FRAC = 0.05


class ConditioningWarning(RuntimeWarning):
    """Raised (as a warning) when a power chain loses too much precision."""


@dataclass(frozen=True)
class ToleranceConfig:
    rank_rtol: float = 1e-10
    residual_atol: float = 1e-8
    eig_cluster_tol: float = 1e-8

    def __post_init__(self):
        for name in ("rank_rtol", "residual_atol", "eig_cluster_tol"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and > 0, got {value!r}")
        if self.rank_rtol >= 1:
            raise ValueError("rank_rtol must be < 1")

    def to_dict(self):
        return {
            "rank_rtol": self.rank_rtol,
            "residual_atol": self.residual_atol,
            "eig_cluster_tol": self.eig_cluster_tol,
        }


DEFAULT_TOL = ToleranceConfig()


def as_matrix(x) -> np.ndarray:
    """Coerce ``x`` to a finite complex128 2-D array (copying)."""
    a = np.array(x, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got ndim={a.ndim}")
    if not np.all(np.isfinite(a)):
        raise MatrixFormatError("matrix has non-finite entries")
    return a


def require_square(a: np.ndarray, what: str = "matrix") -> None:
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"{what} must be square, got shape {a.shape}")


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def jordan_block(n: int, lam: complex = 0.0) -> np.ndarray:
    """Upper Jordan block J_n(lam)."""
    return lam * identity(n) + np.eye(n, k=1, dtype=np.complex128)


def block_diag(*blocks) -> np.ndarray:
    return sla.block_diag(*[as_matrix(b) for b in blocks]).astype(np.complex128)


def fro(a: np.ndarray) -> float:
    return float(np.linalg.norm(a)) if a.size else 0.0


def norm2(a: np.ndarray) -> float:
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def mat_mul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def solve_linear(a, b, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Solve ``a X = b`` by LU with partial (row) pivoting.

    Raises SingularMatrixError when the smallest pivot is below
    ``rank_rtol`` times the largest entry of ``a``.
    """
    a, b = as_matrix(a), as_matrix(b)
    require_square(a)
    if b.shape[0] != a.shape[0]:
        raise DimensionError(f"right-hand side has {b.shape[0]} rows, expected {a.shape[0]}")
    if a.shape[0] == 0:
        return np.zeros((0, b.shape[1]), dtype=np.complex128)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        lu, piv = sla.lu_factor(a, check_finite=False)
    pivots = np.abs(np.diag(lu))
    scale = float(np.max(np.abs(a)))
    smallest = float(pivots.min())
    if scale == 0.0 or smallest <= tol.rank_rtol * scale:
        raise SingularMatrixError(
            f"matrix is singular to tolerance (pivot {smallest:.3e}, scale {scale:.3e})",
            pivot=smallest,
        )
    return sla.lu_solve((lu, piv), b, check_finite=False)


def singular_values(a: np.ndarray) -> np.ndarray:
    if a.size == 0:
        return np.zeros(0)
    return sla.svdvals(a, check_finite=False)


def rank(a, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    a = as_matrix(a)
    s = singular_values(a)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_rtol * s[0]))


def nullity(a, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    a = as_matrix(a)
    return a.shape[1] - rank(a, tol)


def pseudoinverse(a, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose inverse by truncated SVD."""
    a = as_matrix(a)
    m, n = a.shape
    if a.size == 0:
        return np.zeros((n, m), dtype=np.complex128)
    u, s, vh = sla.svd(a, full_matrices=False, check_finite=False)
    if s[0] == 0.0:
        return np.zeros((n, m), dtype=np.complex128)
    keep = s > tol.rank_rtol * s[0]
    inv_s = np.zeros_like(s)
    inv_s[keep] = 1.0 / s[keep]
    return (vh.conj().T * inv_s) @ u.conj().T


def penrose_residuals(a: np.ndarray, x: np.ndarray) -> tuple[float, float, float, float]:
    """Relative residuals of the four Penrose equations for ``x = a^+``."""
    na, nx = max(fro(a), 1e-300), max(fro(x), 1e-300)
    ax, xa = a @ x, x @ a
    return (
        fro(ax @ a - a) / na,
        fro(xa @ x - x) / nx,
        fro(ax - ax.conj().T) / max(fro(ax), 1.0),
        fro(xa - xa.conj().T) / max(fro(xa), 1.0),
    )


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def mat_power(a, k: int) -> np.ndarray:
    a = as_matrix(a)
    require_square(a)
    if k < 0:
        raise ValueError("power must be non-negative")
    return np.linalg.matrix_power(a, k)


def power_sequence(a, kmax: int, tol: ToleranceConfig = DEFAULT_TOL):
    """Yield a^0, a^1, ..., a^kmax built incrementally.

    Warns with ConditioningWarning when the entries grow past 1/rank_rtol
    times the norm estimate ||a||^k, which signals that rank decisions on
    the powers are no longer trustworthy.
    """
    a = as_matrix(a)
    require_square(a)
    nrm = norm2(a)
    p = identity(a.shape[0])
    yield p
    for k in range(1, kmax + 1):
        p = p @ a
        estimate = nrm**k
        if estimate > 0 and norm2(p) > estimate / tol.rank_rtol:
            warnings.warn(f"power a^{k} lost conditioning", ConditioningWarning, stacklevel=2)
        yield p


class NullChain(NamedTuple):
    """Result of the staircase deflation of a square matrix.

    ``dims[k]`` is dim N(a^k) for k = 0..len(dims)-1, stopping at the first
    k where the chain stabilizes; ``basis`` is an orthonormal basis of the
    stabilized null space N(a^ascent); ``margin`` is the smallest ratio by
    which any singular value cleared (or missed) the threshold.
    """

    dims: tuple[int, ...]
    basis: np.ndarray
    margin: float

    @property
    def ascent(self) -> int:
        return len(self.dims) - 1


def null_chain(a: np.ndarray, atol: float) -> NullChain:
    """Dimensions of N(a^k) via the staircase algorithm, never forming powers.

    After an SVD splits off N(a), the matrix compressed to the orthogonal
    complement B satisfies dim N(a^k) = dim N(a) + dim N(B^(k-1)), so each
    step is one SVD of a smaller, unpowered matrix.
    """
    a = as_matrix(a)
    require_square(a)
    n = a.shape[0]
    dims = [0]
    blocks = []
    q = identity(n)
    b = a
    margin = math.inf
    while b.shape[0] > 0:
        _, s, vh = sla.svd(b, check_finite=False)
        above = s > atol
        r = int(np.count_nonzero(above))
        if atol > 0:
            if r:
                margin = min(margin, float(s[r - 1]) / atol)
            if r < s.size and s[r] > 0:
                margin = min(margin, atol / float(s[r]))
        nu = b.shape[0] - r
        if nu == 0:
            break
        v = vh.conj().T
        vr, vn = v[:, :r], v[:, r:]
        blocks.append(q @ vn)
        b = vr.conj().T @ b @ vr
        q = q @ vr
        dims.append(dims[-1] + nu)
    basis = np.hstack(blocks) if blocks else np.zeros((n, 0), dtype=np.complex128)
    return NullChain(tuple(dims), basis, margin)


def chain_threshold(a: np.ndarray, shift: complex, tol: ToleranceConfig) -> float:
    """Absolute singular-value threshold for chains of ``a - shift I``."""
    return tol.rank_rtol * (norm2(a) + abs(shift))


def raw_eigenvalues(a) -> np.ndarray:
    a = as_matrix(a)
    require_square(a)
    if a.shape[0] == 0:
        return np.zeros(0, dtype=np.complex128)
    try:
        return sla.eigvals(a, check_finite=False).astype(np.complex128)
    except (np.linalg.LinAlgError, ValueError) as exc:
        h = matrix_hash(a)
        raise ConvergenceError(f"eigenvalue iteration failed for matrix {h}: {exc}", h) from exc


class EigenCluster(NamedTuple):
    center: complex
    multiplicity: int
    members: tuple[complex, ...]


def _linkage(points: np.ndarray) -> np.ndarray:
    xy = np.column_stack([points.real, points.imag])
    return linkage(pdist(xy), method="single")


def _single_linkage_groups(points: np.ndarray, radius: float) -> list[np.ndarray]:
    if points.size == 1:
        return [np.array([0])]
    labels = fcluster(_linkage(points), t=radius, criterion="distance")
    return [np.flatnonzero(labels == lab) for lab in np.unique(labels)]


def _max_link(points: np.ndarray) -> float:
    if points.size < 2:
        return 0.0
    return float(_linkage(points)[-1, 2])


def eigenvalue_clusters(a, tol: ToleranceConfig = DEFAULT_TOL, certify: bool = True) -> list[EigenCluster]:
    """Eigenvalues grouped into clusters with algebraic multiplicities.

    Raw eigenvalues closer than ``eig_cluster_tol`` are always merged
    (single linkage, mean representative).  With ``certify`` on, groups
    of raw eigenvalues lying within DEFECT_MERGE_FRAC * max(1, ||a||) are
    merged further only when the generalized null space of ``a - mean``
    has exactly the group size; this recovers defective eigenvalues whose
    computed copies split by O(eps^(1/k)).  Failing groups are split at
    their longest single-linkage edge and retried.
    """
    a = as_matrix(a)
    require_square(a)
    raw = raw_eigenvalues(a)
    if raw.size == 0:
        return []
    nrm = norm2(a)

    def certified(points):
        mu = complex(points.mean())
        chain = null_chain(a - mu * identity(a.shape[0]), chain_threshold(a, mu, tol))
        return chain.dims[-1] == points.size

    def resolve(idx):
        pts = raw[idx]
        if _max_link(pts) <= tol.eig_cluster_tol or certified(pts):
            return [idx]
        out = []
        for sub in _single_linkage_groups(pts, _max_link(pts) * (1 - 1e-12)):
            out.extend(resolve(idx[sub]))
        return out

    if certify:
        radius = max(tol.eig_cluster_tol, DEFECT_MERGE_FRAC * max(1.0, nrm))
        groups = []
        for g in _single_linkage_groups(raw, radius):
            groups.extend(resolve(g))
    else:
        groups = _single_linkage_groups(raw, tol.eig_cluster_tol)

    clusters = [
        EigenCluster(complex(raw[g].mean()), int(g.size), tuple(complex(z) for z in raw[g]))
        for g in groups
    ]
    clusters.sort(key=lambda c: (round(c.center.real, 12), round(c.center.imag, 12)))
    return clusters


def eigenvalues(a, tol: ToleranceConfig = DEFAULT_TOL) -> list[tuple[complex, int]]:
    """Clustered eigenvalues as (value, algebraic multiplicity) pairs."""
    return [(c.center, c.multiplicity) for c in eigenvalue_clusters(a, tol)]


# -- serialization -----------------------------------------------------------


def matrix_to_dict(a) -> dict:
    a = as_matrix(a)
    rows, cols = a.shape
    data = [[float(z.real), float(z.imag)] for z in a.reshape(-1)]
    return {"rows": rows, "cols": cols, "data": data}


def matrix_from_dict(obj) -> np.ndarray:
    """Parse ``{"rows": n, "cols": m, "data": [[re, im], ...]}`` (row-major)."""
    if not isinstance(obj, dict):
        raise MatrixFormatError("matrix document must be a JSON object")
    try:
        rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    except KeyError as exc:
        raise MatrixFormatError(f"missing field {exc}") from None
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 1 or cols < 1:
        raise MatrixFormatError("rows and cols must be positive integers")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise MatrixFormatError(f"data must hold rows*cols = {rows * cols} entries")
    out = np.empty(rows * cols, dtype=np.complex128)
    for i, pair in enumerate(data):
        if not (isinstance(pair, list) and len(pair) == 2):
            raise MatrixFormatError(f"entry {i} is not a [re, im] pair")
        re, im = pair
        if isinstance(re, bool) or isinstance(im, bool) or not all(isinstance(v, (int, float)) for v in pair):
            raise MatrixFormatError(f"entry {i} is not numeric")
        if not (math.isfinite(re) and math.isfinite(im)):
            raise MatrixFormatError(f"entry {i} is not finite")
        out[i] = complex(re, im)
    return out.reshape(rows, cols)


def matrix_hash(a) -> str:
    """First 16 hex chars of SHA-256 over the canonical JSON serialization."""
    text = json.dumps(matrix_to_dict(a), separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()[:16]
