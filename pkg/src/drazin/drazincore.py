"""Ascent/descent chains, spectral projections and Drazin/group inverses."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    AmbiguousEigenvalueError,
    ChainStabilizationError,
    NotGroupInvertibleError,
    SpectralCertificationError,
    SingularMatrixError,
)
from .numkernel import (
    DEFAULT_TOL,
    ConditioningWarning,
    ToleranceConfig,
    as_matrix,
    chain_threshold,
    eigenvalue_clusters,
    fro,
    identity,
    mat_power,
    null_chain,
    rank,
    require_square,
    solve_linear,
)

# A chain decision whose singular values clear the threshold by less than
# this factor is reported as flagged.
MARGIN_WARN = 100.0


@dataclass(frozen=True)
class ChainProfile:
    """Ranks and nullities of successive powers of a square matrix.

    ``power_ranks`` runs from k = 0 to index + 1 (capped at dim), so the
    stabilized value is always visible twice.  Ranks come from the range
    chain (staircase on a^H) and nullities from the null chain (staircase
    on a); the two are computed independently and ``flagged`` is set when
    they disagree or when a rank decision was marginal.
    """

    dim: int
    power_ranks: tuple[int, ...]
    nullities: tuple[int, ...]
    ascent: int
    descent: int
    index: int
    flagged: bool = False

    def to_dict(self):
        return {
            "dim": self.dim,
            "power_ranks": list(self.power_ranks),
            "nullities": list(self.nullities),
            "ascent": self.ascent,
            "descent": self.descent,
            "index": self.index,
            "flagged": self.flagged,
        }


def _pad(dims, length):
    return tuple(dims) + (dims[-1],) * (length - len(dims))


def chain_profile(a, tol: ToleranceConfig = DEFAULT_TOL, shift: complex = 0.0) -> ChainProfile:
    """Chain profile of ``a - shift*I``."""
    a = as_matrix(a)
    require_square(a)
    n = a.shape[0]
    s = a - shift * identity(n) if shift else a
    atol = chain_threshold(a, shift, tol)
    nulls = null_chain(s, atol)
    # dim R(s^k) = n - dim N((s^H)^k)
    ranges = null_chain(s.conj().T, atol)
    ascent, descent = nulls.ascent, ranges.ascent
    if ascent > n or descent > n:
        raise ChainStabilizationError(f"chain did not stabilize by dim={n}")
    index = descent
    length = min(max(ascent, descent) + 2, n + 1) if n else 1
    nullities = _pad(nulls.dims, length)
    ranks = tuple(n - d for d in _pad(ranges.dims, length))
    margin = min(nulls.margin, ranges.margin)
    flagged = ascent != descent or any(r + v != n for r, v in zip(ranks, nullities))
    if margin < MARGIN_WARN:
        flagged = True
    if flagged:
        warnings.warn(
            f"chain profile flagged (margin {margin:.3g}, ascent {ascent}, descent {descent})",
            ConditioningWarning,
            stacklevel=2,
        )
    return ChainProfile(n, ranks, nullities, ascent, descent, index, flagged)


def index_of(a, tol: ToleranceConfig = DEFAULT_TOL, shift: complex = 0.0) -> int:
    return chain_profile(a, tol, shift).index


def _locate_cluster(a, lambda0, tol):
    """Return the eigenvalue cluster matched by ``lambda0`` (or None)."""
    clusters = eigenvalue_clusters(a, tol)
    near = [c for c in clusters if abs(c.center - lambda0) <= 10 * tol.eig_cluster_tol]
    hits = [c for c in near if abs(c.center - lambda0) <= tol.eig_cluster_tol]
    if len(near) > 1 or (near and not hits):
        raise AmbiguousEigenvalueError(
            f"{lambda0} is within 10*eig_cluster_tol of clusters "
            + ", ".join(f"{c.center:.6g}" for c in near)
        )
    return hits[0] if hits else None


def spectral_projection(a, lambda0: complex, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Projection onto N((a-l0)^k) along R((a-l0)^k), k the index of a-l0.

    Both subspaces come from staircase bases (the range as the orthogonal
    complement of N(((a-l0)^H)^k)); the projector then needs a single
    linear solve.  Returns the zero matrix when ``lambda0`` is not an
    eigenvalue.
    """
    a = as_matrix(a)
    require_square(a)
    n = a.shape[0]
    lambda0 = complex(lambda0)
    cluster = _locate_cluster(a, lambda0, tol)
    if cluster is None:
        return np.zeros((n, n), dtype=np.complex128)
    s = a - lambda0 * identity(n)
    atol = chain_threshold(a, lambda0, tol)
    ker = null_chain(s, atol).basis
    co = null_chain(s.conj().T, atol).basis
    m = ker.shape[1]
    if m != cluster.multiplicity or co.shape[1] != m:
        raise SpectralCertificationError(
            f"generalized eigenspace at {lambda0} has dim {m}, "
            f"co-space dim {co.shape[1]}, multiplicity {cluster.multiplicity}"
        )
    if m == n:
        return identity(n)
    # orthonormal complement of the co-space spans R(s^k)
    q_full, _, _ = np.linalg.svd(co, full_matrices=True)
    rng = q_full[:, m:]
    basis = np.hstack([ker, rng])
    coords = solve_linear(basis, identity(n), tol)
    return ker @ coords[:m]


@dataclass(frozen=True)
class DrazinResult:
    inverse: np.ndarray
    index: int
    eventual_projection: np.ndarray
    kernel_projection: np.ndarray
    core_part: np.ndarray
    nilpotent_part: np.ndarray
    residuals: tuple[float, float, float]


@dataclass(frozen=True)
class GroupInverseResult:
    inverse: np.ndarray
    certified: bool


@dataclass(frozen=True)
class DrazinPairReport:
    m: int
    residuals: tuple[float, float, float]
    atol: float

    EQUATIONS = ("a^m b a = a^m", "b a b = b", "a b = b a")

    @property
    def passed(self) -> bool:
        return all(r <= self.atol for r in self.residuals)

    @property
    def failed_equations(self) -> list[str]:
        return [nm for nm, r in zip(self.EQUATIONS, self.residuals) if r > self.atol]


def verify_drazin_pair(a, b, m: int, tol: ToleranceConfig = DEFAULT_TOL) -> DrazinPairReport:
    """Scaled residuals of the three Drazin equations for the pair (a, b).

    Each residual is divided by the natural size of its terms with an
    absolute floor in the units of that equation, so values near 0 mean
    "holds to working precision" even when a^m or b vanish:

        r1 = ||a^m b a - a^m|| / (s^m (1 + s ||b||))
        r2 = ||b a b - b||     / (1/s + ||b|| + s ||b||^2)
        r3 = ||a b - b a||     / (1 + 2 s ||b||)

    with s = ||a||_F (1 when a = 0).
    """
    a, b = as_matrix(a), as_matrix(b)
    require_square(a)
    require_square(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    s = fro(a) or 1.0
    nb = fro(b)
    am = mat_power(a, m)
    r1 = fro(am @ b @ a - am) / (s**m * (1 + s * nb))
    r2 = fro(b @ a @ b - b) / (1 / s + nb + s * nb * nb)
    r3 = fro(a @ b - b @ a) / (1 + 2 * s * nb)
    res = (r1, r2, r3)
    return DrazinPairReport(m, res, tol.residual_atol)


def drazin_inverse(a, tol: ToleranceConfig = DEFAULT_TOL) -> DrazinResult:
    """Drazin inverse a^D = (a + P)^-1 (I - P), P the spectral projection at 0."""
    a = as_matrix(a)
    require_square(a)
    n = a.shape[0]
    eye = identity(n)
    profile = chain_profile(a, tol)
    if n == 0:
        z = np.zeros((0, 0), dtype=np.complex128)
        return DrazinResult(z, 0, z, z, z, z, (0.0, 0.0, 0.0))
    p = spectral_projection(a, 0.0, tol)
    try:
        ad = solve_linear(a + p, eye - p, tol)
    except SingularMatrixError as exc:
        raise SpectralCertificationError(f"a + P is singular (pivot {exc.pivot:.3e}); conditioning failure") from exc
    report = verify_drazin_pair(a, ad, profile.index, tol)
    return DrazinResult(
        inverse=ad,
        index=profile.index,
        eventual_projection=a @ ad,
        kernel_projection=p,
        core_part=a @ (eye - p),
        nilpotent_part=a @ p,
        residuals=report.residuals,
    )


def group_inverse(a, tol: ToleranceConfig = DEFAULT_TOL) -> GroupInverseResult:
    res = drazin_inverse(a, tol)
    if res.index > 1:
        raise NotGroupInvertibleError(res.index)
    return GroupInverseResult(res.inverse, True)


def core_nilpotent(a, tol: ToleranceConfig = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Split a = core + nilpotent along N(a^k) + R(a^k)."""
    a = as_matrix(a)
    res = drazin_inverse(a, tol)
    complement = identity(a.shape[0]) - res.kernel_projection
    if rank(res.core_part, tol) != rank(complement, tol):
        raise SpectralCertificationError("core part is not invertible on the range of I - P")
    return res.core_part, res.nilpotent_part


def pinv_drazin(a, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Cross-check route a^D = a^k (a^(2k+1))^+ a^k.  Loses accuracy fast in k."""
    from .numkernel import pseudoinverse

    a = as_matrix(a)
    k = index_of(a, tol)
    ak = mat_power(a, k)
    return ak @ pseudoinverse(mat_power(a, 2 * k + 1), tol) @ ak

