"""Resolvent, Laurent principal parts, poles and essential singularities.

Sign convention: R(lam, a) = (lam I - a)^-1.  Near an eigenvalue l0 of a
matrix the principal part is

    sum_{k>=1} b_k (lam - l0)^-k,   b_1 = P,   b_(k+1) = (a - l0)^k P,

with P the spectral projection at l0.  The contour route recovers
b_k = (1/2 pi i) \\oint (lam - l0)^(k-1) R(lam, a) dlam independently.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import drazincore, multop
from .errors import ContourError, LaurentMismatchError, NotAnEigenvalueError, OnSpectrumError
from .numkernel import (
    DEFAULT_TOL,
    ToleranceConfig,
    as_matrix,
    eigenvalue_clusters,
    fro,
    identity,
    norm2,
    raw_eigenvalues,
    require_square,
    solve_linear,
)


@dataclass(frozen=True)
class ContourConfig:
    radius_frac: float = 0.5
    nodes: int = 64

    def __post_init__(self):
        if not 0 < self.radius_frac < 1:
            raise ValueError("radius_frac must lie in (0, 1)")
        if self.nodes < 16 or self.nodes & (self.nodes - 1):
            raise ValueError("nodes must be a power of two >= 16")


@dataclass
class LaurentExpansion:
    center: complex
    principal: list[np.ndarray] = field(repr=False)
    pole_order: int
    tail_norm: float
    cross_residual: float = math.nan
    contour: ContourConfig | None = None


def resolvent_at(a, lam: complex, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    a = as_matrix(a)
    require_square(a)
    lam = complex(lam)
    raw = raw_eigenvalues(a)
    if raw.size and np.min(np.abs(raw - lam)) <= tol.eig_cluster_tol:
        raise OnSpectrumError(f"{lam} lies on the spectrum to tolerance")
    n = a.shape[0]
    return solve_linear(lam * identity(n) - a, identity(n), tol)


def _target_cluster(a, lambda0, tol):
    cluster = drazincore._locate_cluster(a, complex(lambda0), tol)
    if cluster is None:
        raise NotAnEigenvalueError(f"{lambda0} is not an eigenvalue to tolerance")
    return cluster


def laurent_algebraic(a, lambda0: complex, tol: ToleranceConfig = DEFAULT_TOL) -> LaurentExpansion:
    """Principal part at an eigenvalue from the spectral projection.

    The expansion stops at the first coefficient below residual_atol
    (relative to ||a - l0||^(k-1) ||P||); the resulting order must equal
    index(a - l0) from the chain analysis or LaurentMismatchError is raised.
    """
    a = as_matrix(a)
    require_square(a)
    lambda0 = complex(lambda0)
    cluster = _target_cluster(a, lambda0, tol)
    n = a.shape[0]
    s = a - lambda0 * identity(n)
    p = drazincore.spectral_projection(a, lambda0, tol)
    scale_s = max(fro(s), 1.0)
    scale_p = max(fro(p), 1.0)
    coeffs = [p]
    order = None
    for k in range(1, cluster.multiplicity + 2):
        nxt = s @ coeffs[-1]
        if fro(nxt) <= tol.residual_atol * scale_p * scale_s**k:
            order = k
            tail = fro(nxt)
            break
        coeffs.append(nxt)
    if order is None:
        raise LaurentMismatchError(
            f"principal part at {lambda0} did not terminate by the multiplicity", None, None
        )
    index = drazincore.index_of(a, tol, shift=lambda0)
    if index != order:
        raise LaurentMismatchError(
            f"pole order {order} from coefficients != index {index} of a - l0", order, index
        )
    return LaurentExpansion(lambda0, coeffs, order, tail)


def contour_radius(a, lambda0: complex, config: ContourConfig, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    a = as_matrix(a)
    lambda0 = complex(lambda0)
    others = [c.center for c in eigenvalue_clusters(a, tol) if abs(c.center - lambda0) > tol.eig_cluster_tol]
    if not others:
        return config.radius_frac * max(1.0, norm2(a))
    gap = min(abs(z - lambda0) for z in others)
    if gap < 100 * tol.eig_cluster_tol:
        raise ContourError(f"nearest other eigenvalue is only {gap:.3e} away from {lambda0}")
    return config.radius_frac * gap


def _refined_resolvent(a, lam: complex, tol: ToleranceConfig, steps: int = 1) -> np.ndarray:
    """(lam I - a)^-1 with residual-corrected iterative refinement.

    On a small circle around a high-order pole the resolvent is huge and an
    ordinary backward-stable solve leaves a forward error ~ eps ||a|| ||R||^2,
    which the quadrature then fails to cancel.  The residual I - (lam I - a) X
    is formed in extended precision (np.clongdouble; a no-op where that is
    plain double) and one correction solve recovers most of the lost digits.
    """
    n = a.shape[0]
    eye = identity(n)
    x = solve_linear(lam * eye - a, eye, tol)
    ext = np.clongdouble
    m_ext = ext(lam) * np.eye(n, dtype=ext) - a.astype(ext)
    for _ in range(steps):
        res = np.eye(n, dtype=ext) - m_ext @ x.astype(ext)
        x = x + solve_linear(lam * eye - a, res.astype(np.complex128), tol)
    return x


def contour_coefficients(a, lambda0: complex, orders, config: ContourConfig = ContourConfig(),
                         tol: ToleranceConfig = DEFAULT_TOL) -> list[np.ndarray]:
    """Trapezoidal estimates of b_k for every k in ``orders``, sharing solves.

    With lam_j = l0 + r w_j, w_j = exp(2 pi i j / N), the integral becomes
    b_k ~ (1/N) sum_j (r w_j)^k R(lam_j, a); nodes are summed in index order
    so the result does not depend on evaluation scheduling.
    """
    a = as_matrix(a)
    require_square(a)
    orders = list(orders)
    if any(k < 1 for k in orders):
        raise ValueError("coefficient index must be >= 1")
    lambda0 = complex(lambda0)
    r = contour_radius(a, lambda0, config, tol)
    raw = raw_eigenvalues(a)
    if raw.size and np.min(np.abs(np.abs(raw - lambda0) - r)) <= 10 * tol.eig_cluster_tol:
        raise ContourError("contour passes too close to an eigenvalue; use a smaller radius_frac")
    dim = a.shape[0]
    totals = [np.zeros((dim, dim), dtype=np.complex128) for _ in orders]
    for j in range(config.nodes):
        w = np.exp(2j * np.pi * j / config.nodes)
        res = _refined_resolvent(a, lambda0 + r * w, tol)
        for t, k in zip(totals, orders):
            t += (r * w) ** k * res
    return [t / config.nodes for t in totals]


def laurent_contour(a, lambda0: complex, n: int, config: ContourConfig = ContourConfig(),
                    tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Contour-quadrature estimate of the principal coefficient b_n."""
    return contour_coefficients(a, lambda0, [n], config, tol)[0]


def laurent_crosscheck(a, lambda0: complex, config: ContourConfig = ContourConfig(),
                       tol: ToleranceConfig = DEFAULT_TOL) -> LaurentExpansion:
    """Algebraic expansion annotated with its distance to the contour route.

    ``cross_residual`` is max_k ||b_k(contour) - b_k(algebraic)|| / (1 + ||b_k||)
    over k = 1..pole_order+1 (the last algebraic coefficient being zero).
    """
    exp = laurent_algebraic(a, lambda0, tol)
    dim = exp.principal[0].shape[0]
    orders = range(1, exp.pole_order + 2)
    estimates = contour_coefficients(a, exp.center, orders, config, tol)
    worst = 0.0
    for k, est in zip(orders, estimates):
        ref = exp.principal[k - 1] if k <= exp.pole_order else np.zeros((dim, dim), dtype=np.complex128)
        worst = max(worst, fro(est - ref) / (1 + fro(ref)))
    exp.cross_residual = worst
    exp.contour = config
    return exp


def poles(a, tol: ToleranceConfig = DEFAULT_TOL) -> list[tuple[complex, int]]:
    """Every eigenvalue with its pole order index(a - lam)."""
    a = as_matrix(a)
    require_square(a)
    return [(c.center, drazincore.index_of(a, tol, shift=c.center)) for c in eigenvalue_clusters(a, tol)]


@dataclass(frozen=True)
class IESResult:
    """Isolated essential singularities, with the certificates behind them.

    For a matrix every spectral point is isolated and must be a pole of
    finite order; ``certificates`` lists (point, order) for each one.
    """

    points: tuple = ()
    certificates: tuple[tuple[complex, int], ...] = ()


def ies(a, tol: ToleranceConfig = DEFAULT_TOL) -> IESResult:
    a = as_matrix(a)
    certs = tuple(poles(a, tol))
    n = a.shape[0]
    leftovers = tuple(z for z, order in certs if not 1 <= order <= n)
    return IESResult(leftovers, certs)


def _same_poles(p, q, tol):
    if len(p) != len(q):
        return False
    used = set()
    for z, k in p:
        match = [i for i, (w, m) in enumerate(q) if i not in used and abs(z - w) <= tol.eig_cluster_tol and m == k]
        if not match:
            return False
        used.add(match[0])
    return True


@dataclass
class PoleTransferReport:
    poles_a: list[tuple[complex, int]]
    poles_left: list[tuple[complex, int]]
    poles_right: list[tuple[complex, int]]
    ies_empty: tuple[bool, bool, bool]
    mismatches: list[str]

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_dict(self):
        fmt = lambda ps: [[z.real, z.imag, k] for z, k in ps]  # noqa: E731
        return {
            "poles_a": fmt(self.poles_a),
            "poles_left": fmt(self.poles_left),
            "poles_right": fmt(self.poles_right),
            "ies_empty": list(self.ies_empty),
            "passed": self.passed,
            "mismatches": self.mismatches,
        }


def theorem11_check(a, tol: ToleranceConfig = DEFAULT_TOL, lift_cap: int = multop.DEFAULT_LIFT_CAP) -> PoleTransferReport:
    """Poles (with orders) and IES of a, L_a and R_a must coincide."""
    a = as_matrix(a)
    la = multop.left_mult(a, lift_cap).matrix
    ra = multop.right_mult(a, lift_cap).matrix
    pa, pl, pr = poles(a, tol), poles(la, tol), poles(ra, tol)
    empty = tuple(not ies(m, tol).points for m in (a, la, ra))
    mismatches = []
    if not _same_poles(pa, pl, tol):
        mismatches.append("poles of a and L_a differ")
    if not _same_poles(pa, pr, tol):
        mismatches.append("poles of a and R_a differ")
    if not all(empty):
        mismatches.append(f"IES not empty: {empty}")
    return PoleTransferReport(pa, pl, pr, empty, mismatches)
