"""Left/right multiplication operators on M_n(C) realized as Kronecker products.

Convention: vec stacks columns, so for X in M_n(C)

    vec(A X) = kron(I_n, A) vec(X)        (left multiplication L_A)
    vec(X A) = kron(A^T, I_n) vec(X)      (right multiplication R_A)

The transpose in R_A is plain, not conjugate: R_A is linear.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import drazincore
from .errors import LiftTooLargeError, NoFactorizationError
from .numkernel import (
    DEFAULT_TOL,
    ToleranceConfig,
    as_matrix,
    fro,
    identity,
    pseudoinverse,
    rank,
    require_square,
)

DEFAULT_LIFT_CAP = 16
_ACTION_RTOL = 1e-12


def vec(x) -> np.ndarray:
    x = as_matrix(x)
    return x.reshape(-1, 1, order="F")


def unvec(v, rows: int, cols: int | None = None) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    cols = rows if cols is None else cols
    if v.size != rows * cols:
        raise ValueError(f"vector of length {v.size} cannot be unstacked to {rows}x{cols}")
    return v.reshape(rows, cols, order="F")


@dataclass(frozen=True)
class MultRealization:
    side: str
    base_dim: int
    matrix: np.ndarray = field(repr=False)

    def apply(self, x) -> np.ndarray:
        return unvec(self.matrix @ vec(x), self.base_dim)


def _check_cap(n: int, lift_cap: int) -> None:
    if n > lift_cap:
        raise LiftTooLargeError(f"base dimension {n} exceeds lift cap {lift_cap} (lift {n * n}x{n * n})")


def _certify_action(real: MultRealization, a: np.ndarray, probes: int = 5) -> None:
    rng = np.random.default_rng(0x5EED)
    n = real.base_dim
    for _ in range(probes):
        x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        want = a @ x if real.side == "left" else x @ a
        got = real.apply(x)
        if fro(got - want) > _ACTION_RTOL * (1 + fro(want)):
            raise AssertionError(f"{real.side} realization fails its action check")


def left_mult(a, lift_cap: int = DEFAULT_LIFT_CAP) -> MultRealization:
    a = as_matrix(a)
    require_square(a)
    n = a.shape[0]
    _check_cap(n, lift_cap)
    real = MultRealization("left", n, np.kron(identity(n), a))
    _certify_action(real, a)
    return real


def right_mult(a, lift_cap: int = DEFAULT_LIFT_CAP) -> MultRealization:
    a = as_matrix(a)
    require_square(a)
    n = a.shape[0]
    _check_cap(n, lift_cap)
    real = MultRealization("right", n, np.kron(a.T, identity(n)))
    _certify_action(real, a)
    return real


@dataclass
class TransferReport:
    """Index triple and lifted-inverse distances for one matrix."""

    indices: tuple[int, int, int]
    left_inverse_error: float
    right_inverse_error: float
    bound: float
    mismatches: list[str]

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_dict(self):
        return {
            "indices": list(self.indices),
            "left_inverse_error": self.left_inverse_error,
            "right_inverse_error": self.right_inverse_error,
            "passed": self.passed,
            "mismatches": self.mismatches,
        }


def transfer_index_check(a, tol: ToleranceConfig = DEFAULT_TOL, lift_cap: int = DEFAULT_LIFT_CAP,
                         inverse_rtol: float = 1e-8) -> TransferReport:
    """Index of a, L_a, R_a must agree and (L_a)^D must be L_(a^D)."""
    a = as_matrix(a)
    n = a.shape[0]
    la, ra = left_mult(a, lift_cap), right_mult(a, lift_cap)
    base = drazincore.drazin_inverse(a, tol)
    left = drazincore.drazin_inverse(la.matrix, tol)
    right = drazincore.drazin_inverse(ra.matrix, tol)
    lift_l = np.kron(identity(n), base.inverse)
    lift_r = np.kron(base.inverse.T, identity(n))
    err_l = fro(left.inverse - lift_l) / (1 + fro(lift_l))
    err_r = fro(right.inverse - lift_r) / (1 + fro(lift_r))
    indices = (base.index, left.index, right.index)
    mismatches = []
    if len(set(indices)) != 1:
        mismatches.append(f"index triple {indices} not constant")
    if err_l > inverse_rtol:
        mismatches.append(f"(L_a)^D differs from L_(a^D): {err_l:.3e}")
    if err_r > inverse_rtol:
        mismatches.append(f"(R_a)^D differs from R_(a^D): {err_r:.3e}")
    return TransferReport(indices, err_l, err_r, inverse_rtol, mismatches)


@dataclass
class ChainValueReport:
    """Chain quantities of s = t - lambda and of its two lifts."""

    shift: complex
    values: dict[str, int]
    mismatches: list[str]

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_dict(self):
        return {
            "shift": [self.shift.real, self.shift.imag],
            "values": dict(self.values),
            "passed": self.passed,
            "mismatches": self.mismatches,
        }


def _shifted_lift_profiles(t, lam, tol, lift_cap):
    t = as_matrix(t)
    require_square(t)
    n = t.shape[0]
    s = t - complex(lam) * identity(n)
    ps = drazincore.chain_profile(s, tol)
    pl = drazincore.chain_profile(left_mult(s, lift_cap).matrix, tol)
    pr = drazincore.chain_profile(right_mult(s, lift_cap).matrix, tol)
    return ps, pl, pr


def prop7_value_check(t, lam: complex, tol: ToleranceConfig = DEFAULT_TOL,
                      lift_cap: int = DEFAULT_LIFT_CAP) -> ChainValueReport:
    """Pointwise ascent/descent transfer between s = t - lam and L_s, R_s.

    Checks asc(L_s) = asc(s), desc(L_s) = desc(s), desc(R_s) = asc(s) and
    asc(R_s) = desc(s).  In finite dimension asc(s) = desc(s) as well, so
    all six numbers must coincide; each is computed separately.
    """
    ps, pl, pr = _shifted_lift_profiles(t, lam, tol, lift_cap)
    values = {
        "asc_s": ps.ascent,
        "desc_s": ps.descent,
        "asc_L": pl.ascent,
        "desc_L": pl.descent,
        "asc_R": pr.ascent,
        "desc_R": pr.descent,
    }
    pairs = [
        ("asc_L", "asc_s"),
        ("desc_L", "desc_s"),
        ("desc_R", "asc_s"),
        ("asc_R", "desc_s"),
        ("asc_s", "desc_s"),
    ]
    mismatches = [f"{x}={values[x]} != {y}={values[y]}" for x, y in pairs if values[x] != values[y]]
    return ChainValueReport(complex(lam), values, mismatches)


def theorem9_value_check(t, lam: complex, tol: ToleranceConfig = DEFAULT_TOL,
                         lift_cap: int = DEFAULT_LIFT_CAP) -> ChainValueReport:
    """index(t - lam) against the ascents of its left and right lifts."""
    ps, pl, pr = _shifted_lift_profiles(t, lam, tol, lift_cap)
    values = {"index_s": ps.index, "asc_L": pl.ascent, "asc_R": pr.ascent}
    mismatches = []
    if values["index_s"] != max(values["asc_L"], values["asc_R"]):
        mismatches.append(f"index {values['index_s']} != max(asc L, asc R)")
    if len(set(values.values())) != 1:
        mismatches.append(f"values differ: {values}")
    return ChainValueReport(complex(lam), values, mismatches)


@dataclass(frozen=True)
class FactorizationResult:
    """C with a = b C ("range") or a = C b ("nullspace").

    ``residual`` is ||a - bC|| / (1 + ||a||) (resp. ||a - Cb||); ``certified``
    records whether it met residual_atol.
    """

    factor: np.ndarray
    residual: float
    direction: str
    certified: bool = True


def right_factor(a, b, tol: ToleranceConfig = DEFAULT_TOL) -> FactorizationResult:
    """C with a = b C, which exists iff R(a) is contained in R(b)."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"row dimensions differ: {a.shape} vs {b.shape}")
    r_joint, r_b = rank(np.hstack([b, a]), tol), rank(b, tol)
    if r_joint != r_b:
        raise NoFactorizationError(
            f"R(a) is not contained in R(b): rank[b|a]={r_joint} > rank b={r_b}", r_joint, r_b
        )
    c = pseudoinverse(b, tol) @ a
    residual = fro(a - b @ c) / (1 + fro(a))
    return FactorizationResult(c, residual, "range", residual <= tol.residual_atol)


def left_factor(a, b, tol: ToleranceConfig = DEFAULT_TOL) -> FactorizationResult:
    """C with a = C b, which exists iff N(b) is contained in N(a)."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[1]:
        raise ValueError(f"column dimensions differ: {a.shape} vs {b.shape}")
    r_joint, r_b = rank(np.vstack([b, a]), tol), rank(b, tol)
    if r_joint != r_b:
        raise NoFactorizationError(
            f"N(b) is not contained in N(a): rank[b;a]={r_joint} > rank b={r_b}", r_joint, r_b
        )
    c = a @ pseudoinverse(b, tol)
    residual = fro(a - c @ b) / (1 + fro(a))
    return FactorizationResult(c, residual, "nullspace", residual <= tol.residual_atol)
