"""Seeded random-matrix corpus and the check suites run over it.

Every case owns an independent PCG64 stream keyed by (seed, ordinal), so the
corpus does not depend on evaluation order or on how many workers run it, and
a failing case can be rebuilt from the two integers in its record.
"""
from __future__ import annotations

import json
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import drazincore, multop, resolvent
from .errors import DrazinError, GenerationError, NoFactorizationError, UnknownSuiteError
from .numkernel import (
    DEFAULT_TOL,
    ConditioningWarning,
    ToleranceConfig,
    block_diag,
    eigenvalue_clusters,
    fro,
    jordan_block,
    matrix_hash,
)

S_COND_CAP = 1e2
C_COND_CAP = 1e3
DRAW_BUDGET = 200

# Node-doubling check: contour at a quarter of the gap, N and 2N nodes, only
# where the nearest other eigenvalue is at least WELL_SEPARATED away.
DOUBLING_CONFIG = resolvent.ContourConfig(radius_frac=0.25, nodes=32)
DOUBLING_TOL = 1e-9
WELL_SEPARATED = 0.5
CROSSCHECK_TOL = 1e-6
MIN_SEPARATION = 1e-3
OFF_SPECTRUM_POINTS = 3


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 0
    sizes: tuple[int, ...] = (2, 3, 4, 5, 6, 7, 8)
    cases_per_size: int = 50
    index_targets: tuple[int, ...] = (0, 1, 2, 3, 4)
    tolerances: ToleranceConfig = DEFAULT_TOL
    lift_cap: int = 12
    contour: resolvent.ContourConfig = field(default_factory=resolvent.ContourConfig)
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        object.__setattr__(self, "index_targets", tuple(int(k) for k in self.index_targets))
        if not self.sizes or min(self.sizes) < 1:
            raise ValueError("sizes must be >= 1")
        if self.cases_per_size < 1:
            raise ValueError("cases_per_size must be >= 1")
        if not self.index_targets or min(self.index_targets) < 0:
            raise ValueError("index targets must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    @property
    def total_cases(self) -> int:
        return len(self.sizes) * self.cases_per_size

    def to_dict(self) -> dict:
        # worker count is deliberately absent: it must not change the report
        return {
            "seed": self.seed,
            "sizes": list(self.sizes),
            "cases_per_size": self.cases_per_size,
            "index_targets": list(self.index_targets),
            "tolerances": self.tolerances.to_dict(),
            "lift_cap": self.lift_cap,
            "contour": {"radius_frac": self.contour.radius_frac, "nodes": self.contour.nodes},
        }


def case_rng(seed: int, ordinal: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(ordinal)])))


def _cn(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def _draw_conditioned(rng, n, cap, budget):
    for _ in range(budget):
        m = _cn(rng, (n, n))
        if np.linalg.cond(m) <= cap:
            return m
    raise GenerationError(f"no {n}x{n} draw with condition <= {cap:g} in {budget} tries")


def gen_matrix(n: int, index_target: int, rng: np.random.Generator, budget: int = DRAW_BUDGET) -> np.ndarray:
    """S diag(C, N) S^-1 with N nilpotent of exact index ``index_target``.

    N is a shuffled direct sum of nilpotent Jordan blocks whose largest block
    has size ``index_target``; its total size is drawn from
    [index_target, n].  C is invertible (cond <= 1e3) and S has cond <= 1e2.
    """
    if not 0 <= index_target <= n:
        raise ValueError(f"index target {index_target} outside 0..{n}")
    s = _draw_conditioned(rng, n, S_COND_CAP, budget)
    m = int(rng.integers(index_target, n + 1)) if index_target else 0
    blocks = []
    if m:
        blocks, rest = [index_target], m - index_target
        while rest > 0:
            b = int(rng.integers(1, min(index_target, rest) + 1))
            blocks.append(b)
            rest -= b
        rng.shuffle(blocks)
    c = n - m
    parts = [_draw_conditioned(rng, c, C_COND_CAP, budget)] if c else []
    parts += [jordan_block(b) for b in blocks]
    return s @ block_diag(*parts) @ np.linalg.inv(s)


def case_params(config: SuiteConfig, ordinal: int) -> dict:
    if not 0 <= ordinal < config.total_cases:
        raise IndexError(f"ordinal {ordinal} outside corpus of {config.total_cases}")
    n = config.sizes[ordinal // config.cases_per_size]
    j = ordinal % config.cases_per_size
    targets = [k for k in config.index_targets if k <= n] or [n]
    return {"ordinal": ordinal, "n": n, "index_target": targets[j % len(targets)]}


def regenerate(seed: int, ordinal: int, n: int, index_target: int) -> np.ndarray:
    """Rebuild the exact corpus matrix recorded as (seed, ordinal, n, index_target)."""
    return gen_matrix(n, index_target, case_rng(seed, ordinal))


def corpus(config: SuiteConfig):
    """Yield (params, matrix, rng) for every case; rng continues the case stream."""
    for ordinal in range(config.total_cases):
        p = case_params(config, ordinal)
        rng = case_rng(config.seed, ordinal)
        yield p, gen_matrix(p["n"], p["index_target"], rng), rng


# -- per-case checks -------------------------------------------------------------


def _check(passed, **info):
    return {"passed": bool(passed), **info}


def _drazin_case(a, p, rng, cfg):
    tol = cfg.tolerances
    res = drazincore.drazin_inverse(a, tol)
    out = {
        "residuals": _check(max(res.residuals) <= tol.residual_atol, residual=max(res.residuals),
                            values=list(res.residuals)),
        "index": _check(res.index == p["index_target"], value=res.index, expected=p["index_target"]),
    }
    # informational: the pseudoinverse route degrades with the index
    alt = drazincore.pinv_drazin(a, tol)
    out["pinv_route_distance"] = {"passed": True, "value": fro(alt - res.inverse) / (1 + fro(res.inverse))}
    return out


def _theorem3_case(a, p, rng, cfg):
    prof = drazincore.chain_profile(a, cfg.tolerances)
    n = prof.dim
    split = all(r + v == n for r, v in zip(prof.power_ranks, prof.nullities))
    return {
        "ascent_descent_index": _check(prof.ascent == prof.descent == prof.index == p["index_target"],
                                       ascent=prof.ascent, descent=prof.descent, index=prof.index),
        "rank_nullity_split": _check(split, ranks=list(prof.power_ranks), nullities=list(prof.nullities)),
        "unflagged": {"passed": True, "value": not prof.flagged},
    }


def _theorem4_case(a, p, rng, cfg):
    rep = multop.transfer_index_check(a, cfg.tolerances, cfg.lift_cap, inverse_rtol=cfg.tolerances.residual_atol)
    return {
        "index_triple": _check(len(set(rep.indices)) == 1, value=list(rep.indices)),
        "lifted_inverse": _check(max(rep.left_inverse_error, rep.right_inverse_error) <= rep.bound,
                                 residual=max(rep.left_inverse_error, rep.right_inverse_error)),
    }


def sample_lambdas(a, rng, tol=DEFAULT_TOL) -> list[complex]:
    """Every eigenvalue plus OFF_SPECTRUM_POINTS points at distance >= 0.1 from the spectrum."""
    eig = [c.center for c in eigenvalue_clusters(a, tol)]
    off = []
    while len(off) < OFF_SPECTRUM_POINTS:
        z = complex(*(2 * rng.standard_normal(2)))
        if all(abs(z - e) >= 0.1 for e in eig):
            off.append(z)
    return eig + off


def _value_case(fn):
    def run(a, p, rng, cfg):
        bad = []
        for lam in sample_lambdas(a, rng, cfg.tolerances):
            rep = fn(a, lam, cfg.tolerances, cfg.lift_cap)
            if not rep.passed:
                bad.append({"lambda": [lam.real, lam.imag], "values": rep.values, "mismatches": rep.mismatches})
        return {"chain_values": _check(not bad, mismatches=bad)}

    return run


def _theorem11_case(a, p, rng, cfg):
    tol = cfg.tolerances
    rep = resolvent.theorem11_check(a, tol, cfg.lift_cap)
    out = {"pole_transfer": _check(rep.passed, mismatches=rep.mismatches),
           "ies_empty": _check(all(rep.ies_empty), value=list(rep.ies_empty))}
    zero = [k for z, k in rep.poles_a if abs(z) <= tol.eig_cluster_tol]
    if zero:
        idx = drazincore.index_of(a, tol)
        out["pole_order_at_zero"] = _check(zero[0] == idx, order=zero[0], index=idx)
    return out


def _theorem12_case(a, p, rng, cfg):
    from .specset import from_matrix, verify_profile

    rep = verify_profile(from_matrix(a, cfg.tolerances))
    return {"profile_identities": _check(rep.passed, failed=rep.failed)}


def _laurent_case(a, p, rng, cfg):
    tol = cfg.tolerances
    centers = [c.center for c in eigenvalue_clusters(a, tol)]
    gaps = [min((abs(z - w) for w in centers if w is not z), default=np.inf) for z in centers]
    if min(gaps) < MIN_SEPARATION:
        return {"skipped": {"passed": True, "reason": f"separation {min(gaps):.3e} < {MIN_SEPARATION}"}}
    worst_cross, worst_double, orders = 0.0, 0.0, []
    doubled = resolvent.ContourConfig(DOUBLING_CONFIG.radius_frac, 2 * DOUBLING_CONFIG.nodes)
    n_doubling = 0
    for z, gap in zip(centers, gaps):
        exp = resolvent.laurent_crosscheck(a, z, cfg.contour, tol)
        worst_cross = max(worst_cross, exp.cross_residual)
        orders.append(exp.pole_order)
        if gap >= WELL_SEPARATED:
            ks = range(1, exp.pole_order + 2)
            coarse = resolvent.contour_coefficients(a, z, ks, DOUBLING_CONFIG, tol)
            fine = resolvent.contour_coefficients(a, z, ks, doubled, tol)
            n_doubling += 1
            for c, f in zip(coarse, fine):
                worst_double = max(worst_double, fro(c - f) / (1 + fro(f)))
    return {
        "crosscheck": _check(worst_cross <= CROSSCHECK_TOL, residual=worst_cross, pole_orders=orders),
        "node_doubling": _check(worst_double <= DOUBLING_TOL, residual=worst_double, eigenvalues=n_doubling),
    }


def _factorization_pair(n, rng, inclusion: bool, side: str):
    r = int(rng.integers(1, n))
    b = _draw_conditioned(rng, n, S_COND_CAP, DRAW_BUDGET)[:, :r] @ _draw_conditioned(rng, n, S_COND_CAP, DRAW_BUDGET)[:r]
    c = _cn(rng, (n, n))
    a = b @ c if side == "range" else c @ b
    if not inclusion:
        u, _, vh = np.linalg.svd(b)
        if side == "range":
            a = a + np.outer(u[:, -1], _cn(rng, n))  # column outside R(b)
        else:
            a = a + np.outer(_cn(rng, n), vh[-1].conj())  # nonzero on N(b)
    return a, b


def _factorization_case(a, p, rng, cfg):
    tol = cfg.tolerances
    n = max(p["n"], 2)
    out = {}
    for side, fn in (("range", multop.right_factor), ("nullspace", multop.left_factor)):
        a1, b1 = _factorization_pair(n, rng, True, side)
        res = fn(a1, b1, tol)
        out[f"{side}_inclusion"] = _check(res.certified and res.residual <= tol.residual_atol, residual=res.residual)
        a2, b2 = _factorization_pair(n, rng, False, side)
        try:
            fn(a2, b2, tol)
            out[f"{side}_violation"] = _check(False, reason="factorization returned for a violating pair")
        except NoFactorizationError as exc:
            out[f"{side}_violation"] = _check(True, ranks=[exc.rank_joint, exc.rank_b])
    return out


MATRIX_SUITES: dict[str, Callable] = {
    "drazin": _drazin_case,
    "theorem3": _theorem3_case,
    "theorem4": _theorem4_case,
    "prop7": _value_case(multop.prop7_value_check),
    "theorem9": _value_case(multop.theorem9_value_check),
    "theorem11": _theorem11_case,
    "theorem12": _theorem12_case,
    "laurent-crosscheck": _laurent_case,
    "factorization": _factorization_case,
}
SUITES = tuple(MATRIX_SUITES) + ("catalog",)


# -- running -----------------------------------------------------------------------


@dataclass
class Report:
    suite: str
    config: dict
    cases: list[dict]
    wall_time: float = 0.0

    @property
    def failed(self) -> int:
        return sum(not c["passed"] for c in self.cases)

    @property
    def max_residual(self) -> float:
        vals = [chk["residual"] for c in self.cases for chk in c["checks"].values()
                if isinstance(chk.get("residual"), (int, float))]
        return max(vals, default=0.0)

    def summary(self, timing: bool = True) -> dict:
        out = {"total": len(self.cases), "failed": self.failed, "max_residual": self.max_residual}
        if timing:
            out["wall_time"] = round(self.wall_time, 3)
        return out

    def to_dict(self, timing: bool = True) -> dict:
        return {"suite": self.suite, "config": self.config, "cases": self.cases, "summary": self.summary(timing)}

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=1, sort_keys=True, default=_json_default)

    def body_bytes(self) -> bytes:
        """Canonical report bytes without the wall-time field."""
        return self.to_json(timing=False).encode()


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, np.bool_):
        return bool(o)
    raise TypeError(type(o))


def run_case(name: str, config: SuiteConfig, ordinal: int) -> dict:
    fn = MATRIX_SUITES[name]
    p = case_params(config, ordinal)
    rng = case_rng(config.seed, ordinal)
    record = {"ordinal": ordinal, "params": {"seed": config.seed, **{k: p[k] for k in ("n", "index_target")}}}
    try:
        a = gen_matrix(p["n"], p["index_target"], rng)
    except GenerationError as exc:
        record.update(matrix_hash=None, checks={"generation": _check(False, error=str(exc))}, passed=False)
        return record
    record["matrix_hash"] = matrix_hash(a)
    try:
        checks = fn(a, p, rng, config)
    except DrazinError as exc:
        checks = {"error": _check(False, error=f"{type(exc).__name__}: {exc}")}
    record["checks"] = checks
    record["passed"] = all(c["passed"] for c in checks.values())
    return record


def _catalog_cases(config: SuiteConfig) -> list[dict]:
    from .specset.models import catalog, mutation_detected, mutations

    cases = []
    for ordinal, entry in enumerate(catalog()):
        muts = mutations(entry)
        missed = [f"{m.field}:{m.kind}" for m in muts if not mutation_detected(entry, m)[0]]
        checks = {
            "identities": _check(entry.report.passed, failed=entry.report.failed),
            "mutation_coverage": _check(not missed, total=len(muts), undetected=missed),
        }
        cases.append({"ordinal": ordinal, "params": {"entry": entry.name}, "checks": checks,
                      "passed": all(c["passed"] for c in checks.values())})
    return cases


def run_suite(name: str, config: SuiteConfig | None = None) -> Report:
    """Run a named suite over the corpus; the report is deterministic given ``config``."""
    config = config or SuiteConfig()
    if name not in SUITES:
        raise UnknownSuiteError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    start = time.perf_counter()
    with warnings.catch_warnings():
        # flagged chain decisions are reported in the checks themselves
        warnings.simplefilter("ignore", ConditioningWarning)
        if name == "catalog":
            warnings.simplefilter("ignore", UserWarning)
            cases = _catalog_cases(config)
        elif config.workers > 1:
            with ThreadPoolExecutor(config.workers) as pool:
                cases = list(pool.map(lambda o: run_case(name, config, o), range(config.total_cases)))
        else:
            cases = [run_case(name, config, o) for o in range(config.total_cases)]
    cases.sort(key=lambda c: c["ordinal"])
    return Report(name, config.to_dict(), cases, time.perf_counter() - start)
