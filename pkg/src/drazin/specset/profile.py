"""Spectral profiles and the identity suite that referees them."""
from __future__ import annotations

from dataclasses import dataclass, field, fields, replace

from ..errors import UndecidableRegionError
from .regions import (
    EMPTY,
    Circle,
    Disk,
    Region,
    describe,
    points,
    region_acc,
    region_boundary,
    region_difference,
    region_equal,
    region_from_json,
    region_intersection,
    region_iso,
    region_subset,
    region_to_json,
    region_union,
)

FIELDS = ("sigma", "sigma_asc", "sigma_desc", "sigma_ld", "sigma_rd", "sigma_dr", "poles", "ies")


@dataclass(frozen=True)
class SpectralProfile:
    """The named spectra of one operator, each a Region.

    ``poles`` may only hold points and sequences (poles are isolated), and
    carries the pole order of each element where it is known.
    """

    sigma: Region = EMPTY
    sigma_asc: Region = EMPTY
    sigma_desc: Region = EMPTY
    sigma_ld: Region = EMPTY
    sigma_rd: Region = EMPTY
    sigma_dr: Region = EMPTY
    poles: Region = EMPTY
    ies: Region = EMPTY

    def __post_init__(self):
        for name in FIELDS:
            if not isinstance(getattr(self, name), Region):
                raise TypeError(f"{name} must be a Region")
        if any(isinstance(a, (Circle, Disk)) for a in self.poles.atoms):
            raise ValueError("poles are isolated: disks and circles are not allowed in the pole set")

    def to_json(self) -> dict:
        return {name: region_to_json(getattr(self, name)) for name in FIELDS}

    @classmethod
    def from_json(cls, data: dict) -> "SpectralProfile":
        unknown = set(data) - set(FIELDS)
        if unknown:
            raise ValueError(f"unknown profile fields: {sorted(unknown)}")
        missing = [f for f in FIELDS if f not in data]
        if missing:
            raise ValueError(f"profile is missing fields: {missing}")
        return cls(**{name: region_from_json(data[name]) for name in FIELDS})

    def describe(self) -> dict[str, str]:
        return {name: describe(getattr(self, name)) for name in FIELDS}


@dataclass(frozen=True)
class Check:
    """One evaluated relation ``lhs <relation> rhs``."""

    lhs_expr: str
    relation: str
    rhs_expr: str
    lhs: str
    rhs: str
    holds: bool


@dataclass(frozen=True)
class IdentityResult:
    name: str
    statement: str
    checks: tuple[Check, ...] = ()
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.holds for c in self.checks)

    def to_dict(self):
        return {
            "name": self.name,
            "statement": self.statement,
            "passed": self.passed,
            "error": self.error,
            "checks": [
                {"lhs": f"{c.lhs_expr} = {c.lhs}", "relation": c.relation, "rhs": f"{c.rhs_expr} = {c.rhs}",
                 "holds": c.holds}
                for c in self.checks
            ],
        }


@dataclass(frozen=True)
class ProfileReport:
    results: tuple[IdentityResult, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failed(self) -> list[str]:
        return [r.name for r in self.results if not r.passed]

    def __getitem__(self, name) -> IdentityResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_dict(self):
        return {"passed": self.passed, "failed": self.failed, "identities": [r.to_dict() for r in self.results]}


def _identities(p: SpectralProfile):
    """(name, statement, list of (lhs_expr, relation, rhs_expr, thunk_lhs, thunk_rhs))."""
    s, dr, pi, ies = p.sigma, p.sigma_dr, p.poles, p.ies
    iso_s = lambda: region_iso(s)  # noqa: E731
    return [
        ("drazin_spectrum_splits", "σ_DR = σ_LD ∪ σ_RD = σ_asc ∪ σ_desc", [
            ("σ_DR", "=", "σ_LD ∪ σ_RD", lambda: dr, lambda: region_union(p.sigma_ld, p.sigma_rd)),
            ("σ_DR", "=", "σ_asc ∪ σ_desc", lambda: dr, lambda: region_union(p.sigma_asc, p.sigma_desc)),
        ]),
        ("chain_spectra_inclusions", "σ_desc ⊆ σ_RD and σ_asc ⊆ σ_LD", [
            ("σ_desc", "⊆", "σ_RD", lambda: p.sigma_desc, lambda: p.sigma_rd),
            ("σ_asc", "⊆", "σ_LD", lambda: p.sigma_asc, lambda: p.sigma_ld),
        ]),
        ("spectrum_is_drazin_plus_poles", "σ = σ_DR ∪ Π and Π = σ \\ σ_DR", [
            ("σ", "=", "σ_DR ∪ Π", lambda: s, lambda: region_union(dr, pi)),
            ("Π", "=", "σ \\ σ_DR", lambda: pi, lambda: region_difference(s, dr)),
        ]),
        ("poles_avoid_drazin_spectrum", "σ_DR ∩ Π = ∅", [
            ("σ_DR ∩ Π", "=", "∅", lambda: region_intersection(dr, pi), lambda: EMPTY),
        ]),
        ("isolated_drazin_points_are_ies", "iso(σ) ∩ σ_DR = IES", [
            ("iso(σ) ∩ σ_DR", "=", "IES", lambda: region_intersection(iso_s(), dr), lambda: ies),
        ]),
        ("accumulation_points_agree", "acc(σ) = acc(σ_DR) and iso(σ_DR) = IES", [
            ("acc(σ)", "=", "acc(σ_DR)", lambda: region_acc(s), lambda: region_acc(dr)),
            ("iso(σ_DR)", "=", "IES", lambda: region_iso(dr), lambda: ies),
        ]),
        ("drazin_spectrum_from_acc", "σ_DR = acc(σ) ∪ IES", [
            ("σ_DR", "=", "acc(σ) ∪ IES", lambda: dr, lambda: region_union(region_acc(s), ies)),
        ]),
        ("poles_on_boundary", "Π = ∂σ \\ σ_DR", [
            ("Π", "=", "∂σ \\ σ_DR", lambda: pi, lambda: region_difference(region_boundary(s), dr)),
        ]),
        ("ies_three_ways", "IES = iso(σ) ∩ σ_LD = iso(σ) ∩ σ_RD = iso(σ) ∩ σ_desc", [
            ("IES", "=", "iso(σ) ∩ σ_LD", lambda: ies, lambda: region_intersection(iso_s(), p.sigma_ld)),
            ("IES", "=", "iso(σ) ∩ σ_RD", lambda: ies, lambda: region_intersection(iso_s(), p.sigma_rd)),
            ("IES", "=", "iso(σ) ∩ σ_desc", lambda: ies, lambda: region_intersection(iso_s(), p.sigma_desc)),
        ]),
    ]


IDENTITY_NAMES = tuple(name for name, _, _ in _identities(SpectralProfile()))


def verify_profile(p: SpectralProfile) -> ProfileReport:
    """Evaluate the nine identities; each carries both evaluated sides.

    An undecidable region configuration is reported on the identity that
    hit it (which then counts as not passed) rather than aborting the run.
    """
    results = []
    for name, statement, relations in _identities(p):
        checks = []
        error = None
        try:
            for lhs_expr, rel, rhs_expr, fl, fr in relations:
                lhs, rhs = fl(), fr()
                holds = region_subset(lhs, rhs) if rel == "⊆" else region_equal(lhs, rhs)
                checks.append(Check(lhs_expr, rel, rhs_expr, describe(lhs), describe(rhs), holds))
        except UndecidableRegionError as exc:
            error = f"undecidable: {exc}"
        results.append(IdentityResult(name, statement, tuple(checks), error))
    return ProfileReport(tuple(results))


def from_matrix(a, tol=None) -> SpectralProfile:
    """Profile of a matrix: every eigenvalue is a pole of order index(a - λ)."""
    from ..numkernel import DEFAULT_TOL
    from ..resolvent import poles

    tol = tol or DEFAULT_TOL
    ps = poles(a, tol)
    zs = [z for z, _ in ps]
    return SpectralProfile(sigma=points(zs), poles=points(zs, [k for _, k in ps]))


def with_field(p: SpectralProfile, name: str, value: Region) -> SpectralProfile:
    if name not in FIELDS:
        raise KeyError(name)
    return replace(p, **{name: value})


def profile_fields(p: SpectralProfile) -> dict[str, Region]:
    return {f.name: getattr(p, f.name) for f in fields(p)}
