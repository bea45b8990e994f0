"""Model operators with hand-derived spectral profiles.

Each entry stores only the conclusion of its derivation; the arguments are
written out in docs/catalog.md.  The identity suite in ``profile`` is the
executable referee: loading the catalog re-verifies every entry.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from ..errors import ProfileVerificationError
from .profile import FIELDS, ProfileReport, SpectralProfile, from_matrix, verify_profile, with_field
from .regions import (
    EMPTY,
    Point,
    Region,
    circle,
    closed_disk,
    harmonic_sequence,
    open_disk,
    points,
    region_difference,
    region_intersection,
    region_iso,
    region_union,
    translate,
)

PROVENANCE_DERIVED = "derived"


class ProfileWarning(UserWarning):
    """A built-in entry does not satisfy every identity."""


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    description: str
    profile: SpectralProfile
    derivation_note: str
    provenance: str = PROVENANCE_DERIVED
    report: ProfileReport | None = field(default=None, compare=False, repr=False)

    def verified(self) -> "CatalogEntry":
        return CatalogEntry(self.name, self.description, self.profile, self.derivation_note, self.provenance,
                            verify_profile(self.profile))

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "derivation_note": self.derivation_note,
            "provenance": self.provenance,
            "profile": self.profile.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "CatalogEntry":
        for key in ("name", "profile"):
            if key not in data:
                raise ValueError(f"catalog entry is missing {key!r}")
        return cls(
            name=str(data["name"]),
            description=str(data.get("description", "")),
            profile=SpectralProfile.from_json(data["profile"]),
            derivation_note=str(data.get("derivation_note", "")),
            provenance=str(data.get("provenance", "submitted")),
        )


# -- direct sums ----------------------------------------------------------------


def _max_orders(region: Region, *sources: Region) -> Region:
    """Copy of ``region`` whose point orders are the max over ``sources``."""
    out = []
    for a in region.atoms:
        if isinstance(a, Point):
            found = [b.order for s in sources for b in s.atoms
                     if isinstance(b, Point) and abs(b.z - a.z) <= 1e-8 and b.order is not None]
            out.append(Point(a.z, max(found) if found else a.order))
        else:
            out.append(a)
    return Region(out)


def direct_sum_profile(p: SpectralProfile, q: SpectralProfile) -> SpectralProfile:
    """Profile of A ⊕ B from the profiles of A and B.

    Chain conditions decompose blockwise, so σ and the five chain spectra are
    unions.  A pole of one summand survives only off the other spectrum or
    where it is a pole of both (order = the larger one); IES is the union of
    the summands' IES cut down to the isolated points of the joint spectrum.
    """
    sigma = region_union(p.sigma, q.sigma)
    pole_set = region_union(
        region_union(region_difference(p.poles, q.sigma), region_difference(q.poles, p.sigma)),
        region_intersection(p.poles, q.poles),
    )
    return SpectralProfile(
        sigma=sigma,
        sigma_asc=region_union(p.sigma_asc, q.sigma_asc),
        sigma_desc=region_union(p.sigma_desc, q.sigma_desc),
        sigma_ld=region_union(p.sigma_ld, q.sigma_ld),
        sigma_rd=region_union(p.sigma_rd, q.sigma_rd),
        sigma_dr=region_union(p.sigma_dr, q.sigma_dr),
        poles=_max_orders(pole_set, p.poles, q.poles),
        ies=region_intersection(region_union(p.ies, q.ies), region_iso(sigma)),
    )


def direct_sum(e1: CatalogEntry, e2: CatalogEntry) -> CatalogEntry:
    """Entry for the direct sum; raises if it breaks an identity both summands satisfy."""
    prof = direct_sum_profile(e1.profile, e2.profile)
    note = (f"Direct sum {e1.name} ⊕ {e2.name}: chain spectra are unions; poles and IES recomputed "
            f"against the joint spectrum.\n[{e1.name}] {e1.derivation_note}\n[{e2.name}] {e2.derivation_note}")
    entry = CatalogEntry(f"{e1.name}+{e2.name}", f"{e1.description} ⊕ {e2.description}", prof, note).verified()
    r1 = e1.report or verify_profile(e1.profile)
    r2 = e2.report or verify_profile(e2.profile)
    inherited = set(r1.failed) | set(r2.failed)
    new = [name for name in entry.report.failed if name not in inherited]
    if new:
        raise ProfileVerificationError(f"direct sum {entry.name} fails {new}", entry.report)
    return entry


# -- built-in entries -------------------------------------------------------------

_UNIT_DISK = closed_disk(0, 1)
_UNIT_CIRCLE = circle(0, 1)


def _matrix_entry(name, description, a) -> CatalogEntry:
    a = np.asarray(a, dtype=complex)
    return CatalogEntry(
        name, description, from_matrix(a),
        "Finite matrix: every eigenvalue is a pole whose order is the index of a - λ, so all "
        "Drazin-type spectra are empty and Π = σ (computed numerically).",
    )


def _builtin() -> list[CatalogEntry]:
    zero_pt = points([0], [1])
    entries = [
        CatalogEntry(
            "identity", "identity operator I",
            SpectralProfile(sigma=points([1]), poles=points([1], [1])),
            "I - λ is invertible for λ ≠ 1 and I - 1 = 0 has ascent = descent = 1, so 1 is a simple pole "
            "and every Drazin-type spectrum is empty.",
        ),
        CatalogEntry(
            "zero", "zero operator 0",
            SpectralProfile(sigma=points([0]), poles=zero_pt),
            "0 - λ is invertible for λ ≠ 0; the zero operator is Drazin invertible of index 1, a simple pole.",
        ),
        _matrix_entry("jordan2", "finite matrix J_2(0)", [[0, 1], [0, 0]]),
        _matrix_entry("diag12", "finite matrix diag(1, 2)", [[1, 0], [0, 2]]),
        CatalogEntry(
            "unilateral_shift", "forward shift S on ℓ²(N)",
            SpectralProfile(sigma=_UNIT_DISK, sigma_asc=EMPTY, sigma_ld=_UNIT_CIRCLE,
                            sigma_desc=_UNIT_DISK, sigma_rd=_UNIT_DISK, sigma_dr=_UNIT_DISK),
            "S - λ is injective for every λ (ascent 0), bounded below exactly off the unit circle and "
            "Fredholm of index -1 inside the disk, so descent is infinite on the closed disk; σ_LD is the "
            "circle, σ_desc = σ_RD = σ_DR = closed disk, no isolated spectral points.",
        ),
        CatalogEntry(
            "backward_shift", "backward shift S* on ℓ²(N)",
            SpectralProfile(sigma=_UNIT_DISK, sigma_asc=open_disk(0, 1), sigma_ld=_UNIT_DISK,
                            sigma_desc=_UNIT_CIRCLE, sigma_rd=_UNIT_CIRCLE, sigma_dr=_UNIT_DISK),
            "S* - λ is surjective off the circle (descent 0) and has the infinite ascent chain spanned by "
            "(1, λ, λ², ...)-type vectors for |λ| < 1; on the circle the range is dense but not closed. "
            "Hence σ_asc = open disk, σ_desc = σ_RD = circle, σ_LD = σ_DR = closed disk.",
        ),
        CatalogEntry(
            "harmonic_diagonal", "diagonal operator diag(1/n) on ℓ²(N)",
            SpectralProfile(sigma=harmonic_sequence(), sigma_ld=points([0]), sigma_rd=points([0]),
                            sigma_desc=points([0]), sigma_dr=points([0]),
                            poles=harmonic_sequence(order=1, include_limit=False)),
            "Each 1/n is a simple eigenvalue isolated in σ, a pole of order 1. At 0 the operator is "
            "injective with dense non-closed range, so 0 lies in σ_desc, σ_LD, σ_RD, σ_DR but not σ_asc.",
        ),
        CatalogEntry(
            "quasinilpotent_shift", "weighted shift with weights 1/n on ℓ²(N)",
            SpectralProfile(sigma=points([0]), sigma_ld=points([0]), sigma_rd=points([0]),
                            sigma_desc=points([0]), sigma_dr=points([0]), ies=points([0])),
            "Compact, injective and not nilpotent with spectral radius 0, so σ = {0}; ranges of its "
            "powers are non-closed and strictly decreasing, so 0 is an isolated essential singularity "
            "of the resolvent and lies in every Drazin-type spectrum except σ_asc.",
        ),
    ]
    by_name = {e.name: e for e in entries}
    entries.append(direct_sum(by_name["unilateral_shift"].verified(), by_name["jordan2"].verified()))
    entries.append(direct_sum(by_name["identity"].verified(), by_name["zero"].verified()))
    return entries


@lru_cache(maxsize=1)
def _loaded() -> tuple[CatalogEntry, ...]:
    out = []
    for e in _builtin():
        e = e if e.report is not None else e.verified()
        if not e.report.passed:
            warnings.warn(f"catalog entry {e.name} fails {e.report.failed}", ProfileWarning, stacklevel=3)
        out.append(e)
    return tuple(out)


def catalog() -> list[CatalogEntry]:
    """Built-in entries, each carrying its verification report."""
    return list(_loaded())


def get_entry(name: str) -> CatalogEntry:
    for e in _loaded():
        if e.name == name:
            return e
    raise KeyError(f"no catalog entry named {name!r}")


# -- corruption (mutation coverage) --------------------------------------------------

FAR_POINT = 10 + 10j
FAR_OFFSET = 25 - 15j


@dataclass(frozen=True)
class Mutation:
    entry: str
    field: str
    kind: str
    profile: SpectralProfile = field(repr=False)


def mutations(entry: CatalogEntry) -> list[Mutation]:
    """Single-field corruptions: add a far isolated point, or translate a nonempty field."""
    out = []
    for name in FIELDS:
        value = getattr(entry.profile, name)
        extra = points([FAR_POINT], [1]) if name == "poles" else points([FAR_POINT])
        out.append(Mutation(entry.name, name, "insert_point", with_field(entry.profile, name, region_union(value, extra))))
        if not value.is_empty():
            out.append(Mutation(entry.name, name, "translate", with_field(entry.profile, name, translate(value, FAR_OFFSET))))
    return out


def mutation_detected(entry: CatalogEntry, m: Mutation) -> tuple[bool, list[str]]:
    """True when the corruption breaks an identity the original satisfies."""
    base = entry.report or verify_profile(entry.profile)
    rep = verify_profile(m.profile)
    newly = [n for n in rep.failed if n not in base.failed]
    return bool(newly), newly


# -- file I/O -----------------------------------------------------------------------


def load_entries(path) -> list[CatalogEntry]:
    """Read one entry (a JSON object) or several (a JSON list) from ``path``."""
    data = json.loads(Path(path).read_text())
    items = data if isinstance(data, list) else [data]
    return [CatalogEntry.from_json(item) for item in items]


def dump_entries(entries, path) -> None:
    Path(path).write_text(json.dumps([e.to_json() for e in entries], indent=2, ensure_ascii=False) + "\n")
