"""A small decidable algebra of closed (and a few open) subsets of C.

A Region is a normalized union of atoms:

    Point(z)                  a single point (optionally carrying a pole order)
    Circle(c, r)              {|z - c| = r}
    Disk(c, r, closed=True)   {|z - c| <= r}, or the open disk when closed=False
    Sequence(tag, w, limit)   the terms of a convergent sequence, identified by
                              ``tag``, with its first terms ``w`` kept as
                              numeric witnesses; ``include_limit`` adds the limit

Normalization absorbs atoms covered by others, merges an open disk with its
boundary circle into a closed disk, folds a point equal to a sequence limit
into the sequence, and sorts.  Configurations outside this fragment
(overlapping distinct disks, a circle crossing a disk, a sequence straddling
a disk boundary) raise UndecidableRegionError instead of being guessed.
Sequence terms beyond the witnesses are unknown to membership tests.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field, replace
from typing import Union

from ..errors import UndecidableRegionError

TOL = 1e-8
N_WITNESSES = 8


@dataclass(frozen=True)
class Point:
    z: complex
    order: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float


@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float
    closed: bool = True


@dataclass(frozen=True)
class Sequence:
    tag: str
    witnesses: tuple[complex, ...]
    limit: complex
    include_limit: bool = True
    order: int | None = field(default=None, compare=False)


Atom = Union[Point, Circle, Disk, Sequence]


def _close(z, w, tol=TOL):
    return abs(complex(z) - complex(w)) <= tol


def _validate(atom):
    if isinstance(atom, (Circle, Disk)) and not atom.radius > 0:
        raise ValueError(f"radius must be positive: {atom}")
    if isinstance(atom, Sequence):
        ws = atom.witnesses
        if len(ws) != N_WITNESSES:
            raise ValueError(f"a sequence needs {N_WITNESSES} witness terms")
        for i, w in enumerate(ws):
            if _close(w, atom.limit):
                raise ValueError("witness equals the limit")
            if any(_close(w, v) for v in ws[i + 1:]):
                raise ValueError("witnesses must be pairwise distinct")


# -- atom geometry -------------------------------------------------------------


def _point_in_atom(z, atom, tol=TOL) -> bool:
    if isinstance(atom, Point):
        return _close(z, atom.z, tol)
    if isinstance(atom, Circle):
        return abs(abs(z - atom.center) - atom.radius) <= tol
    if isinstance(atom, Disk):
        d = abs(z - atom.center)
        return d <= atom.radius + tol if atom.closed else d < atom.radius - tol
    if isinstance(atom, Sequence):
        return any(_close(z, w, tol) for w in atom.witnesses) or (atom.include_limit and _close(z, atom.limit, tol))
    raise TypeError(atom)


def _disk_contains_disk(outer: Disk, inner: Disk, tol=TOL) -> bool:
    d = abs(outer.center - inner.center)
    if outer.closed or not inner.closed:
        return d + inner.radius <= outer.radius + tol
    return d + inner.radius < outer.radius - tol


def _disks_disjoint(a: Disk, b: Disk, tol=TOL) -> bool:
    return abs(a.center - b.center) > a.radius + b.radius + tol


def _circle_in_disk(c: Circle, d: Disk, tol=TOL) -> bool:
    dist = abs(c.center - d.center)
    if d.closed:
        return dist + c.radius <= d.radius + tol
    return dist + c.radius < d.radius - tol


def _circle_disk_disjoint(c: Circle, d: Disk, tol=TOL) -> bool:
    dist = abs(c.center - d.center)
    if not d.closed and _same_circle(c, Circle(d.center, d.radius), tol):
        return True
    return dist > c.radius + d.radius + tol or dist + d.radius < c.radius - tol


def _circles_disjoint(a: Circle, b: Circle, tol=TOL) -> bool:
    dist = abs(a.center - b.center)
    return dist > a.radius + b.radius + tol or abs(a.radius - b.radius) > dist + tol


def _same_circle(a: Circle, b: Circle, tol=TOL) -> bool:
    return _close(a.center, b.center, tol) and abs(a.radius - b.radius) <= tol


def _sequence_in_disk(s: Sequence, d: Disk, tol=TOL) -> bool | None:
    """True if every term (and the tail) lies in d, False if none does, None otherwise."""
    inside = [_point_in_atom(w, d, tol) for w in s.witnesses]
    tail_in = _point_in_atom(s.limit, d, tol)
    if all(inside) and tail_in:
        return True
    if not any(inside) and not _point_in_atom(s.limit, Disk(d.center, d.radius, True), tol):
        return False
    return None


def _same_sequence(a: Sequence, b: Sequence, tol=TOL) -> bool:
    return a.tag == b.tag and _close(a.limit, b.limit, tol)


# -- normalization -------------------------------------------------------------


def _kind_rank(atom):
    return {Disk: 0, Circle: 1, Sequence: 2, Point: 3}[type(atom)]


def _sort_key(atom):
    if isinstance(atom, Point):
        z = atom.z
        return (3, round(z.real, 9), round(z.imag, 9), 0.0, "")
    if isinstance(atom, Sequence):
        return (2, round(atom.limit.real, 9), round(atom.limit.imag, 9), 0.0, atom.tag)
    closed = "" if not isinstance(atom, Disk) else ("c" if atom.closed else "o")
    return (_kind_rank(atom), round(atom.center.real, 9), round(atom.center.imag, 9), round(atom.radius, 9), closed)


def _normalize(atoms, tol=TOL) -> tuple:
    atoms = [_coerce(a) for a in atoms]
    for a in atoms:
        _validate(a)
    disks = [a for a in atoms if isinstance(a, Disk)]
    circles = [a for a in atoms if isinstance(a, Circle)]
    seqs = [a for a in atoms if isinstance(a, Sequence)]
    points = [a for a in atoms if isinstance(a, Point)]

    # an open disk plus its boundary circle is the closed disk
    changed = True
    while changed:
        changed = False
        for i, d in enumerate(disks):
            if d.closed:
                continue
            for c in circles:
                if _same_circle(c, Circle(d.center, d.radius), tol):
                    disks[i] = Disk(d.center, d.radius, True)
                    circles.remove(c)
                    changed = True
                    break
            if changed:
                break

    kept = []
    for i, d in enumerate(disks):
        absorbed = False
        for j, e in enumerate(disks):
            if i == j:
                continue
            if _disk_contains_disk(e, d, tol):
                if _disk_contains_disk(d, e, tol) and (d.closed == e.closed) and j > i:
                    continue  # duplicate: keep the first copy
                if _disk_contains_disk(d, e, tol) and d.closed and not e.closed:
                    continue
                absorbed = True
                break
            if not _disks_disjoint(d, e, tol) and not _disk_contains_disk(d, e, tol):
                raise UndecidableRegionError(f"overlapping disks {d} and {e}")
        if not absorbed:
            kept.append(d)
    disks = kept

    kept = []
    for c in circles:
        if any(_circle_in_disk(c, d, tol) for d in disks):
            continue
        for d in disks:
            if not _circle_disk_disjoint(c, d, tol) and not _same_circle(c, Circle(d.center, d.radius), tol):
                raise UndecidableRegionError(f"circle {c} crosses disk {d}")
        if any(_same_circle(c, k, tol) for k in kept):
            continue
        kept.append(c)
    circles = kept

    kept = []
    for s in seqs:
        verdicts = [_sequence_in_disk(s, d, tol) for d in disks]
        if any(v is None for v in verdicts):
            raise UndecidableRegionError(f"sequence {s.tag} straddles a disk boundary")
        if any(verdicts):
            continue
        if any(_point_in_atom(w, c, tol) for w in s.witnesses for c in circles):
            raise UndecidableRegionError(f"sequence {s.tag} has terms on a circle")
        dup = next((k for k in kept if _same_sequence(s, k, tol)), None)
        if dup is not None:
            if any(not _close(w, v, tol) for w, v in zip(s.witnesses, dup.witnesses)):
                raise UndecidableRegionError(f"sequences tagged {s.tag} disagree on their witnesses")
            kept[kept.index(dup)] = replace(dup, include_limit=dup.include_limit or s.include_limit,
                                            order=dup.order if dup.order is not None else s.order)
            continue
        kept.append(s)
    seqs = kept

    others = disks + circles
    kept_points = []
    for p in points:
        if any(_point_in_atom(p.z, a, tol) for a in others):
            continue
        hit = next((s for s in seqs if any(_close(p.z, w, tol) for w in s.witnesses)), None)
        if hit is not None:
            continue
        lim = next((s for s in seqs if _close(p.z, s.limit, tol)), None)
        if lim is not None:
            seqs[seqs.index(lim)] = replace(lim, include_limit=True)
            continue
        dup = next((q for q in kept_points if _close(p.z, q.z, tol)), None)
        if dup is not None:
            if dup.order is None and p.order is not None:
                kept_points[kept_points.index(dup)] = p
            continue
        kept_points.append(p)

    # a limit already covered by another atom makes include_limit immaterial
    seqs = [
        replace(s, include_limit=True)
        if not s.include_limit and any(_point_in_atom(s.limit, a, tol) for a in others + kept_points)
        else s
        for s in seqs
    ]
    kept_points = [p for p in kept_points if not any(s.include_limit and _close(p.z, s.limit, tol) for s in seqs)]

    out = disks + circles + seqs + kept_points
    out.sort(key=_sort_key)
    return tuple(out)


def _coerce(atom):
    if isinstance(atom, Point):
        return Point(complex(atom.z), atom.order)
    if isinstance(atom, Circle):
        return Circle(complex(atom.center), float(atom.radius))
    if isinstance(atom, Disk):
        return Disk(complex(atom.center), float(atom.radius), bool(atom.closed))
    if isinstance(atom, Sequence):
        return Sequence(str(atom.tag), tuple(complex(w) for w in atom.witnesses), complex(atom.limit),
                        bool(atom.include_limit), atom.order)
    raise TypeError(f"not a region atom: {atom!r}")


class Region:
    """Immutable normalized union of atoms."""

    __slots__ = ("atoms",)

    def __init__(self, atoms=(), tol=TOL):
        object.__setattr__(self, "atoms", _normalize(atoms, tol))

    def __setattr__(self, name, value):
        raise AttributeError("Region is immutable")

    def is_empty(self) -> bool:
        return not self.atoms

    def __iter__(self):
        return iter(self.atoms)

    def __len__(self):
        return len(self.atoms)

    def __or__(self, other):
        return region_union(self, other)

    def __and__(self, other):
        return region_intersection(self, other)

    def __sub__(self, other):
        return region_difference(self, other)

    def __le__(self, other):
        return region_subset(self, other)

    def __eq__(self, other):
        if not isinstance(other, Region):
            return NotImplemented
        return region_equal(self, other)

    __hash__ = None

    def __repr__(self):
        return f"Region({describe(self)})"


EMPTY = Region()


def points(zs, orders=None) -> Region:
    zs = list(zs)
    orders = list(orders) if orders is not None else [None] * len(zs)
    return Region([Point(complex(z), o) for z, o in zip(zs, orders)])


def circle(center, radius) -> Region:
    return Region([Circle(complex(center), float(radius))])


def closed_disk(center, radius) -> Region:
    return Region([Disk(complex(center), float(radius), True)])


def open_disk(center, radius) -> Region:
    return Region([Disk(complex(center), float(radius), False)])


def sequence(tag, witnesses, limit, include_limit=True, order=None) -> Region:
    return Region([Sequence(tag, tuple(witnesses), complex(limit), include_limit, order)])


def harmonic_sequence(order=None, include_limit=True) -> Region:
    """The terms 1/n (n >= 1), limit 0."""
    return sequence("1/n", [1 / k for k in range(1, N_WITNESSES + 1)], 0, include_limit, order)


# -- decision procedures -------------------------------------------------------


def region_member(z, r: Region, tol=TOL) -> bool:
    z = complex(z)
    return any(_point_in_atom(z, a, tol) for a in r.atoms)


def _atom_subset(atom, r: Region, tol=TOL) -> bool:
    if isinstance(atom, Point):
        return region_member(atom.z, r, tol)
    for b in r.atoms:
        if isinstance(atom, Circle):
            if isinstance(b, Circle) and _same_circle(atom, b, tol):
                return True
            if isinstance(b, Disk) and _circle_in_disk(atom, b, tol):
                return True
        elif isinstance(atom, Disk):
            if isinstance(b, Disk) and _disk_contains_disk(b, atom, tol):
                return True
        elif isinstance(atom, Sequence):
            if isinstance(b, Sequence) and _same_sequence(atom, b, tol):
                if not atom.include_limit or b.include_limit or region_member(atom.limit, r, tol):
                    return True
            if isinstance(b, Disk) and _sequence_in_disk(atom, b, tol):
                return True
    return False


def _atom_disjoint(atom, r: Region, tol=TOL) -> bool:
    if isinstance(atom, Point):
        return not region_member(atom.z, r, tol)
    for b in r.atoms:
        if isinstance(b, Point):
            if _point_in_atom(b.z, atom, tol):
                return False
            continue
        if isinstance(atom, Sequence):
            if isinstance(b, Sequence):
                if _same_sequence(atom, b, tol):
                    return False
                if any(_point_in_atom(w, b, tol) for w in atom.witnesses):
                    return False
                if atom.include_limit and _point_in_atom(atom.limit, b, tol):
                    return False
                if any(_point_in_atom(w, atom, tol) for w in b.witnesses):
                    return False
                continue
            if isinstance(b, Disk):
                if _sequence_in_disk(atom, b, tol) is not False:
                    return False
                continue
            if any(_point_in_atom(w, b, tol) for w in atom.witnesses):
                return False
            if atom.include_limit and _point_in_atom(atom.limit, b, tol):
                return False
            continue
        if isinstance(b, Sequence):
            if not _atom_disjoint(b, Region([atom]), tol):
                return False
            continue
        if isinstance(atom, Circle) and isinstance(b, Circle):
            if not _circles_disjoint(atom, b, tol):
                return False
        elif isinstance(atom, Circle) and isinstance(b, Disk):
            if not _circle_disk_disjoint(atom, b, tol):
                return False
        elif isinstance(atom, Disk) and isinstance(b, Circle):
            if not _circle_disk_disjoint(b, atom, tol):
                return False
        elif isinstance(atom, Disk) and isinstance(b, Disk):
            if not _disks_disjoint(atom, b, tol):
                return False
    return True


def region_subset(r1: Region, r2: Region, tol=TOL) -> bool:
    return all(_atom_subset(a, r2, tol) for a in r1.atoms)


def _atoms_match(a, b, tol=TOL) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, Point):
        return _close(a.z, b.z, tol)
    if isinstance(a, Circle):
        return _same_circle(a, b, tol)
    if isinstance(a, Disk):
        return a.closed == b.closed and _close(a.center, b.center, tol) and abs(a.radius - b.radius) <= tol
    return _same_sequence(a, b, tol) and a.include_limit == b.include_limit


def region_equal(r1: Region, r2: Region, tol=TOL) -> bool:
    """Equality of normal forms, atom by atom up to ``tol``."""
    if len(r1.atoms) != len(r2.atoms):
        return False
    unused = list(r2.atoms)
    for a in r1.atoms:
        hit = next((b for b in unused if _atoms_match(a, b, tol)), None)
        if hit is None:
            return False
        unused.remove(hit)
    return True


def region_union(r1: Region, r2: Region) -> Region:
    return Region(r1.atoms + r2.atoms)


def region_iso(r: Region) -> Region:
    """Isolated points: every surviving point and the terms of each sequence."""
    out = []
    for a in r.atoms:
        if isinstance(a, Point):
            out.append(a)
        elif isinstance(a, Sequence):
            out.append(replace(a, include_limit=False))
    return Region(out)


def region_acc(r: Region) -> Region:
    """r minus its isolated points."""
    out = []
    for a in r.atoms:
        if isinstance(a, (Circle, Disk)):
            out.append(a)
        elif isinstance(a, Sequence) and a.include_limit:
            out.append(Point(a.limit))
    return Region(out)


def region_boundary(r: Region) -> Region:
    out = []
    for a in r.atoms:
        if isinstance(a, Disk):
            out.append(Circle(a.center, a.radius))
        elif isinstance(a, Sequence):
            out.append(replace(a, include_limit=True))
        else:
            out.append(a)
    return Region(out)


def region_difference(r1: Region, r2: Region, tol=TOL) -> Region:
    out = []
    for a in r1.atoms:
        if _atom_subset(a, r2, tol):
            continue
        if _atom_disjoint(a, r2, tol):
            out.append(a)
            continue
        if isinstance(a, Sequence):
            terms = replace(a, include_limit=False)
            if _atom_disjoint(terms, r2, tol):
                # only the limit is shared
                out.append(terms)
                continue
            if _atom_subset(terms, r2, tol) and a.include_limit and not region_member(a.limit, r2, tol):
                out.append(Point(a.limit, None))
                continue
        if isinstance(a, Disk) and a.closed:
            rim = Circle(a.center, a.radius)
            inner = Disk(a.center, a.radius, False)
            if _atom_subset(inner, r2, tol) and _atom_disjoint(rim, r2, tol):
                out.append(rim)
                continue
            if _atom_subset(rim, r2, tol) and _atom_disjoint(inner, r2, tol):
                out.append(inner)
                continue
        raise UndecidableRegionError(f"cannot subtract {describe(r2)} from {describe(Region([a]))}")
    return Region(out)


def region_intersection(r1: Region, r2: Region, tol=TOL) -> Region:
    out = []
    for a in r1.atoms:
        if _atom_subset(a, r2, tol):
            out.append(a)
            continue
        if _atom_disjoint(a, r2, tol):
            continue
        single = Region([a])
        for b in r2.atoms:
            if _atom_subset(b, single, tol):
                out.append(b)
            elif _atom_disjoint(b, single, tol):
                continue
            elif isinstance(a, Sequence) and isinstance(b, Sequence) and _same_sequence(a, b, tol):
                out.append(replace(a, include_limit=a.include_limit and b.include_limit))
            else:
                raise UndecidableRegionError(f"cannot intersect {describe(single)} with {describe(Region([b]))}")
    return Region(out)


def translate(r: Region, offset: complex) -> Region:
    """Shift every atom by ``offset``; sequence tags record the shift."""
    offset = complex(offset)
    out = []
    for a in r.atoms:
        if isinstance(a, Point):
            out.append(Point(a.z + offset, a.order))
        elif isinstance(a, Circle):
            out.append(Circle(a.center + offset, a.radius))
        elif isinstance(a, Disk):
            out.append(Disk(a.center + offset, a.radius, a.closed))
        else:
            out.append(Sequence(f"{a.tag}+({_fmt(offset)})", tuple(w + offset for w in a.witnesses),
                                a.limit + offset, a.include_limit, a.order))
    return Region(out)


def pole_orders(r: Region) -> list[tuple[str, int | None]]:
    return [(_fmt(a.z) if isinstance(a, Point) else a.tag, a.order) for a in r.atoms]


# -- display and serialization -------------------------------------------------


def _fmt(z) -> str:
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.6g}"
    return f"{z.real:.6g}{z.imag:+.6g}i"


def describe(r: Region) -> str:
    if r.is_empty():
        return "∅"
    parts = []
    pts = [a for a in r.atoms if isinstance(a, Point)]
    for a in r.atoms:
        if isinstance(a, Circle):
            parts.append(f"Circle({_fmt(a.center)}, {a.radius:.6g})")
        elif isinstance(a, Disk):
            parts.append(f"{'ClosedDisk' if a.closed else 'OpenDisk'}({_fmt(a.center)}, {a.radius:.6g})")
        elif isinstance(a, Sequence):
            lim = f" ∪ {{{_fmt(a.limit)}}}" if a.include_limit else ""
            parts.append(f"Seq[{a.tag} → {_fmt(a.limit)}]{lim}")
    if pts:
        parts.append("{" + ", ".join(_fmt(p.z) for p in pts) + "}")
    return " ∪ ".join(parts)


def _pair(z):
    z = complex(z)
    return [z.real, z.imag]


def _unpair(v):
    if not (isinstance(v, (list, tuple)) and len(v) == 2):
        raise ValueError(f"expected [re, im], got {v!r}")
    return complex(float(v[0]), float(v[1]))


def region_to_json(r: Region) -> list:
    out = []
    pts = [a for a in r.atoms if isinstance(a, Point)]
    for a in r.atoms:
        if isinstance(a, Circle):
            out.append({"kind": "circle", "center": _pair(a.center), "radius": a.radius})
        elif isinstance(a, Disk):
            out.append({"kind": "closed_disk" if a.closed else "open_disk", "center": _pair(a.center),
                        "radius": a.radius})
        elif isinstance(a, Sequence):
            item = {"kind": "sequence", "tag": a.tag, "witnesses": [_pair(w) for w in a.witnesses],
                    "limit": _pair(a.limit), "include_limit": a.include_limit}
            if a.order is not None:
                item["order"] = a.order
            out.append(item)
    if pts:
        item = {"kind": "points", "points": [_pair(p.z) for p in pts]}
        if any(p.order is not None for p in pts):
            item["orders"] = [p.order for p in pts]
        out.append(item)
    return out


def region_from_json(items) -> Region:
    if not isinstance(items, list):
        raise ValueError("a region is a JSON list of shapes")
    atoms = []
    for item in items:
        kind = item.get("kind")
        if kind == "points":
            zs = [_unpair(v) for v in item["points"]]
            orders = item.get("orders") or [None] * len(zs)
            if len(orders) != len(zs):
                raise ValueError("orders and points differ in length")
            atoms.extend(Point(z, o) for z, o in zip(zs, orders))
        elif kind == "circle":
            atoms.append(Circle(_unpair(item["center"]), float(item["radius"])))
        elif kind in ("closed_disk", "open_disk"):
            atoms.append(Disk(_unpair(item["center"]), float(item["radius"]), kind == "closed_disk"))
        elif kind == "sequence":
            atoms.append(Sequence(str(item["tag"]), tuple(_unpair(w) for w in item["witnesses"]),
                                  _unpair(item["limit"]), bool(item.get("include_limit", True)),
                                  item.get("order")))
        elif kind == "empty":
            continue
        else:
            raise ValueError(f"unknown shape kind {kind!r}")
    return Region(atoms)


def sample_probes(r: Region, count: int = 100, seed: int = 0) -> list[complex]:
    """Deterministic probe points: atom features plus jittered neighbours."""
    import numpy as np

    rng = np.random.default_rng(seed)
    probes = []
    for a in r.atoms:
        if isinstance(a, Point):
            probes.append(a.z)
        elif isinstance(a, Sequence):
            probes.extend(a.witnesses)
            probes.append(a.limit)
        else:
            for t in rng.uniform(0, 2 * np.pi, 4):
                probes.append(a.center + a.radius * cmath.exp(1j * t))
                probes.append(a.center + 0.5 * a.radius * cmath.exp(1j * t))
            probes.append(a.center)
    while len(probes) < count:
        probes.append(complex(*rng.uniform(-3, 3, 2)))
    return probes[:count]
