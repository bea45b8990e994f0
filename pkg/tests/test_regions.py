import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drazin.errors import UndecidableRegionError
from drazin.specset.regions import (
    EMPTY,
    circle,
    closed_disk,
    describe,
    harmonic_sequence,
    open_disk,
    points,
    region_acc,
    region_boundary,
    region_difference,
    region_equal,
    region_from_json,
    region_intersection,
    region_iso,
    region_member,
    region_subset,
    region_to_json,
    region_union,
    sample_probes,
    sequence,
    translate,
)


def test_union_examples():
    r = circle(0, 1)
    assert region_equal(region_union(EMPTY, r), r)
    assert region_equal(region_union(circle(0, 1), closed_disk(0, 1)), closed_disk(0, 1))
    assert region_equal(region_union(points([1]), points([2])), points([1, 2]))


def test_open_disk_and_its_rim_make_a_closed_disk():
    assert region_equal(open_disk(0, 1) | circle(0, 1), closed_disk(0, 1))


def test_iso_examples():
    assert region_equal(region_iso(points([1, 2, 3])), points([1, 2, 3]))
    assert region_iso(closed_disk(0, 1)).is_empty()
    iso = region_iso(harmonic_sequence())
    assert region_member(0.5, iso) and not region_member(0, iso)


def test_acc_examples():
    assert region_acc(points([1, 2])).is_empty()
    assert region_equal(region_acc(closed_disk(2, 1)), closed_disk(2, 1))
    assert region_equal(region_acc(harmonic_sequence()), points([0]))


def test_boundary_examples():
    assert region_equal(region_boundary(closed_disk(0, 1)), circle(0, 1))
    assert region_equal(region_boundary(points([5])), points([5]))
    assert region_equal(region_boundary(closed_disk(0, 1) | points([3])), circle(0, 1) | points([3]))


def test_subset_and_member_examples():
    assert region_subset(circle(0, 1), closed_disk(0, 1))
    assert not region_subset(closed_disk(0, 1), circle(0, 1))
    assert region_member(0.5, closed_disk(0, 1))
    assert not region_member(0.5, circle(0, 1))
    assert not region_member(1.0, open_disk(0, 1))


def test_absorption_into_disks():
    r = closed_disk(0, 1) | points([0.5, 3]) | harmonic_sequence() | circle(0, 0.5)
    assert region_equal(r, closed_disk(0, 1) | points([3]))


def test_points_deduplicate_to_tolerance():
    assert len(points([1, 1 + 1e-10, 2])) == 2


def test_limit_point_folds_into_sequence():
    r = harmonic_sequence(include_limit=False) | points([0])
    assert region_equal(r, harmonic_sequence())


def test_sequences_compare_by_tag_and_limit():
    ws = [1 / k for k in range(1, 9)]
    other = sequence("other", ws, 0)
    assert not region_equal(other, harmonic_sequence())
    assert region_equal(sequence("1/n", ws, 0), harmonic_sequence())


def test_difference_and_intersection():
    assert region_equal(harmonic_sequence() - points([0]), harmonic_sequence(include_limit=False))
    assert region_equal(closed_disk(0, 1) - open_disk(0, 1), circle(0, 1))
    assert region_equal(closed_disk(0, 1) - circle(0, 1), open_disk(0, 1))
    assert region_equal(region_intersection(points([0, 5]), closed_disk(0, 1)), points([0]))
    assert region_intersection(open_disk(0, 1), circle(0, 1)).is_empty()
    assert region_equal(region_difference(points([1, 2]), points([2])), points([1]))


@pytest.mark.parametrize("build", [
    lambda: closed_disk(0, 1) | closed_disk(1, 1),
    lambda: closed_disk(0, 1) | circle(1, 1),
    lambda: closed_disk(0.5, 0.3) | harmonic_sequence(),
])
def test_undecidable_configurations_raise(build):
    with pytest.raises(UndecidableRegionError):
        build()


def test_difference_of_overlapping_disk_is_undecidable():
    with pytest.raises(UndecidableRegionError):
        closed_disk(0, 2) - closed_disk(0, 1)


def test_invalid_primitives():
    with pytest.raises(ValueError):
        circle(0, 0)
    with pytest.raises(ValueError):
        sequence("bad", [1] * 8, 0)
    with pytest.raises(ValueError):
        sequence("short", [1, 2], 0)


def test_json_roundtrip():
    r = circle(0, 3) | harmonic_sequence(order=1) | points([5, 6j], [2, 1]) | open_disk(10, 1)
    back = region_from_json(region_to_json(r))
    assert region_equal(back, r)
    assert [a.order for a in back.atoms if hasattr(a, "order")] == [a.order for a in r.atoms if hasattr(a, "order")]


def test_describe():
    assert describe(EMPTY) == "∅"
    assert "ClosedDisk" in describe(closed_disk(0, 1))


# A grid of mutually decidable primitives.
POOL = [
    closed_disk(0, 1),
    open_disk(5, 1),
    circle(0, 3),
    circle(-6, 0.5),
    points([2.5]),
    points([-4, 2j]),
    points([0.25]),
    harmonic_sequence(),
    harmonic_sequence(include_limit=False),
    sequence("10+1/n", [10 + 1 / k for k in range(1, 9)], 10),
]

subsets = st.lists(st.sampled_from(range(len(POOL))), max_size=5)


def _build(idx):
    r = EMPTY
    for i in idx:
        r = r | POOL[i]
    return r


@settings(max_examples=150, deadline=None)
@given(subsets)
def test_iso_acc_partition(idx):
    r = _build(idx)
    iso, acc = region_iso(r), region_acc(r)
    assert region_equal(region_union(iso, acc), r)
    assert region_intersection(iso, acc).is_empty()
    for z in sample_probes(r, 100, seed=len(idx)):
        assert not (region_member(z, iso) and region_member(z, acc))
        assert region_member(z, r) == (region_member(z, iso) or region_member(z, acc))


SEQUENCE_FREE = [i for i, r in enumerate(POOL) if "Seq" not in describe(r)]


@settings(max_examples=150, deadline=None)
@given(st.lists(st.sampled_from(SEQUENCE_FREE), max_size=5))
def test_acc_idempotent_without_sequences(idx):
    r = _build(idx)
    assert region_equal(region_acc(region_acc(r)), region_acc(r))


def test_acc_is_not_idempotent_on_convergent_sequences():
    # acc(1/n with limit) = {0}, and {0} has no accumulation points
    r = harmonic_sequence()
    assert region_equal(region_acc(r), points([0]))
    assert region_acc(region_acc(r)).is_empty()


@settings(max_examples=100, deadline=None)
@given(st.permutations(range(len(POOL))), st.integers(1, 6))
def test_normal_form_is_order_independent(perm, k):
    a = _build(perm[:k])
    b = _build(list(reversed(perm[:k])))
    assert region_equal(a, b)
    assert [type(x) for x in a.atoms] == [type(x) for x in b.atoms]


@settings(max_examples=100, deadline=None)
@given(subsets, subsets)
def test_union_is_least_upper_bound(i1, i2):
    r1, r2 = _build(i1), _build(i2)
    u = region_union(r1, r2)
    assert region_subset(r1, u) and region_subset(r2, u)
    assert region_equal(region_union(r2, r1), u)


def test_translate_moves_every_atom():
    r = circle(0, 1) | points([3])
    t = translate(r, 10)
    assert region_member(11, t) and region_member(13, t) and not region_member(3, t)
