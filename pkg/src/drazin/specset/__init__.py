"""Region algebra, spectral profiles and the model-operator catalog."""
from .models import CatalogEntry, catalog, direct_sum, get_entry, load_entries, mutations
from .profile import (
    FIELDS,
    IDENTITY_NAMES,
    ProfileReport,
    SpectralProfile,
    from_matrix,
    verify_profile,
)
from .regions import (
    EMPTY,
    Region,
    circle,
    closed_disk,
    harmonic_sequence,
    open_disk,
    points,
    region_acc,
    region_boundary,
    region_difference,
    region_equal,
    region_intersection,
    region_iso,
    region_member,
    region_subset,
    region_union,
    sequence,
)

__all__ = [
    "CatalogEntry", "catalog", "direct_sum", "get_entry", "load_entries", "mutations",
    "FIELDS", "IDENTITY_NAMES", "ProfileReport", "SpectralProfile", "from_matrix", "verify_profile",
    "EMPTY", "Region", "circle", "closed_disk", "harmonic_sequence", "open_disk", "points", "sequence",
    "region_acc", "region_boundary", "region_difference", "region_equal", "region_intersection",
    "region_iso", "region_member", "region_subset", "region_union",
]
