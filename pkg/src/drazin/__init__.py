"""Drazin inverses, ascent/descent chains and Drazin-type spectra.

Numerical routines for square complex matrices (chains, projections,
Drazin/group inverses, multiplication-operator lifts, resolvent Laurent
expansions) plus a symbolic catalog of model operators whose spectral
profiles are checked against the same set identities.
"""
from .drazincore import (
    ChainProfile,
    DrazinResult,
    chain_profile,
    core_nilpotent,
    drazin_inverse,
    group_inverse,
    index_of,
    spectral_projection,
    verify_drazin_pair,
)
from .errors import DrazinError
from .multop import left_factor, left_mult, right_factor, right_mult
from .numkernel import DEFAULT_TOL, ToleranceConfig
from .resolvent import ContourConfig, laurent_algebraic, laurent_contour, laurent_crosscheck, poles

__version__ = "0.1.0"

__all__ = [
    "ChainProfile", "DrazinResult", "chain_profile", "core_nilpotent", "drazin_inverse", "group_inverse",
    "index_of", "spectral_projection", "verify_drazin_pair", "DrazinError", "left_factor", "left_mult",
    "right_factor", "right_mult", "DEFAULT_TOL", "ToleranceConfig", "ContourConfig", "laurent_algebraic",
    "laurent_contour", "laurent_crosscheck", "poles",
]
