"""Exact calculus of wild ramification invariants and Betti-number bounds."""

from .bettibounds import (
    BoundFamily,
    affine_betti_bound,
    affine_betti_bound_compact,
    assemble_bound_sequence,
    b_family,
    c_family,
    chi_sandwich,
    chi_twisted_sandwich,
    closed_form_bound,
    curve_case_bound,
    perverse_fold,
    verify_appendix_chain,
)
from .conductor import GaloisModuleData, SlopeDecomposition, dimtot, swan
from .curves import CurveSheafData, gos_chi
from .exactmath import Poly, X
from .geometry import CoherentCombo, CoherentToken, QWeilDivisor, mu_f

__version__ = "0.1.0"
