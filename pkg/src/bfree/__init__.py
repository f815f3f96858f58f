"""Holes, essential holes, centralizer evidence and subword complexity for B-free
and Toeplitz subshifts, checked at finite levels against brute-force oracles."""

__version__ = "0.1.0"

from .bset import BSetSpec, eta_segment, eta_window, phi_code
from .filtration import default_filtration
from .holes import ResidueSet, essential_holes_iterative, holes_level, minimal_period
from .specfile import load_spec

__all__ = [
    "BSetSpec", "ResidueSet", "default_filtration", "essential_holes_iterative",
    "eta_segment", "eta_window", "holes_level", "load_spec", "minimal_period", "phi_code",
]
