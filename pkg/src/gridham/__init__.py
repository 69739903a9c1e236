"""Hamiltonian cycles, cycle covers and their height functions on grid graphs."""

__version__ = "0.1.0"

from .cover import CycleCover, NoCover, find_initial_cover
from .grid import GridGraph, parse_grid, rect, to_mask
from .hamilton import is_hamiltonian, minimize_in_component, reduce_once, search_all_components
from .height import height_of, render_ascii, signature

__all__ = [
    "CycleCover",
    "GridGraph",
    "NoCover",
    "find_initial_cover",
    "height_of",
    "is_hamiltonian",
    "minimize_in_component",
    "parse_grid",
    "rect",
    "reduce_once",
    "render_ascii",
    "search_all_components",
    "signature",
    "to_mask",
]
