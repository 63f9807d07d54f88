"""Exact experiments on fully packed loops, ASMs and the Temperley-Lieb ground state."""

from .patterns import LinkPattern, apply_e, enumerate_link_patterns, rotate_pattern
from .fpl_core import Asm, Fpl, asm_to_fpl, enumerate_asms, fpl_to_asm, gyrate, link_pattern_of

__all__ = [
    "Asm", "Fpl", "LinkPattern", "apply_e", "asm_to_fpl", "enumerate_asms",
    "enumerate_link_patterns", "fpl_to_asm", "gyrate", "link_pattern_of", "rotate_pattern",
]
