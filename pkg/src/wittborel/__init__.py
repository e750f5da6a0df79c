"""Exact computations in the Witt algebra W_1 over F_p and its relatives W_n.

The nilpotent cone of W_1, its automorphism group, the classification of
Borel subalgebras, and a greedy explorer for solvable subalgebras of W_n.
"""

__version__ = "0.1.0"

from .autgroup import Automorphism, apply, apply_subalgebra, compose_aut, decompose, invert_aut
from .borel import classify_borel, find_sl2_triple, is_maximal_solvable, standard_borels
from .errors import WittError
from .field import make_prime
from .nilcone import enumerate_cone, is_nilpotent, normalize_to_D, orbit_param, sample_cone
from .witt import WittElement, bracket, f_det, p_power

__all__ = [
    "Automorphism", "WittElement", "WittError", "apply", "apply_subalgebra", "bracket",
    "classify_borel", "compose_aut", "decompose", "enumerate_cone", "f_det",
    "find_sl2_triple", "invert_aut", "is_maximal_solvable", "is_nilpotent", "make_prime",
    "normalize_to_D", "orbit_param", "p_power", "sample_cone", "standard_borels",
]
