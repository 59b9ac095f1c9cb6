"""Exact Iwahori–Hecke structure constants for Kac–Moody root data.

Typical use::

    from kmhecke import preset, AffineWeylElt, product
    A1 = preset("a1")
    s1 = AffineWeylElt((0,), A1.from_word((1,)))
    print(product(s1, s1))  # (Q1)*T[t[0]*We] + (Q1 - 1)*T[t[0]*Ws1]
"""

from .apartment import AffineWeylElt, LocalChamber, ProductResult
from .errors import MathError
from .galleries import enumerate_folded, folded_end_sums, minimal_lifting_count
from .hecke_path import HeckePath, DecoratedHeckePath, enumerate_paths, fold_candidates
from .oracle import compare, im_product, to_word
from .polynomial import StructurePoly
from .root_system import Cone, System, WeylElt, build_system, preset, PRESETS
from .structure_constants import product, settings, structure_constant

__version__ = "0.1.0"

__all__ = [
    "AffineWeylElt", "LocalChamber", "ProductResult", "MathError",
    "enumerate_folded", "folded_end_sums", "minimal_lifting_count",
    "HeckePath", "DecoratedHeckePath", "enumerate_paths", "fold_candidates",
    "compare", "im_product", "to_word", "StructurePoly",
    "Cone", "System", "WeylElt", "build_system", "preset", "PRESETS",
    "product", "settings", "structure_constant",
]
