"""Chain complexes of polytopal complexes, induced chain maps and a constructive necklace splitter."""

from .chains import Chain, boundary, evaluate, reference_orientation, tensor
from .complex import (PolytopalComplex, ProductComplex, make_cube, make_path, make_polygon,
                      make_simplex, order_complex, power, product, subcomplex, validate)
from .dold import eta_chain_map, solve_phi, verify_pairing
from .necklace import (Necklace, Splitting, brute_force_split, build_h, find_fair_split,
                       verify_splitting, winner_map)
from .polymap import PolytopalMap, compose, induce_chain_map, prism_homotopy, validate_polytopal

__all__ = [
    "Chain", "boundary", "evaluate", "reference_orientation", "tensor",
    "PolytopalComplex", "ProductComplex", "make_cube", "make_path", "make_polygon",
    "make_simplex", "order_complex", "power", "product", "subcomplex", "validate",
    "eta_chain_map", "solve_phi", "verify_pairing",
    "Necklace", "Splitting", "brute_force_split", "build_h", "find_fair_split",
    "verify_splitting", "winner_map",
    "PolytopalMap", "compose", "induce_chain_map", "prism_homotopy", "validate_polytopal",
]
