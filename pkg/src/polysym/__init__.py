"""Abstract polytopes with prescribed automorphism groups.

Face lattices and their axioms, automorphism groups, barycentric
subdivision, chamber gadgets that break unwanted symmetry, and centrally
symmetric convex realisations for cyclic groups.
"""
from .breaker import break_symmetry, verify_broken
from .catalog import by_name
from .errors import (CapacityError, DegenerateError, GroupError, InfeasibleParameterError,
                     LatticeStructureError, NotPolytopeError, PolytopeError, PrecisionError, RankError)
from .geometry import bipyramid_odd, centrally_symmetric_pipeline, cyclic_orbit_polytope, hull
from .groups import PermGroup, automorphisms, orbits
from .lattice import FaceLattice, flags, validate
from .order_complex import chamber_action, subdivide

__version__ = "0.1.0"

__all__ = [
    "FaceLattice", "flags", "validate", "by_name",
    "PermGroup", "automorphisms", "orbits",
    "subdivide", "chamber_action",
    "break_symmetry", "verify_broken",
    "cyclic_orbit_polytope", "bipyramid_odd", "hull", "centrally_symmetric_pipeline",
    "PolytopeError", "LatticeStructureError", "NotPolytopeError", "RankError", "GroupError",
    "CapacityError", "PrecisionError", "DegenerateError", "InfeasibleParameterError",
]
