"""Exception hierarchy shared by every module."""


class PolytopeError(Exception):
    """Base class for all errors raised by polysym."""


class LatticeStructureError(PolytopeError, ValueError):
    """Malformed lattice input: dangling cover ids, rank gaps, duplicate ids."""


class NotPolytopeError(PolytopeError):
    """A structurally sound poset that fails one of the polytope axioms."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class RankError(PolytopeError, ValueError):
    """Operation called on a polytope of unsupported rank."""


class GroupError(PolytopeError, ValueError):
    """A permutation is not an automorphism, or a group hypothesis fails."""


class CapacityError(PolytopeError):
    """A configured size cap was exceeded."""


class PrecisionError(PolytopeError):
    """Floating point tolerance could not separate incidences reliably."""


class DegenerateError(PolytopeError, ValueError):
    """Point input is not in general position or not full-dimensional."""


class InfeasibleParameterError(PolytopeError, ValueError):
    """Requested gadget parameter is outside the attainable family."""

    def __init__(self, message, nearest=None):
        super().__init__(message)
        self.nearest = nearest
