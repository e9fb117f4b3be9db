"""Barycentric subdivision of a polytope as a labelled order complex."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np

from .errors import GroupError, RankError
from .groups import PermGroup, flag_permutation
from .lattice import FaceLattice, FlagGraph, flags, require_polytope


@dataclass(frozen=True)
class ValencyTable:
    ids: np.ndarray  # vertex ids (= proper face ids of Q)
    labels: np.ndarray
    val: np.ndarray  # edge-graph valency in the subdivision
    s: np.ndarray  # chambers containing the vertex

    def row(self, vertex_id: int) -> tuple[int, int, int]:
        k = int(np.searchsorted(self.ids, vertex_id)) if np.all(np.diff(self.ids) > 0) else \
            int(np.flatnonzero(self.ids == vertex_id)[0])
        return int(self.labels[k]), int(self.val[k]), int(self.s[k])


class LabelledComplex:
    """Order complex of the proper part of Q.

    Vertices are the proper faces of Q (same ids, label = rank); chambers
    are the flags of Q, stored as rows of face indices by label.
    """

    def __init__(self, Q: FaceLattice, graph: FlagGraph):
        self.Q = Q
        self.graph = graph
        self.d = Q.rank

    @property
    def dimension(self) -> int:
        return self.d - 1

    @cached_property
    def vertex_index(self) -> np.ndarray:
        """Face indices of Q that are vertices of the complex."""
        return np.flatnonzero((self.Q.ranks >= 0) & (self.Q.ranks < self.d))

    @property
    def vertex_ids(self) -> np.ndarray:
        return self.Q.ids[self.vertex_index]

    @property
    def labels(self) -> np.ndarray:
        return self.Q.ranks[self.vertex_index]

    @property
    def chambers(self) -> np.ndarray:
        return self.graph.flags

    @property
    def n_chambers(self) -> int:
        return len(self.graph)

    def chamber_ids(self) -> np.ndarray:
        return self.Q.ids[self.graph.flags]

    def simplices(self, labels) -> np.ndarray:
        """Distinct simplices with the given label set, as rows of face indices."""
        cols = sorted(labels)
        return np.unique(self.graph.flags[:, cols], axis=0)

    def edges(self) -> np.ndarray:
        parts = [self.simplices((a, b)) for a, b in combinations(range(self.d), 2)]
        return np.concatenate(parts) if parts else np.zeros((0, 2), dtype=np.int32)

    @cached_property
    def valency_table(self) -> ValencyTable:
        n = self.Q.n_faces
        e = self.edges().astype(np.int64)
        val = np.bincount(e.ravel(), minlength=n)
        s = np.bincount(self.graph.flags.ravel().astype(np.int64), minlength=n)
        vi = self.vertex_index
        return ValencyTable(self.Q.ids[vi], self.Q.ranks[vi], val[vi], s[vi])

    def to_json(self) -> dict:
        vt = self.valency_table
        return {
            "dimension": self.dimension,
            "vertices": [{"id": int(i), "label": int(l), "source-face": int(i)}
                         for i, l in zip(vt.ids, vt.labels)],
            "chambers": self.chamber_ids().tolist(),
        }


def subdivide(Q: FaceLattice, *, check: bool = True) -> LabelledComplex:
    if Q.rank < 2:
        raise RankError(f"subdivision needs rank >= 2, got {Q.rank}")
    if check:
        require_polytope(Q)
    return LabelledComplex(Q, flags(Q))


def valencies(C: LabelledComplex) -> ValencyTable:
    return C.valency_table


@dataclass(frozen=True)
class ChamberAction:
    orbits: list  # arrays of chamber indices, sorted; orbits sorted by representative
    representatives: np.ndarray
    orbit_of: np.ndarray  # chamber -> orbit number
    transfer: np.ndarray  # chamber -> index into group.elements carrying its representative there
    chamber_perms: np.ndarray  # (order, chambers): action of each element on chambers

    @property
    def n_orbits(self) -> int:
        return len(self.orbits)


def chamber_action(C: LabelledComplex, group: PermGroup) -> ChamberAction:
    """Chamber orbits of ``group`` with representatives and transfer elements."""
    els = group.elements
    labels = C.Q.ranks
    for g in group.generators:
        if np.any(labels[g] != labels):
            raise GroupError("group element does not preserve labels")
    perms = np.stack([flag_permutation(C.graph, e) for e in els])
    n = C.n_chambers
    orbit_of = np.full(n, -1, dtype=np.int64)
    transfer = np.full(n, -1, dtype=np.int64)
    reps, orbs = [], []
    for c in range(n):
        if orbit_of[c] >= 0:
            continue
        images = perms[:, c]
        if len(np.unique(images)) != len(els):
            raise GroupError(f"action on chambers is not free at chamber {c}")
        orbit_of[images] = len(reps)
        transfer[images] = np.arange(len(els))
        reps.append(c)
        orbs.append(np.sort(images))
    return ChamberAction(orbs, np.asarray(reps, dtype=np.int64), orbit_of, transfer, perms)
