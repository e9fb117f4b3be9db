"""Ranked face posets, flag graphs and the abstract polytope axioms.

A :class:`FaceLattice` stores faces under opaque integer ids together with
their ranks and the cover relation.  Internally every face also has a dense
*index*: faces are sorted by ``(rank, id)`` so that index order, rank order
and id order agree within each rank.  All heavy lifting (flag enumeration,
adjacency matchings, connectivity of sections) is vectorised over these
indices so that lattices with a few million flags stay tractable.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import LatticeStructureError, NotPolytopeError, RankError

BOTTOM_ID = -1
TOP_ID = 2**31 - 1

AXIOMS = ("bounded", "graded", "diamond", "strongly_flag_connected")


def _csr(keys: np.ndarray, values: np.ndarray, n: int):
    order = np.lexsort((values, keys))
    counts = np.bincount(keys, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, values[order]


@dataclass(frozen=True, eq=False)
class FaceLattice:
    """Ranked poset of faces, improper faces included.

    Construct through :meth:`from_faces`, :meth:`from_arrays` or
    :meth:`from_json`; the constructor itself expects already normalised
    arrays.  Instances are immutable after construction.
    """

    rank: int
    ids: np.ndarray  # (n,) face ids in index order
    ranks: np.ndarray  # (n,) rank of each face
    covers: np.ndarray  # (k, 2) index pairs (lower, upper), lexicographically sorted

    # ---------------------------------------------------------------- building
    @classmethod
    def from_arrays(cls, rank, ids, ranks, cover_lo, cover_hi) -> "FaceLattice":
        """Build from parallel arrays of face ids/ranks and cover id pairs."""
        rank = int(rank)
        ids = np.asarray(ids, dtype=np.int64).ravel()
        ranks = np.asarray(ranks, dtype=np.int64).ravel()
        lo = np.asarray(cover_lo, dtype=np.int64).ravel()
        hi = np.asarray(cover_hi, dtype=np.int64).ravel()
        if rank < 0:
            raise LatticeStructureError(f"rank must be non-negative, got {rank}")
        if ids.shape != ranks.shape:
            raise LatticeStructureError("face ids and ranks differ in length")
        if lo.shape != hi.shape:
            raise LatticeStructureError("cover endpoints differ in length")
        bad = (ranks < -1) | (ranks > rank)
        if bad.any():
            j = int(np.flatnonzero(bad)[0])
            raise LatticeStructureError(
                f"face {ids[j]} has rank {ranks[j]} outside -1..{rank}")
        sorter = np.argsort(ids, kind="stable")
        sid = ids[sorter]
        dup = np.flatnonzero(sid[1:] == sid[:-1])
        if dup.size:
            raise LatticeStructureError(f"duplicate face id {sid[dup[0]]}")
        order = np.lexsort((ids, ranks))
        position = np.empty(len(ids), dtype=np.int64)
        position[order] = np.arange(len(ids))

        def to_index(x):
            pos = np.searchsorted(sid, x)
            pos = np.minimum(pos, max(len(sid) - 1, 0))
            missing = (len(sid) == 0) | (sid[pos] != x) if len(sid) else np.ones(len(x), bool)
            if np.any(missing):
                j = int(np.flatnonzero(missing)[0])
                raise LatticeStructureError(f"cover references unknown face id {x[j]}")
            return position[sorter[pos]]

        lo_i, hi_i = to_index(lo), to_index(hi)
        new_ranks = ranks[order]
        gap = new_ranks[hi_i] - new_ranks[lo_i] != 1
        if gap.any():
            j = int(np.flatnonzero(gap)[0])
            raise LatticeStructureError(
                f"cover ({lo[j]}, {hi[j]}) joins ranks {new_ranks[lo_i[j]]} and "
                f"{new_ranks[hi_i[j]]}; covers must differ by exactly one rank")
        n = len(ids)
        key = np.unique(lo_i * max(n, 1) + hi_i)
        cov = np.stack([key // max(n, 1), key % max(n, 1)], axis=1) if n else np.zeros((0, 2), np.int64)
        return cls(rank, ids[order], new_ranks, cov.astype(np.int64))

    @classmethod
    def from_faces(cls, rank: int, faces: Iterable[tuple[int, int]],
                   covers: Iterable[Sequence[int]]) -> "FaceLattice":
        faces = list(faces)
        covers = [tuple(c) for c in covers]
        for c in covers:
            if len(c) != 2:
                raise LatticeStructureError(f"cover {c!r} is not a pair")
        ids = [f[0] for f in faces]
        ranks = [f[1] for f in faces]
        return cls.from_arrays(rank, ids, ranks, [c[0] for c in covers], [c[1] for c in covers])

    @classmethod
    def from_json(cls, data: Mapping) -> "FaceLattice":
        try:
            rank = int(data["rank"])
            faces = [(int(f["id"]), int(f["rank"])) for f in data["faces"]]
            covers = [(int(a), int(b)) for a, b in data["covers"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise LatticeStructureError(f"malformed lattice JSON: {exc}") from exc
        return cls.from_faces(rank, faces, covers)

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "faces": [{"id": int(i), "rank": int(r)} for i, r in zip(self.ids, self.ranks)],
            "covers": [[int(self.ids[a]), int(self.ids[b])] for a, b in self.covers],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    # ------------------------------------------------------------- accessors
    @property
    def n_faces(self) -> int:
        return len(self.ids)

    @cached_property
    def _id_lookup(self):
        sorter = np.argsort(self.ids, kind="stable")
        return sorter, self.ids[sorter]

    def index(self, face_id: int) -> int:
        sorter, sid = self._id_lookup
        pos = int(np.searchsorted(sid, face_id))
        if pos >= len(sid) or sid[pos] != face_id:
            raise KeyError(face_id)
        return int(sorter[pos])

    def indices(self, face_ids) -> np.ndarray:
        face_ids = np.asarray(face_ids, dtype=np.int64)
        sorter, sid = self._id_lookup
        pos = np.minimum(np.searchsorted(sid, face_ids), len(sid) - 1)
        if np.any(sid[pos] != face_ids):
            bad = face_ids[sid[pos] != face_ids][0]
            raise KeyError(int(bad))
        return sorter[pos]

    @cached_property
    def rank_offsets(self) -> np.ndarray:
        """``rank_offsets[r+1]:rank_offsets[r+2]`` is the index range of rank r."""
        return np.searchsorted(self.ranks, np.arange(-1, self.rank + 2))

    def faces_of_rank(self, r: int) -> np.ndarray:
        off = self.rank_offsets
        return np.arange(off[r + 1], off[r + 2])

    @property
    def bottom(self) -> int:
        idx = self.faces_of_rank(-1)
        if len(idx) != 1:
            raise NotPolytopeError(f"lattice has {len(idx)} faces of rank -1")
        return int(idx[0])

    @property
    def top(self) -> int:
        idx = self.faces_of_rank(self.rank)
        if len(idx) != 1:
            raise NotPolytopeError(f"lattice has {len(idx)} faces of rank {self.rank}")
        return int(idx[0])

    @cached_property
    def up_csr(self):
        return _csr(self.covers[:, 0], self.covers[:, 1], self.n_faces)

    @cached_property
    def down_csr(self):
        return _csr(self.covers[:, 1], self.covers[:, 0], self.n_faces)

    def up(self, i: int) -> np.ndarray:
        ptr, idx = self.up_csr
        return idx[ptr[i]:ptr[i + 1]]

    def down(self, i: int) -> np.ndarray:
        ptr, idx = self.down_csr
        return idx[ptr[i]:ptr[i + 1]]

    @property
    def up_degree(self) -> np.ndarray:
        return np.diff(self.up_csr[0])

    @property
    def down_degree(self) -> np.ndarray:
        return np.diff(self.down_csr[0])

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(int(x) for x in np.diff(self.rank_offsets)[1:-1])

    def vertex_valencies(self) -> np.ndarray:
        """Edge-graph valency of every rank-0 face, in index order."""
        edges = self.faces_of_rank(1)
        verts = self.faces_of_rank(0)
        ptr, idx = self.down_csr
        if len(edges) == 0:
            return np.zeros(len(verts), dtype=np.int64)
        ends = idx[ptr[edges[0]]:ptr[edges[-1] + 1]]
        return np.bincount(ends - verts[0], minlength=len(verts))

    def vertex_sets(self) -> list[frozenset]:
        """Vertex indices below each face (python sets; small lattices only)."""
        out: list[frozenset] = [frozenset()] * self.n_faces
        for r in range(0, self.rank + 1):
            for f in self.faces_of_rank(r):
                if r == 0:
                    out[f] = frozenset([int(f)])
                else:
                    out[f] = frozenset().union(*(out[g] for g in self.down(f)))
        return out

    def is_comparable(self, a: int, b: int) -> bool:
        """Order relation test by index (a <= b or b <= a)."""
        lo, hi = (a, b) if self.ranks[a] <= self.ranks[b] else (b, a)
        return hi in _up_closure(self, [lo])

    # ---------------------------------------------------------------- flags
    @cached_property
    def _flag_structure(self) -> "_FlagStructure":
        return _FlagStructure.build(self)

    def __repr__(self):
        return f"FaceLattice(rank={self.rank}, f_vector={self.f_vector})"


def _up_closure(lattice: FaceLattice, start) -> set:
    ptr, idx = lattice.up_csr
    seen = set(int(s) for s in start)
    frontier = np.asarray(sorted(seen), dtype=np.int64)
    while frontier.size:
        nxt = np.concatenate([idx[ptr[f]:ptr[f + 1]] for f in frontier]) if frontier.size else frontier
        nxt = np.unique(nxt)
        nxt = np.asarray([x for x in nxt if x not in seen], dtype=np.int64)
        seen.update(int(x) for x in nxt)
        frontier = nxt
    return seen


def _down_closure(lattice: FaceLattice, start) -> set:
    ptr, idx = lattice.down_csr
    seen = set(int(s) for s in start)
    frontier = np.asarray(sorted(seen), dtype=np.int64)
    while frontier.size:
        nxt = np.unique(np.concatenate([idx[ptr[f]:ptr[f + 1]] for f in frontier]))
        nxt = np.asarray([x for x in nxt if x not in seen], dtype=np.int64)
        seen.update(int(x) for x in nxt)
        frontier = nxt
    return seen


def _enumerate_chains(lattice: FaceLattice) -> np.ndarray:
    """All maximal chains bottom..top as rows of proper-face indices."""
    d = lattice.rank
    bottom = lattice.bottom
    top = lattice.top
    ptr, idx = lattice.up_csr
    rows = np.zeros((1, 0), dtype=np.int32)
    last = np.array([bottom], dtype=np.int64)
    for _ in range(d):
        counts = ptr[last + 1] - ptr[last]
        total = int(counts.sum())
        src = np.repeat(np.arange(len(last)), counts)
        starts = np.repeat(ptr[last], counts)
        offs = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
        nxt = idx[starts + offs]
        rows = np.concatenate([rows[src], nxt[:, None].astype(np.int32)], axis=1)
        last = nxt
    if d > 0:
        covered = np.zeros(lattice.n_faces, dtype=bool)
        covered[lattice.down(top)] = True
        keep = covered[last]
        if not keep.all():
            rows = rows[keep]
    elif top not in lattice.up(bottom):
        rows = rows[:0]
    return rows


def row_classes(rows: np.ndarray) -> np.ndarray:
    """Dense class number of each row; equal rows get equal numbers, and
    numbers follow the lexicographic order of the rows."""
    rows = np.asarray(rows)
    key = np.zeros(len(rows), dtype=np.int64)
    for c in range(rows.shape[1]):
        col = rows[:, c].astype(np.int64)
        col -= col.min(initial=0)
        span = int(col.max(initial=0)) + 1
        _, key = np.unique(key * span + col, return_inverse=True)
        key = key.ravel().astype(np.int64)
    return key


def _color_groups(rows: np.ndarray, color: int):
    """Sort flags so that flags differing only in column ``color`` are adjacent.

    Returns ``(order, starts)`` where ``starts[p]`` marks the first flag of a
    group in sorted position ``p``.
    """
    n, d = rows.shape
    other = [c for c in range(d) if c != color]
    if not other:
        order = np.arange(n)
        starts = np.zeros(n, dtype=bool)
        if n:
            starts[0] = True
        return order, starts
    order = np.lexsort([rows[:, c] for c in reversed(other)])
    starts = np.zeros(n, dtype=bool)
    for c in other:
        col = rows[order, c]
        starts[1:] |= col[1:] != col[:-1]
    if n:
        starts[0] = True
    return order, starts


@dataclass
class _FlagStructure:
    rows: np.ndarray
    adjacency: np.ndarray | None  # (d, n) when every color group has size two
    edges: list  # per color: (a, b) arrays, consecutive members of each group
    diamond_witness: tuple | None

    @classmethod
    def build(cls, lattice: FaceLattice) -> "_FlagStructure":
        rows = _enumerate_chains(lattice)
        n, d = rows.shape
        perfect = True
        witness = None
        adjacency = np.empty((d, n), dtype=np.int32)
        edges = []
        for i in range(d):
            order, starts = _color_groups(rows, i)
            gid = np.cumsum(starts) - 1
            sizes = np.bincount(gid) if n else np.zeros(0, dtype=np.int64)
            link = ~starts[1:]
            edges.append((order[:-1][link].astype(np.int32), order[1:][link].astype(np.int32)))
            if perfect and np.any(sizes != 2):
                perfect = False
                g = int(np.flatnonzero(sizes != 2)[0])
                members = order[gid == g]
                row = rows[members[0]]
                lower = lattice.ids[row[i - 1]] if i > 0 else lattice.ids[lattice.bottom]
                upper = lattice.ids[row[i + 1]] if i < d - 1 else lattice.ids[lattice.top]
                between = sorted(int(lattice.ids[rows[m, i]]) for m in members)
                witness = (int(lower), int(upper), between)
            if perfect:
                a, b = order[0::2], order[1::2]
                adjacency[i, a] = b
                adjacency[i, b] = a
        if not perfect:
            adjacency = None
        else:
            edges = None  # recoverable from the matchings
        return cls(rows, adjacency, edges, witness)

    def color_edges(self, color: int):
        if self.adjacency is not None:
            partner = self.adjacency[color]
            a = np.flatnonzero(partner > np.arange(len(partner)))
            return a.astype(np.int32), partner[a]
        return self.edges[color]


@dataclass(frozen=True, eq=False)
class FlagGraph:
    """Flags of a polytope with their i-adjacency matchings.

    ``flags[k, r]`` is the index of the rank-r face of flag k (r = 0..d-1);
    ``adjacency[i, k]`` is the index of the flag i-adjacent to flag k.
    Flags are ordered lexicographically by face-id tuple.
    """

    lattice: FaceLattice
    flags: np.ndarray
    adjacency: np.ndarray

    def __len__(self):
        return len(self.flags)

    @property
    def rank(self) -> int:
        return self.lattice.rank

    def face_ids(self) -> np.ndarray:
        return self.lattice.ids[self.flags]

    @cached_property
    def _sorted_keys(self):
        keys = _row_keys(self.flags)
        order = np.argsort(keys, kind="stable")
        return order, keys[order]

    def lookup(self, rows) -> np.ndarray:
        """Flag indices for rows of face indices; -1 where a row is not a flag."""
        rows = np.ascontiguousarray(np.asarray(rows, dtype=np.int32).reshape(-1, self.rank))
        order, skeys = self._sorted_keys
        q = _row_keys(rows)
        pos = np.minimum(np.searchsorted(skeys, q), len(skeys) - 1)
        found = skeys[pos] == q
        return np.where(found, order[pos], -1)

    def neighbors(self, k: int) -> list[int]:
        return [int(self.adjacency[i, k]) for i in range(self.rank)]


def _row_keys(rows: np.ndarray) -> np.ndarray:
    rows = np.ascontiguousarray(rows, dtype=np.int32)
    width = rows.shape[1] * rows.dtype.itemsize
    if width == 0:
        return np.zeros(len(rows), dtype=np.int8)
    return rows.view(np.dtype((np.void, width))).ravel()


def flags(lattice: FaceLattice) -> FlagGraph:
    """Enumerate flags and their adjacency matchings.

    Raises :class:`NotPolytopeError` when some matching is not perfect, i.e.
    the diamond condition fails somewhere.
    """
    fs = lattice._flag_structure
    if fs.adjacency is None:
        lo, hi, between = fs.diamond_witness
        raise NotPolytopeError(
            f"flag matchings are not perfect: faces strictly between {lo} and {hi} are {between}")
    return FlagGraph(lattice, fs.rows, fs.adjacency)


# ------------------------------------------------------------------ validation
@dataclass(frozen=True)
class AxiomResult:
    passed: bool | None  # None: could not be evaluated
    witness: object = None
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    rank: int
    n_faces: int
    n_flags: int
    results: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.results[a].passed is True for a in AXIOMS)

    def failures(self) -> list[str]:
        return [a for a in AXIOMS if self.results[a].passed is not True]

    def summary(self) -> str:
        if self.ok:
            return f"polytope of rank {self.rank}, {self.n_flags} flags, PASS"
        lines = [f"rank {self.rank} poset, {self.n_faces} faces: FAIL"]
        for a in AXIOMS:
            res = self.results[a]
            state = {True: "pass", False: "FAIL", None: "not checked"}[res.passed]
            line = f"  {a}: {state}"
            if res.passed is False:
                line += f" ({res.detail}; witness {res.witness})"
            lines.append(line)
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "faces": self.n_faces,
            "flags": self.n_flags,
            "ok": self.ok,
            "axioms": {a: {"passed": r.passed, "witness": r.witness, "detail": r.detail}
                       for a, r in self.results.items()},
        }


def validate(lattice: FaceLattice) -> ValidationReport:
    """Check boundedness, gradedness, the diamond condition and strong
    flag-connectedness, reporting a witness for each failure."""
    d = lattice.rank
    res: dict[str, AxiomResult] = {}
    n_bottom = len(lattice.faces_of_rank(-1))
    n_top = len(lattice.faces_of_rank(d))
    if n_bottom == 1 and n_top == 1:
        res["bounded"] = AxiomResult(True)
    else:
        wit = [int(x) for x in lattice.ids[lattice.ranks == -1]] + \
              [int(x) for x in lattice.ids[lattice.ranks == d]]
        res["bounded"] = AxiomResult(
            False, wit, f"{n_bottom} faces of rank -1 and {n_top} of rank {d}")
        res["graded"] = AxiomResult(None)
        res["diamond"] = AxiomResult(None)
        res["strongly_flag_connected"] = AxiomResult(None)
        return ValidationReport(d, lattice.n_faces, 0, res)

    no_down = np.flatnonzero((lattice.down_degree == 0) & (lattice.ranks > -1))
    no_up = np.flatnonzero((lattice.up_degree == 0) & (lattice.ranks < d))
    if no_down.size:
        res["graded"] = AxiomResult(False, int(lattice.ids[no_down[0]]),
                                    "face covers nothing; chain through it is short")
    elif no_up.size:
        res["graded"] = AxiomResult(False, int(lattice.ids[no_up[0]]),
                                    "face is covered by nothing; chain through it is short")
    else:
        res["graded"] = AxiomResult(True)

    fs = lattice._flag_structure
    n_flags = len(fs.rows)
    if fs.diamond_witness is None:
        res["diamond"] = AxiomResult(True)
    else:
        lo, hi, between = fs.diamond_witness
        res["diamond"] = AxiomResult(
            False, [lo, hi, between], f"{len(between)} faces strictly between a rank-2 interval")

    res["strongly_flag_connected"] = _check_strong_connectivity(lattice, fs)
    return ValidationReport(d, lattice.n_faces, n_flags, res)


def _check_strong_connectivity(lattice: FaceLattice, fs: _FlagStructure) -> AxiomResult:
    # Equivalent to: every section G/F of rank >= 2 has a connected flag
    # graph.  Flags of G/F extended by a fixed chain outside it are the
    # orbits of the colors strictly between rank F and rank G.
    rows = fs.rows
    n, d = rows.shape
    if n == 0:
        return AxiomResult(False, None, "no maximal chains")
    for span in range(d + 1, 2, -1):
        for r in range(-1, d + 1 - span + 0):
            s = r + span
            if s > d:
                continue
            colors = range(r + 1, s)
            pairs = [fs.color_edges(c) for c in colors]
            a = np.concatenate([p[0] for p in pairs]).astype(np.int64)
            b = np.concatenate([p[1] for p in pairs]).astype(np.int64)
            graph = coo_matrix((np.ones(len(a), dtype=np.int8), (a, b)), shape=(n, n))
            n_comp, labels = connected_components(graph, directed=False)
            # the rest of the flag is fixed along these edges
            fixed = [c for c in range(d) if not r < c < s]
            key = row_classes(rows[:, fixed])
            n_keys = int(key.max()) + 1
            if n_comp != n_keys:
                comp_key = np.unique(np.stack([key, labels.astype(np.int64)], axis=1), axis=0)
                ks, counts = np.unique(comp_key[:, 0], return_counts=True)
                flag = int(np.flatnonzero(key == ks[np.flatnonzero(counts > 1)[0]])[0])
                lo_idx = rows[flag, r] if r >= 0 else lattice.bottom
                hi_idx = rows[flag, s] if s < d else lattice.top
                return AxiomResult(
                    False, [int(lattice.ids[lo_idx]), int(lattice.ids[hi_idx])],
                    f"flags of the section between ranks {r} and {s} are disconnected")
    return AxiomResult(True)


def require_polytope(lattice: FaceLattice) -> ValidationReport:
    report = validate(lattice)
    if not report.ok:
        raise NotPolytopeError(report.summary(), report)
    return report


# ---------------------------------------------------------- skeleton / section
@dataclass(frozen=True)
class Subposet:
    """An induced subposet that need not be a polytope (e.g. a skeleton)."""

    ids: np.ndarray
    ranks: np.ndarray
    covers: np.ndarray  # (k, 2) face-id pairs

    def count(self, r: int) -> int:
        return int(np.sum(self.ranks == r))

    def cover_set(self) -> set[tuple[int, int]]:
        return {(int(a), int(b)) for a, b in self.covers}


def skeleton(lattice: FaceLattice, k: int) -> Subposet:
    """Proper faces of rank at most ``k`` with the induced order."""
    if not -1 <= k < lattice.rank:
        raise RankError(f"skeleton rank {k} outside -1..{lattice.rank - 1}")
    keep = (lattice.ranks >= 0) & (lattice.ranks <= k)
    c = lattice.covers
    ck = c[keep[c[:, 0]] & keep[c[:, 1]]]
    return Subposet(lattice.ids[keep], lattice.ranks[keep], lattice.ids[ck])


def section(lattice: FaceLattice, lower_id: int, upper_id: int) -> FaceLattice:
    """The section ``G/F = {H : F <= H <= G}`` reranked to -1..rank(G)-rank(F)-1."""
    f = lattice.index(lower_id)
    g = lattice.index(upper_id)
    above = _up_closure(lattice, [f])
    if g not in above:
        raise ValueError(f"faces {lower_id} and {upper_id} are not comparable as F <= G")
    below = _down_closure(lattice, [g])
    keep = np.zeros(lattice.n_faces, dtype=bool)
    keep[sorted(above & below)] = True
    c = lattice.covers
    ck = c[keep[c[:, 0]] & keep[c[:, 1]]]
    shift = int(lattice.ranks[f]) + 1
    return FaceLattice.from_arrays(
        int(lattice.ranks[g]) - shift, lattice.ids[keep], lattice.ranks[keep] - shift,
        lattice.ids[ck[:, 0]], lattice.ids[ck[:, 1]])


# ------------------------------------------------------------------- builders
def lattice_from_flag_graph(graph: FlagGraph):
    """Rebuild a lattice from a flag graph alone.

    Faces of rank i are the connected components of the flag graph with the
    i-colored edges deleted.  Returns the lattice and an array mapping each
    face index of ``graph.lattice`` to the rebuilt face index.
    """
    n = len(graph)
    d = graph.rank
    comp = []
    for i in range(d):
        a_list, b_list = [], []
        for c in range(d):
            if c == i:
                continue
            partner = graph.adjacency[c]
            a_list.append(np.arange(n))
            b_list.append(partner)
        if a_list:
            a = np.concatenate(a_list)
            b = np.concatenate(b_list)
        else:
            a = b = np.zeros(0, dtype=np.int64)
        g = coo_matrix((np.ones(len(a), dtype=np.int8), (a, b)), shape=(n, n))
        _, labels = connected_components(g, directed=False)
        comp.append(labels)
    ids, ranks, lo, hi = [BOTTOM_ID, TOP_ID], [-1, d], [], []
    offset = 0
    base = []
    for i in range(d):
        k = int(comp[i].max()) + 1 if n else 0
        base.append(offset)
        ids.extend(range(offset, offset + k))
        ranks.extend([i] * k)
        offset += k
    for i in range(d):
        if i == 0:
            v = np.unique(comp[0]) + base[0]
            lo.extend([BOTTOM_ID] * len(v))
            hi.extend(v.tolist())
        if i == d - 1:
            v = np.unique(comp[i]) + base[i]
            lo.extend(v.tolist())
            hi.extend([TOP_ID] * len(v))
        else:
            pairs = np.unique(np.stack([comp[i] + base[i], comp[i + 1] + base[i + 1]], axis=1), axis=0)
            lo.extend(pairs[:, 0].tolist())
            hi.extend(pairs[:, 1].tolist())
    rebuilt = FaceLattice.from_arrays(d, ids, ranks, lo, hi)
    src = graph.lattice
    mapping = np.full(src.n_faces, -1, dtype=np.int64)
    mapping[src.bottom] = rebuilt.index(BOTTOM_ID)
    mapping[src.top] = rebuilt.index(TOP_ID)
    for i in range(d):
        mapping[graph.flags[:, i]] = rebuilt.indices(comp[i] + base[i])
    return rebuilt, mapping


def face_covers(faces: Mapping[frozenset, int]) -> list[tuple[frozenset, frozenset]]:
    """Cover pairs of a polytopal complex given as vertex set -> rank.

    A face of rank r-1 contained in a face of rank r is one of its facets.
    Simplices are handled by dropping single vertices.
    """
    by_rank: dict[int, list[frozenset]] = {}
    for f, r in faces.items():
        by_rank.setdefault(r, []).append(f)
    out = []
    for r in sorted(by_rank):
        if r < 1:
            continue
        index: dict = {}
        for f in by_rank.get(r - 1, []):
            for v in f:
                index.setdefault(v, []).append(f)
        for g in sorted(by_rank[r], key=lambda x: tuple(sorted(x))):
            if len(g) == r + 1:
                subs = [g - {v} for v in sorted(g)]
                if not all(faces.get(x) == r - 1 for x in subs):
                    raise LatticeStructureError(f"simplex face {sorted(g)} is missing a facet")
            else:
                cand = {f for v in g for f in index.get(v, ())}
                subs = sorted((f for f in cand if f < g), key=lambda x: tuple(sorted(x)))
            out.extend((x, g) for x in subs)
    return out


def lattice_from_faces(faces: Mapping[frozenset, int], rank: int):
    """Lattice of a polytopal complex whose faces are determined by vertex sets.

    ``faces`` maps every proper face (a frozenset of sortable vertex keys) to
    its rank.  Improper faces are adjoined with the reserved ids.  Proper
    face ids are assigned in ``(rank, sorted vertex tuple)`` order.
    Returns ``(lattice, vertex_sets)`` with ``vertex_sets`` in index order.
    """
    ordered = sorted(faces.items(), key=lambda kv: (kv[1], tuple(sorted(kv[0]))))
    fid = {f: i for i, (f, _) in enumerate(ordered)}
    lo, hi = [], []
    for s_, g in face_covers(faces):
        lo.append(fid[s_])
        hi.append(fid[g])
    n = len(ordered)
    for f, r in ordered:
        if r == 0:
            lo.append(BOTTOM_ID)
            hi.append(fid[f])
        if r == rank - 1:
            lo.append(fid[f])
            hi.append(TOP_ID)
    ids = [BOTTOM_ID] + list(range(n)) + [TOP_ID]
    ranks = [-1] + [r for _, r in ordered] + [rank]
    lattice = FaceLattice.from_arrays(rank, ids, ranks, lo, hi)
    allverts = frozenset().union(*faces) if faces else frozenset()
    vsets = [frozenset()] + [f for f, _ in ordered] + [allverts]
    return lattice, vsets


def lattice_from_facets(facets: Iterable[Iterable[Hashable]]):
    """Face lattice of a polytope given by the vertex sets of its facets.

    Faces are found top-down: the facets of a face G are the inclusion-maximal
    proper nonempty intersections of G with the polytope's facets.  Returns
    ``(lattice, vertex_sets)`` as :func:`lattice_from_faces` does.
    """
    facets = sorted({frozenset(f) for f in facets}, key=lambda s: tuple(sorted(s)))
    if not facets:
        raise LatticeStructureError("no facets given")
    depth: dict[frozenset, int] = {f: 1 for f in facets}
    level = list(facets)
    k = 1
    while level:
        nxt: dict[frozenset, None] = {}
        for g in level:
            if len(g) == 1:
                continue
            cands = {g & f for f in facets}
            cands.discard(g)
            cands.discard(frozenset())
            maximal = [c for c in cands if not any(c < o for o in cands)]
            for c in maximal:
                if c in depth:
                    if depth[c] != k + 1:
                        raise NotPolytopeError(f"face {sorted(c)} is not graded")
                    continue
                depth[c] = k + 1
                nxt[c] = None
        level = sorted(nxt, key=lambda s: tuple(sorted(s)))
        k += 1
    vdepth = {depth[f] for f in depth if len(f) == 1}
    if len(vdepth) != 1:
        raise NotPolytopeError("vertices lie at different depths; facets do not form a polytope")
    rank = vdepth.pop()
    faces = {f: rank - dd for f, dd in depth.items()}
    return lattice_from_faces(faces, rank)
