"""Permutation groups acting on the faces of a lattice.

Group elements are dense integer arrays over face *indices* of the base
lattice, so ``g[h]`` is the composition ``g after h``.  JSON exchange uses
face ids instead.
"""
from __future__ import annotations

import logging
from typing import Callable, Iterable, Mapping

import numpy as np

from .errors import CapacityError, GroupError
from .lattice import FaceLattice, FlagGraph, flags, row_classes

log = logging.getLogger(__name__)

DEFAULT_CAP = 10**6


def identity(lattice: FaceLattice) -> np.ndarray:
    return np.arange(lattice.n_faces, dtype=np.int64)


def same_lattice(a: FaceLattice, b: FaceLattice) -> bool:
    if a is b:
        return True
    return (a.rank == b.rank and np.array_equal(a.ids, b.ids)
            and np.array_equal(a.ranks, b.ranks) and np.array_equal(a.covers, b.covers))


def _cover_keys(lattice: FaceLattice, perm: np.ndarray) -> np.ndarray:
    n = lattice.n_faces
    c = lattice.covers
    return np.sort(perm[c[:, 0]] * n + perm[c[:, 1]])


def check_automorphism(lattice: FaceLattice, perm) -> np.ndarray:
    """Return ``perm`` as an index array, raising GroupError unless it is an
    automorphism of ``lattice``."""
    perm = np.asarray(perm, dtype=np.int64)
    n = lattice.n_faces
    if perm.shape != (n,):
        raise GroupError(f"permutation has shape {perm.shape}, expected ({n},)")
    if perm.min(initial=0) < 0 or perm.max(initial=0) >= n or len(np.unique(perm)) != n:
        raise GroupError("map is not a bijection on faces")
    moved = np.flatnonzero(lattice.ranks[perm] != lattice.ranks)
    if moved.size:
        f = moved[0]
        raise GroupError(f"face {lattice.ids[f]} of rank {lattice.ranks[f]} is sent to a face of "
                         f"rank {lattice.ranks[perm[f]]}")
    n_c = lattice.covers
    base = n_c[:, 0] * n + n_c[:, 1]  # already sorted
    image = perm[n_c[:, 0]] * n + perm[n_c[:, 1]]
    hit = np.isin(image, base)
    if not hit.all():
        k = int(np.flatnonzero(~hit)[0])
        lo, hi = n_c[k]
        raise GroupError(f"cover ({lattice.ids[lo]}, {lattice.ids[hi]}) is not sent to a cover")
    return perm


def is_automorphism(lattice: FaceLattice, perm) -> bool:
    try:
        check_automorphism(lattice, perm)
    except GroupError:
        return False
    return True


def perm_from_id_map(lattice: FaceLattice, face_map: Mapping) -> np.ndarray:
    """Index permutation from a face-id map; unmapped faces are fixed."""
    perm = identity(lattice)
    if face_map:
        src = lattice.indices([int(k) for k in face_map.keys()])
        dst = lattice.indices([int(v) for v in face_map.values()])
        perm[src] = dst
    return perm


def perm_from_vertex_map(lattice: FaceLattice, vertex_map: Mapping[int, int]) -> np.ndarray:
    """Extend a map on vertex ids to faces, for lattices whose faces are
    determined by their vertex sets.  Raises GroupError if it does not extend."""
    vsets = lattice.vertex_sets()
    vid = {int(lattice.ids[v]): int(v) for v in lattice.faces_of_rank(0)}
    vmap = {vid[int(a)]: vid[int(b)] for a, b in vertex_map.items()}
    lookup = {}
    for f in range(lattice.n_faces):
        key = (int(lattice.ranks[f]), vsets[f])
        if key in lookup:
            raise GroupError("faces are not determined by their vertex sets")
        lookup[key] = f
    perm = np.empty(lattice.n_faces, dtype=np.int64)
    for f in range(lattice.n_faces):
        img = frozenset(vmap.get(v, v) for v in vsets[f])
        key = (int(lattice.ranks[f]), img)
        if key not in lookup:
            raise GroupError(f"vertex map does not extend: image of face {lattice.ids[f]} is not a face")
        perm[f] = lookup[key]
    return check_automorphism(lattice, perm)


def flag_permutation(graph: FlagGraph, perm: np.ndarray) -> np.ndarray:
    """Induced permutation of flag indices."""
    img = graph.lookup(np.asarray(perm)[graph.flags])
    if np.any(img < 0):
        raise GroupError("face map does not send flags to flags")
    return img


class PermGroup:
    """Group of lattice automorphisms given by generators.

    The element list is the breadth-first closure of the generators, in a
    deterministic order starting with the identity.
    """

    def __init__(self, lattice: FaceLattice, generators: Iterable = (), *, check: bool = True,
                 cap: int = DEFAULT_CAP):
        self.lattice = lattice
        gens = [np.asarray(g, dtype=np.int64) for g in generators]
        if check:
            gens = [check_automorphism(lattice, g) for g in gens]
        self.generators = gens
        self.cap = cap
        self._elements: np.ndarray | None = None
        self._index: dict | None = None

    @property
    def elements(self) -> np.ndarray:
        if self._elements is None:
            self._elements = closure(self)
        return self._elements

    @property
    def order(self) -> int:
        return len(self.elements)

    def _lookup(self) -> dict:
        if self._index is None:
            self._index = {e.tobytes(): k for k, e in enumerate(self.elements)}
        return self._index

    def index_of(self, perm) -> int:
        """Position of ``perm`` in :attr:`elements`, or -1."""
        return self._lookup().get(np.asarray(perm, dtype=np.int64).tobytes(), -1)

    def contains(self, perm) -> bool:
        return self.index_of(perm) >= 0

    def to_json(self) -> dict:
        ids = self.lattice.ids
        gens = []
        for g in self.generators:
            moved = np.flatnonzero(g != np.arange(len(g)))
            proper = [k for k in range(len(g)) if self.lattice.ranks[k] not in (-1, self.lattice.rank)]
            gens.append({"face-map": {str(int(ids[k])): int(ids[g[k]]) for k in proper}})
        return {"generators": gens}

    @classmethod
    def from_json(cls, lattice: FaceLattice, data: Mapping, **kw) -> "PermGroup":
        try:
            gens = []
            for g in data.get("generators", []):
                if "face-map" in g:
                    gens.append(perm_from_id_map(lattice, g["face-map"]))
                else:
                    gens.append(perm_from_vertex_map(lattice, g["vertex-map"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise GroupError(f"malformed group JSON: {exc}") from exc
        return cls(lattice, gens, **kw)

    def __repr__(self):
        return f"PermGroup(order={self.order}, generators={len(self.generators)})"


def closure(group: PermGroup) -> np.ndarray:
    """All elements generated by ``group.generators`` (breadth first)."""
    n = group.lattice.n_faces
    ident = np.arange(n, dtype=np.int64)
    seen = {ident.tobytes()}
    out = [ident]
    head = 0
    while head < len(out):
        e = out[head]
        head += 1
        for g in group.generators:
            h = g[e]
            key = h.tobytes()
            if key not in seen:
                seen.add(key)
                out.append(h)
                if len(out) > group.cap:
                    raise CapacityError(f"group closure exceeds cap of {group.cap} elements")
    return np.stack(out)


def is_subgroup(candidate: PermGroup, ambient: PermGroup) -> bool:
    if not same_lattice(candidate.lattice, ambient.lattice):
        raise GroupError("groups act on different lattices")
    return all(ambient.contains(g) for g in candidate.generators)


# ------------------------------------------------------------- orbits
def orbits(group: PermGroup, items: Iterable, action="faces", graph: FlagGraph | None = None):
    """Partition ``items`` into orbits; each orbit sorted, orbits sorted by
    their minimum (the representative).

    ``action`` is ``"faces"`` (items are face ids), ``"flags"`` (items are flag
    indices of ``graph``) or a callable ``(element, item) -> item``.
    """
    items = sorted(set(items))
    pool = set(items)
    els = group.elements
    if action == "faces":
        lat = group.lattice
        idx = lat.indices(items) if items else np.zeros(0, np.int64)
        images = lat.ids[els[:, idx]].T  # (items, order)
        table = {it: images[k] for k, it in enumerate(items)}
        act = None
    elif action == "flags":
        graph = graph if graph is not None else flags(group.lattice)
        fperms = np.stack([flag_permutation(graph, e) for e in els])
        table = {it: fperms[:, it] for it in items}
        act = None
    elif callable(action):
        act = action
    else:
        raise ValueError(f"unknown action {action!r}")
    done = set()
    result = []
    for it in items:
        if it in done:
            continue
        if act is None:
            orb = {int(x) for x in table[it]}
        else:
            orb = {act(e, it) for e in els}
        if not orb <= pool:
            stray = min(orb - pool)
            raise GroupError(f"action is not closed on the items: {it} is sent to {stray}")
        done |= orb
        result.append(sorted(orb))
    return result


# ------------------------------------------------------- automorphisms
_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)


def _mix(x: np.ndarray) -> np.ndarray:
    # splitmix64 finaliser; uint64 arithmetic wraps
    x = x.astype(np.uint64) + np.uint64(0x9E3779B97F4A7C15)
    x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


def _segment_sum(values: np.ndarray, ptr: np.ndarray) -> np.ndarray:
    """Wrapping uint64 sums of consecutive segments ``ptr[k]:ptr[k+1]``."""
    out = np.zeros(len(ptr) - 1, dtype=np.uint64)
    nonempty = np.flatnonzero(np.diff(ptr) > 0)
    if nonempty.size:
        out[nonempty] = np.add.reduceat(values, ptr[nonempty])
    return out


def refine_face_colors(lattice: FaceLattice, max_rounds: int = 200) -> np.ndarray:
    """Automorphism-invariant face colouring by iterated neighbourhood refinement.

    Seeded with (rank, number of covers above, number below), which for
    vertices is the valency profile.  Each round recolours a face by its
    colour together with the multisets of colours above and below it.  The
    result only ever prunes candidates, it never decides acceptance.
    """
    up_ptr, up_idx = lattice.up_csr
    down_ptr, down_idx = lattice.down_csr
    n = lattice.n_faces
    seed = np.stack([lattice.ranks, lattice.up_degree, lattice.down_degree], axis=1)
    color = row_classes(seed)
    n_colors = int(color.max()) + 1 if n else 0
    for _ in range(max_rounds):
        h = _mix(color)
        up = _segment_sum(h[up_idx], up_ptr)
        down = _segment_sum(_mix(h)[down_idx], down_ptr)
        # hash collisions can only merge classes, which keeps the colouring invariant
        key = _mix(_mix(h ^ up) + down)
        _, new = np.unique(key, return_inverse=True)
        new = new.ravel()
        k = int(new.max()) + 1 if n else 0
        if k <= n_colors:
            break
        color, n_colors = new, k
    return color


def _propagate(graph: FlagGraph, base: int, target: int) -> np.ndarray | None:
    """Flag map determined by base -> target, or None on a conflict."""
    adj = graph.adjacency
    n = len(graph)
    f = np.full(n, -1, dtype=np.int64)
    f[base] = target
    frontier = np.array([base], dtype=np.int64)
    while frontier.size:
        src_img = f[frontier]
        nxt = []
        for i in range(graph.rank):
            nb = adj[i, frontier].astype(np.int64)
            img = adj[i, src_img].astype(np.int64)
            cur = f[nb]
            known = cur >= 0
            if np.any(cur[known] != img[known]):
                return None
            new = ~known
            if new.any():
                f[nb[new]] = img[new]
                if np.any(f[nb[new]] != img[new]):
                    return None
                nxt.append(nb[new])
        frontier = np.unique(np.concatenate(nxt)) if nxt else np.zeros(0, dtype=np.int64)
    if np.any(f < 0):
        return None
    return f


def _face_map(graph: FlagGraph, fmap: np.ndarray) -> np.ndarray | None:
    lat = graph.lattice
    perm = np.full(lat.n_faces, -1, dtype=np.int64)
    perm[lat.bottom] = lat.bottom
    perm[lat.top] = lat.top
    src = graph.flags
    dst = graph.flags[fmap]
    for r in range(graph.rank):
        perm[src[:, r]] = dst[:, r]
        if np.any(perm[src[:, r]] != dst[:, r]):
            return None
    if np.any(perm < 0):
        return None
    return perm


def automorphism_search(lattice: FaceLattice, *, prune: bool = True):
    """Flag-propagation search.

    Returns ``(perms, flag_maps, stats)`` where each accepted target flag of
    the base flag yields one automorphism (the action on flags is free).
    """
    graph = flags(lattice)
    n = len(graph)
    if prune:
        color = refine_face_colors(lattice)
        sig = color[graph.flags]
        cls = row_classes(sig)
        sizes = np.bincount(cls)
        # smallest signature class; ties broken by the first flag
        best = int(np.argmin(sizes[cls]))
        base = best
        candidates = np.flatnonzero(cls == cls[base])
    else:
        base = 0
        candidates = np.arange(n)
    perms, fmaps = [], []
    for t in candidates:
        fmap = _propagate(graph, base, int(t))
        if fmap is None:
            continue
        if len(np.unique(fmap)) != n:
            continue
        perm = _face_map(graph, fmap)
        if perm is None or not is_automorphism(lattice, perm):
            continue
        if t != base and np.any(fmap == np.arange(n)):
            raise AssertionError("non-identity automorphism fixes a flag")
        perms.append(perm)
        fmaps.append(fmap)
    stats = {"flags": n, "candidates": int(len(candidates)), "accepted": len(perms),
             "base_flag": int(base)}
    log.debug("automorphism search: %s", stats)
    return perms, fmaps, stats


def generators_from_elements(lattice: FaceLattice, elements, cap: int = DEFAULT_CAP) -> list:
    """Greedy generating set: walk the elements, keep any not yet generated."""
    gens: list = []
    span = {identity(lattice).tobytes()}
    for e in elements:
        if e.tobytes() in span:
            continue
        gens.append(e)
        span = {x.tobytes() for x in closure(PermGroup(lattice, gens, check=False, cap=cap))}
    return gens


def automorphisms(lattice: FaceLattice, *, cap: int = DEFAULT_CAP, prune: bool = True) -> PermGroup:
    """The full automorphism group of a polytope lattice."""
    perms, _, _ = automorphism_search(lattice, prune=prune)
    if len(perms) > cap:
        raise CapacityError(f"automorphism group exceeds cap of {cap}")
    perms.sort(key=lambda p: p.tobytes())
    ident = identity(lattice)
    perms = [ident] + [p for p in perms if not np.array_equal(p, ident)]
    group = PermGroup(lattice, generators_from_elements(lattice, perms, cap), check=False, cap=cap)
    if group.order != len(perms):
        raise AssertionError("generated group differs from the accepted automorphisms")
    return group


def subgroup(lattice: FaceLattice, generators, **kw) -> PermGroup:
    return PermGroup(lattice, generators, **kw)
