"""Gadget complexes used to refine chambers.

Everything here is combinatorial: a polytopal complex is a dict mapping
vertex sets to ranks, and a Schlegel diagram of a polytope X with respect
to a simplex facet O is simply the set of proper faces of X other than O.
Inserting such a diagram into a simplex tile T of a complex deletes T and
adds the faces of X not contained in O, with O's vertices identified with
T's vertices.

Vertex keys are integers.  In every gadget complex the outer simplex has
vertices ``0..d-1`` (``u_i = i``), the opposite crosspolytope vertices are
``w_j = d + j`` and inserted vertices are numbered from ``2d`` in the order
they are created.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations

from .errors import InfeasibleParameterError, RankError
from .lattice import FaceLattice, face_covers, lattice_from_faces, lattice_from_facets


# ------------------------------------------------------------------ complexes
@dataclass
class CellComplex:
    """A pure polytopal complex of dimension ``dim`` given by vertex sets."""

    dim: int
    cells: dict = field(default_factory=dict)

    def vertices(self) -> list:
        return sorted(next(iter(f)) for f, r in self.cells.items() if r == 0)

    def tiles(self) -> list:
        return sorted((f for f, r in self.cells.items() if r == self.dim), key=lambda x: tuple(sorted(x)))

    def edges(self) -> list:
        return sorted(tuple(sorted(f)) for f, r in self.cells.items() if r == 1)

    def valency(self) -> dict:
        val = {v: 0 for v in self.vertices()}
        for a, b in self.edges():
            val[a] += 1
            val[b] += 1
        return val

    def count(self, r: int) -> int:
        return sum(1 for x in self.cells.values() if x == r)

    def insert(self, tile: frozenset, faces: dict, outer: frozenset, outer_map: dict, next_key: int):
        """Replace ``tile`` by the Schlegel diagram of ``faces`` w.r.t. ``outer``.

        ``outer_map`` sends the vertices of ``outer`` onto those of ``tile``.
        Returns the full vertex map and the next unused key.
        """
        if self.cells.get(tile) != self.dim:
            raise ValueError(f"{sorted(tile)} is not a tile")
        if frozenset(outer_map[v] for v in outer) != tile:
            raise ValueError("outer facet is not mapped onto the tile")
        fresh = sorted(frozenset().union(*faces) - outer)
        vmap = dict(outer_map)
        for v in fresh:
            vmap[v] = next_key
            next_key += 1
        del self.cells[tile]
        for f, r in faces.items():
            img = frozenset(vmap[v] for v in f)
            if f <= outer:
                if f != outer:
                    assert self.cells.get(img) == r, "outer facet faces must already be present"
                continue
            assert img not in self.cells, "inserted face collides with an existing face"
            self.cells[img] = r
        return vmap, next_key

    def check_ball(self, boundary_ridges, covers=None) -> bool:
        """Every ridge lies in two tiles, except the given boundary ridges (one)."""
        boundary_ridges = set(boundary_ridges)
        count = {f: 0 for f, r in self.cells.items() if r == self.dim - 1}
        for lo, hi in (face_covers(self.cells) if covers is None else covers):
            if self.cells[hi] == self.dim:
                count[lo] += 1
        return all(c == (1 if f in boundary_ridges else 2) for f, c in count.items())

    def closed_lattice(self, outer: frozenset) -> FaceLattice:
        """Lattice of the sphere obtained by adding ``outer`` back as a tile."""
        cells = dict(self.cells)
        cells[outer] = self.dim
        return lattice_from_faces(cells, self.dim + 1)[0]


def simplex_faces(vertices, rank_limit=None) -> dict:
    vs = sorted(vertices)
    top = len(vs) - 1 if rank_limit is None else rank_limit
    return {frozenset(c): k - 1 for k in range(1, top + 2) for c in combinations(vs, k)}


# ----------------------------------------------------- crosspolytope diagram
@dataclass(frozen=True)
class CrosspolytopeDiagram:
    d: int
    complex: CellComplex
    outer: frozenset  # D, vertices u_0..u_{d-1}
    central: frozenset  # Z, vertices w_0..w_{d-1}
    adjacent: tuple  # F_{u_i} for i = 0..d-1

    @property
    def u(self) -> list[int]:
        return list(range(self.d))

    @property
    def w(self) -> list[int]:
        return list(range(self.d, 2 * self.d))

    def tile_of(self, subset) -> frozenset:
        """Tile with u_i for i in ``subset`` and w_j otherwise."""
        s = set(subset)
        return frozenset(i if i in s else self.d + i for i in range(self.d))


def crosspolytope_diagram(d: int) -> CrosspolytopeDiagram:
    if d < 3:
        raise RankError(f"crosspolytope diagram needs d >= 3, got {d}")
    cells = {}
    for k in range(1, d + 1):
        for axes in combinations(range(d), k):
            for mask in range(1 << k):
                f = frozenset(a if mask >> j & 1 else d + a for j, a in enumerate(axes))
                cells[f] = k - 1
    outer = frozenset(range(d))
    del cells[outer]
    cx = CellComplex(d - 1, cells)
    central = frozenset(range(d, 2 * d))
    adjacent = tuple(frozenset([i] + [d + j for j in range(d) if j != i]) for i in range(d))
    return CrosspolytopeDiagram(d, cx, outer, central, adjacent)


# ------------------------------------------------------------ pyramid gadgets
def is_feasible_apex_valency(d: int, m: int) -> bool:
    if d == 3:
        return m >= 3
    return m >= d and (m - d) % (d - 2) == 0


def feasible_apex_valency(d: int, m: int) -> int:
    """Smallest attainable apex valency >= m."""
    if d < 3:
        raise RankError("gadgets need d >= 3")
    if d == 3:
        return max(m, 3)
    if m <= d:
        return d
    t = -(-(m - d) // (d - 2))
    return d + t * (d - 2)


def _truncated_simplex(k: int, truncations: int):
    """Facets of a simple k-polytope: the k-simplex on ``0..k`` with vertices
    cut off repeatedly, never touching the facet ``{0..k-1}``.

    Each cut removes the most recently created vertex and adds k new ones.
    """
    facets = [frozenset(range(k + 1)) - {v} for v in range(k + 1)]
    nxt = k + 1
    target = k
    for _ in range(truncations):
        v = target
        around = [f for f in facets if v in f]
        verts = frozenset().union(*facets)
        nbrs = sorted(u for u in verts - {v}
                      if sum(1 for f in around if u in f) == k - 1)
        new = {u: nxt + j for j, u in enumerate(nbrs)}
        nxt += len(nbrs)
        out = [f for f in facets if v not in f]
        for f in around:
            out.append((f - {v}) | {new[u] for u in nbrs if u in f})
        out.append(frozenset(new.values()))
        facets = out
        target = nxt - 1
    return facets


@dataclass(frozen=True)
class SimplePyramidGadget:
    """Pyramid over a simple (d-1)-polytope B with m vertices.

    B's vertices are ``0..m-1`` with the simplex facet ``F0 = {0..d-2}``;
    the apex is ``m``.  The outer facet for the Schlegel diagram is
    ``{apex} | F0``.
    """

    d: int
    m: int
    faces: dict  # proper faces of the pyramid
    base_facets: tuple

    @property
    def apex(self) -> int:
        return self.m

    @property
    def base_simplex(self) -> tuple:
        return tuple(range(self.d - 1))

    @property
    def outer(self) -> frozenset:
        return frozenset(self.base_simplex) | {self.apex}

    def diagram(self) -> CellComplex:
        cells = {f: r for f, r in self.faces.items() if f != self.outer}
        return CellComplex(self.d - 1, cells)


def make_pyramid_gadget(d: int, m: int) -> SimplePyramidGadget:
    if d < 3:
        raise RankError("gadgets need d >= 3")
    if not is_feasible_apex_valency(d, m):
        up = feasible_apex_valency(d, m)
        below = up - (d - 2) if d > 3 and up - (d - 2) >= d else None
        near = f"{up}" if below is None else f"{below} or {up}"
        raise InfeasibleParameterError(
            f"apex valency {m} is not attainable in dimension {d}; nearest feasible: {near}",
            nearest=up)
    k = d - 1
    if k == 2:
        base_facets = [frozenset({i, (i + 1) % m}) for i in range(m)]
    else:
        raw = _truncated_simplex(k, (m - d) // (d - 2))
        keys = sorted(frozenset().union(*raw))
        relabel = {v: j for j, v in enumerate(keys)}
        base_facets = [frozenset(relabel[v] for v in f) for f in raw]
    base_facets.sort(key=lambda f: tuple(sorted(f)))
    if k == 2:
        base_faces = {frozenset([i]): 0 for i in range(m)}
        base_faces.update({f: 1 for f in base_facets})
    else:
        lat, vsets = lattice_from_facets(base_facets)
        base_faces = {vsets[i]: int(lat.ranks[i]) for i in range(lat.n_faces)
                      if 0 <= lat.ranks[i] < k}
    n_verts = len(frozenset().union(*base_facets))
    assert n_verts == m, (n_verts, m)
    assert frozenset(range(k)) in set(base_facets), "distinguished simplex facet lost"
    apex = m
    faces = {frozenset([apex]): 0, frozenset(range(m)): d - 1}
    for f, r in base_faces.items():
        faces[f] = r
        faces[f | {apex}] = r + 1
    return SimplePyramidGadget(d, m, faces, tuple(base_facets))


# ---------------------------------------------------------- stacked polytopes
@dataclass(frozen=True)
class StackedPolytope:
    """Simplicial d-polytope on ``0..n-1`` obtained by stacking on a simplex.

    Each new vertex is stacked on the facet spanned by the d most recent
    vertices, so ``{0..d-1}`` stays a facet and valencies stay below 2d.
    """

    d: int
    n: int
    facets: tuple

    @property
    def outer(self) -> frozenset:
        return frozenset(range(self.d))

    @cached_property
    def faces(self) -> dict:
        out = {}
        for f in self.facets:
            out.update(simplex_faces(f))
        return out

    @cached_property
    def valency(self) -> dict:
        val = {v: 0 for v in range(self.n)}
        for f, r in self.faces.items():
            if r == 1:
                for v in f:
                    val[v] += 1
        return val

    @property
    def max_valency(self) -> int:
        return max(self.valency.values())

    def lattice(self) -> FaceLattice:
        return lattice_from_faces(self.faces, self.d)[0]


def make_stacked(d: int, n: int) -> StackedPolytope:
    if n < d + 1:
        raise ValueError(f"a {d}-polytope needs at least {d + 1} vertices, got {n}")
    facets = [frozenset(range(d + 1)) - {v} for v in range(d + 1)]
    for v in range(d + 1, n):
        host = frozenset(range(v - d, v))
        assert host in facets
        facets.remove(host)
        facets.extend((host - {x}) | {v} for x in sorted(host))
    facets.sort(key=lambda f: tuple(sorted(f)))
    return StackedPolytope(d, n, tuple(facets))


# -------------------------------------------------------------- assembly
@dataclass
class GadgetComplex:
    """The complex R^L on the outer simplex, with its valency ledger."""

    d: int
    params: tuple
    L: StackedPolytope
    complex: CellComplex
    roles: dict  # vertex key -> (kind, index); kinds u, w, R, L
    cover_list: list | None = None

    def covers(self) -> list:
        if self.cover_list is None:
            self.cover_list = face_covers(self.complex.cells)
        return self.cover_list

    @property
    def outer(self) -> frozenset:
        return frozenset(range(self.d))

    @cached_property
    def ledger(self) -> dict:
        return self.complex.valency()

    @property
    def interior_vertices(self) -> list:
        return [v for v in self.ledger if v >= self.d]

    @property
    def interior_max(self) -> int:
        return max(self.ledger[v] for v in self.interior_vertices)

    def boundary_cells(self) -> dict:
        return {f: r for f, r in self.complex.cells.items() if f <= self.outer}

    def checks(self, ball: bool = True) -> dict:
        d = self.d
        bd = self.boundary_cells()
        expect = {f: r for f, r in simplex_faces(range(d)).items() if len(f) < d}
        ridges = [f for f, r in expect.items() if r == d - 2]
        out = {
            "outer_valency": all(self.ledger[i] == self.params[i] + d - 1 for i in range(d)),
            "boundary_unrefined": bd == expect,
        }
        if ball:
            out["ball"] = self.complex.check_ball(ridges, self.covers())
        return out

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "params": list(self.params),
            "L_vertices": self.L.n,
            "tiles": [sorted(t) for t in self.complex.tiles()],
            "valency": {str(k): v for k, v in sorted(self.ledger.items())},
            "roles": {str(k): list(v) for k, v in sorted(self.roles.items())},
            "interior_max": self.interior_max,
        }


def assemble_gadget(d: int, params, L: StackedPolytope) -> GadgetComplex:
    """Insert R_i into F_{u_i} (apex to u_i) for each i and L into Z."""
    params = tuple(int(m) for m in params)
    if len(params) != d:
        raise ValueError(f"need {d} parameters, got {len(params)}")
    if L.d != d:
        raise RankError(f"L has rank {L.d}, expected {d}")
    cells, roles, nxt, covers, central = _pyramid_part(d, params)
    cx = CellComplex(d - 1, dict(cells))
    roles = dict(roles)
    start = nxt
    omap = {j: d + j for j in range(d)}
    _, nxt = cx.insert(central, L.faces, L.outer, omap, nxt)
    roles.update({k: ("L", 0) for k in range(start, nxt)})
    # L contributes only simplices, whose facets are found by dropping a vertex
    covers = list(covers)
    for g, r in cx.cells.items():
        if r >= 1 and any(v >= start for v in g):
            covers.extend((g - {v}, g) for v in sorted(g))
    g = GadgetComplex(d, params, L, cx, roles, covers)
    bad = [k for k, ok in g.checks(ball=False).items() if not ok]
    assert not bad, f"gadget assembly invariant failed: {bad}"
    return g


@lru_cache(maxsize=32)
def _pyramid(d: int, m: int) -> SimplePyramidGadget:
    return make_pyramid_gadget(d, m)


@lru_cache(maxsize=4)
def _pyramid_part(d: int, params: tuple):
    """The diagram with every R_i inserted; shared by all gadgets with these
    parameters.  Callers must copy before mutating."""
    diagram = crosspolytope_diagram(d)
    cx = CellComplex(d - 1, dict(diagram.complex.cells))
    roles = {i: ("u", i) for i in range(d)}
    roles.update({d + j: ("w", j) for j in range(d)})
    nxt = 2 * d
    for i, m in enumerate(params):
        R = _pyramid(d, m)
        ws = [d + j for j in range(d) if j != i]
        omap = {R.apex: i}
        omap.update(dict(zip(R.base_simplex, ws)))
        start = nxt
        _, nxt = cx.insert(diagram.adjacent[i], R.faces, R.outer, omap, nxt)
        roles.update({k: ("R", i) for k in range(start, nxt)})
    covers = [(lo, hi) for lo, hi in face_covers(cx.cells) if hi != diagram.central]
    return cx.cells, roles, nxt, tuple(covers), diagram.central
