"""Face lattices of a few classical polytopes, built combinatorially."""
from __future__ import annotations

from itertools import combinations, product

from .errors import RankError
from .lattice import BOTTOM_ID, TOP_ID, FaceLattice, lattice_from_faces


def simplex(d: int) -> FaceLattice:
    """Boundary lattice of the d-simplex on vertices 0..d."""
    if d < 1:
        raise RankError("simplex needs d >= 1")
    faces = {frozenset(c): k - 1 for k in range(1, d + 1) for c in combinations(range(d + 1), k)}
    return lattice_from_faces(faces, d)[0]


def segment() -> FaceLattice:
    return simplex(1)


def polygon(n: int) -> FaceLattice:
    if n < 2:
        raise RankError("a polygon needs at least two vertices")
    faces = {frozenset([i]): 0 for i in range(n)}
    faces.update({frozenset([i, (i + 1) % n]): 1 for i in range(n)})
    if n == 2:
        # digon: two edges on the same vertex pair cannot be told apart by vertex sets
        return FaceLattice.from_faces(
            2, [(BOTTOM_ID, -1), (0, 0), (1, 0), (2, 1), (3, 1), (TOP_ID, 2)],
            [(BOTTOM_ID, 0), (BOTTOM_ID, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, TOP_ID), (3, TOP_ID)])
    return lattice_from_faces(faces, 2)[0]


def cube_faces(d: int) -> dict:
    """Proper faces of the d-cube as vertex sets; vertex k is the bit vector of k."""
    faces = {}
    for word in product("01*", repeat=d):
        free = [i for i, c in enumerate(word) if c == "*"]
        if len(free) == d:
            continue
        base = sum(1 << i for i, c in enumerate(word) if c == "1")
        verts = frozenset(base + sum(1 << free[j] for j in range(len(free)) if bits >> j & 1)
                          for bits in range(1 << len(free)))
        faces[verts] = len(free)
    return faces


def cube(d: int = 3) -> FaceLattice:
    if d < 1:
        raise RankError("cube needs d >= 1")
    return lattice_from_faces(cube_faces(d), d)[0]


def cross_polytope(d: int = 3) -> FaceLattice:
    """Vertex i is +e_i and vertex d+i is -e_i."""
    if d < 1:
        raise RankError("cross-polytope needs d >= 1")
    faces = {}
    for k in range(1, d + 1):
        for axes in combinations(range(d), k):
            for signs in product((0, 1), repeat=k):
                faces[frozenset(a + s * d for a, s in zip(axes, signs))] = k - 1
    return lattice_from_faces(faces, d)[0]


def octahedron() -> FaceLattice:
    return cross_polytope(3)


def bipyramid(n: int) -> FaceLattice:
    """Bipyramid over an n-gon: ring vertices 0..n-1, apexes n and n+1."""
    if n < 3:
        raise RankError("bipyramid needs n >= 3")
    faces = {}
    for i in range(n):
        j = (i + 1) % n
        faces[frozenset([i])] = 0
        faces[frozenset([i, j])] = 1
        for a in (n, n + 1):
            faces[frozenset([i, a])] = 1
            faces[frozenset([i, j, a])] = 2
    faces[frozenset([n])] = 0
    faces[frozenset([n + 1])] = 0
    return lattice_from_faces(faces, 3)[0]


def prism(n: int) -> FaceLattice:
    """Prism over an n-gon: bottom ring 0..n-1, top ring n..2n-1."""
    if n < 3:
        raise RankError("prism needs n >= 3")
    faces = {}
    for i in range(n):
        j = (i + 1) % n
        for off in (0, n):
            faces[frozenset([i + off])] = 0
            faces[frozenset([i + off, j + off])] = 1
        faces[frozenset([i, i + n])] = 1
        faces[frozenset([i, j, i + n, j + n])] = 2
    faces[frozenset(range(n))] = 2
    faces[frozenset(range(n, 2 * n))] = 2
    return lattice_from_faces(faces, 3)[0]


def hemicube() -> FaceLattice:
    """The 3-cube modulo the antipodal map: 4 vertices, 6 edges, 3 squares.

    Every square contains all four vertices, so faces here are not determined
    by their vertex sets; the lattice is built directly from face classes.
    """
    words = [w for w in product("01*", repeat=3) if w.count("*") < 3]

    def anti(w):
        return tuple({"0": "1", "1": "0", "*": "*"}[c] for c in w)

    classes = sorted({min(w, anti(w)) for w in words}, key=lambda w: (w.count("*"), w))
    fid = {w: i for i, w in enumerate(classes)}
    faces = [(BOTTOM_ID, -1), (TOP_ID, 3)] + [(fid[w], w.count("*")) for w in classes]
    covers = set()
    for w in words:
        rep = fid[min(w, anti(w))]
        r = w.count("*")
        if r == 0:
            covers.add((BOTTOM_ID, rep))
        if r == 2:
            covers.add((rep, TOP_ID))
        for i, c in enumerate(w):
            if c == "*":
                for b in "01":
                    low = w[:i] + (b,) + w[i + 1:]
                    covers.add((fid[min(low, anti(low))], rep))
    return FaceLattice.from_faces(3, faces, sorted(covers))


CATALOG = {
    "segment": segment,
    "triangle": lambda: polygon(3),
    "square": lambda: polygon(4),
    "tetrahedron": lambda: simplex(3),
    "cube": lambda: cube(3),
    "octahedron": octahedron,
    "hemicube": hemicube,
    "hexagonal-bipyramid": lambda: bipyramid(6),
    "triangular-prism": lambda: prism(3),
    "simplex-4": lambda: simplex(4),
    "cube-4": lambda: cube(4),
    "cross-4": lambda: cross_polytope(4),
}


def by_name(name: str) -> FaceLattice:
    """Look up a catalogue polytope, e.g. ``cube``, ``simplex-5``, ``polygon-7``."""
    if name in CATALOG:
        return CATALOG[name]()
    head, _, tail = name.rpartition("-")
    makers = {"simplex": simplex, "cube": cube, "cross": cross_polytope,
              "polygon": polygon, "bipyramid": bipyramid, "prism": prism}
    if head in makers and tail.isdigit():
        return makers[head](int(tail))
    raise KeyError(f"unknown polytope {name!r}; known: {sorted(CATALOG)}")
