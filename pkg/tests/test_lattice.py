import json

import numpy as np
import pytest
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from hypothesis import given, settings, strategies as st

from oracles import count_chains, list_chains
from polysym import catalog
from polysym.errors import LatticeStructureError, NotPolytopeError, RankError
from polysym.lattice import (AXIOMS, FaceLattice, flags, lattice_from_facets, lattice_from_flag_graph,
                             require_polytope, row_classes, section, skeleton, validate)


def _drop_cover(L, lo_rank, hi_rank):
    data = L.to_json()
    rank = {f["id"]: f["rank"] for f in data["faces"]}
    k = next(i for i, (a, b) in enumerate(data["covers"]) if rank[a] == lo_rank and rank[b] == hi_rank)
    del data["covers"][k]
    return FaceLattice.from_json(data)


@pytest.mark.parametrize("name", sorted(catalog.CATALOG))
def test_catalog_is_polytope(name):
    L = catalog.by_name(name)
    rep = validate(L)
    assert rep.ok, rep.summary()
    assert rep.n_flags == count_chains(L.to_json())


def test_cube_summary(cube):
    assert cube.n_faces == 28
    assert validate(cube).summary() == "polytope of rank 3, 48 flags, PASS"


def test_segment():
    rep = validate(catalog.segment())
    assert rep.ok and rep.rank == 1 and rep.n_flags == 2


@pytest.mark.parametrize("d", range(1, 6))
def test_simplex_flags(d):
    import math
    assert len(flags(catalog.simplex(d))) == math.factorial(d + 1)


def test_flags_match_chain_oracle(cube):
    g = flags(cube)
    got = sorted(tuple(int(x) for x in row) for row in cube.ids[g.flags])
    assert got == list_chains(cube.to_json())


def test_flag_adjacency_differs_in_one_rank(cube):
    g = flags(cube)
    for i in range(3):
        other = g.flags[g.adjacency[i]]
        diff = other != g.flags
        assert np.all(diff[:, i]) and not np.any(np.delete(diff, i, axis=1))
        assert np.array_equal(g.adjacency[i][g.adjacency[i]], np.arange(len(g)))


def test_missing_cover_breaks_diamond(cube):
    bad = _drop_cover(cube, 0, 1)
    rep = validate(bad)
    assert not rep.ok
    assert rep.results["diamond"].passed is False
    assert rep.results["diamond"].witness is not None
    with pytest.raises(NotPolytopeError):
        flags(bad)
    with pytest.raises(NotPolytopeError):
        require_polytope(bad)


def test_two_tetrahedra_sharing_a_vertex_not_connected():
    # boundary complexes of two tetrahedra glued at one vertex
    facets = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3], [0, 4, 5], [0, 4, 6], [0, 5, 6], [4, 5, 6]]
    L, _ = lattice_from_facets(facets)
    rep = validate(L)
    assert rep.results["diamond"].passed is True
    assert rep.results["strongly_flag_connected"].passed is False


def test_two_simplices_glued_at_a_vertex_rank_four():
    # diamonds hold everywhere; the vertex figure at the shared vertex is two
    # disjoint tetrahedra
    a = [sorted(set(range(5)) - {i}) for i in range(5)]
    b = [sorted(set([0, 5, 6, 7, 8]) - {i}) for i in (0, 5, 6, 7, 8)]
    L, _ = lattice_from_facets(a + b)
    rep = validate(L)
    assert rep.results["diamond"].passed is True
    assert rep.results["strongly_flag_connected"].passed is False


def test_ungraded_poset():
    # a chain of length three hanging below an edge
    data = {"rank": 1, "faces": [{"id": 0, "rank": -1}, {"id": 1, "rank": 0}, {"id": 2, "rank": 0},
                                 {"id": 3, "rank": 1}],
            "covers": [[0, 1], [0, 2], [1, 3]]}
    rep = validate(FaceLattice.from_json(data))
    assert not rep.ok


def test_structural_errors():
    with pytest.raises(LatticeStructureError):
        FaceLattice.from_json({"rank": 1, "faces": [{"id": 0, "rank": -1}], "covers": [[0, 9]]})
    with pytest.raises(LatticeStructureError):
        FaceLattice.from_json({"rank": 1, "faces": [{"id": 0}]})
    with pytest.raises(LatticeStructureError):
        FaceLattice.from_json({"rank": 1, "faces": [{"id": 0, "rank": -1}, {"id": 0, "rank": 1}],
                               "covers": []})


def test_json_round_trip(cube):
    s = cube.dumps()
    again = FaceLattice.from_json(json.loads(s))
    assert again.dumps() == s


def test_skeleton(cube):
    sk = skeleton(cube, 1)
    assert sk.count(0) == 8 and sk.count(1) == 12 and len(sk.covers) == 24
    assert skeleton(cube, 2).ids.size == 26
    assert skeleton(catalog.segment(), 0).count(0) == 2
    with pytest.raises(RankError):
        skeleton(cube, 3)


def test_sections(cube):
    v = int(cube.ids[cube.faces_of_rank(0)[0]])
    vf = section(cube, v, int(cube.ids[cube.top]))
    assert vf.rank == 2 and vf.f_vector == (3, 3)
    assert validate(vf).ok
    whole = section(cube, int(cube.ids[cube.bottom]), int(cube.ids[cube.top]))
    assert whole.dumps() == cube.dumps()
    e = cube.faces_of_rank(1)[0]
    facet = cube.up(e)[0]
    s = section(cube, int(cube.ids[e]), int(cube.ids[facet]))
    assert s.rank == 0 and s.n_faces == 2
    # a vertex inside a square: the two edges between them form a segment
    v = cube.down(e)[0]
    s = section(cube, int(cube.ids[v]), int(cube.ids[facet]))
    assert s.rank == 1 and s.f_vector == (2,) and validate(s).ok
    with pytest.raises(ValueError):
        section(cube, int(cube.ids[facet]), int(cube.ids[v]))


def test_lattice_from_flag_graph(cube):
    L, mapping = lattice_from_flag_graph(flags(cube))
    assert L.f_vector == cube.f_vector
    assert validate(L).ok


def test_axiom_names_are_reported(cube):
    rep = validate(cube)
    assert set(rep.results) == set(AXIOMS)
    assert json.dumps(rep.to_json())


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 12))
def test_polygons(n):
    L = catalog.polygon(n)
    rep = validate(L)
    assert rep.ok and rep.n_flags == 2 * n


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.integers(0, 5), min_size=3, max_size=3), min_size=1, max_size=20))
def test_row_classes_matches_unique(rows):
    a = np.array(rows)
    _, inv = np.unique(a, axis=0, return_inverse=True)
    assert np.array_equal(row_classes(a), inv.ravel())


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["cube", "octahedron", "tetrahedron", "hemicube", "triangular-prism"]),
       st.data())
def test_any_dropped_cover_is_detected(name, data):
    L = catalog.by_name(name)
    j = L.to_json()
    k = data.draw(st.integers(0, len(j["covers"]) - 1))
    del j["covers"][k]
    assert not validate(FaceLattice.from_json(j)).ok


def test_pinched_octahedron_fails_only_in_a_section():
    # identify two opposite vertices: the flag graph stays connected but the
    # vertex figure at the merged vertex is two disjoint squares
    L = catalog.octahedron()
    data = L.to_json()
    rank = {f["id"]: f["rank"] for f in data["faces"]}
    verts = [f for f in rank if rank[f] == 0]
    edges = {b: set() for a, b in data["covers"] if rank[b] == 1}
    for a, b in data["covers"]:
        if rank[b] == 1:
            edges[b].add(a)
    a = verts[0]
    b = next(v for v in verts[1:] if not any({a, v} <= e for e in edges.values()))
    data["faces"] = [f for f in data["faces"] if f["id"] != b]
    data["covers"] = [[a if lo == b else lo, hi] for lo, hi in data["covers"] if hi != b]
    P = FaceLattice.from_json(data)
    rep = validate(P)
    assert rep.results["diamond"].passed is True
    g = flags(P)
    n = len(g)
    rows = np.repeat(np.arange(n), P.rank)
    adj = coo_matrix((np.ones(rows.size), (rows, g.adjacency.T.ravel())), shape=(n, n))
    assert connected_components(adj)[0] == 1
    assert rep.results["strongly_flag_connected"].passed is False
