import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import C3_TETRA, C4_CUBE, vertex_group
from oracles import count_automorphisms
from polysym import catalog
from polysym.errors import CapacityError, GroupError
from polysym.gadgets import assemble_gadget, make_stacked
from polysym.groups import (PermGroup, automorphism_search, automorphisms, check_automorphism,
                            is_automorphism, is_subgroup, orbits, perm_from_vertex_map,
                            refine_face_colors)
from polysym.lattice import flags


@pytest.mark.parametrize("name", sorted(catalog.CATALOG))
def test_order_matches_backtracking_oracle(name):
    L = catalog.by_name(name)
    assert automorphisms(L).order == count_automorphisms(L.to_json())


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_simplex_group_is_symmetric_group(d):
    import math
    assert automorphisms(catalog.simplex(d)).order == math.factorial(d + 1)


def test_known_orders():
    assert automorphisms(catalog.cube(3)).order == 48
    assert automorphisms(catalog.bipyramid(6)).order == 24
    assert automorphisms(catalog.prism(5)).order == 20


def test_pruning_does_not_change_the_group(cube):
    a, _, _ = automorphism_search(cube, prune=True)
    b, _, _ = automorphism_search(cube, prune=False)
    assert {p.tobytes() for p in a} == {p.tobytes() for p in b}


def test_closure_examples(cube, tetra):
    assert PermGroup(cube, []).order == 1
    assert vertex_group(cube, C4_CUBE).order == 4
    refl_a = {0: 1, 1: 0, 2: 2, 3: 3}
    refl_b = {0: 0, 1: 2, 2: 1, 3: 3}
    assert vertex_group(tetra, refl_a, refl_b).order == 6
    assert vertex_group(tetra, C3_TETRA).order == 3


def test_capacity(cube):
    with pytest.raises(CapacityError):
        PermGroup(cube, automorphisms(cube).generators, cap=10).order


def test_non_automorphism_rejected(cube):
    with pytest.raises(GroupError):
        perm_from_vertex_map(cube, {0: 1, 1: 0})
    perm = np.arange(cube.n_faces)
    v = cube.faces_of_rank(0)
    perm[v[0]], perm[v[1]] = v[1], v[0]
    assert not is_automorphism(cube, perm)
    with pytest.raises(GroupError):
        check_automorphism(cube, perm)


def test_subgroups(cube):
    full = automorphisms(cube)
    assert is_subgroup(PermGroup(cube, []), full)
    assert is_subgroup(vertex_group(cube, C4_CUBE), full)
    assert not is_subgroup(full, vertex_group(cube, C4_CUBE))
    with pytest.raises(GroupError):
        is_subgroup(PermGroup(catalog.simplex(3), []), full)


def test_orbits(cube):
    g = flags(cube)
    triv = PermGroup(cube, [])
    assert len(orbits(triv, range(len(g)), "flags", g)) == 48
    c4 = orbits(vertex_group(cube, C4_CUBE), range(len(g)), "flags", g)
    assert len(c4) == 12 and {len(o) for o in c4} == {4}
    assert len(orbits(automorphisms(cube), range(len(g)), "flags", g)) == 1
    vs = [int(x) for x in cube.ids[cube.faces_of_rank(0)]]
    assert len(orbits(automorphisms(cube), vs)) == 1


def test_orbits_reject_unclosed_items(cube):
    vs = [int(x) for x in cube.ids[cube.faces_of_rank(0)]]
    with pytest.raises(GroupError):
        orbits(automorphisms(cube), vs[:3])


def test_json_round_trip(cube):
    G = vertex_group(cube, C4_CUBE)
    again = PermGroup.from_json(cube, G.to_json())
    assert {e.tobytes() for e in again.elements} == {e.tobytes() for e in G.elements}
    assert PermGroup.from_json(cube, {"generators": [{"vertex-map": {"0": 1, "1": 3, "3": 2, "2": 0,
                                                                     "4": 5, "5": 7, "7": 6, "6": 4}}]}).order == 4


def test_rigid_gadget():
    rigid = assemble_gadget(4, (6, 4, 8, 10), make_stacked(4, 7)).complex
    lat = rigid.closed_lattice(frozenset(range(4)))
    assert automorphisms(lat).order == 1


def test_face_colours_are_invariant(cube):
    col = refine_face_colors(cube)
    for g in automorphisms(cube).elements:
        assert np.array_equal(col[g], col)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["cube", "octahedron", "hemicube", "simplex-4", "hexagonal-bipyramid"]),
       st.lists(st.integers(0, 10**6), min_size=1, max_size=6))
def test_products_of_elements_are_automorphisms(name, picks):
    L = catalog.by_name(name)
    G = automorphisms(L)
    els = G.elements
    g = np.arange(L.n_faces)
    for k in picks:
        g = els[k % len(els)][g]
    assert is_automorphism(L, g)
    assert G.contains(g)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["cube", "octahedron", "tetrahedron", "hemicube", "triangular-prism"]),
       st.integers(0, 10**6))
def test_cyclic_subgroup_acts_freely_on_flags(name, k):
    L = catalog.by_name(name)
    G = automorphisms(L)
    H = PermGroup(L, [G.elements[k % G.order]])
    g = flags(L)
    orbs = orbits(H, range(len(g)), "flags", g)
    assert {len(o) for o in orbs} == {H.order}
    assert sum(len(o) for o in orbs) == len(g)
