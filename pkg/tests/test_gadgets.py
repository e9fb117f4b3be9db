import pytest
from hypothesis import given, settings, strategies as st

from oracles import count_automorphisms
from polysym.errors import InfeasibleParameterError, RankError
from polysym.gadgets import (assemble_gadget, crosspolytope_diagram, feasible_apex_valency,
                             is_feasible_apex_valency, make_pyramid_gadget, make_stacked)
from polysym.groups import automorphisms
from polysym.lattice import lattice_from_faces, validate


def _closed(faces, d):
    return lattice_from_faces(faces, d)[0]


def _valency(faces):
    val = {}
    for f, r in faces.items():
        if r == 1:
            for v in f:
                val[v] = val.get(v, 0) + 1
    return val


def test_crosspolytope_diagram_three():
    D = crosspolytope_diagram(3)
    assert len(D.complex.vertices()) == 6
    assert len(D.complex.tiles()) == 7
    assert D.outer == frozenset(range(3))
    assert D.outer not in D.complex.cells


def test_crosspolytope_diagram_four():
    D = crosspolytope_diagram(4)
    assert len(D.complex.vertices()) == 8 and len(D.complex.tiles()) == 15


@pytest.mark.parametrize("d", [3, 4, 5])
def test_tiles_next_to_central_simplex(d):
    D = crosspolytope_diagram(d)
    near = [t for t in D.complex.tiles() if len(t & D.central) == d - 1]
    assert len(near) == d
    assert set(near) == set(D.adjacent)


def test_diagram_needs_rank_three():
    with pytest.raises(RankError):
        crosspolytope_diagram(2)


def test_pentagon_pyramid():
    R = make_pyramid_gadget(3, 5)
    val = _valency(R.faces)
    assert val[R.apex] == 5
    assert all(val[v] == 3 for v in range(5))
    L = _closed({**R.faces}, 3)
    assert validate(L).ok


def test_simplex_pyramid():
    R = make_pyramid_gadget(4, 4)
    assert len(R.base_facets) == 4
    assert _valency(R.faces)[R.apex] == 4


def test_once_truncated_tetrahedron_pyramid():
    R = make_pyramid_gadget(4, 6)
    assert len(R.base_facets) == 5
    sizes = sorted(len(f) for f in R.base_facets)
    assert sizes == [3, 3, 4, 4, 4]
    assert frozenset(range(3)) in R.base_facets
    base_val = {v: sum(1 for f in R.base_facets if v in f) for v in range(6)}
    assert set(base_val.values()) == {3}
    assert validate(_closed(R.faces, 4)).ok


def test_infeasible_apex_valency_names_neighbours():
    with pytest.raises(InfeasibleParameterError) as exc:
        make_pyramid_gadget(4, 7)
    assert "6 or 8" in str(exc.value)
    assert exc.value.nearest == 8
    with pytest.raises(InfeasibleParameterError):
        make_pyramid_gadget(3, 2)


@pytest.mark.parametrize("n,facets", [(4, 4), (5, 6), (6, 8), (9, 14)])
def test_stacked_three(n, facets):
    L = make_stacked(3, n)
    assert len(L.facets) == facets
    assert validate(L.lattice()).ok


def test_stacked_valency_bound():
    for d in (3, 4, 5):
        for n in range(d + 1, d + 12):
            assert make_stacked(d, n).max_valency <= 2 * d


def test_gadget_three():
    G = assemble_gadget(3, (5, 5, 5), make_stacked(3, 4))
    assert G.checks() == {"outer_valency": True, "boundary_unrefined": True, "ball": True}
    assert [G.ledger[i] for i in range(3)] == [7, 7, 7]
    # recount valencies straight from the edges of the complex
    val = _valency(G.complex.cells)
    assert val == G.ledger
    assert G.interior_max == 7


def test_gadget_four():
    G = assemble_gadget(4, (6, 4, 8, 10), make_stacked(4, 7))
    assert all(G.checks().values())
    assert [G.ledger[i] for i in range(4)] == [9, 7, 11, 13]


def test_gadgets_with_different_L_differ():
    a = assemble_gadget(3, (5, 5, 5), make_stacked(3, 5)).complex.closed_lattice(frozenset(range(3)))
    b = assemble_gadget(3, (5, 5, 5), make_stacked(3, 6)).complex.closed_lattice(frozenset(range(3)))
    assert a.f_vector != b.f_vector
    assert validate(a).ok and validate(b).ok


def test_symmetric_parameters_keep_symmetry():
    G = assemble_gadget(3, (5, 5, 5), make_stacked(3, 4))
    lat = G.complex.closed_lattice(G.outer)
    assert automorphisms(lat).order == count_automorphisms(lat.to_json()) == 6


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 5), st.integers(0, 40))
def test_feasible_apex_valency(d, m):
    f = feasible_apex_valency(d, m)
    assert f >= m and is_feasible_apex_valency(d, f)
    assert all(not is_feasible_apex_valency(d, x) for x in range(m, f))


@settings(max_examples=15, deadline=None)
@given(st.integers(3, 4), st.data())
def test_outer_valency_ledger(d, data):
    params = tuple(feasible_apex_valency(d, data.draw(st.integers(d, 14))) for _ in range(d))
    n = data.draw(st.integers(d + 1, d + 5))
    G = assemble_gadget(d, params, make_stacked(d, n))
    assert all(G.checks().values())
    assert all(G.ledger[i] == params[i] + d - 1 for i in range(d))
