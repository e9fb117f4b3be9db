import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from polysym import catalog  # noqa: E402
from polysym.groups import PermGroup, automorphisms, perm_from_vertex_map  # noqa: E402

# rotation of the tetrahedron about vertex 3, and a quarter turn of the cube
# about the axis through the facets {0,1,2,3} and {4,5,6,7}
C3_TETRA = {0: 1, 1: 2, 2: 0, 3: 3}
C4_CUBE = {0: 1, 1: 3, 3: 2, 2: 0, 4: 5, 5: 7, 7: 6, 6: 4}


def vertex_group(lattice, *maps):
    return PermGroup(lattice, [perm_from_vertex_map(lattice, m) for m in maps])


def break_cases():
    """(name, Q, group) for the reproduction cases."""
    tet, cube, hemi = catalog.simplex(3), catalog.cube(3), catalog.hemicube()
    cases = [
        ("tetrahedron/trivial", tet, PermGroup(tet, [])),
        ("tetrahedron/C3", tet, vertex_group(tet, C3_TETRA)),
        ("cube/C4", cube, vertex_group(cube, C4_CUBE)),
        ("cube/full", cube, automorphisms(cube)),
    ]
    full = automorphisms(hemi)
    seen = set()
    for g in full.elements:
        H = PermGroup(hemi, [g])
        key = frozenset(e.tobytes() for e in H.elements)
        if key not in seen:
            seen.add(key)
            cases.append((f"hemicube/cyclic{H.order}#{len(seen)}", hemi, H))
    cases.append(("hemicube/full", hemi, full))
    return cases


@pytest.fixture(scope="session")
def cube():
    return catalog.cube(3)


@pytest.fixture(scope="session")
def tetra():
    return catalog.simplex(3)
