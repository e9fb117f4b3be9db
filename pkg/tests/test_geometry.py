import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import count_automorphisms
from polysym import catalog
from polysym.errors import CapacityError, DegenerateError, PrecisionError
from polysym.geometry import (PointConfiguration, bipyramid_odd, cartesian_product, centrally_symmetric_pipeline,
                              cos_sin, cyclic_matrix, cyclic_orbit_polytope, hull, parse_group_spec,
                              regular_simplex, simplex_factor, tensor_combine)
from polysym.groups import automorphisms
from polysym.lattice import validate


def plain(points, eps=1e-9):
    pts = np.asarray(points, dtype=float)
    n = pts.shape[1]
    return PointConfiguration(pts, np.eye(n)[None], [()], (), [], epsilon=eps)


def test_quarter_turns_are_exact():
    assert cos_sin(0, 4) == (1.0, 0.0)
    assert cos_sin(1, 4) == (0.0, 1.0)
    assert cos_sin(2, 4) == (-1.0, 0.0)
    assert cos_sin(3, 4) == (0.0, -1.0)


@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_cyclic_matrix(m):
    g = cyclic_matrix(1, m)
    assert np.allclose(np.linalg.matrix_power(g, 2 * m), np.eye(4))
    assert np.allclose(g.T @ g, np.eye(4))
    sigma = cyclic_matrix(m, m)
    assert np.array_equal(sigma, -np.eye(4))


def test_half_turn_configuration():
    cfg = cyclic_orbit_polytope(1)
    assert len(cfg.points) == 8
    assert np.array_equal(cfg.points[4:], -cfg.points[:4])
    assert np.array_equal(cfg.matrices[cfg.sigma], -np.eye(4))


def test_orbit_of_five_points_all_vertices():
    cfg = cyclic_orbit_polytope(3, n_points=5)
    assert len(cfg.points) == 30
    assert np.allclose(np.linalg.norm(cfg.points, axis=1), 1.0)
    res = hull(cfg)
    assert sorted(res.vertex_points.tolist()) == list(range(30))
    assert validate(res.lattice).ok
    f = res.lattice.f_vector
    assert f[0] - f[1] + f[2] - f[3] == 0


def test_norm_preserved():
    cfg = cyclic_orbit_polytope(4, n_points=3, seed=7)
    for g in cfg.matrices:
        assert np.allclose(np.linalg.norm(cfg.points @ g.T, axis=1), np.linalg.norm(cfg.points, axis=1))


def test_duplicate_orbit_points_rejected():
    s = np.array([[1.0, 0, 0, 0], [1.0, 0, 0, 0]])
    with pytest.raises(DegenerateError):
        cyclic_orbit_polytope(2, S=s)


def test_sampling_is_seeded():
    a = cyclic_orbit_polytope(3, seed=3)
    b = cyclic_orbit_polytope(3, seed=3)
    c = cyclic_orbit_polytope(3, seed=4)
    assert np.array_equal(a.points, b.points)
    assert not np.array_equal(a.points, c.points)


def test_tensor_with_segment_gives_hexagon():
    seg = PointConfiguration(np.array([[1.0], [-1.0]]), np.array([[[1.0]], [[-1.0]]]), [(0,), (1,)], (2,), [1],
                             sigma=1)
    tri = PointConfiguration(regular_simplex(3), np.eye(2)[None], [()], (), [])
    t = tensor_combine(seg, tri)
    assert t.points.shape == (6, 2)
    assert np.allclose(np.sort(t.points, axis=0), np.sort(-t.points, axis=0))


def test_cartesian_product_vertices():
    a = cyclic_orbit_polytope(1)
    b = cyclic_orbit_polytope(1, seed=1)
    p = cartesian_product(a, b)
    assert p.points.shape == (64, 8)
    pairs = {tuple(np.round(x, 12)) for x in p.points}
    want = {tuple(np.round(np.concatenate([u, v]), 12)) for u, v in itertools.product(a.points, b.points)}
    assert pairs == want


def test_simplex_factor_three():
    s = simplex_factor([3])
    assert np.allclose(s.points.sum(axis=0), 0)
    perm = s.point_permutation(s.generators[0])
    assert sorted(perm.tolist()) == [0, 1, 2] and all(perm[i] != i for i in range(3))
    assert np.allclose(regular_simplex(5).sum(axis=0), 0)


def test_cube_hull():
    pts = np.array(list(itertools.product([-1.0, 1.0], repeat=3)))
    res = hull(plain(pts))
    assert len(res.facets) == 6
    assert res.lattice.f_vector == (8, 12, 6)
    assert automorphisms(res.lattice).order == 48


def test_cross_polytope_hull():
    pts = np.concatenate([np.eye(4), -np.eye(4)])
    res = hull(plain(pts))
    assert len(res.facets) == 16
    assert res.lattice.f_vector == catalog.cross_polytope(4).f_vector


def test_hull_errors():
    flat = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0.0]])
    with pytest.raises(DegenerateError):
        hull(plain(flat))
    pts = np.array(list(itertools.product([-1.0, 1.0], repeat=3)) + [[0, 0, 1 + 1e-10]])
    with pytest.raises(PrecisionError):
        hull(plain(pts))
    with pytest.raises(CapacityError):
        hull(plain(np.eye(5)), cap_dim=4)


def test_hexagonal_bipyramid_before_attachment():
    assert automorphisms(catalog.bipyramid(6)).order == 24


@pytest.mark.parametrize("m", [3, 5, 7])
def test_bipyramid_route(m):
    cfg, res = bipyramid_odd(m)
    assert validate(res.lattice).ok
    assert automorphisms(res.lattice).order == 2 * m
    assert count_automorphisms(res.lattice.to_json()) == 2 * m
    assert np.array_equal(cfg.matrices[m], -np.eye(3))
    perm = cfg.point_permutation(m)
    assert np.array_equal(cfg.points[perm], -cfg.points)


@pytest.mark.parametrize("m", [2, 4])
def test_bipyramid_even_rejected(m):
    with pytest.raises(ValueError, match="divisible by 4"):
        bipyramid_odd(m)


def test_group_spec_parsing():
    f, route = parse_group_spec({"factors": [{"type": "cyclic", "order": 6, "sigma_power": 3}]})
    assert f == [(6, 3)] and route == "orbit"
    with pytest.raises(ValueError):
        parse_group_spec({"factors": [{"type": "cyclic", "order": 6, "sigma_power": 2}]})
    with pytest.raises(ValueError):
        parse_group_spec({"factors": [{"type": "cyclic", "order": 6, "sigma_power": 0}]})
    with pytest.raises(ValueError):
        parse_group_spec({})


def test_klein_four_is_configuration_only():
    spec = {"factors": [{"type": "cyclic", "order": 2, "sigma_power": 1},
                        {"type": "cyclic", "order": 2, "sigma_power": 0}]}
    res = centrally_symmetric_pipeline(spec)
    assert res.status == "configuration-only"
    assert res.data["dimension"] == 8
    assert all(res.checks.values())
    assert res.hull is None


def test_bipyramid_pipeline():
    spec = {"factors": [{"type": "cyclic", "order": 6, "sigma_power": 3}], "route": "bipyramid"}
    res = centrally_symmetric_pipeline(spec)
    assert res.status == "verified" and res.data["aut_order"] == 6


@settings(max_examples=10, deadline=None)
@given(st.integers(1, 6), st.integers(0, 1000))
def test_orbit_is_centrally_symmetric(m, seed):
    cfg = cyclic_orbit_polytope(m, seed=seed)
    perm = cfg.point_permutation(cfg.sigma)
    assert np.allclose(cfg.points[perm], -cfg.points, atol=1e-12)
    assert len({tuple(np.round(p, 9)) for p in cfg.points}) == len(cfg.points)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 1000))
def test_random_hull_euler(seed):
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(12, 4))
    res = hull(plain(pts))
    f = res.lattice.f_vector
    assert f[0] - f[1] + f[2] - f[3] == 0
    assert validate(res.lattice).ok
