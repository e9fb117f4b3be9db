"""Point configurations with linear group actions, convex hulls, and the
centrally symmetric constructions for abelian groups.

Coordinates are floating point; every symmetry claim is then re-checked
exactly on the face lattice derived from the hull.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .breaker import BrokenPolytope, VerificationReport, break_symmetry, verify_broken
from .errors import CapacityError, DegenerateError, GroupError, PrecisionError
from .groups import PermGroup, automorphisms, check_automorphism, is_subgroup
from .lattice import FaceLattice, lattice_from_facets, require_polytope

log = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-9
_QUARTER = ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))


def cos_sin(k: int, n: int) -> tuple[float, float]:
    """cos and sin of 2*pi*k/n, exact at multiples of pi/2."""
    k %= n
    if (4 * k) % n == 0:
        return _QUARTER[4 * k // n]
    t = 2 * np.pi * k / n
    return float(np.cos(t)), float(np.sin(t))


def rotation2(k: int, n: int) -> np.ndarray:
    c, s = cos_sin(k, n)
    return np.array([[c, -s], [s, c]])


@dataclass
class PointConfiguration:
    """Points with a finite linear group acting on them.

    ``elements`` labels the group elements (tuples of exponents of the
    cyclic factors); ``matrices[k]`` is the matrix of ``elements[k]``.
    """

    points: np.ndarray
    matrices: np.ndarray
    elements: list
    orders: tuple  # orders of the cyclic factors
    generators: list  # indices into elements
    sigma: int | None = None  # index of the involution, if any
    epsilon: float = DEFAULT_EPSILON
    seed: int | None = None
    centrally_symmetric: bool = False
    meta: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def order(self) -> int:
        return len(self.elements)

    def element_index(self, exps) -> int:
        return self.elements.index(tuple(int(e) % o for e, o in zip(exps, self.orders)))

    def scale(self) -> float:
        return max(1.0, float(np.abs(self.points).max(initial=0.0)))

    def point_permutation(self, k: int) -> np.ndarray:
        """Permutation of point indices induced by ``matrices[k]``."""
        img = self.points @ self.matrices[k].T
        dist = np.linalg.norm(img[:, None, :] - self.points[None, :, :], axis=2)
        j = np.argmin(dist, axis=1)
        tol = 10 * self.epsilon * self.scale()
        if np.any(dist[np.arange(len(j)), j] > tol) or len(np.unique(j)) != len(j):
            raise GroupError(f"group element {self.elements[k]} does not permute the points")
        return j

    def check_action(self) -> None:
        for k in range(self.order):
            self.point_permutation(k)
        if self.sigma is not None:
            s = self.matrices[self.sigma]
            if not np.allclose(s @ s, np.eye(self.dim), atol=self.epsilon):
                raise GroupError("sigma is not an involution")
            if self.centrally_symmetric and not np.allclose(s, -np.eye(self.dim), atol=self.epsilon):
                raise GroupError("sigma is not the central symmetry")

    def to_json(self) -> dict:
        return {
            "dimension": self.dim,
            "points": np.round(self.points, 15).tolist(),
            "elements": [list(e) for e in self.elements],
            "factor_orders": list(self.orders),
            "generators": [list(self.elements[g]) for g in self.generators],
            "sigma": None if self.sigma is None else list(self.elements[self.sigma]),
            "epsilon": self.epsilon,
            "seed": self.seed,
            "centrally_symmetric": self.centrally_symmetric,
        }


def _cyclic_elements(n: int):
    return [(k,) for k in range(n)]


# ---------------------------------------------------------- orbit polytopes
def cyclic_matrix(k: int, m: int) -> np.ndarray:
    """Matrix of gamma^k where gamma multiplies both complex coordinates by e^{i pi/m}."""
    r = rotation2(k, 2 * m)
    out = np.zeros((4, 4))
    out[:2, :2] = r
    out[2:, 2:] = r
    return out


def _orbit(points0: np.ndarray, m: int, matrix) -> np.ndarray:
    """Points gamma^k x for k = 0..2m-1, x in points0; for k >= m the point is
    the exact negative of the one for k - m."""
    first = [points0 @ matrix(k).T for k in range(m)]
    return np.concatenate(first + [-p for p in first])


def _sphere_sample(rng, count: int, dim: int) -> np.ndarray:
    x = rng.standard_normal((count, dim))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def _generic(points: np.ndarray, epsilon: float) -> bool:
    diff = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=2)
    np.fill_diagonal(diff, np.inf)
    if diff.min() <= 10 * epsilon:
        return False
    centered = points - points.mean(axis=0)
    return np.linalg.matrix_rank(centered, tol=epsilon * 1e3) == points.shape[1]


def cyclic_orbit_polytope(m: int, S=None, n_points: int | None = None, seed: int = 0,
                          epsilon: float = DEFAULT_EPSILON, max_tries: int = 100) -> PointConfiguration:
    """Orbit of a point set on the unit 3-sphere under C_{2m} acting on C^2.

    Without ``S``, ``n_points`` points are sampled with a seeded generator,
    re-sampling until the orbit points are distinct and span 4-space.  The
    default size is the smallest that spans: 4 points for m = 1, else 2.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if S is not None:
        S = np.atleast_2d(np.asarray(S, dtype=float))
        if S.shape[1] != 4:
            raise ValueError("points of S must lie in 4-space")
        if not np.allclose(np.linalg.norm(S, axis=1), 1.0, atol=1e3 * epsilon):
            raise ValueError("points of S must lie on the unit 3-sphere")
        pts = _orbit(S, m, lambda k: cyclic_matrix(k, m))
        if not _generic(pts, epsilon):
            raise DegenerateError("orbit points coincide or do not span 4-space; re-sample S")
        used_seed = None
    else:
        if n_points is None:
            n_points = 4 if m == 1 else 2
        for attempt in range(max_tries):
            rng = np.random.default_rng([seed, attempt])
            S = _sphere_sample(rng, n_points, 4)
            pts = _orbit(S, m, lambda k: cyclic_matrix(k, m))
            if _generic(pts, epsilon):
                break
        else:
            raise DegenerateError(f"no generic sample found in {max_tries} attempts")
        used_seed = seed
    mats = np.stack([cyclic_matrix(k, m) for k in range(2 * m)])
    cfg = PointConfiguration(pts, mats, _cyclic_elements(2 * m), (2 * m,), [1 % (2 * m)],
                             sigma=m, epsilon=epsilon, seed=used_seed, centrally_symmetric=True,
                             meta={"S": S.tolist(), "m": m})
    return cfg


# ------------------------------------------------------------ combinations
def _product_elements(A: PointConfiguration, B: PointConfiguration):
    els = [a + b for a in A.elements for b in B.elements]
    pairs = [(i, j) for i in range(A.order) for j in range(B.order)]
    return els, pairs


def _product_generators(A, B, pairs):
    ia = A.element_index([0] * len(A.orders))
    ib = B.element_index([0] * len(B.orders))
    gens = [pairs.index((g, ib)) for g in A.generators] + [pairs.index((ia, g)) for g in B.generators]
    return gens, ia, ib


def tensor_combine(A: PointConfiguration, B: PointConfiguration, cap_dim: int | None = None) -> PointConfiguration:
    """Points u (x) v with the direct product acting factorwise.

    If A is centrally symmetric under sigma_A, the result is centrally
    symmetric under (sigma_A, 1)."""
    dim = A.dim * B.dim
    if cap_dim is not None and dim > cap_dim:
        raise CapacityError(f"tensor product dimension {dim} exceeds cap {cap_dim}")
    pts = np.stack([np.kron(u, v) for u in A.points for v in B.points])
    els, pairs = _product_elements(A, B)
    mats = np.stack([np.kron(A.matrices[i], B.matrices[j]) for i, j in pairs])
    gens, ia, ib = _product_generators(A, B, pairs)
    sigma = pairs.index((A.sigma, ib)) if A.sigma is not None else None
    return PointConfiguration(pts, mats, els, A.orders + B.orders, gens, sigma, A.epsilon,
                              A.seed, A.centrally_symmetric and sigma is not None)


def cartesian_product(A: PointConfiguration, B: PointConfiguration) -> PointConfiguration:
    """Vertex set A x B with block-diagonal action; sigma = (sigma_A, sigma_B)."""
    pts = np.stack([np.concatenate([u, v]) for u in A.points for v in B.points])
    els, pairs = _product_elements(A, B)
    n, p = A.dim, B.dim
    mats = np.zeros((len(pairs), n + p, n + p))
    for k, (i, j) in enumerate(pairs):
        mats[k, :n, :n] = A.matrices[i]
        mats[k, n:, n:] = B.matrices[j]
    gens, _, _ = _product_generators(A, B, pairs)
    sigma = None
    if A.sigma is not None and B.sigma is not None:
        sigma = pairs.index((A.sigma, B.sigma))
    return PointConfiguration(pts, mats, els, A.orders + B.orders, gens, sigma, A.epsilon,
                              A.seed, A.centrally_symmetric and B.centrally_symmetric)


def regular_simplex(n_vertices: int) -> np.ndarray:
    """Vertices of a regular simplex centred at the origin, in R^(n_vertices-1)."""
    e = np.eye(n_vertices) - 1.0 / n_vertices
    # orthonormal basis of the sum-zero hyperplane
    q, _ = np.linalg.qr(e[:, :-1])
    return e @ q


def simplex_factor(orders: Sequence[int], epsilon: float = DEFAULT_EPSILON) -> PointConfiguration:
    """An abelian group (product of cyclic factors) permuting the vertices of a
    regular simplex through its regular representation.

    For a group of order 2 the regular representation is a segment on which
    the generator acts as -id, which would collide with the central
    symmetry after tensoring; a triangle with a transposition is used instead.
    """
    orders = tuple(int(o) for o in orders)
    els = list(itertools.product(*[range(o) for o in orders]))
    r = len(els)
    if r == 1:
        return PointConfiguration(np.ones((1, 1)), np.ones((1, 1, 1)), els, orders, [0], None, epsilon)
    if r == 2:
        verts = regular_simplex(3)
        perms = [[0, 1, 2], [1, 0, 2]]
    else:
        verts = regular_simplex(r)
        pos = {e: k for k, e in enumerate(els)}
        perms = [[pos[tuple((a + b) % o for a, b, o in zip(g, e, orders))] for e in els] for g in els]
    basis = np.linalg.pinv(verts)
    mats = []
    for perm in perms:
        # matrix M with M v_k = v_perm[k]
        mats.append((verts[perm].T @ basis.T))
    mats = np.stack(mats)
    gens = []
    for i in range(len(orders)):
        g = [0] * len(orders)
        g[i] = 1
        gens.append(els.index(tuple(g)))
    return PointConfiguration(verts, mats, els, orders, gens, None, epsilon)


# ------------------------------------------------------------------- hulls
@dataclass
class HullResult:
    config: PointConfiguration
    vertex_points: np.ndarray  # point index of each vertex face, in lattice order
    facets: list  # sorted tuples of point indices
    lattice: FaceLattice
    vertex_perms: np.ndarray  # (order, points)
    face_perms: np.ndarray  # (order, faces)

    def group(self) -> PermGroup:
        cfg = self.config
        return PermGroup(self.lattice, [self.face_perms[g] for g in cfg.generators], check=True)

    def vertex_face(self, point: int) -> int:
        return int(np.flatnonzero(self.vertex_points == point)[0]) + 1

    def to_off(self) -> str:
        pts = self.config.points
        n = self.config.dim
        head = "OFF" if n == 3 else f"{n}OFF"
        lines = [head, f"{len(pts)} {len(self.facets)} 0"]
        lines += [" ".join(f"{x:.15g}" for x in p) for p in pts]
        lines += [f"{len(f)} " + " ".join(str(v) for v in f) for f in self.facets]
        return "\n".join(lines) + "\n"


def hull(config: PointConfiguration, cap_dim: int = 4) -> HullResult:
    """Facets of the convex hull and the induced action on its face lattice."""
    n = config.dim
    if n > cap_dim:
        raise CapacityError(f"hull in dimension {n} exceeds cap {cap_dim}")
    pts = config.points
    if np.linalg.matrix_rank(pts - pts.mean(axis=0), tol=1e3 * config.epsilon) < n:
        raise DegenerateError("points are not full-dimensional")
    try:
        qh = ConvexHull(pts)
    except QhullError as exc:
        raise DegenerateError(f"hull computation failed: {exc}") from exc
    scale = config.scale()
    # rounding noise counts as "on"; anything else within epsilon is ambiguous
    on_tol = 1e3 * np.finfo(float).eps * scale
    far_tol = config.epsilon * scale
    verts = set(int(v) for v in qh.vertices)
    facets = set()
    for eq in qh.equations:
        dist = np.abs(pts @ eq[:-1] + eq[-1])
        near = (dist > on_tol) & (dist <= far_tol)
        if near.any():
            raise PrecisionError(
                f"point {int(np.flatnonzero(near)[0])} lies within tolerance of a facet hyperplane "
                "but not on it; perturb S or tighten epsilon")
        on = [int(i) for i in np.flatnonzero(dist <= on_tol) if int(i) in verts]
        facets.add(tuple(sorted(on)))
    facets = sorted(facets)
    lattice, vsets = lattice_from_facets(facets)
    require_polytope(lattice)
    f = lattice.f_vector
    euler = sum((-1) ** i * x for i, x in enumerate(f))
    if euler != 1 - (-1) ** n:
        raise PrecisionError(f"Euler characteristic check failed for f-vector {f}")
    lookup = {(int(lattice.ranks[i]), vsets[i]): i for i in range(lattice.n_faces)}
    vperms = np.stack([config.point_permutation(k) for k in range(config.order)])
    fperms = np.empty((config.order, lattice.n_faces), dtype=np.int64)
    for k in range(config.order):
        vp = vperms[k]
        for i in range(lattice.n_faces):
            key = (int(lattice.ranks[i]), frozenset(int(vp[v]) for v in vsets[i]))
            if key not in lookup:
                raise GroupError(f"element {config.elements[k]} does not map faces to faces")
            fperms[k, i] = lookup[key]
        check_automorphism(lattice, fperms[k])
    vertex_points = np.array([next(iter(vsets[i])) for i in lattice.faces_of_rank(0)], dtype=np.int64)
    return HullResult(config, vertex_points, [list(x) for x in facets], lattice, vperms, fperms)


# --------------------------------------------------------- odd bipyramids
def bipyramid_odd(m: int, height: float = 1.0, delta: float | None = None,
                  epsilon: float = DEFAULT_EPSILON, max_halvings: int = 40):
    """3-polytope with combinatorial symmetry group C_{2m} (m odd) in which
    gamma^m acts as -id.

    Start from the bipyramid over a regular 2m-gon, invariant under the
    rotatory reflection gamma.  Thin pyramids on one facet orbit kill the
    horizontal mirror; a second, smaller pyramid on the face of each of
    them that holds the orbit facet's first ring vertex kills the vertical
    mirrors.  Heights are halved until the hull has exactly the predicted facets.
    """
    if m % 2 == 0:
        raise ValueError(
            f"order {2 * m} is divisible by 4: no centrally symmetric 3-polytope has this cyclic "
            "group as its combinatorial symmetry group with the involution acting as -id")
    if m < 3:
        raise ValueError("m must be an odd integer >= 3")
    n = 2 * m

    def gamma(k):
        r = rotation2(k, n)
        g = np.zeros((3, 3))
        g[:2, :2] = r
        g[2, 2] = -1.0 if k % 2 else 1.0
        return g

    p0 = np.array([1.0, 0.0, 0.0])
    p1 = gamma(1) @ p0
    apex = np.array([0.0, 0.0, height])

    def cap(tri, dlt):
        a, b, c = tri
        nrm = np.cross(b - a, c - a)
        nrm /= np.linalg.norm(nrm)
        if nrm @ (a + b + c) < 0:
            nrm = -nrm
        return (a + b + c) / 3 + dlt * nrm

    delta = 0.1 * height if delta is None else delta
    for _ in range(max_halvings):
        t0 = cap((p0, p1, apex), delta)
        s0 = cap((p0, apex, t0), delta / 4)
        base = np.stack([p0, apex, t0, s0])
        raw = np.concatenate([base @ gamma(k).T for k in range(m)])
        raw = np.concatenate([raw, -raw])
        keep, where = [], []
        for i, x in enumerate(raw):
            hit = [r for r, j in enumerate(keep) if np.linalg.norm(x - raw[j]) <= 10 * epsilon]
            if hit:
                where.append(hit[0])
            else:
                where.append(len(keep))
                keep.append(i)
        pts = raw[keep]
        mats = np.stack([gamma(k) for k in range(n)])
        cfg = PointConfiguration(pts, mats, _cyclic_elements(n), (n,), [1], sigma=m,
                                 epsilon=epsilon, centrally_symmetric=True,
                                 meta={"m": m, "height": height, "delta": delta})
        try:
            res = hull(cfg, cap_dim=3)
        except (PrecisionError, DegenerateError):
            delta /= 2
            continue
        if sorted(map(tuple, res.facets)) == _bipyramid_facets(m, where):
            return cfg, res
        delta /= 2
    raise PrecisionError("could not find a thin enough pyramid height")


def _bipyramid_facets(m: int, where) -> list:
    """Facets the thin-pyramid bipyramid must have, as sorted point tuples.

    ``where[4k + i]`` is the point index of gamma^k applied to base point i
    (ring vertex, apex, first cap, second cap).
    """
    n = 2 * m

    def pt(k, i):
        return where[4 * (k % n) + i]

    out = set()
    for k in range(n):
        p, q, a, t, s = pt(k, 0), pt(k + 1, 0), pt(k, 1), pt(k, 2), pt(k, 3)
        out.add(tuple(sorted((p, q, pt(k + 1, 1)))))
        for f in ((p, q, t), (q, a, t), (p, a, s), (a, t, s), (t, p, s)):
            out.add(tuple(sorted(f)))
    return sorted(out)


# ------------------------------------------------------------ pipeline
@dataclass
class CentralSymmetryResult:
    status: str  # verified | configuration-only | failed
    config: PointConfiguration
    hull: HullResult | None
    broken: BrokenPolytope | None
    report: VerificationReport | None
    checks: dict
    data: dict

    @property
    def ok(self) -> bool:
        return self.status in ("verified", "configuration-only") and all(self.checks.values())

    def to_json(self) -> dict:
        out = {"status": self.status, "checks": self.checks, "data": self.data,
               "configuration": self.config.to_json()}
        if self.hull is not None:
            out["hull"] = {"f_vector": list(self.hull.lattice.f_vector),
                           "facets": self.hull.facets}
        if self.report is not None:
            out["verification"] = self.report.to_json()
        return out


def parse_group_spec(spec: dict):
    """Returns ``(factors, route)`` where factors are (order, sigma_power)."""
    try:
        factors = [(int(f["order"]), int(f.get("sigma_power", 0))) for f in spec["factors"]]
        types = {f.get("type", "cyclic") for f in spec["factors"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed group spec: {exc}") from exc
    if types != {"cyclic"}:
        raise ValueError("only cyclic factors are supported")
    if not factors or any(o < 1 for o, _ in factors):
        raise ValueError("factor orders must be positive")
    for o, p in factors:
        if (2 * p) % o != 0:
            raise ValueError(f"sigma component {p} in C_{o} is not of order dividing 2")
    if all(p % o == 0 for o, p in factors):
        raise ValueError("sigma must be a non-trivial involution")
    return factors, spec.get("route", "orbit")


def _sigma_checks(cfg: PointConfiguration, res: HullResult | None, exact: bool) -> dict:
    s = cfg.matrices[cfg.sigma]
    minus = -np.eye(cfg.dim)
    checks = {
        "sigma_matrix_is_minus_identity": bool(np.array_equal(s, minus)) if exact
        else bool(np.max(np.abs(s - minus)) <= cfg.epsilon),
        "points_centrally_symmetric": bool(np.allclose(cfg.points @ s.T, -cfg.points, atol=cfg.epsilon)),
    }
    antipode = cfg.point_permutation(cfg.sigma)
    checks["sigma_maps_points_to_antipodes"] = bool(
        np.max(np.abs(cfg.points[antipode] + cfg.points), initial=0.0) <= cfg.epsilon)
    if res is not None:
        fp = res.face_perms[cfg.sigma]
        vp = res.vertex_points
        ok = True
        for k, point in enumerate(vp):
            face = k + 1
            img_point = vp[fp[face] - 1]
            ok &= bool(np.max(np.abs(cfg.points[img_point] + cfg.points[point])) <= cfg.epsilon)
        checks["sigma_lattice_map_is_antipodal"] = ok
    return checks


def centrally_symmetric_pipeline(spec: dict, seed: int = 0, epsilon: float = DEFAULT_EPSILON,
                      n_points: int | None = None, cap_dim: int = 4) -> CentralSymmetryResult:
    """Centrally symmetric polytope for an abelian group with a chosen involution.

    Factors whose sigma component is non-trivial become 4-dimensional
    cyclic orbit polytopes (combined by cartesian product); the remaining
    factors act on a regular simplex, combined by tensor product.  Within
    the dimension cap the hull lattice is trimmed by chamber replacement
    and the result verified; otherwise only the configuration is checked.
    """
    factors, route = parse_group_spec(spec)
    data = {"factors": [list(f) for f in factors], "route": route, "seed": seed}
    if route == "bipyramid":
        if len(factors) != 1:
            raise ValueError("the bipyramid route takes a single cyclic factor")
        order, p = factors[0]
        if order % 2:
            raise ValueError("group order must be even")
        cfg, res = bipyramid_odd(order // 2, epsilon=epsilon)
        if p != order // 2:
            raise ValueError("sigma must be the unique involution of the cyclic group")
        aut = automorphisms(res.lattice)
        grp = res.group()
        checks = _sigma_checks(cfg, res, exact=True)
        checks["group_is_full_automorphism_group"] = bool(
            is_subgroup(grp, aut) and aut.order == grp.order == order)
        data.update(dimension=3, aut_order=aut.order, f_vector=list(res.lattice.f_vector))
        status = "verified" if all(checks.values()) else "failed"
        return CentralSymmetryResult(status, cfg, res, None, None, checks, data)

    inv = [(o, p) for o, p in factors if p % o != 0]
    rest = [o for o, p in factors if p % o == 0]
    parts = []
    for o, p in inv:
        if o % 2 or p % o != o // 2:
            raise ValueError(f"sigma component in C_{o} must be its involution")
        parts.append(cyclic_orbit_polytope(o // 2, n_points=n_points, seed=seed + len(parts),
                                           epsilon=epsilon))
    cfg = parts[0]
    for other in parts[1:]:
        cfg = cartesian_product(cfg, other)
    rest_order = int(np.prod(rest)) if rest else 1
    if rest_order > 1:
        cfg = tensor_combine(cfg, simplex_factor(rest, epsilon))
    data["dimension"] = cfg.dim
    data["points"] = len(cfg.points)
    try:
        cfg.check_action()
        perms = {cfg.point_permutation(k).tobytes() for k in range(cfg.order)}
        permutes = len(perms) == cfg.order
    except GroupError:
        permutes = False
    exact = all(o // 2 in (1, 2) for o, _ in inv) and rest_order == 1
    if cfg.dim > cap_dim:
        checks = _sigma_checks(cfg, None, exact=False)
        checks["group_permutes_points_faithfully"] = permutes
        data["reason"] = f"hull in dimension {cfg.dim} is beyond the cap of {cap_dim}"
        status = "configuration-only" if all(checks.values()) else "failed"
        return CentralSymmetryResult(status, cfg, None, None, None, checks, data)

    res = hull(cfg, cap_dim=cap_dim)
    grp = res.group()
    aut = automorphisms(res.lattice)
    checks = _sigma_checks(cfg, res, exact=exact)
    checks["group_acts_on_hull"] = bool(is_subgroup(grp, aut))
    checks["group_faithful"] = grp.order == cfg.order
    data["hull_f_vector"] = list(res.lattice.f_vector)
    data["hull_aut_order"] = aut.order
    broken = break_symmetry(res.lattice, grp)
    report = verify_broken(broken)
    data["aut_order"] = report.data.get("aut_order")
    data["P_f_vector"] = list(broken.P.f_vector)
    checks["trimmed_group_exact"] = report.ok
    # sigma on P: original vertices of P are the hull vertices
    sig = broken.element_images[grp.index_of(res.face_perms[cfg.sigma])]
    checks["sigma_on_P_is_antipodal"] = _antipodal_on_broken(broken, sig, res, cfg)
    status = "verified" if all(checks.values()) else "failed"
    return CentralSymmetryResult(status, cfg, res, broken, report, checks, data)


def _antipodal_on_broken(B: BrokenPolytope, perm: np.ndarray, res: HullResult, cfg) -> bool:
    from .breaker import KIND_ORIGINAL
    P, prov = B.P, B.provenance
    ok = True
    for f in P.faces_of_rank(0):
        if prov["kind"][f] != KIND_ORIGINAL or prov["chain"][f][0] < 0:
            continue
        q_vertex = B.Q.index(int(prov["chain"][f][0]))
        g = perm[f]
        q_img = B.Q.index(int(prov["chain"][g][0]))
        a = cfg.points[res.vertex_points[q_vertex - 1]]
        b = cfg.points[res.vertex_points[q_img - 1]]
        ok &= bool(np.max(np.abs(a + b)) <= cfg.epsilon)
    return ok
