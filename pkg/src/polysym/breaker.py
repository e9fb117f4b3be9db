"""Chamber replacement: refine C(Q) so that exactly a prescribed group survives.

Every chamber of the subdivision receives a copy of a gadget complex R^L,
with the outer vertex u_i glued to the chamber's label-i vertex.  Chambers
in one orbit of the group share the same gadget; different orbits get
stacked polytopes L with different vertex counts.  Apex valencies m_i are
chosen so that the valency of an original vertex reveals its label and no
new vertex can be confused with an original one.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import GroupError, RankError
from .gadgets import (GadgetComplex, assemble_gadget, face_covers, feasible_apex_valency,
                      make_stacked)
from .groups import PermGroup, automorphism_search, automorphisms, is_subgroup
from .lattice import BOTTOM_ID, TOP_ID, FaceLattice, require_polytope, validate
from .order_complex import ChamberAction, LabelledComplex, chamber_action, subdivide

log = logging.getLogger(__name__)

KIND_ORIGINAL, KIND_GADGET, KIND_IMPROPER = 0, 1, 2
ROLE_CODES = {"u": 0, "w": 1, "R": 2, "L": 3}


# ----------------------------------------------------------------- templates
@dataclass(frozen=True)
class Template:
    """A gadget complex split into boundary cells (chains of the chamber)
    and interior cells (new faces, one copy per chamber)."""

    gadget: GadgetComplex
    cells: tuple  # interior cells, sorted by (rank, vertex tuple)
    ranks: np.ndarray
    inner_covers: np.ndarray  # (k, 2) interior local indices
    boundary_covers: np.ndarray  # (k, 2) (label mask, interior local index)
    vertex_roles: np.ndarray  # role code per interior cell, -1 for non-vertices

    @property
    def size(self) -> int:
        return len(self.cells)


def build_template(gadget: GadgetComplex) -> Template:
    d = gadget.d
    cells = gadget.complex.cells
    outer = gadget.outer
    interior = sorted((f for f in cells if not f <= outer), key=lambda f: (cells[f], tuple(sorted(f))))
    local = {f: k for k, f in enumerate(interior)}
    inner, bd = [], []
    for lo, hi in gadget.covers():
        if hi <= outer:
            continue
        if lo <= outer:
            bd.append((sum(1 << v for v in lo), local[hi]))
        else:
            inner.append((local[lo], local[hi]))
    roles = np.array([ROLE_CODES[gadget.roles[next(iter(f))][0]] if len(f) == 1 and cells[f] == 0 else -1
                      for f in interior], dtype=np.int8)
    return Template(gadget, tuple(interior), np.array([cells[f] for f in interior], dtype=np.int64),
                    np.array(inner, dtype=np.int64).reshape(-1, 2),
                    np.array(bd, dtype=np.int64).reshape(-1, 2), roles)


# --------------------------------------------------------------- parameters
@dataclass(frozen=True)
class ParameterPlan:
    d: int
    params: tuple  # m_0 .. m_{d-1}
    intervals: tuple  # (a_i, b_i) per label
    bound: int  # m: largest valency of a vertex not in C(Q)
    L_sizes: tuple  # vertex count of L per orbit

    def chain_holds(self) -> bool:
        return chain_holds(self.bound, self.intervals)

    def to_json(self) -> dict:
        return {"m": self.bound, "params": list(self.params),
                "intervals": [list(x) for x in self.intervals], "L_sizes": list(self.L_sizes)}


def chain_holds(bound: int, intervals) -> bool:
    """m < a_{d-1} <= b_{d-1} < a_{d-2} <= ... < a_0 <= b_0."""
    d = len(intervals)
    if not bound < intervals[d - 1][0]:
        return False
    for i in range(d):
        a, b = intervals[i]
        if a > b:
            return False
        if i > 0 and not intervals[i][1] < intervals[i - 1][0]:
            return False
    return True


def stacked_interior_bound(d: int, n: int) -> int:
    """Largest valency of a non-outer vertex of R^L for L = make_stacked(d, n)."""
    L = make_stacked(d, n)
    outer_part = max(L.valency[j] for j in range(d)) + 2 * d - 2
    inner_part = max((L.valency[v] for v in range(d, n)), default=0)
    return max(d, outer_part, inner_part)


def _interval(val, s, m):
    x = val + s * m
    return int(x.min()), int(x.max())


def plan_parameters(C: LabelledComplex, action: ChamberAction, L_sizes=None) -> ParameterPlan:
    d = C.d
    if L_sizes is None:
        L_sizes = tuple(d + 1 + k for k in range(action.n_orbits))
    L_sizes = tuple(int(n) for n in L_sizes)
    if len(set(L_sizes)) != len(L_sizes):
        raise ValueError("orbits need L polytopes with distinct vertex counts")
    vt = C.valency_table
    by_label = [(vt.val[vt.labels == i], vt.s[vt.labels == i]) for i in range(d)]
    bound = max(stacked_interior_bound(d, n) for n in sorted(set(L_sizes)))
    params = [0] * d
    params[d - 1] = feasible_apex_valency(d, bound)
    for j in range(d - 1, 0, -1):
        b_j = _interval(*by_label[j], params[j])[1]
        val, s = by_label[j - 1]
        need = int(np.max((b_j - val) // s)) + 1
        params[j - 1] = feasible_apex_valency(d, max(need, d))
    intervals = tuple(_interval(*by_label[i], params[i]) for i in range(d))
    plan = ParameterPlan(d, tuple(params), intervals, bound, L_sizes)
    # the usual choice m_{d-1} >= m makes this automatic; keep it explicit
    assert plan.chain_holds(), f"interval chain violated: {plan}"
    return plan


# ---------------------------------------------------------------- assembly
@dataclass
class BrokenPolytope:
    Q: FaceLattice
    group: PermGroup
    complex: LabelledComplex
    action: ChamberAction
    plan: ParameterPlan
    templates: list
    P: FaceLattice
    provenance: dict  # arrays indexed by face index of P
    element_images: np.ndarray  # (order, faces of P): image of each group element
    gamma: PermGroup  # the group re-expressed on P

    def to_json(self) -> dict:
        prov = self.provenance
        return {
            "lattice": self.P.to_json(),
            "plan": self.plan.to_json(),
            "orbits": [[int(c) for c in o] for o in self.action.orbits],
            "provenance": {
                "kind": prov["kind"].tolist(),
                "chamber": prov["chamber"].tolist(),
                "orbit": prov["orbit"].tolist(),
                "local": prov["local"].tolist(),
            },
            "group": self.gamma.to_json(),
        }


def break_symmetry(Q: FaceLattice, group: PermGroup) -> BrokenPolytope:
    """Build a polytope P refining Q whose automorphism group is ``group``."""
    if Q.rank < 3:
        raise RankError(f"d ≥ 3 required (got rank {Q.rank})")
    require_polytope(Q)
    if not is_subgroup(group, automorphisms(Q)):
        raise GroupError("the given group is not a subgroup of the automorphism group of Q")
    C = subdivide(Q, check=False)
    action = chamber_action(C, group)
    plan = plan_parameters(C, action)
    templates = [build_template(assemble_gadget(Q.rank, plan.params, make_stacked(Q.rank, n)))
                 for n in plan.L_sizes]
    for t in templates:
        assert t.gadget.interior_max <= plan.bound
    log.info("breaking: %d chambers, %d orbits, params %s", C.n_chambers, action.n_orbits, plan.params)
    return _assemble(Q, group, C, action, plan, templates)


def _assemble(Q, group, C, action, plan, templates) -> BrokenPolytope:
    d = Q.rank
    F = C.chambers.astype(np.int64)
    nc = len(F)
    full = (1 << d) - 1
    masks = range(1, full)  # label sets of proper chains; the full set is the chamber

    # original faces: chains of Q, one per distinct (mask, chain)
    orig_table = np.full((nc, 1 << d), -1, dtype=np.int64)
    orig_rank, orig_mask, orig_chain = [], [], []
    n_orig = 0
    for M in masks:
        cols = [i for i in range(d) if M >> i & 1]
        uniq, inv = np.unique(F[:, cols], axis=0, return_inverse=True)
        orig_table[:, M] = n_orig + inv.ravel()
        chain = np.full((len(uniq), d), -1, dtype=np.int64)
        chain[:, cols] = Q.ids[uniq]
        orig_chain.append(chain)
        orig_rank.append(np.full(len(uniq), len(cols) - 1))
        orig_mask.append(np.full(len(uniq), M))
        n_orig += len(uniq)
    orig_rank = np.concatenate(orig_rank)
    orig_mask = np.concatenate(orig_mask)
    orig_chain = np.concatenate(orig_chain)

    sizes = np.array([templates[o].size for o in action.orbit_of], dtype=np.int64)
    block = n_orig + np.concatenate([[0], np.cumsum(sizes)[:-1]])
    total = n_orig + int(sizes.sum())
    rank = np.empty(total, dtype=np.int64)
    rank[:n_orig] = orig_rank
    chamber = np.full(total, -1, dtype=np.int64)
    orbit = np.full(total, -1, dtype=np.int64)
    local = np.empty(total, dtype=np.int64)
    local[:n_orig] = orig_mask
    role = np.full(total, -1, dtype=np.int8)

    lo_parts, hi_parts = [], []
    for M in masks:
        bits = [i for i in range(d) if M >> i & 1]
        if len(bits) < 2:
            continue
        for i in bits:
            lo_parts.append(orig_table[:, M & ~(1 << i)])
            hi_parts.append(orig_table[:, M])
    for o, t in enumerate(templates):
        cs = np.flatnonzero(action.orbit_of == o)
        starts = block[cs]
        idx = (starts[:, None] + np.arange(t.size)).ravel()
        rank[idx] = np.tile(t.ranks, len(cs))
        chamber[idx] = np.repeat(cs, t.size)
        orbit[idx] = o
        local[idx] = np.tile(np.arange(t.size), len(cs))
        role[idx] = np.tile(t.vertex_roles, len(cs))
        if len(t.inner_covers):
            lo_parts.append((starts[:, None] + t.inner_covers[:, 0]).ravel())
            hi_parts.append((starts[:, None] + t.inner_covers[:, 1]).ravel())
        if len(t.boundary_covers):
            lo_parts.append(orig_table[cs][:, t.boundary_covers[:, 0]].ravel())
            hi_parts.append((starts[:, None] + t.boundary_covers[:, 1]).ravel())
    lo = np.concatenate([p.ravel() for p in lo_parts])
    hi = np.concatenate([p.ravel() for p in hi_parts])

    # proper face ids follow rank order; construction order breaks ties
    order = np.argsort(rank, kind="stable")
    fid = np.empty(total, dtype=np.int64)
    fid[order] = np.arange(total)
    verts = np.flatnonzero(rank == 0)
    facets = np.flatnonzero(rank == d - 1)
    ids = np.concatenate([[BOTTOM_ID], fid, [TOP_ID]])
    ranks = np.concatenate([[-1], rank, [d]])
    c_lo = np.concatenate([np.full(len(verts), BOTTOM_ID), fid[lo], fid[facets]])
    c_hi = np.concatenate([fid[verts], fid[hi], np.full(len(facets), TOP_ID)])
    P = FaceLattice.from_arrays(d, ids, ranks, c_lo, c_hi)
    # index in P of construction item k is fid[k] + 1
    to_p = fid + 1

    n_p = total + 2

    def scatter(values, fill):
        out = np.full(n_p, fill, dtype=values.dtype)
        out[to_p] = values
        return out

    kind = np.full(total, KIND_GADGET, dtype=np.int8)
    kind[:n_orig] = KIND_ORIGINAL
    prov = {
        "kind": scatter(kind, np.int8(KIND_IMPROPER)),
        "chamber": scatter(chamber, -1),
        "orbit": scatter(orbit, -1),
        "local": scatter(local, -1),
        "role": scatter(role, np.int8(-1)),
    }
    chains = np.full((n_p, d), -1, dtype=np.int64)
    chains[to_p[:n_orig]] = orig_chain
    prov["chain"] = chains

    # the group on P: chamber blocks move rigidly, chains move with Q
    images = []
    for k in range(group.order):
        pi = action.chamber_perms[k]
        img = np.empty(total, dtype=np.int64)
        for M in masks:
            img[orig_table[:, M]] = orig_table[pi, M]
        gad = np.arange(n_orig, total)
        src_c = chamber[n_orig:]
        img[n_orig:] = block[pi[src_c]] + (gad - block[src_c])
        perm = np.empty(n_p, dtype=np.int64)
        perm[0] = 0
        perm[n_p - 1] = n_p - 1
        perm[to_p] = to_p[img]
        images.append(perm)
    images = np.stack(images)
    gen_idx = [group.index_of(g) for g in group.generators]
    gamma = PermGroup(P, [images[k] for k in gen_idx], check=True)
    return BrokenPolytope(Q, group, C, action, plan, templates, P, prov, images, gamma)


# ------------------------------------------------------------- verification
@dataclass
class VerificationReport:
    checks: dict = field(default_factory=dict)  # name -> (passed, detail)
    data: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(p for p, _ in self.checks.values())

    def to_json(self) -> dict:
        return {"ok": self.ok,
                "checks": {k: {"passed": bool(p), "detail": det} for k, (p, det) in self.checks.items()},
                "data": self.data}

    def summary(self) -> str:
        lines = []
        for k, (p, det) in self.checks.items():
            lines.append(f"  {k}: {'PASS' if p else 'FAIL'}" + (f" ({det})" if det else ""))
        return "\n".join(lines)


CHECK_NAMES = ("polytope", "skeleton", "label_valency", "new_vertex_bound", "interval_chain", "group")


def original_skeleton_check(B: BrokenPolytope, k: int) -> tuple[bool, str]:
    """Faces of C(Q) of dimension <= k appear in P, unrefined, with the same
    incidences, and nothing else of P lies below them."""
    P, prov = B.P, B.provenance
    d = P.rank
    orig = (prov["kind"] == KIND_ORIGINAL) & (P.ranks <= k)
    chains = prov["chain"]

    def key(f):
        return tuple(int(x) for x in chains[f])

    found = {key(f) for f in np.flatnonzero(orig)}
    expect = set()
    F = B.complex.Q.ids[B.complex.chambers]
    for size in range(1, k + 2):
        for cols in combinations(range(d), size):
            for row in np.unique(F[:, list(cols)], axis=0):
                t = [-1] * d
                for c, v in zip(cols, row):
                    t[c] = int(v)
                expect.add(tuple(t))
    if found != expect:
        diff = sorted(found ^ expect)[:1]
        return False, f"face sets differ at chain {diff}"
    if np.sum(orig) != len(expect):
        return False, "a chain appears more than once"
    lo, hi = P.covers[:, 0], P.covers[:, 1]
    sel = orig[hi]
    below_bad = sel & ~orig[lo] & (P.ranks[lo] >= 0)
    if below_bad.any():
        j = int(np.flatnonzero(below_bad)[0])
        return False, f"new face {P.ids[lo[j]]} lies below original face {P.ids[hi[j]]}"
    got = {(key(a), key(b)) for a, b in zip(lo[sel & orig[lo]], hi[sel & orig[lo]])}
    want = set()
    for t in expect:
        labels = [i for i in range(d) if t[i] >= 0]
        if len(labels) < 2:
            continue
        for i in labels:
            s = list(t)
            s[i] = -1
            want.add((tuple(s), t))
    if got != want:
        return False, "cover relations among original faces differ"
    return True, ""


def verify_broken(B: BrokenPolytope) -> VerificationReport:
    rep = VerificationReport()
    P, prov, plan = B.P, B.provenance, B.plan
    d = P.rank
    report = validate(P)
    rep.checks["polytope"] = (report.ok, "" if report.ok else report.summary())
    rep.data["f_vector"] = list(P.f_vector)
    rep.data["flags"] = report.n_flags

    rep.checks["skeleton"] = original_skeleton_check(B, d - 2)

    verts = P.faces_of_rank(0)
    val_p = P.vertex_valencies()
    kinds = prov["kind"][verts]
    vt = B.complex.valency_table
    lookup = {int(i): k for k, i in enumerate(vt.ids)}
    orig_v = verts[kinds == KIND_ORIGINAL]
    labels = np.array([int(np.flatnonzero(prov["chain"][f] >= 0)[0]) for f in orig_v], dtype=np.int64)
    qids = np.array([int(prov["chain"][f][l]) for f, l in zip(orig_v, labels)], dtype=np.int64)
    rows = np.array([lookup[q] for q in qids], dtype=np.int64)
    want = vt.val[rows] + vt.s[rows] * np.asarray(plan.params)[labels]
    got = val_p[orig_v - verts[0]]
    bad = np.flatnonzero(got != want)
    rep.checks["label_valency"] = (
        bad.size == 0,
        "" if bad.size == 0 else f"vertex {qids[bad[0]]}: valency {got[bad[0]]}, expected {want[bad[0]]}")

    new_v = verts[kinds == KIND_GADGET]
    new_val = val_p[new_v - verts[0]]
    mx = int(new_val.max()) if new_val.size else 0
    rep.checks["new_vertex_bound"] = (mx <= plan.bound, f"max new valency {mx}, bound {plan.bound}")
    rep.data["max_new_valency"] = mx

    intervals = []
    for i in range(d):
        g = got[labels == i]
        intervals.append((int(g.min()), int(g.max())))
    ok = chain_holds(plan.bound, intervals) and tuple(intervals) == tuple(plan.intervals)
    rep.checks["interval_chain"] = (ok, f"m={plan.bound}, intervals={intervals}")
    rep.data["intervals"] = intervals
    rep.data["params"] = list(plan.params)

    if not report.ok:
        rep.checks["group"] = (False, "P is not a polytope; automorphism group not computed")
        return rep
    perms, fmaps, stats = automorphism_search(P)
    found = {p.tobytes() for p in perms}
    expected = {p.tobytes() for p in B.element_images}
    free = all(not np.any(f == np.arange(len(f))) for p, f in zip(perms, fmaps)
               if not np.array_equal(p, np.arange(len(p))))
    same = found == expected
    rep.data["aut_order"] = len(perms)
    rep.data["group_order"] = B.group.order
    rep.data["search"] = stats
    detail = f"|Aut(P)|={len(perms)}, |group|={B.group.order}"
    if not same:
        detail += "; automorphism set differs from the image of the group"
    if not free:
        detail += "; some automorphism fixes a flag"
    rep.checks["group"] = (same and free and len(expected) == B.group.order, detail)
    return rep
