"""Human-readable reports, TSV ledgers and figures for the pipelines."""
from __future__ import annotations

import csv
import os

import numpy as np

from .breaker import KIND_GADGET, KIND_ORIGINAL, BrokenPolytope, VerificationReport
from .lattice import FaceLattice, ValidationReport

ROLE_NAMES = {0: "u", 1: "w", 2: "R", 3: "L"}


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def _save(fig, path):
    # no timestamp or version metadata, so reruns give identical files
    fig.savefig(path, dpi=100, metadata={"Software": None})


def _write_tsv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


# -------------------------------------------------------------------- text
def lattice_summary(L: FaceLattice) -> str:
    return f"rank {L.rank}, f-vector {tuple(int(x) for x in L.f_vector)}"


def validation_text(rep: ValidationReport) -> str:
    return rep.summary()


def break_text(B: BrokenPolytope, rep: VerificationReport) -> str:
    plan = B.plan
    lines = [
        f"input: {lattice_summary(B.Q)}, group order {B.group.order}",
        f"chambers {B.complex.n_chambers}, orbits {B.action.n_orbits}",
        f"apex valencies {list(plan.params)}, new-vertex bound m={plan.bound}",
        "label intervals " + " ".join(f"M{i}=[{a},{b}]" for i, (a, b) in enumerate(plan.intervals)),
        f"output: {lattice_summary(B.P)}",
        f"automorphism group order {rep.data.get('aut_order')}",
        "checks:",
        rep.summary(),
        "PASS" if rep.ok else "FAIL",
    ]
    return "\n".join(lines)


def centsym_text(result) -> str:
    d = result.data
    lines = [f"status: {result.status}", f"route: {d.get('route')}, dimension {d.get('dimension')}"]
    for key in ("points", "hull_f_vector", "hull_aut_order", "f_vector", "P_f_vector", "aut_order"):
        if key in d:
            lines.append(f"{key}: {d[key]}")
    lines.append("checks:")
    lines += [f"  {k}: {'PASS' if v else 'FAIL'}" for k, v in result.checks.items()]
    return "\n".join(lines)


# ----------------------------------------------------------------- ledgers
def valency_rows(B: BrokenPolytope) -> list:
    """One row per vertex of P: id, kind, label or role, valency, expected."""
    P, prov, plan = B.P, B.provenance, B.plan
    vt = B.complex.valency_table
    lookup = {int(i): k for k, i in enumerate(vt.ids)}
    val = P.vertex_valencies()
    verts = P.faces_of_rank(0)
    rows = []
    for k, f in enumerate(verts):
        v = int(val[k])
        if prov["kind"][f] == KIND_ORIGINAL:
            chain = prov["chain"][f]
            label = int(np.flatnonzero(chain >= 0)[0])
            r = lookup[int(chain[label])]
            want = int(vt.val[r] + vt.s[r] * plan.params[label])
            rows.append([int(P.ids[f]), "original", f"label{label}", v, want])
        else:
            role = ROLE_NAMES.get(int(prov["role"][f]), "?")
            rows.append([int(P.ids[f]), "new", role, v, f"<={plan.bound}"])
    return rows


def write_break_ledgers(B: BrokenPolytope, rep: VerificationReport, out_dir: str) -> list:
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    p = os.path.join(out_dir, "valency_ledger.tsv")
    _write_tsv(p, ["vertex", "kind", "class", "valency", "expected"], valency_rows(B))
    paths.append(p)
    p = os.path.join(out_dir, "intervals.tsv")
    planned = B.plan.intervals
    got = rep.data.get("intervals", planned)
    rows = [[i, B.plan.params[i], a, b, planned[i][0], planned[i][1]]
            for i, (a, b) in enumerate(got)]
    _write_tsv(p, ["label", "apex_valency", "min_observed", "max_observed", "min_planned", "max_planned"], rows)
    paths.append(p)
    p = os.path.join(out_dir, "checks.tsv")
    _write_tsv(p, ["check", "passed", "detail"],
               [[k, "PASS" if ok else "FAIL", det] for k, (ok, det) in rep.checks.items()])
    paths.append(p)
    return paths


# ----------------------------------------------------------------- figures
def plot_valency_histogram(B: BrokenPolytope, path: str):
    plt = _pyplot()
    P, prov, plan = B.P, B.provenance, B.plan
    verts = P.faces_of_rank(0)
    val = P.vertex_valencies()
    kinds = prov["kind"][verts]
    fig, ax = plt.subplots(figsize=(7, 4))
    top = int(val.max()) + 2
    bins = np.arange(0, top + 1) - 0.5
    new = val[kinds == KIND_GADGET]
    ax.hist(new, bins=bins, color="0.6", label="new vertices")
    orig = val[kinds == KIND_ORIGINAL]
    ax.hist(orig, bins=bins, color="tab:blue", label="original vertices")
    ax.axvline(plan.bound + 0.5, color="k", ls="--", lw=1, label=f"bound m={plan.bound}")
    colors = ["tab:red", "tab:orange", "tab:green", "tab:purple", "tab:brown"]
    for i, (a, b) in enumerate(plan.intervals):
        ax.axvspan(a - 0.5, b + 0.5, color=colors[i % len(colors)], alpha=0.15, label=f"M{i}")
    ax.set_yscale("log")
    ax.set_xlabel("valency")
    ax.set_ylabel("vertices")
    ax.legend(fontsize=8, frameon=False)
    fig.tight_layout()
    _save(fig, path)
    plt.close(fig)


def plot_points(points, path: str, facets=None, title: str = ""):
    """Orthogonal projection onto the first two or three coordinates."""
    plt = _pyplot()
    pts = np.asarray(points, dtype=float)
    fig = plt.figure(figsize=(5, 5))
    if pts.shape[1] >= 3:
        ax = fig.add_subplot(projection="3d")
        if facets is not None:
            for f in facets:
                ring = pts[list(f) + [f[0]]]
                ax.plot(ring[:, 0], ring[:, 1], ring[:, 2], color="0.7", lw=0.5)
        ax.scatter(pts[:, 0], pts[:, 1], pts[:, 2], s=8, color="tab:blue")
    else:
        ax = fig.add_subplot()
        ax.scatter(pts[:, 0], pts[:, 1], s=8, color="tab:blue")
        ax.set_aspect("equal")
    if title:
        ax.set_title(title, fontsize=9)
    _save(fig, path)
    plt.close(fig)


def write_break_figures(B: BrokenPolytope, rep: VerificationReport, out_dir: str) -> list:
    os.makedirs(out_dir, exist_ok=True)
    paths = write_break_ledgers(B, rep, out_dir)
    p = os.path.join(out_dir, "valency_histogram.png")
    plot_valency_histogram(B, p)
    paths.append(p)
    return paths


def write_centsym_figures(result, out_dir: str) -> list:
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    cfg = result.config
    p = os.path.join(out_dir, "points.tsv")
    _write_tsv(p, ["point"] + [f"x{i}" for i in range(cfg.dim)],
               [[k] + [repr(float(x)) for x in row] for k, row in enumerate(cfg.points)])
    paths.append(p)
    p = os.path.join(out_dir, "checks.tsv")
    _write_tsv(p, ["check", "passed"], [[k, "PASS" if v else "FAIL"] for k, v in result.checks.items()])
    paths.append(p)
    facets = result.hull.facets if result.hull is not None and cfg.dim == 3 else None
    p = os.path.join(out_dir, "projection.png")
    plot_points(cfg.points, p, facets=facets, title=f"{result.data.get('route')} route, dim {cfg.dim}")
    paths.append(p)
    if result.broken is not None:
        paths += write_break_figures(result.broken, result.report, os.path.join(out_dir, "trimmed"))
    return paths
