"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 input error,
3 capacity or precision limit.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import catalog
from .errors import (CapacityError, GroupError, InfeasibleParameterError, LatticeStructureError,
                     NotPolytopeError, PrecisionError, RankError)
from .geometry import DEFAULT_EPSILON, PointConfiguration, centrally_symmetric_pipeline, hull
from .groups import PermGroup, automorphisms
from .lattice import FaceLattice, flags, validate
from .order_complex import subdivide

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAPACITY = 0, 1, 2, 3

log = logging.getLogger("polysym")


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: tuple
    out: str | None = None
    figures: str | None = None
    seed: int = 0
    epsilon: float = DEFAULT_EPSILON
    cap_faces: int = 200_000
    cap_dim: int = 4
    as_json: bool = False
    verbose: int = 0

    def __post_init__(self):
        if self.cap_faces <= 0 or self.cap_dim <= 0:
            raise ValueError("caps must be positive")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")


class InputError(Exception):
    pass


# ------------------------------------------------------------------- I/O
def _default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, (np.ndarray, tuple, set, frozenset)):
        return sorted(o) if isinstance(o, (set, frozenset)) else list(np.asarray(o).tolist())
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, default=_default) + "\n"


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def load_lattice(path: str) -> FaceLattice:
    """Read a lattice file; ``catalog:NAME`` builds a catalogue polytope.

    Broken-polytope output files are accepted too (their ``lattice`` entry).
    """
    if path.startswith("catalog:"):
        try:
            return catalog.by_name(path.split(":", 1)[1])
        except KeyError as exc:
            raise InputError(str(exc)) from exc
    data = _read_json(path)
    if isinstance(data, dict) and "lattice" in data and "rank" not in data:
        data = data["lattice"]
    return FaceLattice.from_json(data)


def load_group(path: str, lattice: FaceLattice) -> PermGroup:
    if path in ("trivial", "catalog:trivial"):
        return PermGroup(lattice, [])
    if path in ("full", "catalog:full"):
        return automorphisms(lattice)
    return PermGroup.from_json(lattice, _read_json(path))


def load_points(path: str) -> np.ndarray:
    """Points as a JSON list of rows, a configuration JSON, or whitespace text."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
        if isinstance(data, dict):
            data = data.get("points", data.get("configuration", {}).get("points"))
        pts = np.asarray(data, dtype=float)
    except (json.JSONDecodeError, TypeError, ValueError):
        try:
            pts = np.loadtxt(text.splitlines(), ndmin=2)
        except ValueError as exc:
            raise InputError(f"cannot parse points from {path}") from exc
    if pts.ndim != 2 or len(pts) == 0:
        raise InputError("points must form a non-empty 2-d array")
    return pts


def _emit(cfg: RunConfig, text: str, payload) -> None:
    body = dumps(payload)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(body)
    sys.stdout.write(body if cfg.as_json else text.rstrip("\n") + "\n")


def _cap(cfg: RunConfig, L: FaceLattice) -> None:
    if L.n_faces > cfg.cap_faces:
        raise CapacityError(f"{L.n_faces} faces exceeds --cap-faces {cfg.cap_faces}")


# -------------------------------------------------------------- commands
def cmd_validate(cfg: RunConfig) -> int:
    L = load_lattice(cfg.inputs[0])
    rep = validate(L)
    _emit(cfg, rep.summary(), rep.to_json())
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_flags(cfg: RunConfig) -> int:
    L = load_lattice(cfg.inputs[0])
    _cap(cfg, L)
    g = flags(L)
    payload = {"rank": L.rank, "count": len(g), "flags": L.ids[g.flags].tolist(),
               "adjacency": g.adjacency.tolist()}
    _emit(cfg, f"{len(g)} flags", payload)
    return EXIT_OK


def cmd_autgroup(cfg: RunConfig) -> int:
    L = load_lattice(cfg.inputs[0])
    _cap(cfg, L)
    G = automorphisms(L)
    payload = G.to_json()
    payload["order"] = G.order
    _emit(cfg, f"order {G.order}, {len(G.generators)} generators", payload)
    return EXIT_OK


def cmd_subdivide(cfg: RunConfig) -> int:
    L = load_lattice(cfg.inputs[0])
    _cap(cfg, L)
    C = subdivide(L)
    vt = C.valency_table
    payload = C.to_json()
    payload["valency"] = [{"id": int(i), "label": int(lab), "val": int(v), "s": int(s)}
                          for i, lab, v, s in zip(vt.ids, vt.labels, vt.val, vt.s)]
    text = f"{C.n_chambers} chambers, {len(vt.ids)} vertices, dimension {C.dimension}"
    _emit(cfg, text, payload)
    return EXIT_OK


def cmd_break(cfg: RunConfig) -> int:
    from .breaker import break_symmetry, verify_broken
    from .report import break_text, write_break_figures

    Q = load_lattice(cfg.inputs[0])
    _cap(cfg, Q)
    G = load_group(cfg.inputs[1], Q)
    B = break_symmetry(Q, G)
    rep = verify_broken(B)
    payload = B.to_json()
    payload["report"] = rep.to_json()
    _emit(cfg, break_text(B, rep), payload)
    if cfg.figures:
        write_break_figures(B, rep, cfg.figures)
    return EXIT_OK if rep.ok else EXIT_FAIL


def centsym_payload(res) -> dict:
    payload = res.to_json()
    if res.hull is not None:
        payload["lattice"] = res.hull.lattice.to_json()
    if res.broken is not None:
        payload["trimmed"] = {"lattice": res.broken.P.to_json(), "group": res.broken.gamma.to_json()}
    return payload


def cmd_centsym(cfg: RunConfig) -> int:
    from .report import centsym_text, write_centsym_figures

    spec = _read_json(cfg.inputs[0])
    res = centrally_symmetric_pipeline(spec, seed=cfg.seed, epsilon=cfg.epsilon, cap_dim=cfg.cap_dim)
    payload = centsym_payload(res)
    _emit(cfg, centsym_text(res), payload)
    if cfg.out and res.hull is not None:
        with open(os.path.splitext(cfg.out)[0] + ".off", "w") as fh:
            fh.write(res.hull.to_off())
    if cfg.figures:
        write_centsym_figures(res, cfg.figures)
    return EXIT_OK if res.ok else EXIT_FAIL


def cmd_hull(cfg: RunConfig) -> int:
    pts = load_points(cfg.inputs[0])
    n = pts.shape[1]
    conf = PointConfiguration(pts, np.eye(n)[None], [()], (), [], epsilon=cfg.epsilon)
    res = hull(conf, cap_dim=cfg.cap_dim)
    payload = {"f_vector": [int(x) for x in res.lattice.f_vector], "facets": res.facets,
               "vertices": res.vertex_points.tolist(), "lattice": res.lattice.to_json()}
    _emit(cfg, f"{len(res.vertex_points)} vertices, {len(res.facets)} facets, "
               f"f-vector {payload['f_vector']}", payload)
    if cfg.out:
        with open(os.path.splitext(cfg.out)[0] + ".off", "w") as fh:
            fh.write(res.to_off())
    return EXIT_OK


def cmd_catalog(cfg: RunConfig) -> int:
    if not cfg.inputs:
        names = sorted(catalog.CATALOG)
        _emit(cfg, "\n".join(names), names)
        return EXIT_OK
    L = load_lattice("catalog:" + cfg.inputs[0])
    _emit(cfg, L.dumps(), L.to_json())
    return EXIT_OK


COMMANDS = {
    "validate": (cmd_validate, ["lattice"], "check the abstract polytope axioms"),
    "flags": (cmd_flags, ["lattice"], "enumerate flags and adjacencies"),
    "autgroup": (cmd_autgroup, ["lattice"], "compute the automorphism group"),
    "subdivide": (cmd_subdivide, ["lattice"], "barycentric subdivision with valencies"),
    "break": (cmd_break, ["lattice", "group"], "refine a polytope so that only the given group survives"),
    "centsym": (cmd_centsym, ["spec"], "centrally symmetric polytope for a group spec"),
    "hull": (cmd_hull, ["points"], "convex hull face lattice of a point set"),
    "catalog": (cmd_catalog, ["name?"], "print a catalogue polytope as lattice JSON"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    common.add_argument("--cap-faces", type=int, default=200_000)
    common.add_argument("--cap-dim", type=int, default=4)
    common.add_argument("--json", action="store_true", help="print machine-readable JSON")
    common.add_argument("--out", help="write the JSON result to this file")
    common.add_argument("--figures", metavar="DIR", help="write PNG figures and TSV ledgers here")
    common.add_argument("-v", "--verbose", action="count", default=0)

    p = argparse.ArgumentParser(prog="polysym", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, args, help_) in COMMANDS.items():
        sp = sub.add_parser(name, parents=[common], help=help_)
        for a in args:
            if a.endswith("?"):
                sp.add_argument(a[:-1], nargs="?")
            else:
                sp.add_argument(a)
    return p


def _config(ns) -> RunConfig:
    _, args, _ = COMMANDS[ns.command]
    inputs = tuple(getattr(ns, a.rstrip("?")) for a in args if getattr(ns, a.rstrip("?")) is not None)
    return RunConfig(ns.command, inputs, ns.out, ns.figures, ns.seed, ns.epsilon,
                     ns.cap_faces, ns.cap_dim, ns.json, ns.verbose)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(ns.verbose, 2), format="%(levelname)s %(message)s")
    try:
        cfg = _config(ns)
        return COMMANDS[cfg.command][0](cfg)
    except NotPolytopeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (CapacityError, PrecisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (InputError, LatticeStructureError, RankError, GroupError, InfeasibleParameterError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
