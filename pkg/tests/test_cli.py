import json
import subprocess
import sys

import pytest

from polysym import catalog
from polysym.cli import RunConfig, main

C4 = {"generators": [{"vertex-map": {"0": 1, "1": 3, "3": 2, "2": 0, "4": 5, "5": 7, "7": 6, "6": 4}}]}


@pytest.fixture
def files(tmp_path):
    out = {}
    for name in ("cube", "tetrahedron", "segment", "square", "simplex-4"):
        p = tmp_path / f"{name}.json"
        p.write_text(catalog.by_name(name).dumps())
        out[name] = str(p)
    bad = catalog.cube(3).to_json()
    bad["covers"] = bad["covers"][1:]
    p = tmp_path / "broken-diamond.json"
    p.write_text(json.dumps(bad))
    out["broken-diamond"] = str(p)
    p = tmp_path / "trivial.json"
    p.write_text(json.dumps({"generators": []}))
    out["trivial"] = str(p)
    p = tmp_path / "c4.json"
    p.write_text(json.dumps(C4))
    out["c4"] = str(p)
    out["dir"] = tmp_path
    return out


def run(args, capsys):
    code = main([str(a) for a in args])
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_validate(files, capsys):
    code, out, _ = run(["validate", files["cube"]], capsys)
    assert code == 0 and out.strip() == "polytope of rank 3, 48 flags, PASS"
    code, out, _ = run(["validate", files["segment"]], capsys)
    assert code == 0 and "rank 1" in out and "PASS" in out
    code, out, _ = run(["validate", files["broken-diamond"]], capsys)
    assert code == 1 and "FAIL" in out and "witness" in out


def test_autgroup(files, capsys):
    code, out, _ = run(["autgroup", files["cube"], "--json"], capsys)
    assert code == 0 and json.loads(out)["order"] == 48
    code, out, _ = run(["autgroup", files["simplex-4"]], capsys)
    assert out.startswith("order 120")


def test_break_and_autgroup_of_output(files, capsys):
    target = files["dir"] / "broken.json"
    code, out, _ = run(["break", files["cube"], files["c4"], "--out", target], capsys)
    assert code == 0 and out.rstrip().endswith("PASS")
    code, out, _ = run(["autgroup", target, "--json"], capsys)
    assert code == 0 and json.loads(out)["order"] == 4


def test_break_trivial(files, capsys):
    code, out, _ = run(["break", files["tetrahedron"], files["trivial"], "--json"], capsys)
    data = json.loads(out)
    assert code == 0
    assert data["report"]["ok"] and data["report"]["data"]["aut_order"] == 1


def test_break_needs_rank_three(files, capsys):
    code, _, err = run(["break", files["square"], files["trivial"]], capsys)
    assert code == 2 and "d ≥ 3 required" in err


def test_input_errors(files, capsys):
    code, _, err = run(["validate", str(files["dir"] / "missing.json")], capsys)
    assert code == 2 and "cannot read" in err
    p = files["dir"] / "junk.json"
    p.write_text("{not json")
    assert run(["validate", p], capsys)[0] == 2
    p.write_text(json.dumps({"rank": 1, "faces": [{"id": 0, "rank": -1}], "covers": [[0, 5]]}))
    assert run(["validate", p], capsys)[0] == 2


def test_capacity_exit(files, capsys):
    code, _, err = run(["autgroup", files["cube"], "--cap-faces", "5"], capsys)
    assert code == 3 and "cap" in err


def test_flags_and_subdivide(files, capsys):
    code, out, _ = run(["flags", files["cube"], "--json"], capsys)
    assert json.loads(out)["count"] == 48
    code, out, _ = run(["subdivide", files["tetrahedron"], "--json"], capsys)
    data = json.loads(out)
    assert len(data["vertices"]) == 14 and len(data["chambers"]) == 24


def test_hull(files, capsys):
    pts = files["dir"] / "pts.json"
    pts.write_text(json.dumps([[x, y, z] for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)]))
    code, out, _ = run(["hull", pts, "--json", "--out", files["dir"] / "hull.json"], capsys)
    assert code == 0 and json.loads(out)["f_vector"] == [8, 12, 6]
    assert (files["dir"] / "hull.off").read_text().startswith("OFF\n8 6 0\n")


def test_centsym_bipyramid(files, capsys):
    spec = files["dir"] / "c6.json"
    spec.write_text(json.dumps({"factors": [{"type": "cyclic", "order": 6, "sigma_power": 3}],
                                "route": "bipyramid"}))
    figs = files["dir"] / "figs"
    code, out, _ = run(["centsym", spec, "--out", files["dir"] / "c6-out.json", "--figures", figs], capsys)
    assert code == 0 and "status: verified" in out
    assert (files["dir"] / "c6-out.off").exists()
    assert (figs / "projection.png").stat().st_size > 0
    assert (figs / "points.tsv").read_text().startswith("point\tx0\tx1\tx2\n")


def test_centsym_configuration_only(files, capsys):
    spec = files["dir"] / "k4.json"
    spec.write_text(json.dumps({"factors": [{"type": "cyclic", "order": 2, "sigma_power": 1},
                                            {"type": "cyclic", "order": 2, "sigma_power": 0}]}))
    code, out, _ = run(["centsym", spec, "--json"], capsys)
    assert code == 0 and json.loads(out)["status"] == "configuration-only"


def test_centsym_even_bipyramid_rejected(files, capsys):
    spec = files["dir"] / "c4.json"
    spec.write_text(json.dumps({"factors": [{"type": "cyclic", "order": 4, "sigma_power": 2}],
                                "route": "bipyramid"}))
    code, _, err = run(["centsym", spec], capsys)
    assert code == 2 and "divisible by 4" in err


def test_break_figures(files, capsys):
    figs = files["dir"] / "bf"
    code, _, _ = run(["break", files["tetrahedron"], files["trivial"], "--figures", figs], capsys)
    assert code == 0
    names = sorted(p.name for p in figs.iterdir())
    assert names == ["checks.tsv", "intervals.tsv", "valency_histogram.png", "valency_ledger.tsv"]
    rows = (figs / "valency_ledger.tsv").read_text().splitlines()
    assert rows[0] == "vertex\tkind\tclass\tvalency\texpected"
    for r in rows[1:]:
        vid, kind, cls, val, want = r.split("\t")
        if kind == "original":
            assert val == want


def test_outputs_are_byte_identical(files, capsys):
    a = run(["break", files["cube"], files["c4"], "--json"], capsys)[1]
    b = run(["break", files["cube"], files["c4"], "--json"], capsys)[1]
    assert a == b
    figs_a, figs_b = files["dir"] / "fa", files["dir"] / "fb"
    run(["break", files["tetrahedron"], files["trivial"], "--figures", figs_a], capsys)
    run(["break", files["tetrahedron"], files["trivial"], "--figures", figs_b], capsys)
    for p in figs_a.iterdir():
        assert p.read_bytes() == (figs_b / p.name).read_bytes(), p.name


def test_catalog_command(capsys):
    code, out, _ = run(["catalog"], capsys)
    assert "cube" in out.split()
    code, out, _ = run(["catalog", "hemicube", "--json"], capsys)
    assert json.loads(out)["rank"] == 3


def test_run_config_rejects_bad_caps():
    with pytest.raises(ValueError):
        RunConfig("validate", ("x",), cap_faces=0)


def test_module_entry_point(files):
    r = subprocess.run([sys.executable, "-m", "polysym", "validate", files["cube"]], capture_output=True, text=True)
    assert r.returncode == 0 and "PASS" in r.stdout
