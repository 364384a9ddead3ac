import csv
import io
import json
import math

import pytest
from click.testing import CliRunner

from semitoric import global_invariants as G
from semitoric.cli import main
from semitoric.params import ModelParams


@pytest.fixture
def run():
    r = CliRunner()
    return lambda *args: r.invoke(main, [str(a) for a in args])


def test_invariants_ff(run):
    res = run("invariants", "--cloud-points", 5000)
    assert res.exit_code == 0, res.output
    rep = json.loads(res.output)
    assert rep["schema_version"] == 1
    assert rep["n_FF"] == 1
    assert rep["twisting_index"] == 0
    assert len(rep["polygons"]) == 10
    assert rep["height"] == pytest.approx(1.152008430207737, rel=1e-12)
    r = rep["residuals"]
    assert r["height_closed_vs_quadrature"] < 1e-8
    assert r["taylor_closed_vs_regression"] < 1e-3
    assert r["reverse_symmetry"] < 1e-10


def test_invariants_kepler_clj_zero(run):
    res = run("invariants", "--r1", 1, "--r2", 1, "--t", 0.5, "--cloud-points", 2000)
    assert res.exit_code == 0
    assert json.loads(res.output)["taylor"]["c_lj"] == 0.0


def test_invariants_no_ff(run, tmp_path):
    out = tmp_path / "r.json"
    res = run("invariants", "--t", 0.1, "--out", out)
    assert res.exit_code == 2
    rep = json.loads(out.read_text())
    assert rep["n_FF"] == 0 and "taylor" not in rep


def test_invariants_bad_params(run):
    assert run("invariants", "--r1", -1).exit_code == 2


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_sweep_clj_vanishes_on_u0(run):
    res = run("sweep", "--field", "c_lj", "--grid", "3x5", "--u-range", -1, 1)
    assert res.exit_code == 0
    rows = _rows(res.output)
    assert len(rows) == 15
    assert all(float(r["value"]) == 0.0 for r in rows if float(r["u"]) == 0.0)


def test_sweep_height_bounds(run):
    rows = _rows(run("sweep", "--grid", "5x5").output)
    for r in rows:
        u, h = float(r["u"]), float(r["value"])
        assert 0 < h < 2 * math.exp(-abs(u))


def test_sweep_records_reason(run):
    # v = 400 overflows the Taylor closed form; the row keeps going with a reason
    rows = _rows(run("sweep", "--field", "c_ll", "--grid", "1x2", "--u-range", 0, 0, "--v-range", 0, 400).output)
    bad = [r for r in rows if math.isnan(float(r["value"]))]
    assert bad and all(r["reason"] for r in bad)


def test_sweep_bad_grid(run):
    assert run("sweep", "--grid", "3by3").exit_code == 2


@pytest.mark.parametrize("fmt", ["json", "svg"])
def test_polygons_files(run, tmp_path, fmt):
    res = run("polygons", "--format", fmt, "--out-dir", tmp_path)
    assert res.exit_code == 0
    files = sorted(tmp_path.glob(f"*.{fmt}"))
    assert len(files) == 10
    assert (tmp_path / f"polygon_eps+1_k+0.{fmt}").exists()
    if fmt == "json":
        poly = G.WeightedPolygon.from_json(json.loads((tmp_path / "polygon_eps-1_k+2.json").read_text()))
        ref = G.polygon_representative(ModelParams(1, 2, 0.5), -1, 2)
        assert poly.vertices == ref.vertices
    else:
        assert "<polygon" in files[0].read_text()


def test_momentum_cloud(run, tmp_path):
    out = tmp_path / "c.csv"
    assert run("momentum-cloud", "--points", 1000, "--out", out).exit_code == 0
    head, cols, *rows = out.read_text().splitlines()
    assert head.startswith("# grid=") and "skipped_singular=" in head
    assert cols == "l,h,nu2"
    assert len(rows) > 500


def test_verify_suite(run):
    res = run("verify", "--suite", "elliptic")
    assert res.exit_code == 0
    assert res.output.strip().endswith("3/3 passed")
