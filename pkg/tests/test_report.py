import json
import math

import numpy as np
import pytest

from lcsurf.config import default_config, load_config
from lcsurf.errors import MeshEmpty, PathNotLightlikeAtTarget
from lcsurf.report import (FORMAT, PROBE_COLUMNS, dumps_report, export_mesh, fmt, num,
                           read_probe_csv, run_analyze, run_probe, sweep)

R2 = math.sqrt(2)


@pytest.fixture(scope="module")
def small_cfg():
    return default_config().with_overrides(grid=(17, 3))


@pytest.fixture(scope="module")
def small_report(small_cfg):
    return run_analyze(small_cfg)


def test_number_formatting():
    assert num(1 / 3) == 0.333333333
    assert num(-0.0) == 0.0 and str(num(-1e-300 * 1e-300)) == "0.0"
    assert num(float("nan")) is None and num(None) is None and num(float("inf")) is None
    assert fmt(2 * math.pi) == "6.28318531"
    assert fmt(None) == "" and fmt(1e-20) == "1e-20"


def test_report_header(small_report, small_cfg):
    r = small_report
    assert r["format"] == FORMAT
    assert r["surface"] == "paper-example"
    assert r["config_sha256"] == small_cfg.digest()
    assert r["grid"] == {"nu": 17, "nv": 3, "u": [0.0, 6.28318531], "v": [0.0, 6.28318531]}
    assert r["tolerance"] == 1e-9
    assert r["summary"]["points"] == 51 and r["summary"]["errors"] == 0
    assert sum(r["summary"]["strata"].values()) == 51


def test_row_keys_and_order(small_report):
    row = small_report["rows"][0]
    assert list(row) == ["u", "v", "stratum", "lambda_tilde", "K_hat", "H_hat", "K", "H",
                         "kappa_hat_1", "kappa_hat_2", "lightlike_kind", "mu", "focal", "error"]
    # u is the outer index
    assert [r["v"] for r in small_report["rows"][:3]] == [0.0, 3.14159265, 6.28318531]


def _row(report, u, v=0.0):
    return min(report["rows"], key=lambda r: abs(r["u"] - u) + abs(r["v"] - v))


def test_v0_row_changes_sign_across_lightlike(small_report):
    # lambda~ = -cos 2u: negative before pi/4, zero at pi/4, positive after
    before, at, after = (_row(small_report, u) for u in (math.pi / 8, math.pi / 4, 3 * math.pi / 8))
    assert before["stratum"] == "timelike" and before["lambda_tilde"] < 0
    assert at["stratum"] == "lightlike"
    assert after["stratum"] == "spacelike" and after["lambda_tilde"] > 0


def test_lightlike_rows_are_cuspidal_edges(small_report):
    light = [r for r in small_report["rows"] if r["stratum"] == "lightlike"]
    assert len(light) == 12
    assert {r["lightlike_kind"] for r in light} == {"cuspidal_edge"}
    for r in light:
        assert r["K"] is None and r["H"] is None
        assert r["kappa_hat_1"] is None
    assert small_report["summary"]["lightlike_kinds"]["cuspidal_edge"] == 12


def test_values_near_pi(small_report):
    r = _row(small_report, math.pi)
    assert r["K"] == pytest.approx(1.0, abs=1e-8) and r["H"] == pytest.approx(0.0, abs=1e-8)
    assert sorted([r["kappa_hat_1"], r["kappa_hat_2"]]) == pytest.approx([-1, 1])
    assert sorted(r["mu"].values()) == pytest.approx([-1, 1])
    F = {name: r["focal"][name]["F"] for name in ("plus", "minus")}
    np.testing.assert_allclose(sorted(F.values()), [[0, 0, -2], [0, 0, 0]], atol=1e-8)


def test_singular_rows_have_no_focal_data(small_report):
    r = _row(small_report, math.pi / 2)
    assert r["stratum"] == "singular_S1"
    assert r["mu"] is None and r["focal"] is None
    assert r["kappa_hat_1"] is None  # 0/0 limit


def test_null_never_zero_in_json(small_report):
    text = dumps_report(small_report)
    assert "NaN" not in text and "Infinity" not in text
    assert '"K": null' in text


def test_report_round_trip(small_report):
    text = dumps_report(small_report)
    assert dumps_report(json.loads(text)) == text
    lines = text.splitlines()
    assert lines[0] == "{" and lines[-1] == "}" and lines[-2] == "  ]"
    assert all(line.startswith('    {"u": ') for line in lines[lines.index('  "rows": [') + 1:-2])


def test_report_is_deterministic(small_cfg, small_report):
    assert dumps_report(run_analyze(small_cfg)) == dumps_report(small_report)


def test_default_grid_summary():
    r = run_analyze(default_config())
    s = r["summary"]
    assert s["points"] == 4096 and s["errors"] == 0
    assert s["strata"]["spacelike"] == 2048 and s["strata"]["timelike"] == 2048


def test_partial_failures_are_reported_in_row():
    cfg = load_config('[surface]\nX.x1 = "sqrt(u)"\nX.x2 = "u"\nX.x3 = "v"\n'
                      'v.x1 = "1"\nv.x2 = "1"\nv.x3 = "0"\nw.x1 = "1"\nw.x2 = "-1"\nw.x3 = "0"\n'
                      '[domain]\nu = [-1, 1]\nv = [0, 1]\n[grid]\nnu = 5\nnv = 2\n', validate=False)
    r = run_analyze(cfg)
    bad = [row for row in r["rows"] if row["error"] is not None]
    # sqrt has no derivative at 0 either, so the columns u = -1, -0.5, 0 fail
    assert len(bad) == 6 and r["summary"]["errors"] == 6
    assert all(row["stratum"] is None and row["K_hat"] is None for row in bad)
    assert "sqrt" in bad[0]["error"]
    mesh = export_mesh(cfg, "base")
    assert _counts(mesh) == (4, 1)


def _counts(text):
    lines = text.splitlines()
    return sum(l.startswith("v ") for l in lines), sum(l.startswith("f ") for l in lines)


def test_mesh_base():
    cfg = default_config().with_overrides(grid=(8, 6))
    text = export_mesh(cfg, "base")
    lines = text.splitlines()
    assert lines[:5] == ["# lcsurf mesh", "# surface paper-example", "# sheet base", "# grid 8x6",
                         f"# config-sha256 {cfg.digest()}"]
    assert _counts(text) == (48, 35)
    assert lines[5] == "v 0 0 1"
    assert "f 1 7 8 2" in lines
    assert text.endswith("\n")
    assert export_mesh(cfg, "base") == text


def test_mesh_focal_sheets():
    cfg = default_config().with_overrides(grid=(10, 5))
    sw = sweep(cfg)
    for which in ("focal_plus", "focal_minus"):
        text = export_mesh(cfg, which, sw=sw)
        verts = np.array([[float(x) for x in l.split()[1:]] for l in text.splitlines() if l.startswith("v ")])
        assert len(verts) == 50
        segment = np.allclose(verts[:, 1:], 0, atol=1e-8)
        if segment:
            assert np.max(np.abs(verts[:, 0])) <= 2 + 1e-8
        else:
            us = np.repeat(np.linspace(0, 2 * math.pi, 10), 5)
            np.testing.assert_allclose(verts[:, 0], 2 * np.sin(us) ** 3, atol=1e-8)


def test_mesh_rejects_unknown_sheet():
    with pytest.raises(ValueError):
        export_mesh(default_config().with_overrides(grid=(3, 3)), "focal_up")


def test_mesh_empty():
    cfg = load_config('[surface]\nX.x1 = "log(u)"\nX.x2 = "u"\nX.x3 = "v"\n'
                      'v.x1 = "1"\nv.x2 = "1"\nv.x3 = "0"\nw.x1 = "1"\nw.x2 = "-1"\nw.x3 = "0"\n'
                      '[domain]\nu = [-2, -1]\nv = [0, 1]\n[grid]\nnu = 3\nnv = 3\n', validate=False)
    with pytest.raises(MeshEmpty):
        export_mesh(cfg, "base")


def test_probe_csv():
    text, rep = run_probe(default_config())
    lines = text.splitlines()
    assert lines[0] == ",".join(PROBE_COLUMNS)
    assert len(lines) == 25
    rows = read_probe_csv(text)
    assert rows[-1]["K_hat"] == pytest.approx(R2 / 2, abs=1e-6)
    assert rows[-1]["H_hat"] == pytest.approx(R2 / 4, abs=1e-6)
    assert abs(rows[-1]["K"]) > 1e6
    assert rep.verdicts["K"].kind == "diverges"
    assert run_probe(default_config())[0] == text


def test_probe_empty_cells_for_undefined():
    # a path that sits on the lightlike locus leaves K and H undefined
    text, _ = run_probe(default_config(), path=("5*pi/4", "t"), t_target=1.0, samples=3)
    rows = read_probe_csv(text)
    assert all(r["K"] is None and r["H"] is None for r in rows)
    assert text.splitlines()[1].endswith(",,")


def test_probe_rejects_spacelike_target():
    with pytest.raises(PathNotLightlikeAtTarget):
        run_probe(default_config(), path=("t", "0"), t_target=1.2)
