import json
import os
import subprocess
import sys
from pathlib import Path
from xml.etree import ElementTree

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sectorcover import documents
from sectorcover.cli import main
from sectorcover.geometry import PolygonalArc

SNAPSHOTS = Path(__file__).parent / "data" / "snapshots"


def write_arc(tmp_path, verts, name="arc.json"):
    path = tmp_path / name
    documents.dump(PolygonalArc(verts), path)
    return str(path)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_fit_unit_segment(tmp_path, capsys):
    code, out, _ = run(["fit", write_arc(tmp_path, [[0, 0], [1, 0]])], capsys)
    assert code == 0
    res = json.loads(out)
    assert res["success"] is True
    assert res["violation"] <= 1e-9
    assert {"rotation", "translation", "reflect", "candidate_kind"} <= set(res)


def test_fit_oversized_segment(tmp_path, capsys):
    code, out, _ = run(["fit", write_arc(tmp_path, [[0, 0], [1.5, 0]])], capsys)
    assert code == 1
    res = json.loads(out)
    assert res["success"] is False and res["violation"] > 0
    assert "replay" in res


def test_fit_truncated_json(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"version": 1, "vertices": [[0, 0], [1')
    code, _, err = run(["fit", str(p)], capsys)
    assert code == 2
    assert "malformed JSON" in err


def test_fit_missing_file_and_bad_flags(tmp_path, capsys):
    assert run(["fit", str(tmp_path / "nope.json")], capsys)[0] == 2
    arc = write_arc(tmp_path, [[0, 0], [1, 0]])
    assert run(["fit", arc, "--radius", "0"], capsys)[0] == 2
    assert run(["fit", arc, "--angle-deg", "200"], capsys)[0] == 2
    assert run(["bogus"], capsys)[0] == 2


def test_fit_custom_sector(tmp_path, capsys):
    arc = write_arc(tmp_path, [[0, 0], [0.6, 0], [0.6, 0.4]])
    assert run(["fit", arc, "--angle-deg", "90", "--radius", "0.7072"], capsys)[0] == 0


def test_replay_unit_arc_has_reason(tmp_path, capsys):
    code, out, _ = run(["replay", write_arc(tmp_path, [[0, 0], [0.5, 0.2], [0.9, 0.1]])], capsys)
    assert code == 0
    res = json.loads(out)
    assert res["certificate"] is False and res["reason"]


def test_replay_two_vertex_arc_is_apex_report(tmp_path, capsys):
    res = json.loads(run(["replay", write_arc(tmp_path, [[0, 0], [1, 0]])], capsys)[1])
    assert res["certificate"] is False
    assert res["case_label"] is None
    assert "apex" in res["reason"]


def test_replay_case1_fixture(tmp_path, capsys, case_fixtures):
    code, out, _ = run(["replay", write_arc(tmp_path, case_fixtures["1"].vertices)], capsys)
    assert code == 0
    res = json.loads(out)
    assert res["certificate"] is True
    assert res["case_label"] == 1
    assert res["bound"] > 1
    assert res["transcript"]
    assert res["pair"]["first"]["kind"] == "three-contact"


def test_replay_rejects_non_simple(tmp_path, capsys):
    code, _, err = run(["replay", write_arc(tmp_path, [[0, 0], [2, 0], [1, 1], [1, -1]])], capsys)
    assert code == 2 and "simple" in err


def _render(tmp_path, capsys, verts, mode, name):
    out = tmp_path / f"{name}.svg"
    code = run(["render", write_arc(tmp_path, verts, name + ".json"), "--mode", mode, "-o", str(out)], capsys)[0]
    return code, out


@pytest.mark.parametrize(
    "name,mode,fixture",
    [("placement-segment", "placement", None), ("certificates-case3", "certificates", "3"),
     ("unfolding-case2", "unfolding", "2")],
)
def test_render_matches_snapshot(tmp_path, capsys, case_fixtures, name, mode, fixture):
    verts = [[0, 0], [1, 0]] if fixture is None else case_fixtures[fixture].vertices
    code, out = _render(tmp_path, capsys, verts, mode, name)
    assert code == 0
    svg = out.read_text()
    ElementTree.fromstring(svg)
    snap = SNAPSHOTS / f"{name}.svg"
    if os.environ.get("SECTORCOVER_UPDATE_SNAPSHOTS"):
        snap.write_text(svg)
    assert svg == snap.read_text()
    code2, out2 = _render(tmp_path, capsys, verts, mode, name + "-again")
    assert out2.read_bytes() == out.read_bytes()


def test_render_unfolding_without_certificate_fails(tmp_path, capsys):
    code, out = _render(tmp_path, capsys, [[0, 0], [1, 0]], "unfolding", "seg")
    assert code == 1
    assert not out.exists()


def test_render_svg_coordinates_finite(tmp_path, capsys, case_fixtures):
    _, out = _render(tmp_path, capsys, case_fixtures["4"].vertices, "unfolding", "c4")
    svg = out.read_text()
    assert "nan" not in svg and "inf" not in svg


def test_campaign_trials_zero(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"trials": 0}))
    assert run(["campaign", str(cfg)], capsys)[0] == 2


def test_campaign_bad_config(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"trials": 3, "colour": "red"}))
    assert run(["campaign", str(cfg)], capsys)[0] == 2
    cfg.write_text(json.dumps({"families": ["blob"], "trials": 3}))
    assert run(["campaign", str(cfg)], capsys)[0] == 2


def test_campaign_small_radius_fails(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"families": ["segment"], "trials": 2, "sector": {"angle_deg": 30, "radius": 0.5}}))
    code, out, _ = run(["campaign", str(cfg), "--workers", "1"], capsys)
    assert code == 1
    assert json.loads(out)["failures"] == 2


def test_campaign_success_writes_report(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"trials": 16, "seed": 9}))
    report = tmp_path / "r.json"
    code, _, err = run(["campaign", str(cfg), "--workers", "1", "-o", str(report)], capsys)
    assert code == 0
    data = json.loads(report.read_text())
    assert data["successes"] == 16 and data["successes"] + data["failures"] == data["trials"]
    assert "16/16" in err


def test_shipped_default_config_loads():
    from sectorcover.cli import load_campaign_config

    path = Path(__file__).parents[1] / "configs" / "default_campaign.json"
    mix, trials, seed, target = load_campaign_config(str(path))
    assert trials == 10000 and len(mix) == 8
    assert target.angle == pytest.approx(np.pi / 6)


def test_console_script_entry_point(tmp_path):
    arc = write_arc(tmp_path, [[0, 0], [1, 0]])
    out = subprocess.run([sys.executable, "-m", "sectorcover.cli", "fit", arc], capture_output=True, text=True)
    assert out.returncode == 0


finite = st.floats(allow_nan=False, allow_infinity=False, min_value=-1e300, max_value=1e300)


@given(st.lists(st.tuples(finite, finite), min_size=2, max_size=20, unique=True))
def test_document_round_trip(verts):
    v = np.array(verts)
    if np.any(np.all(np.diff(v, axis=0) == 0, axis=1)):
        return
    try:
        arc = PolygonalArc(v)
    except ValueError:
        return  # overflowing lengths
    back = documents.loads(documents.dumps(arc, {"note": "x"}))
    assert np.array_equal(back.vertices, arc.vertices)


def test_document_validation():
    with pytest.raises(documents.DocumentError):
        documents.loads('{"version": 2, "vertices": [[0, 0], [1, 0]]}')
    with pytest.raises(documents.DocumentError):
        documents.loads('{"version": 1, "vertices": [[0, 0]]}')
    with pytest.raises(documents.DocumentError):
        documents.loads('{"version": 1, "vertices": [[0, 0], [1, 0]], "metadata": {"a": 1}}')
    with pytest.raises(documents.DocumentError):
        documents.loads("[]")
