import csv
import json
import math
import re
import subprocess
import sys

import numpy as np
import pytest

from singrev.cli import main
from singrev.config import ConfigError, fixture_names, fixture_text, parse_config

ERROR_LINE = re.compile(r"^singrev: error E_[A-Z_]+: \S.*$")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)


def test_fixtures_parse():
    assert {"cusp32", "cusp52", "cusp43", "cusp53", "sine", "cosine", "sine2",
            "cylinder"} <= set(fixture_names())
    for name in fixture_names():
        cfg = parse_config(fixture_text(name))
        cfg.spec()


def test_trace_cusp_fixture(tmp_path, capsys):
    out = tmp_path / "ex.csv"
    code, _, err = run(capsys, "trace", "--config", "cusp32", "--out", str(out))
    assert code == 0 and err == ""
    header, data = read_csv(out)
    assert header == ["t", "x", "y", "phi", "eta", "F", "G", "l"]
    assert len(data) == 2001
    row = data[np.flatnonzero(data[:, 0] == 0.0)[0]]
    assert row[1] == 0.0
    assert row[2] == pytest.approx(0.1414214, abs=1e-7)


def test_trace_cylinder(tmp_path, capsys):
    out = tmp_path / "cyl.csv"
    assert run(capsys, "trace", "--config", "cylinder", "--out", str(out))[0] == 0
    _, data = read_csv(out)
    assert np.max(np.abs(data[:, 2] - 0.5)) <= 1e-8


def test_trace_flags_and_formatting(capsys):
    code, out, _ = run(capsys, "trace", "--config", "cusp43", "--samples", "11")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 12
    for field in lines[5].split(","):
        v = float(field)
        assert float(f"{v:.17g}") == v


def test_outputs_are_byte_identical(tmp_path, capsys):
    for cmd, ext in (("trace", "csv"), ("mesh", "obj")):
        a, b = tmp_path / f"a.{ext}", tmp_path / f"b.{ext}"
        for p in (a, b):
            assert run(capsys, cmd, "--config", "sine2", "--samples", "101",
                       "--theta", "12", "--out", str(p))[0] == 0
        assert a.read_bytes() == b.read_bytes()


def test_singularities_three_two(tmp_path, capsys):
    out = tmp_path / "s.json"
    code, text, _ = run(capsys, "singularities", "--config", "cusp32", "--out", str(out))
    assert code == 0
    assert "3/2-cusp, front, 3/2-cuspidal edge" in text
    doc = json.loads(out.read_text())
    assert len(doc["singular_points"]) == 1
    assert doc["singular_points"][0]["jet_check"]["agree"] is True


def test_singularities_five_three(capsys):
    code, text, _ = run(capsys, "singularities", "--config", "cusp53")
    assert code == 0
    assert text.startswith("1 singular point")
    assert "5/3-cusp, frontal not front" in text


def test_singularities_periodic_sine(tmp_path, capsys):
    out = tmp_path / "s.json"
    assert run(capsys, "singularities", "--config", "sine", "--out", str(out))[0] == 0
    pts = json.loads(out.read_text())["singular_points"]
    assert np.allclose([p["t"] for p in pts], [k * math.pi for k in range(5)], atol=1e-9)
    assert {p["cusp"] for p in pts} == {"3/2-cusp"}


def test_periodicity_reports(tmp_path, capsys):
    out = tmp_path / "p.json"
    code, text, _ = run(capsys, "periodicity", "--config", "sine", "--out", str(out))
    assert code == 0 and "periodic=true branch=resonant" in text
    assert json.loads(out.read_text())["periodic"] is True
    code, text, _ = run(capsys, "periodicity", "--config", "sine2", "--out", str(out))
    doc = json.loads(out.read_text())
    assert doc["periodic"] is False
    assert doc["residual"] == pytest.approx(math.pi / 4, abs=1e-8)


def test_solve_constants(capsys):
    code, text, _ = run(capsys, "solve-constants", "--config", "cylinder")
    assert code == 0
    values = dict(line.split(" = ") for line in text.splitlines())
    assert float(values["c1"]) == pytest.approx(0.5, abs=1e-10)
    assert float(values["c2"]) == pytest.approx(0.0, abs=1e-10)
    code, text, _ = run(capsys, "solve-constants", "--config", "sine")
    assert code == 0 and "resonant" in text


def test_plot(tmp_path, capsys):
    out = tmp_path / "p.svg"
    assert run(capsys, "plot", "--config", "cusp32", "--out", str(out))[0] == 0
    svg = out.read_text()
    assert svg.count('class="singular"') == 1
    assert 'class="x-axis"' in svg and 'class="profile"' in svg
    assert run(capsys, "plot", "--config", "sine", "--out", str(out))[0] == 0
    assert out.read_text().count('class="singular"') == 5


def test_mesh_closed_in_theta(tmp_path, capsys):
    out = tmp_path / "m.obj"
    assert run(capsys, "mesh", "--config", "cusp32", "--samples", "21", "--theta", "8",
               "--out", str(out))[0] == 0
    lines = out.read_text().splitlines()
    nv = sum(1 for x in lines if x.startswith("v "))
    faces = [x for x in lines if x.startswith("f ")]
    assert nv == 21 * 8 and len(faces) == 2 * 20 * 8
    used = {int(p.split("//")[0]) for x in faces for p in x.split()[1:]}
    assert used == set(range(1, nv + 1))
    assert any("3/2-cuspidal edge" in x for x in lines if x.startswith("#"))


@pytest.mark.parametrize("body, code, err_code", [
    ("l = t +\nm = 1\ndomain = -1, 1\nc1 = 1\nc2 = 1\n", 2, "E_CONFIG"),
    ("l = t\nm = 1\ndomain = 1, 2\nc1 = 1\nc2 = 1\n", 2, "E_CONFIG"),
    ("l = t\nm = 1\nfoo = 3\n", 2, "E_CONFIG"),
    ("l = t\nm = 1\ndomain = -1, 1\nc1 = 0\nc2 = 0\n", 3, "E_YCOLLAPSE"),
    ("l = 1/(t - 1/2)\nm = 1\ndomain = -1, 1\nc1 = 1\nc2 = 1\n", 3, "E_EVAL"),
])
def test_error_paths(tmp_path, capsys, body, code, err_code):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(body)
    status, out, err = run(capsys, "trace", "--config", str(cfg))
    assert status == code
    assert len(err.splitlines()) == 1 and ERROR_LINE.match(err.strip())
    assert f"error {err_code}:" in err


def test_syntax_diagnostic_has_position(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("m = 1\nl = sin(t\ndomain = -1, 1\nc1 = 1\nc2 = 1\n")
    status, _, err = run(capsys, "trace", "--config", str(cfg))
    assert status == 2
    assert "bad.cfg:2 (l)" in err and "column" in err


@pytest.mark.parametrize("argv, code", [
    ([], 2),
    (["trace"], 2),
    (["bogus", "--config", "cusp32"], 2),
    (["trace", "--config", "cusp32", "--samples", "x"], 2),
    (["trace", "--config", "cusp32", "--samples", "1"], 2),
    (["trace", "--config", "no/such/file.cfg"], 4),
    (["periodicity", "--config", "cusp32"], 2),
])
def test_usage_errors(capsys, argv, code):
    status, _, err = run(capsys, *argv)
    assert status == code
    assert len(err.splitlines()) == 1 and ERROR_LINE.match(err.strip())


def test_unwritable_output(tmp_path, capsys):
    status, _, err = run(capsys, "trace", "--config", "cusp32",
                         "--out", str(tmp_path / "missing" / "x.csv"))
    assert status == 4 and "E_IO" in err


def test_duplicate_key_is_reported_with_line():
    with pytest.raises(ConfigError) as info:
        parse_config("l = t\nm = 1\nl = t^2\n", "x.cfg")
    assert info.value.line == 3 and "duplicate" in str(info.value)


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "singrev", "solve-constants", "--config",
                        "cylinder"], capture_output=True, text=True, check=False)
    assert r.returncode == 0 and r.stdout.startswith("c1 = ")
