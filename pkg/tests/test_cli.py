import csv
import io
import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from tuttezeros.cli import REGION_COLUMNS, SWEEP_COLUMNS, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_classify(capsys):
    assert run(capsys, "classify", "--q", "-1", "--v", "-3")[1] == "I\n"
    assert run(capsys, "classify", "--q", "5", "--v", "-6")[1] == "Unsupported (open: q>4, v<-q)\n"
    code, out, _ = run(capsys, "classify", "--q", "1/2", "--v", "-39/20")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "VIII"
    assert lines[1].startswith("v_plus in [") and lines[2].startswith("v_minus in [")


def test_malformed_input_exits_4(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["classify", "--q", "one", "--v", "-3"])
    assert exc.value.code == 4
    with pytest.raises(SystemExit) as exc:
        main(["find-zero", "--q0", "-1", "--v", "-3"])
    assert exc.value.code == 4


def test_pair(capsys):
    code, out, _ = run(capsys, "pair", "--q", "-1", "--v", "-3")
    assert code == 0
    assert out.splitlines() == ["A [A-]: E(-3)", "B [B+]: S(E(-3),E(-3),E(-3))", "planar: true"]
    code, out, _ = run(capsys, "pair", "--q", "5/2", "--v", "-3")
    assert code == 0 and "planar: false" in out
    assert run(capsys, "pair", "--q", "5", "--v", "-6")[0] == 2
    assert run(capsys, "pair", "--q", "3", "--v", "-1/2")[0] == 3


def test_find_zero_and_verify(capsys, tmp_path):
    cert = tmp_path / "c.json"
    code, out, _ = run(capsys, "find-zero", "--q0", "-1", "--v", "-3", "--eps", "0.1", "--out", str(cert))
    assert code == 0 and out.startswith("certified zero in [")
    assert run(capsys, "verify", str(cert))[0] == 0
    code, out, _ = run(capsys, "verify", str(cert), "--exhaustive")
    assert code == 0 and "exhaustive" in out

    data = json.loads(cert.read_text())
    data["s"] += 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", str(bad))
    assert code == 1 and "FAIL" in out

    truncated = tmp_path / "trunc.json"
    truncated.write_text(cert.read_text()[:40])
    assert run(capsys, "verify", str(truncated))[0] == 4
    assert run(capsys, "verify", str(tmp_path / "missing.json"))[0] == 4


def test_find_zero_exit_codes(capsys):
    assert run(capsys, "find-zero", "--q0", "5", "--v", "-6", "--eps", "0.1")[0] == 2
    assert run(capsys, "find-zero", "--q0", "3", "--v", "-1/2", "--eps", "0.1")[0] == 3
    code, out, _ = run(capsys, "find-zero", "--q0", "13/10", "--v", "-1", "--eps", "0.05")
    assert code == 0
    code, _, err = run(capsys, "find-zero", "--q0", "5/2", "--v", "-3", "--eps", "0.1", "--planar-only")
    assert code == 2 and "planar" in err


def test_find_zero_is_byte_deterministic(capsys, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert run(capsys, "find-zero", "--q0", "7/2", "--v", "-3/2", "--eps", "0.1", "--out", str(p))[0] == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_sweep_region_i(capsys, tmp_path):
    out = tmp_path / "sweep.csv"
    code, report, _ = run(capsys, "sweep", "--qmin", "-2", "--qmax", "-0.5", "--vmin", "-4", "--vmax", "-2.5",
                          "--steps", "10", "--eps", "0.1", "--out", str(out))
    assert code == 0
    rows = rows_of(out.read_text())
    assert len(rows) == 100 and list(rows[0]) == SWEEP_COLUMNS
    assert all(r["region"] == "I" and r["outcome"] == "certified" for r in rows)
    assert "I: 100/100 certified" in report
    # row-major order: q outer, v inner
    assert [r["v0"] for r in rows[:2]] == ["-4/1", "-23/6"]


def test_sweep_records_outcomes_deterministically(capsys):
    argv = ["sweep", "--qmin", "9/2", "--qmax", "15/2", "--vmin", "-7", "--vmax", "-1/2", "--steps", "3", "--eps", "0.1"]
    code, first, _ = run(capsys, *argv)
    assert code == 0
    rows = rows_of(first)
    outcomes = {(r["q0"], r["v0"]): r["outcome"] for r in rows}
    assert outcomes[("9/2", "-7/1")] == outcomes[("6/1", "-7/1")] == "unsupported"
    assert outcomes[("15/2", "-7/1")] == outcomes[("6/1", "-15/4")] == "certified"
    assert outcomes[("6/1", "-1/2")] == "exhausted"
    second = rows_of(run(capsys, *argv)[1])
    strip = lambda rs: [{k: v for k, v in r.items() if k != "wall_time_ms"} for r in rs]  # noqa: E731
    assert strip(rows) == strip(second)


def test_sweep_parallel_matches_serial(capsys):
    argv = ["sweep", "--qmin", "-2", "--qmax", "-1", "--vmin", "-4", "--vmax", "-3", "--steps", "2", "--eps", "0.1"]
    serial = rows_of(run(capsys, *argv)[1])
    parallel = rows_of(run(capsys, *argv, "--jobs", "2")[1])
    for a, b in zip(serial, parallel):
        a.pop("wall_time_ms"), b.pop("wall_time_ms")
    assert serial == parallel


def test_region_map(capsys, tmp_path):
    out = tmp_path / "map.csv"
    assert run(capsys, "region-map", "--resolution", "50", "--out", str(out))[0] == 0
    rows = rows_of(out.read_text())
    assert len(rows) == 2500 and list(rows[0]) == REGION_COLUMNS
    labels = {(r["q"], r["v"]): r["region"] for r in rows}
    assert labels[("5/1", "-6/1")] == "Unsupported"
    wedge = [r for r in rows if F(r["q"]) > 4 and F(r["v"]) < -F(r["q"])]
    assert wedge and all(r["region"] == "Unsupported" for r in wedge)
    assert "Boundary" in labels.values()
    assert out.read_bytes() == _region_map_bytes(capsys)


def _region_map_bytes(capsys):
    _, text, _ = run(capsys, "region-map", "--resolution", "50")
    return text.encode()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tuttezeros.cli", "classify", "--q", "-1", "--v", "-3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "I\n"
