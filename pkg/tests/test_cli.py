import json

import numpy as np
import pytest

import packetlab as pl
from packetlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_css_json(capsys):
    code, out, _ = run(capsys, "css", "--S", "1", "--ell", "0")
    assert code == 0
    payload = json.loads(out)
    assert payload["state"]["window"] == {"kind": "symmetric", "M": 64}
    assert payload["moments"]["meanCos"] == pytest.approx(0.6977, abs=1e-4)
    assert payload["moments"]["meanL"] == 0.0


def test_css_csv(capsys):
    code, out, _ = run(capsys, "css", "--S", "1", "--ell", "0", "--output", "csv")
    assert code == 0
    header, row = out.strip().split("\n")
    assert header.startswith("meanL,varL,meanCos")
    assert float(row.split(",")[2]) == pytest.approx(0.6977, abs=1e-4)


def test_css_non_integer_ell_exits_2(capsys):
    code, _, err = run(capsys, "css", "--S", "1", "--ell", "0.5")
    assert code == 2
    assert "integer" in err


def test_moments_and_relations_roundtrip(tmp_path, capsys):
    state = pl.css_state(pl.CssParams(2.0, 1), pl.ModeWindow.symmetric(32))
    path = tmp_path / "state.json"
    path.write_text(pl.state_to_json(state))

    code, out, _ = run(capsys, "moments", "--state", str(path))
    assert code == 0
    rep = json.loads(out)
    assert rep["meanL"] == pytest.approx(1.0, abs=1e-12)

    code, out, _ = run(capsys, "relations", "--state", str(path), "--output", "csv")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "relation,lhs,rhs,satisfied"
    names = {ln.split(",")[0] for ln in lines[1:]}
    assert names == {"NaiveRobertson", "CosRelation", "SinRelation", "CombinedPhi"}


def test_relations_with_f_table(tmp_path, capsys):
    table = pl.FTable(np.array([0.1, 1.8]), np.array([1.0, 4.3]), np.array([True, True]))
    tpath = tmp_path / "f.csv"
    tpath.write_text("\n".join(table.to_csv_rows()))
    state = pl.css_state(pl.CssParams(1.0, 0), pl.ModeWindow.symmetric(32))
    spath = tmp_path / "s.json"
    spath.write_text(pl.state_to_json(state))
    code, out, _ = run(capsys, "relations", "--state", str(spath), "--f-table", str(tpath))
    assert code == 0
    names = {entry["relation"] for entry in json.loads(out)}
    assert "ModifiedJudge" in names


def test_pencil_json(capsys):
    code, out, _ = run(capsys, "pencil", "--family", "circle", "--alpha", "1", "--truncation", "32")
    assert code == 0
    payload = json.loads(out)
    assert any(payload["physical"])


def test_scan_csv_flags_integers(capsys):
    code, out, _ = run(
        capsys,
        "scan", "--family", "circle",
        "--alpha-min", "-1", "--alpha-max", "1", "--alpha-step", "0.5",
        "--output", "csv",
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "alpha,minImagDistance,floor,flag"
    flags = {ln.split(",")[0]: ln.split(",")[3] for ln in lines[1:]}
    assert flags["-1"] == "1" and flags["0"] == "1" and flags["1"] == "1"
    assert flags["-0.5"] == "0" and flags["0.5"] == "0"


def test_floor_command(capsys):
    code, out, _ = run(capsys, "floor", "--alpha", "0.25", "--output", "csv")
    assert code == 0
    assert float(out.strip().split("\n")[1].split(",")[1]) == pytest.approx(np.sqrt(3) / 4)


def test_phase_min_command(capsys):
    code, out, _ = run(capsys, "phase-min", "--winding", "1", "--modulus", "vonmises", "--kappa", "2")
    assert code == 0
    payload = json.loads(out)
    assert payload["winding"] == 1.0
    assert abs(payload["meanL"] - 1.0) < 1e-8
    assert payload["fitResidual"] < 1e-6


def test_f_scan_command(capsys):
    code, out, _ = run(
        capsys, "f-scan", "--targets", "0.5,1.0", "--grid", "256", "--output", "csv"
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "deltaPhiP,f,converged"
    assert len(lines) == 3
    assert all(ln.endswith(",1") for ln in lines[1:])


def test_deterministic_output(capsys):
    _, out1, _ = run(capsys, "css", "--S", "2", "--ell", "3", "--center", "0.7")
    _, out2, _ = run(capsys, "css", "--S", "2", "--ell", "3", "--center", "0.7")
    assert out1 == out2


def test_out_file(tmp_path, capsys):
    target = tmp_path / "scan.csv"
    code, out, _ = run(
        capsys,
        "scan", "--family", "circle",
        "--alpha-min", "0", "--alpha-max", "0", "--alpha-step", "1",
        "--output", "csv", "--out", str(target),
    )
    assert code == 0
    assert out == ""
    assert target.read_text().startswith("alpha,")


def test_unknown_command_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_bad_state_file_exits_2(capsys):
    code, _, err = run(capsys, "moments", "--state", "/nonexistent/state.json")
    assert code == 2
    assert "error" in err
