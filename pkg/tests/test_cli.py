import json
import subprocess
import sys
from pathlib import Path

import pytest

from semieuclid import census as C, cli
from semieuclid.orderfile import OrderFileError, dumps_order, loads_order, parse_order_file
from semieuclid.orders import OrderValidationError, orders_isomorphic

ORDERS = Path(__file__).resolve().parent.parent / "demos" / "orders"


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_order_file_errors():
    with pytest.raises(OrderFileError, match="line 1, column"):
        loads_order('{"dim": 3,,}')
    with pytest.raises(OrderFileError, match=r"\$\.dim"):
        loads_order('{"dim": 7, "algebra": {}, "basis": []}')
    with pytest.raises(OrderFileError, match=r"\$\.basis\[1\]\[0\]"):
        loads_order('{"dim": 3, "algebra": {"d": 3}, "basis": [["1", "0"], ["x", "1"]]}')
    with pytest.raises(OrderFileError, match=r"\$\.involution"):
        loads_order('{"dim": 4, "algebra": {"a": -1, "b": -2}, "basis": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}')
    with pytest.raises(OrderValidationError, match="does not contain 1"):
        loads_order('{"dim": 3, "algebra": {"d": 3}, "basis": [["2", "0"], ["0", "1"]]}')


def test_order_file_round_trip(hurwitz, dagger_lipschitz, quadratic):
    for O in (hurwitz, dagger_lipschitz, quadratic["Z[(1+sqrt-15)/2]"]):
        back = loads_order(dumps_order(O))
        assert back == O and orders_isomorphic(back, O)
    assert parse_order_file(ORDERS / "hurwitz.json") == hurwitz


def test_analyze(capsys):
    code, out, _ = run(capsys, "analyze", ORDERS / "z_sqrt-3.json")
    rep = json.loads(out)
    assert code == 0
    assert rep["classification"] == "semi-euclidean" and rep["mu_sq"] == "1"
    assert rep["successive_minima"] == ["1", "3"]
    code, out, _ = run(capsys, "analyze", ORDERS / "hurwitz.json")
    rep = json.loads(out)
    assert rep["maximal"] and rep["classification"] == "euclidean"
    code, out, _ = run(capsys, "analyze", ORDERS / "z_omega15.json")
    rep = json.loads(out)
    assert code == 0 and rep["classification"] == "not-semi-euclidean"
    assert not rep["k_is_lattice"] and "uncovered_witness" in rep


def test_holes(capsys):
    code, out, _ = run(capsys, "holes", ORDERS / "lipschitz.json")
    rep = json.loads(out)
    assert code == 0 and rep["mu_sq"] == "1"
    assert len(rep["deep_holes"]) == 1 and rep["deep_holes"][0]["norm"] == "1"


def test_decompose_random_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "decompose", ORDERS / "hurwitz.json", "--random", 10, "--seed", 4)
    assert code == 0
    data = json.loads(out)
    m = tmp_path / "m.json"
    m.write_text(json.dumps(data["matrix"]))
    code, out2, _ = run(capsys, "decompose", ORDERS / "hurwitz.json", "--matrix", m)
    assert code == 0 and json.loads(out2)["factors"] == data["factors"]


def test_decompose_non_member(capsys, tmp_path):
    m = tmp_path / "m.json"
    m.write_text(json.dumps([[["2", "0"], ["0", "0"]], [["0", "0"], ["1", "0"]]]))
    code, _, err = run(capsys, "decompose", ORDERS / "z_sqrt-3.json", "--matrix", m)
    assert code == 1 and json.loads(err)["error"] == "membership"


def test_usage_errors(capsys, tmp_path):
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["census", "--dim", "6"])
    assert exc.value.code == 2
    assert "invalid choice" in capsys.readouterr().err
    bad = tmp_path / "bad.json"
    bad.write_text('{"dim": 3, "algebra": {"d": 3}, "basis": [["2", "0"], ["0", "1"]]}')
    code, _, err = run(capsys, "analyze", bad)
    assert code == 2 and json.loads(err)["error"] == "input"
    code, _, _ = run(capsys, "analyze", tmp_path / "missing.json")
    assert code == 2


def test_render_byte_identical(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(cli.ENV_OUT, str(tmp_path / "a"))
    code, out, _ = run(capsys, "render", ORDERS / "z_omega15.json", "--stem", "o15")
    assert code == 0
    assert json.loads(out)["certified_zero"] is False
    code, _, _ = run(capsys, "render", ORDERS / "z_omega15.json", "--stem", "o15", "--out", tmp_path / "b")
    assert code == 0
    for name in ("o15_cover.svg", "o15_floor.svg"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    code, _, err = run(capsys, "render", ORDERS / "hurwitz.json")
    assert code == 2


def test_census_outputs(capsys, tmp_path, monkeypatch):
    code, out, _ = run(capsys, "census", "--dim", 3, "--stdout")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 7 and lines[0].split(",") == C.CSV_FIELDS
    monkeypatch.setenv(cli.ENV_OUT, str(tmp_path))
    code, summary, _ = run(capsys, "census", "--dim", 3)
    assert code == 0 and json.loads(summary)["semi_only"] == 1
    assert (tmp_path / "census_dim3.csv").read_text() == out


def test_verify_tables_dim5(capsys):
    code, out, _ = run(capsys, "verify-tables", "--dim", "5")
    assert code == 0
    rep = json.loads(out)[0]
    assert rep["ok"] and rep["holes_ok"]


def test_verify_tables_dim4_reports_misprints(capsys):
    # two shipped rows are not dagger-stable, so the comparison is a mismatch
    code, out, err = run(capsys, "verify-tables", "--dim", "4")
    assert code == 1
    rep = json.loads(out)[0]
    assert len(rep["invalid_golden"]) == 2 and not rep["missing"] and not rep["extra"]
    assert json.loads(err)["error"] == "mismatch"


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "semieuclid", "analyze", str(ORDERS / "eisenstein.json")],
                       capture_output=True, text=True, check=False)
    assert p.returncode == 0 and json.loads(p.stdout)["classification"] == "euclidean"
