import json

import numpy as np
import pytest

from duforge.cli import main
from duforge.errors import MatrixFileError
from duforge.matrix_io import format_matrix, parse_matrix, read_matrix, write_matrix
from duforge.measures import measure
from duforge.sampling import RngSeed, cue_sample
from duforge.tensor_core import unitarity_defect


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_matrix_round_trip_is_exact(tmp_path):
    U = cue_sample(9, RngSeed(4))
    write_matrix(tmp_path / "u.mat", U, 3, kind="cue")
    V, hdr = read_matrix(tmp_path / "u.mat")
    assert np.array_equal(U, V)
    assert hdr == {"version": 1, "d": 3, "rows": 9, "cols": 9, "kind": "cue"}
    a, b = measure(U), measure(V)
    assert abs(a.E_U - b.E_U) < 1e-12 and abs(a.ep - b.ep) < 1e-12


@pytest.mark.parametrize("text", [
    "",
    "hello\n",
    "%duforge-matrix version=2 d=1 rows=1 cols=1 kind=x\n1 0\n",
    "%duforge-matrix version=1 d=1 rows=2 cols=1 kind=x\n1 0\n",
    "%duforge-matrix version=1 d=1 rows=1 cols=1 kind=x\n1\n",
    "%duforge-matrix version=1 d=1 rows=1 cols=1 kind=x\n1 abc\n",
    "%duforge-matrix version=1 d=1 rows=1 cols=1 kind=x\nnan 0\n",
    "%duforge-matrix version=1 rows=1 cols=1\n1 0\n",
])
def test_malformed_files(text):
    with pytest.raises(MatrixFileError):
        parse_matrix(text)


def test_bad_kind_tag():
    with pytest.raises(MatrixFileError):
        format_matrix(np.eye(4), kind="two words")


def test_sample_is_deterministic(tmp_path, capsys):
    code, *_ = run(capsys, "sample", "--d", 2, "--seed", 7, "--out", tmp_path / "a.mat")
    assert code == 0
    run(capsys, "sample", "--d", 2, "--seed", 7, "--out", tmp_path / "b.mat")
    assert (tmp_path / "a.mat").read_text() == (tmp_path / "b.mat").read_text()
    U, _ = read_matrix(tmp_path / "a.mat")
    assert unitarity_defect(U) < 1e-12


def test_sample_many_files(tmp_path, capsys):
    code, out, _ = run(capsys, "sample", "--d", 3, "--count", 3, "--out", tmp_path / "c.mat")
    assert code == 0 and len(json.loads(out)["written"]) == 3


def test_measure_reference_gates(capsys):
    _, out, _ = run(capsys, "measure", "gate:swap")
    rec = json.loads(out)
    assert rec["E_U"] == pytest.approx(0.75, abs=1e-12) and abs(rec["E_US"]) < 1e-12
    assert abs(rec["ep"]) < 1e-12 and rec["class"] == "dual"
    _, out, _ = run(capsys, "measure", "gate:cnot")
    assert abs(json.loads(out)["ep"] - 2 / 9) < 1e-12
    _, out, _ = run(capsys, "measure", "gate:ols:3")
    assert abs(json.loads(out)["ep"] - 0.5) < 1e-12


def test_iterate_outputs(tmp_path, capsys):
    run(capsys, "sample", "--d", 2, "--seed", 1, "--out", tmp_path / "u.mat")
    code, out, _ = run(capsys, "iterate", tmp_path / "u.mat", "--map", "MR", "--n", 50,
                       "--trace-out", tmp_path / "t.csv", "--final-out", tmp_path / "f.mat")
    assert code == 0
    assert json.loads(out)["E_U"] >= 0.75 - 1e-6
    F, hdr = read_matrix(tmp_path / "f.mat")
    assert hdr["kind"] == "M_R" and unitarity_defect(F) < 1e-10


def test_iterate_swap_has_zero_distances(tmp_path, capsys):
    run(capsys, "iterate", "gate:swap:3", "--n", 5, "--eps", 1e-300, "--trace-out", tmp_path / "t.csv")
    rows = (tmp_path / "t.csv").read_text().splitlines()[1:]
    assert rows and all(float(r.split(",")[5]) == 0.0 for r in rows)


def test_cartan_commands(capsys):
    _, out, _ = run(capsys, "cartan", "gate:identity")
    assert [float(x) for x in out.split()] == pytest.approx([0, 0, 0], abs=1e-12)
    _, out, _ = run(capsys, "cartan", "gate:swap")
    assert [float(x) for x in out.split()] == pytest.approx([np.pi / 4] * 3, abs=1e-12)
    _, out, _ = run(capsys, "cartan", "gate:cnot", "--n", 3)
    assert out.splitlines()[0] == "n,c1,c2,c3" and len(out.splitlines()) == 5


def test_gates_list_and_export(tmp_path, capsys):
    _, out, _ = run(capsys, "gates", "list")
    assert "ols" in out.split()
    code, out, _ = run(capsys, "gates", "export", "ols", "--d", 4, "--out", tmp_path / "o.mat")
    assert code == 0 and json.loads(out)["class"] == "two_unitary"
    assert read_matrix(tmp_path / "o.mat")[0].shape == (16, 16)


def test_ame_command(capsys):
    _, out, _ = run(capsys, "ame", "gate:ols:3")
    assert json.loads(out)["ame"] is True
    _, out, _ = run(capsys, "ame", "gate:swap:3")
    assert json.loads(out)["ame"] is False


def test_ensemble_command(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("d = 3\nmap = MTR\nn_seeds = 4\nn_iter = 20\nseed = 5\n")
    code, out, _ = run(capsys, "ensemble", cfg, "--seed", 0, "--out", tmp_path / "r.json",
                       "--hist-out", tmp_path / "h.csv", "--dump-dir", tmp_path / "dump")
    assert code == 0
    rep = json.loads((tmp_path / "r.json").read_text())
    assert rep["config"]["seed"] == 0 and rep["config"]["map"] == "M_TR"
    assert abs(sum(json.loads(out)["fractions"].values()) - 1) < 1e-12


def test_states_command(tmp_path, capsys):
    code, out, _ = run(capsys, "states", "gate:ols:3", "--samples", 2000, "--out", tmp_path / "s.csv")
    assert code == 0 and json.loads(out)["samples"] == 2000


@pytest.mark.parametrize("argv", [
    ["measure", "missing.mat"],
    ["cartan", "gate:swap:3"],
    ["measure", "gate:cnot:3"],
    ["ensemble", "--d", "9", "--n-seeds", "1"],
])
def test_errors_exit_nonzero_with_json_line(argv, capsys):
    code, out, err = run(capsys, *argv)
    assert code != 0
    msg = json.loads(err.strip())
    assert set(msg) == {"error", "message"}
