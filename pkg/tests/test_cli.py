import csv
import io
import re

import numpy as np
import pytest

from qcopula.cli import main
from qcopula.cli.io import grid_from_csv, grid_to_csv, read_pgm
from qcopula.copula import ArchimedeanParams, discretize_cdf


def rows(path):
    return list(csv.DictReader(io.StringIO(path.read_text())))


def test_build_qasm_single_rotation(tmp_path):
    out = tmp_path / "b11.qasm"
    assert main(["build", "b11-pure", "--alpha", "1/3", "--k", "1", "--format", "qasm", "-o", str(out)]) == 0
    angles = re.findall(r"^ry\(([^)]*)\)", out.read_text(), re.M)
    assert len(angles) == 1 and float(angles[0]) == pytest.approx(1.23096, abs=1e-5)


def test_build_m2_structure(tmp_path):
    out = tmp_path / "m2.qasm"
    assert main(["build", "m2", "--k", "2", "--format", "qasm", "-o", str(out)]) == 0
    ops = [line.split()[0] for line in out.read_text().splitlines() if not line.startswith(("//", "OPENQASM", "include", "qreg"))]
    assert sorted(ops) == ["cx", "cx", "h", "h"]


def test_build_then_simulate_circuit_file(tmp_path):
    circ = tmp_path / "c.json"
    assert main(["build", "mb11-pure3", "--lambda", "1/2,1/4,1/8,1/16", "--k", "2", "-o", str(circ)]) == 0
    grid = tmp_path / "g.csv"
    assert main(["simulate", "--circuit", str(circ), "-o", str(grid)]) == 0
    report = tmp_path / "r.txt"
    assert main(["verify", "--grid", str(grid), "-o", str(report)]) == 0
    assert report.read_text().rstrip().endswith("RESULT PASS")
    assert main(["verify", "mb11-pure3", "--lambda", "1/2,1/4,1/8,1/16", "--k", "2", "-o", str(report)]) == 0


def test_simulate_b11_mixed(tmp_path):
    out, pgm = tmp_path / "b.csv", tmp_path / "b.pgm"
    assert main(["simulate", "b11-mixed", "--alpha", "1/2", "--k", "2", "-o", str(out), "--pgm", str(pgm)]) == 0
    cells = grid_from_csv(out.read_text())
    assert cells.shape == (4, 4)
    assert np.allclose(np.diag(cells), 0.15625, atol=1e-12)
    assert abs(cells.sum() - 1) <= 1e-9
    assert read_pgm(pgm.read_bytes()).shape == (4, 4)


def test_simulate_independence_three_levels(tmp_path):
    out = tmp_path / "pi.csv"
    assert main(["simulate", "pi", "--k", "3", "-o", str(out)]) == 0
    r = rows(out)
    assert len(r) == 64
    assert all(float(x["probability"]) == pytest.approx(1 / 64) for x in r)


def test_sample_is_seeded(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert main(["sample", "m2", "--k", "2", "--shots", "500", "--seed", "3", "-o", str(p)]) == 0
    assert a.read_text() == b.read_text()
    r = rows(a)
    assert sum(int(x["count"]) for x in r) == 500
    assert all(x["x1"] == x["x2"] for x in r)


@pytest.mark.parametrize(
    "argv",
    [
        ["benchmark4", "--k", "2"],
        ["generic-gumbel", "--theta", "2", "--k", "3"],
        ["generic-clayton", "--theta", "2", "--k", "2"],
        ["mb11-mixed", "--weights", "111=1/2,112=1/2", "--k", "3"],
        ["frechet3-pure", "--weights", "1-11=1/2,123=1/2", "--k", "2"],
        ["fabric", "--p", "0.9,0.6;0.3,0.8", "--k", "2"],
        ["canonical", "--partition", "1-12", "--k", "2"],
        ["mn-pin", "--alpha", "1/3"],
    ],
)
def test_verify_passes(tmp_path, argv):
    out = tmp_path / "r.txt"
    assert main(["verify", *argv, "-o", str(out)]) == 0
    text = out.read_text()
    assert "FAIL" not in text and text.rstrip().endswith("RESULT PASS")


def test_verify_reports_benchmark_controls_and_synthesizers(tmp_path):
    out = tmp_path / "r.txt"
    main(["verify", "benchmark4", "-o", str(out)])
    assert "(0.333333, 0.333333, 0.333333, 0.000000)" in out.read_text()
    main(["verify", "generic-gumbel", "--k", "3", "-o", str(out)])
    assert "21 (formula 21)" in out.read_text()


def test_verify_rejects_corrupted_grid(tmp_path):
    cells = discretize_cdf(ArchimedeanParams("gumbel", 2.0).cdf, 2).cells.copy()
    cells[0, 0] += 0.1
    cells[0, 1] -= 0.1
    bad = tmp_path / "bad.csv"
    bad.write_text(grid_to_csv(cells))
    out = tmp_path / "r.txt"
    assert main(["verify", "--grid", str(bad), "-o", str(out)]) == 1
    assert "FAIL margins" in out.read_text()


def test_var_sweep(tmp_path):
    out = tmp_path / "var.csv"
    assert main(["var", "--alpha", "1/2", "--k", "2", "--m", "7", "--levels", "0.25", "-o", str(out)]) == 0
    text = out.read_text()
    r = [x for x in rows(out) if not x["v"].startswith("#")]
    assert len(r) == 16
    assert all(x["within"] == "1" for x in r)
    assert "estimate=4" in text


def test_cqep_truth_column(tmp_path):
    out = tmp_path / "cqep.csv"
    assert main(["cqep", "--alpha", "1/2", "--k", "2", "--m", "5", "-o", str(out)]) == 0
    r = rows(out)
    assert [float(x["true"]) for x in r] == pytest.approx([1, 0.875, 0.75, 0.625], abs=1e-12)
    assert all(x["within"] == "1" for x in r)


def test_coarse_readout_uses_five_grid_values(tmp_path):
    out = tmp_path / "var.csv"
    assert main(["var", "--m", "3", "-o", str(out)]) == 0
    grid = {round(np.sin(np.pi * y / 8) ** 2, 12) for y in range(5)}
    assert {round(float(x["estimate"]), 12) for x in rows(out)} <= grid


def test_unitary_raster(tmp_path):
    out = tmp_path / "u.pgm"
    assert main(["unitary", "canonical", "--partition", "123", "--k", "1", "-o", str(out)]) == 0
    img = read_pgm(out.read_bytes())
    assert img.shape == (8, 8)
    # independence circuit is all Hadamards: every entry has the same magnitude
    assert len({abs(int(v) - 127.5) for v in img.ravel()}) == 1
    assert main(["unitary", "m2", "--k", "1", "-o", str(out)]) == 0


def test_bad_arguments_exit_with_error(tmp_path, capsys):
    assert main(["build", "b11-pure", "--alpha", "2"]) == 2
    assert main(["build", "mb11-pure3", "--k", "2"]) == 2
    assert main(["simulate", "--circuit", str(tmp_path / "missing.json")]) == 2
    assert "error:" in capsys.readouterr().err
    with pytest.raises(SystemExit):
        main(["build", "nonsense"])
