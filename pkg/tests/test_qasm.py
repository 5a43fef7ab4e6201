import json
import math
import re

import numpy as np
import pytest
from conftest import builder_catalogue
from hypothesis import given, settings
from hypothesis import strategies as st

from qcopula.circuits import build_b11_mixed, build_b11_pure
from qcopula.cli.io import (
    circuit_from_json,
    circuit_to_json,
    counts_to_csv,
    density_pgm,
    grid_from_csv,
    grid_to_csv,
    read_pgm,
    unitary_pgm,
)
from qcopula.cli.qasm import QasmError, eval_angle, from_qasm, to_qasm
from qcopula.qsim import Circuit, Layout, circuit_unitary, controlled, grid_distribution, h, phase, ry, run, x, z
from qcopula.riskq import LossModel, attach, build_comparator, estimation_circuit

QASM_GATES = {"x", "h", "z", "ry", "u1", "cx", "ccx", "swap", "cu1"}


@pytest.mark.parametrize("k", [1, 2])
def test_every_builder_round_trips(k):
    for name, circ in builder_catalogue(k).items():
        text = to_qasm(circ)
        ops = {line.split()[0].split("(")[0] for line in text.splitlines()[5:]}
        assert ops <= QASM_GATES, name
        back = from_qasm(text)
        assert back.layout.variables == circ.layout.variables, name
        a = grid_distribution(run(circ), circ.layout)
        b = grid_distribution(run(back), back.layout)
        assert np.abs(a - b).max() <= 1e-9, name


def test_export_preserves_the_unitary():
    for circ in (build_b11_mixed(0.5, 2), builder_catalogue(1)["mn-pin"]):
        back = from_qasm(to_qasm(circ))
        assert back.num_qubits == circ.num_qubits
        assert np.allclose(circuit_unitary(back), circuit_unitary(circ), atol=1e-10)


def test_amplitude_estimation_circuit_exports_exactly():
    b11 = build_b11_pure(0.5, 1)
    prep = attach(b11, build_comparator(LossModel((4, 2), 1), 1, b11.layout))
    est, _ = estimation_circuit(prep, prep.num_qubits - 1, 3)
    back = from_qasm(to_qasm(est))
    assert np.allclose(run(back).amplitudes[: 2**est.num_qubits], run(est).amplitudes, atol=1e-9)


def test_wide_controlled_z_borrows_a_scratch_wire():
    # every wire is a control or the target, so a scratch qubit is appended
    layout = Layout(((0, 1), (2, 3)), ())
    c = Circuit(4, [h(0), h(1), h(2), h(3), controlled([(0, 1), (1, 1), (2, 1)], [z(3)])], layout)
    text = to_qasm(c)
    assert "qreg q[5];" in text
    back = from_qasm(text)
    assert back.layout.controls == (4,)
    assert np.allclose(grid_distribution(run(back), back.layout), grid_distribution(run(c), layout))
    want = run(c).amplitudes
    got = run(back).amplitudes.reshape(2, 16)
    assert np.allclose(got[0], want, atol=1e-12)
    assert np.allclose(got[1], 0, atol=1e-12)


def test_negative_controls_and_phases_decompose():
    c = Circuit(4, [h(0), h(3), controlled([(0, 0), (3, 1)], [ry(1, 0.9), phase(2, 0.4), x(2), h(1)])])
    back = from_qasm(to_qasm(c))
    assert np.allclose(circuit_unitary(back), circuit_unitary(c), atol=1e-10)


def test_b11_third_has_single_rotation():
    text = to_qasm(build_b11_pure("1/3", 1))
    angles = re.findall(r"ry\(([^)]*)\)", text)
    assert len(angles) == 1
    assert float(angles[0]) == pytest.approx(1.23096, abs=1e-5)


def test_angle_expressions():
    assert eval_angle("pi/2") == pytest.approx(math.pi / 2)
    assert eval_angle("-3*pi/4") == pytest.approx(-3 * math.pi / 4)
    assert eval_angle("0.125") == 0.125
    for bad in ("__import__('os')", "pi**2", "sin(1)", "1 +"):
        with pytest.raises(QasmError):
            eval_angle(bad)


def test_parse_errors():
    with pytest.raises(QasmError):
        from_qasm("OPENQASM 2.0;\nh q[0];\n")
    with pytest.raises(QasmError):
        from_qasm("qreg q[2];\nrz(0.1) q[0];\n")
    with pytest.raises(QasmError):
        from_qasm("qreg q[2];\ncx q[0];\n")
    with pytest.raises(QasmError):
        from_qasm("qreg q[2];\nry q[0];\n")
    c = from_qasm("OPENQASM 2.0;\nqreg q[2];\ncreg c[2];\nh q[0]; cx q[0],q[1]; // bell\n")
    assert np.allclose(run(c).probabilities(), [0.5, 0, 0, 0.5])


@pytest.mark.parametrize("k", [1, 2])
def test_json_round_trip_is_bit_exact(k):
    for name, circ in builder_catalogue(k).items():
        text = circuit_to_json(circ)
        assert json.loads(text)["schema"] == "qcopula.circuit/1"
        back = circuit_from_json(text)
        assert back == circ, name
        assert np.array_equal(run(back).amplitudes, run(circ).amplitudes)


@settings(max_examples=50, deadline=None)
@given(st.floats(-10, 10, allow_nan=False))
def test_json_angles_survive_exactly(theta):
    c = Circuit(2, [ry(0, theta), controlled([(0, 0)], [phase(1, theta / 3)])])
    back = circuit_from_json(circuit_to_json(c))
    assert back.gates[0].angle == theta
    assert back.gates[1].body[0].angle == theta / 3


def test_json_rejects_other_schema():
    with pytest.raises(ValueError):
        circuit_from_json('{"schema": "other", "num_qubits": 1, "gates": []}')


def test_grid_csv():
    circ = builder_catalogue(2)["mb11-pure3"]
    cells = grid_distribution(run(circ), circ.layout)
    text = grid_to_csv(cells)
    rows = text.split("\r\n")
    assert rows[0] == "x1,x2,x3,probability"
    assert len([r for r in rows[1:] if r]) == 64
    back = grid_from_csv(text)
    assert np.array_equal(back, cells)
    assert abs(back.sum() - 1) <= 1e-9


def test_counts_csv():
    text = counts_to_csv({0b0110: 3, 0: 1}, 2, 2)
    assert text.splitlines()[0].startswith("x1,x2")
    assert sum(int(r.split(",")[-1]) for r in text.splitlines()[1:]) == 4


def test_pgm_rasters():
    pair = np.eye(4) / 4
    img = read_pgm(density_pgm(pair))
    assert img.shape == (4, 4)
    assert img.max() == 255 and img[0, 1] == 0
    assert density_pgm(pair).startswith(b"P5")
    u = circuit_unitary(Circuit(2, []))
    raster = read_pgm(unitary_pgm(u))
    assert np.array_equal(np.diag(raster), [255] * 4)
    assert set(raster[~np.eye(4, dtype=bool)]) == {128}
