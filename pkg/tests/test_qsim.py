import math
from functools import reduce

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcopula.qsim import (
    Circuit,
    Gate,
    Layout,
    SimulationError,
    Statevector,
    circuit_unitary,
    cnot,
    controlled,
    distribution,
    grid_distribution,
    h,
    msb_distribution,
    phase,
    run,
    ry,
    sample,
    swap,
    x,
    z,
)

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]])
H = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
Z = np.diag([1, -1])
P0 = np.diag([1, 0])
P1 = np.diag([0, 1])


def RY(t):
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -s], [s, c]])


def embed(ops: dict, m: int) -> np.ndarray:
    """Dense operator with ``ops[q]`` on qubit q (little-endian basis index)."""
    mats = [ops.get(q, I2) for q in reversed(range(m))]
    return reduce(np.kron, mats)


def test_single_qubit_gates_match_dense_matrices():
    m = 3
    for gate, mat in ((x(1), X), (h(2), H), (z(0), Z), (ry(1, 0.7), RY(0.7)), (phase(2, 0.3), np.diag([1, np.exp(0.3j)]))):
        u = circuit_unitary(Circuit(m, [gate]))
        assert np.allclose(u, embed({gate.targets[0]: mat}, m))


def test_cnot_and_swap_dense():
    m = 3
    u = circuit_unitary(Circuit(m, [cnot(0, 2)]))
    want = embed({0: P0}, m) + embed({0: P1, 2: X}, m)
    assert np.allclose(u, want)
    u = circuit_unitary(Circuit(2, [swap(0, 1)]))
    assert np.allclose(u, np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]))


def test_controlled_block_with_negative_control():
    m = 3
    g = controlled([(0, 0), (2, 1)], [h(1), ry(1, 0.4)])
    body = RY(0.4) @ H
    proj = embed({0: P0, 2: P1}, m)
    want = proj @ embed({1: body}, m) + (np.eye(8) - proj)
    assert np.allclose(circuit_unitary(Circuit(m, [g])), want)


def test_nested_blocks():
    g = controlled([(0, 1)], [controlled([(1, 1)], [x(2)])])
    u = circuit_unitary(Circuit(3, [g]))
    toffoli = np.eye(8)
    toffoli[[3, 7]] = toffoli[[7, 3]]
    assert np.allclose(u, toffoli)


def test_bell_state():
    st_ = run(Circuit(2, [h(0), cnot(0, 1)]))
    assert np.allclose(st_.probabilities(), [0.5, 0, 0, 0.5])


def test_little_endian_basis_and_msb_reading():
    state = run(Circuit(3, [x(0)]))
    assert state.probabilities()[1] == pytest.approx(1.0)
    # reading qubits (0, 1, 2) MSB-first puts qubit 0 on top
    assert msb_distribution(state, [0, 1, 2])[4] == pytest.approx(1.0)
    d = distribution(state, [0])
    assert d[1] == pytest.approx(1.0)


def test_grid_distribution_uses_layout():
    layout = Layout(((2, 0), (1, 3)), (4,))
    c = Circuit(5, [x(2), x(3)], layout)
    grid = grid_distribution(run(c), layout)
    assert grid.shape == (4, 4)
    assert grid[2, 1] == pytest.approx(1.0)


def test_validation_errors():
    with pytest.raises(SimulationError):
        Gate("cz", (0,))
    with pytest.raises(SimulationError):
        ry(0, float("nan"))
    with pytest.raises(SimulationError):
        cnot(1, 1)
    with pytest.raises(SimulationError):
        controlled([(0, 1)], [x(0)])
    with pytest.raises(SimulationError):
        controlled([(0, 2)], [x(1)])
    with pytest.raises(SimulationError):
        Circuit(2, [x(2)])
    with pytest.raises(SimulationError):
        Circuit(2, [], Layout(((0,),), ()))
    with pytest.raises(SimulationError):
        circuit_unitary(Circuit(15, []))


def test_sampling_is_reproducible_and_consistent():
    s = run(Circuit(2, [h(0), h(1)]))
    a = sample(s, 4000, seed=11)
    assert a == sample(s, 4000, seed=11)
    assert sum(a.values()) == 4000
    assert all(abs(c / 4000 - 0.25) < 0.04 for c in a.values())


def test_statevector_checks_length():
    with pytest.raises(SimulationError):
        Statevector(2, np.array([1.0, 0.0]))
    assert Statevector.basis(2, 3).probabilities()[3] == 1.0


_gate_strategy = st.one_of(
    st.builds(x, st.integers(0, 3)),
    st.builds(h, st.integers(0, 3)),
    st.builds(ry, st.integers(0, 3), st.floats(-7, 7)),
    st.builds(phase, st.integers(0, 3), st.floats(-7, 7)),
    st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(lambda t: t[0] != t[1]).map(lambda t: cnot(*t)),
    st.tuples(st.integers(0, 3), st.integers(0, 3), st.floats(-3, 3), st.integers(0, 1))
    .filter(lambda t: t[0] != t[1])
    .map(lambda t: controlled([(t[0], t[3])], [ry(t[1], t[2]), h(t[1])])),
)


@settings(max_examples=60, deadline=None)
@given(st.lists(_gate_strategy, max_size=12))
def test_random_circuits_are_unitary_and_invertible(gates):
    c = Circuit(4, gates)
    u = circuit_unitary(c)
    assert np.allclose(u.conj().T @ u, np.eye(16), atol=1e-12)
    back = run(c.inverse(), run(c))
    assert abs(back.amplitudes[0]) == pytest.approx(1.0, abs=1e-12)
