"""Dense oracle self-checks."""

import numpy as np
import pytest

from topocluster.dense import DenseState, state_from_generators
from topocluster.pauli import PauliString


def test_cap():
    with pytest.raises(ValueError):
        DenseState(15)


def test_hadamard_plus():
    s = DenseState.from_circuit(1, [("H", 0)])
    assert np.allclose(s.amps, [1 / np.sqrt(2)] * 2)


def test_two_qubit_graph_state():
    s = DenseState.from_circuit(2, [("H", 0), ("H", 1), ("CZ", 0, 1)])
    assert abs(s.expectation(PauliString.from_label("XZ")) - 1) < 1e-12
    assert abs(s.expectation(PauliString.from_label("ZX")) - 1) < 1e-12


def test_triangle_graph_stabilizers():
    gates = [("H", 0), ("H", 1), ("H", 2), ("CZ", 0, 1), ("CZ", 1, 2), ("CZ", 0, 2)]
    s = DenseState.from_circuit(3, gates)
    for label in ("XZZ", "ZXZ", "ZZX"):
        assert abs(s.expectation(PauliString.from_label(label)) - 1) < 1e-10


def test_expectation_plus_x():
    s = DenseState.from_circuit(1, [("H", 0)])
    assert abs(s.expectation(PauliString.from_label("X")) - 1) < 1e-12


def test_measure_z_on_plus_is_unbiased():
    plus_ups = 0
    trials = 1000
    for seed in range(trials):
        s = DenseState.from_circuit(1, [("H", 0)])
        outcome, _ = s.measure_pauli(PauliString.from_label("Z"), rng=np.random.default_rng(seed))
        plus_ups += outcome == 1
    assert abs(plus_ups / trials - 0.5) < 0.05


def test_measure_x_on_plus_deterministic():
    s = DenseState.from_circuit(1, [("H", 0)])
    outcome, post = s.measure_pauli(PauliString.from_label("X"), rng=np.random.default_rng(0))
    assert outcome == 1
    assert post.fidelity(s) > 1 - 1e-12


def test_measure_forced_zero_norm():
    s = DenseState.from_circuit(1, [("H", 0)])
    with pytest.raises(ValueError):
        s.measure_pauli(PauliString.from_label("X"), forced=-1)


def test_fidelity_extremes():
    a = DenseState(2)
    assert a.fidelity(a) == pytest.approx(1.0)
    b = DenseState(2, np.array([0, 1, 0, 0], dtype=complex))
    assert a.fidelity(b) == pytest.approx(0.0)


def test_state_from_generators_is_projective():
    gens = [PauliString.from_label("XX"), PauliString.from_label("ZZ")]
    s = state_from_generators(2, gens)
    for g in gens:
        assert abs(s.expectation(g) - 1) < 1e-10
    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = 1 / np.sqrt(2)
    assert s.fidelity(DenseState(2, bell)) > 1 - 1e-10
