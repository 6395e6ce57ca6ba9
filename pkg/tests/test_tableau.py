"""Tableau simulation cross-checked against the dense oracle."""

import numpy as np
import pytest

from topocluster.dense import DenseState, state_from_generators
from topocluster.pauli import PauliString
from topocluster.tableau import (
    CliffordGate,
    MeasurementContradictionError,
    RankDeficiencyError,
    StabilizerTableau,
)

from conftest import random_pauli

GATE_POOL = ["H", "S", "SDG", "X", "Y", "Z", "SX", "SXDG", "SY", "SYDG", "CZ", "CX"]


def random_clifford_pair(rng, n, depth):
    """Matching tableau and dense states after a random Clifford circuit."""
    tab = StabilizerTableau.zero_state(n)
    dn = DenseState(n)
    for _ in range(depth):
        g = GATE_POOL[rng.integers(len(GATE_POOL))]
        if g in ("CZ", "CX"):
            if n < 2:
                continue
            a, b = rng.choice(n, size=2, replace=False)
            tab.apply_gate((g, int(a), int(b)))
            dn.apply_gate(g, int(a), int(b))
        else:
            q = int(rng.integers(n))
            tab.apply_gate((g, q))
            dn.apply_gate(g, q)
    return tab, dn


def test_cz_on_two_plus():
    tab = StabilizerTableau.plus_state(2)
    tab.apply_gate(("CZ", 0, 1))
    labels = sorted(g.to_label() for g in tab.canonical_form().generators())
    assert labels == ["+XZ", "+ZX"]


def test_h_on_zero():
    tab = StabilizerTableau.zero_state(1)
    tab.apply_gate(("H", 0))
    assert tab.generator(0).to_label() == "+X"


def test_s_on_x_gives_y_phase_exact():
    tab = StabilizerTableau.plus_state(1)
    tab.apply_gate(("S", 0))
    assert tab.generator(0).to_label() == "+Y"
    dn = DenseState.from_circuit(1, [("H", 0), ("S", 0)])
    assert abs(dn.expectation(tab.generator(0)) - 1) < 1e-12


def test_gate_kind_validation():
    with pytest.raises(ValueError):
        CliffordGate("CZ", (1,))
    with pytest.raises(ValueError):
        CliffordGate("CZ", (1, 1))
    tab = StabilizerTableau.zero_state(1)
    with pytest.raises(IndexError):
        tab.apply_gate(("H", 3))


def test_canonical_duplicate_raises():
    gens = [PauliString.from_label("XX"), PauliString.from_label("XX")]
    with pytest.raises(RankDeficiencyError):
        StabilizerTableau.from_generators(gens).canonical_form()


def test_canonical_eliminates():
    gens = [PauliString.from_label("ZI"), PauliString.from_label("ZZ")]
    can = StabilizerTableau.from_generators(gens).canonical_form()
    assert [g.to_label() for g in can.generators()] == ["+ZI", "+IZ"]


def test_canonical_idempotent_and_order_independent(rng):
    for _ in range(40):
        n = int(rng.integers(2, 7))
        tab, _ = random_clifford_pair(rng, n, 20)
        can = tab.canonical_form()
        assert can.same_group(tab)
        perm = rng.permutation(n if False else tab.num_generators)
        shuffled = StabilizerTableau.from_generators([tab.generator(int(i)) for i in perm])
        can2 = shuffled.canonical_form()
        assert np.array_equal(can.xs, can2.xs)
        assert np.array_equal(can.zs, can2.zs)
        assert np.array_equal(can.phases, can2.phases)


def test_measure_eigenstate_deterministic():
    tab = StabilizerTableau.plus_state(1)
    out = tab.measure_pauli(PauliString.from_label("X"))
    assert out == 1
    assert tab.generator(0).to_label() == "+X"


def test_measure_forced_contradiction():
    tab = StabilizerTableau.plus_state(1)
    with pytest.raises(MeasurementContradictionError):
        tab.measure_pauli(PauliString.from_label("X"), forced=-1)


def test_measure_random_unbiased():
    ups = 0
    for seed in range(400):
        tab = StabilizerTableau.plus_state(1)
        out = tab.measure_pauli(PauliString.from_label("Z"), rng=np.random.default_rng(seed))
        label = tab.generator(0).to_label()
        assert label == ("+Z" if out == 1 else "-Z")
        ups += out == 1
    assert abs(ups / 400 - 0.5) < 0.08


def test_contains():
    tab = StabilizerTableau.from_generators([PauliString.from_label("Z")])
    assert tab.contains(PauliString.from_label("X")) is None
    assert tab.contains(PauliString.from_label("Z")) == 1
    assert tab.contains(PauliString.from_label("-Z")) == -1


def test_measure_pauli_rejects_identity_and_nonhermitian():
    tab = StabilizerTableau.plus_state(2)
    with pytest.raises(ValueError):
        tab.measure_pauli(PauliString.identity(2))
    with pytest.raises(ValueError):
        tab.measure_pauli(PauliString.from_label("+iYI"))


def test_apply_pauli_flips_signs():
    tab = StabilizerTableau.plus_state(2)
    tab.apply_pauli(PauliString.from_label("ZI"))
    assert tab.generator(0).to_label() == "-XI"
    assert tab.generator(1).to_label() == "+IX"


def test_circuit_equivalence_with_dense(rng):
    # Tableau and dense simulation agree on all generator expectations.
    for _ in range(150):
        n = int(rng.integers(1, 8))
        tab, dn = random_clifford_pair(rng, n, 30)
        for g in tab.generators():
            assert abs(dn.expectation(g) - 1) < 1e-10


def test_measurement_soundness_against_dense(rng):
    for _ in range(80):
        n = int(rng.integers(1, 6))
        tab, dn = random_clifford_pair(rng, n, 20)
        for _ in range(3):
            p = random_pauli(rng, n)
            if p.is_identity:
                continue
            if not p.is_hermitian:
                p = p.times_i(1)
            out = tab.measure_pauli(p, rng=rng)
            _, dn = dn.measure_pauli(p, forced=out)
            fid = dn.fidelity(state_from_generators(n, tab.generators()))
            assert fid > 1 - 1e-10


def test_clifford_preserves_commutation_and_rank(rng):
    for _ in range(40):
        n = int(rng.integers(2, 7))
        tab, _ = random_clifford_pair(rng, n, 25)
        assert tab.validate() == []


def test_factor_out_product_qubit():
    tab = StabilizerTableau.plus_state(3)
    tab.apply_gate(("CZ", 0, 1))
    out = tab.measure_pauli(PauliString.single(3, 2, "Z"), rng=np.random.default_rng(1))
    reduced = tab.factor_out([2])
    assert reduced.n == 2
    assert reduced.same_group(
        StabilizerTableau.from_generators(
            [PauliString.from_label("XZ"), PauliString.from_label("ZX")]
        )
    )


def test_factor_out_entangled_raises():
    tab = StabilizerTableau.plus_state(2)
    tab.apply_gate(("CZ", 0, 1))
    with pytest.raises(ValueError):
        tab.factor_out([0])


def test_subgroup_supported_on():
    tab = StabilizerTableau.plus_state(3)
    tab.apply_gate(("CZ", 0, 1))
    sub = tab.subgroup_supported_on([2])
    assert [p.to_label() for p in sub] == ["+IIX"]
    sub01 = tab.subgroup_supported_on([0, 1])
    can = StabilizerTableau.from_generators(
        [p.restricted([0, 1]) for p in sub01], n=2
    ).canonical_form()
    assert can.same_group(
        StabilizerTableau.from_generators(
            [PauliString.from_label("XZ"), PauliString.from_label("ZX")]
        )
    )
