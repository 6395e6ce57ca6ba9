"""Pauli algebra against the dense 2^n oracle."""

import itertools

import numpy as np
import pytest

from topocluster.dense import _SQ_GATES, pauli_matrix
from topocluster.pauli import LocalClifford, PauliString, SizeMismatchError

from conftest import random_pauli


def test_single_qubit_products():
    x = PauliString.single(1, 0, "X")
    z = PauliString.single(1, 0, "Z")
    assert (x * z).to_label() == "-iY"
    assert (z * x).to_label() == "+iY"
    y = PauliString.single(1, 0, "Y")
    assert (x * y).to_label() == "+iZ"


def test_pauli_involution():
    plaquette = PauliString.from_label("ZZZZ")
    assert (plaquette * plaquette) == PauliString.identity(4)


def test_label_round_trip():
    rng = np.random.default_rng(3)
    for _ in range(500):
        n = int(rng.integers(1, 9))
        p = random_pauli(rng, n)
        assert PauliString.from_label(p.to_label()) == p
    assert PauliString.from_label("-iYXZI").to_label() == "-iYXZI"
    assert PauliString.from_label("XY").to_label() == "+XY"


def test_label_rejects_garbage():
    with pytest.raises(ValueError):
        PauliString.from_label("+iQX")
    with pytest.raises(ValueError):
        PauliString.from_label("")


def test_size_mismatch():
    with pytest.raises(SizeMismatchError):
        PauliString.identity(2) * PauliString.identity(3)


def test_multiply_matches_dense_oracle():
    rng = np.random.default_rng(7)
    for _ in range(800):
        n = int(rng.integers(1, 6))
        a, b = random_pauli(rng, n), random_pauli(rng, n)
        assert np.allclose(pauli_matrix(a * b), pauli_matrix(a) @ pauli_matrix(b))


def test_commutation_matches_product_order():
    rng = np.random.default_rng(9)
    for _ in range(400):
        n = int(rng.integers(1, 7))
        a, b = random_pauli(rng, n), random_pauli(rng, n)
        assert a.commutes_with(b) == ((a * b) == (b * a))


def test_hermitian_and_sign():
    assert PauliString.from_label("+Y").is_hermitian
    assert not PauliString.from_label("+iY").is_hermitian
    assert PauliString.from_label("-XZ").sign == -1
    assert PauliString.from_label("-iX").sign == -1j


def test_dagger():
    rng = np.random.default_rng(11)
    for _ in range(200):
        p = random_pauli(rng, int(rng.integers(1, 5)))
        assert np.allclose(pauli_matrix(p.dagger()), pauli_matrix(p).conj().T)


def test_embedded_and_restricted():
    p = PauliString.from_label("XZ")
    q = p.embedded(4, {0: 2, 1: 0})
    assert q.to_label() == "+ZIXI"
    assert q.restricted([2, 0]) == p
    with pytest.raises(ValueError):
        q.restricted([0, 1])


class TestLocalClifford:
    def test_images_match_dense(self):
        names = ["I", "X", "Y", "Z", "H", "S", "SDG", "SX", "SXDG", "SY", "SYDG"]
        for name in names:
            u = _SQ_GATES[name]
            lc = LocalClifford.named(name)
            for letter, (xb, zb) in (("X", (1, 0)), ("Z", (0, 1)), ("Y", (1, 1))):
                img = lc.conjugate_one(xb, zb, xb & zb)
                dense_img = u @ _SQ_GATES[letter] @ u.conj().T
                assert np.allclose(pauli_matrix(img), dense_img), (name, letter)

    def test_compose_order(self):
        names = ["X", "H", "S", "SY", "SXDG"]
        for n1, n2 in itertools.product(names, repeat=2):
            lc = LocalClifford.named(n1).then(LocalClifford.named(n2))
            u = _SQ_GATES[n2] @ _SQ_GATES[n1]
            img = lc.conjugate_one(1, 0)
            assert np.allclose(pauli_matrix(img), u @ _SQ_GATES["X"] @ u.conj().T)

    def test_inverse(self):
        for name in ["H", "S", "SY", "SXDG", "Y"]:
            lc = LocalClifford.named(name)
            assert lc.then(lc.inverse()).is_identity

    def test_pauli_part_split(self):
        names = ["I", "X", "Y", "Z", "H", "S", "SDG", "SX", "SXDG", "SY", "SYDG"]
        for n1, n2 in itertools.product(names, repeat=2):
            lc = LocalClifford.named(n1).then(LocalClifford.named(n2))
            rot, pauli = lc.pauli_part()
            assert pauli.is_pauli
            assert pauli.then(rot) == lc

    def test_gate_words_reconstruct(self):
        from topocluster.pauli import _ALL_LOCALS

        for lc in _ALL_LOCALS:
            word = lc.gate_word()
            rebuilt = LocalClifford.named("I")
            for tok in word.split():
                rebuilt = rebuilt.then(LocalClifford.named(tok))
            assert rebuilt == lc
