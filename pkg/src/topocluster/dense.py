"""Brute-force dense statevector simulator, the independent test oracle.

Hard-capped at 14 qubits.  Basis index bit q holds the computational state
of qubit q (little-endian), matching the PauliString bit convention.
"""

from __future__ import annotations

import numpy as np

from .pauli import PauliString, SizeMismatchError

MAX_QUBITS = 14

_SQ_GATES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "SDG": np.array([[1, 0], [0, -1j]], dtype=complex),
}
_SQ_GATES["SX"] = (_SQ_GATES["I"] * (1 + 1j) + _SQ_GATES["X"] * (1 - 1j)) / 2
_SQ_GATES["SXDG"] = _SQ_GATES["SX"].conj().T
_SQ_GATES["SYDG"] = (_SQ_GATES["I"] - 1j * _SQ_GATES["Y"]) / np.sqrt(2)
_SQ_GATES["SY"] = _SQ_GATES["SYDG"].conj().T


class DenseState:
    """Normalized 2^n-amplitude state vector."""

    __slots__ = ("n", "amps")

    def __init__(self, n: int, amps: np.ndarray | None = None):
        if n > MAX_QUBITS:
            raise ValueError(f"dense oracle capped at {MAX_QUBITS} qubits, got {n}")
        self.n = n
        if amps is None:
            amps = np.zeros(1 << n, dtype=complex)
            amps[0] = 1.0
        self.amps = np.asarray(amps, dtype=complex)
        if self.amps.shape != (1 << n,):
            raise ValueError("amplitude vector has wrong length")

    def copy(self) -> "DenseState":
        return DenseState(self.n, self.amps.copy())

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    # -- construction -----------------------------------------------------

    @classmethod
    def plus_state(cls, n: int) -> "DenseState":
        amps = np.full(1 << n, 1 / np.sqrt(1 << n), dtype=complex)
        return cls(n, amps)

    @classmethod
    def from_circuit(cls, n: int, gates: list[tuple]) -> "DenseState":
        """Evolve |0...0> by (name, *targets) gate tuples."""
        state = cls(n)
        for gate in gates:
            state.apply_gate(*gate)
        return state

    def apply_gate(self, name: str, *targets: int) -> None:
        if name in _SQ_GATES:
            (q,) = targets
            self._apply_single(_SQ_GATES[name], q)
        elif name == "CZ":
            a, b = targets
            idx = np.arange(1 << self.n)
            mask = ((idx >> a) & 1) & ((idx >> b) & 1)
            self.amps = np.where(mask, -self.amps, self.amps)
        elif name == "CX":
            a, b = targets
            idx = np.arange(1 << self.n)
            flipped = np.where((idx >> a) & 1, idx ^ (1 << b), idx)
            self.amps = self.amps[flipped]
        else:
            raise ValueError(f"unknown gate {name!r}")

    def _apply_single(self, u: np.ndarray, q: int) -> None:
        amps = self.amps.reshape(1 << (self.n - q - 1), 2, 1 << q)
        self.amps = np.einsum("ab,ibj->iaj", u, amps).reshape(-1)

    # -- Pauli action ------------------------------------------------------

    def apply_pauli(self, p: PauliString) -> "DenseState":
        if p.n != self.n:
            raise SizeMismatchError(f"{p.n} != {self.n} qubits")
        idx = np.arange(1 << self.n)
        src = idx ^ p.x
        signs = 1 - 2 * (_parity(src & p.z))
        amps = (1j ** p.phase) * signs * self.amps[src]
        return DenseState(self.n, amps)

    def expectation(self, p: PauliString) -> complex:
        return complex(np.vdot(self.amps, self.apply_pauli(p).amps))

    def measure_pauli(
        self,
        p: PauliString,
        rng: np.random.Generator | None = None,
        forced: int | None = None,
    ) -> tuple[int, "DenseState"]:
        """Born-rule projective measurement of a Hermitian Pauli."""
        if not p.is_hermitian:
            raise ValueError("measurement operator must be Hermitian")
        pa = self.apply_pauli(p).amps
        plus = (self.amps + pa) / 2
        minus = (self.amps - pa) / 2
        w_plus = float(np.vdot(plus, plus).real)
        if forced is not None:
            outcome = forced
        else:
            if rng is None:
                rng = np.random.default_rng()
            outcome = 1 if rng.random() < w_plus else -1
        proj = plus if outcome == 1 else minus
        nrm = np.linalg.norm(proj)
        if nrm < 1e-9:
            raise ValueError("projection onto forced outcome has zero norm")
        return outcome, DenseState(self.n, proj / nrm)

    # -- comparisons -------------------------------------------------------

    def fidelity(self, other: "DenseState") -> float:
        if self.n != other.n:
            raise SizeMismatchError(f"{self.n} != {other.n} qubits")
        return float(abs(np.vdot(self.amps, other.amps)) ** 2)

    def dump(self) -> str:
        """Amplitude table (index, re, im) for debugging."""
        lines = []
        for i, a in enumerate(self.amps):
            if abs(a) > 1e-12:
                lines.append(f"{i} {a.real:+.12f} {a.imag:+.12f}")
        return "\n".join(lines)


def _parity(values: np.ndarray) -> np.ndarray:
    v = values.copy()
    for shift in (32, 16, 8, 4, 2, 1):
        v ^= v >> shift
    return v & 1


def pauli_matrix(p: PauliString) -> np.ndarray:
    """Dense matrix of a PauliString (for small n)."""
    m = np.eye(1, dtype=complex)
    # Qubit 0 owns the lowest index bit, so it is the rightmost kron factor.
    for q in reversed(range(p.n)):
        m = np.kron(m, _SQ_GATES[_bare_letter(p, q)])
    return (1j ** p.label_phase) * m


def _bare_letter(p: PauliString, q: int) -> str:
    return p.letter_at(q)


def state_from_generators(
    n: int,
    generators: list[PauliString],
    rng: np.random.Generator | None = None,
) -> DenseState:
    """Project a random vector onto the joint +1 eigenspace of commuting
    Hermitian Paulis.  The result is deterministic up to global phase when
    the generators fix a unique state."""
    if rng is None:
        rng = np.random.default_rng(0)
    for _ in range(8):
        vec = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        state = DenseState(n, vec / np.linalg.norm(vec))
        ok = True
        for g in generators:
            projected = (state.amps + state.apply_pauli(g).amps) / 2
            nrm = np.linalg.norm(projected)
            if nrm < 1e-7:
                ok = False
                break
            state = DenseState(n, projected / nrm)
        if ok:
            return state
    raise ValueError("generators appear inconsistent (projector annihilates everything)")
