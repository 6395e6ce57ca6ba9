"""Stabilizer tableaux over GF(2) with exact mod-4 phases.

Generator rows are bit-packed into uint64 words and all row operations are
vectorized across generators, so measurement sweeps on lattice-sized states
stay cheap.  Phases are tracked mod 4 (i^k), which keeps Y-involving
products and sqrt(Z) conjugations exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import LocalClifford, PauliString, SizeMismatchError


class RankDeficiencyError(ValueError):
    """Generators are linearly dependent over GF(2)."""


class MeasurementContradictionError(RuntimeError):
    """A forced outcome disagrees with a deterministic measurement."""


@dataclass(frozen=True)
class CliffordGate:
    """Named Clifford gate on one or two qubits."""

    kind: str  # H, S, SDG, X, Y, Z, CZ, CX (single-qubit names follow pauli.py)
    targets: tuple[int, ...]

    def __post_init__(self):
        expected = 2 if self.kind in ("CZ", "CX") else 1
        if len(self.targets) != expected:
            raise ValueError(f"{self.kind} takes {expected} target(s)")
        if len(set(self.targets)) != len(self.targets):
            raise ValueError("targets must be distinct")


def _words(n: int) -> int:
    return max(1, (n + 63) >> 6)


def _int_to_words(value: int, nwords: int) -> np.ndarray:
    return np.frombuffer(value.to_bytes(nwords * 8, "little"), dtype=np.uint64).copy()

def _words_to_int(row: np.ndarray) -> int:
    return int.from_bytes(row.tobytes(), "little")


def _fold_parity(rows: np.ndarray) -> np.ndarray:
    """Parity of the popcount of each row (2D uint64 array)."""
    folded = np.bitwise_xor.reduce(rows, axis=-1)
    for shift in (32, 16, 8, 4, 2, 1):
        folded ^= folded >> np.uint64(shift)
    return (folded & np.uint64(1)).astype(np.uint8)


class StabilizerTableau:
    """List of independent commuting signed Pauli generators.

    With n generators on n qubits this pins a stabilizer state; smaller
    tableaux describe stabilizer groups (e.g. code stabilizers).
    """

    __slots__ = ("n", "xs", "zs", "phases")

    def __init__(self, n: int, xs: np.ndarray, zs: np.ndarray, phases: np.ndarray):
        self.n = n
        self.xs = xs
        self.zs = zs
        self.phases = phases

    # -- construction -------------------------------------------------------

    @classmethod
    def from_generators(cls, generators: list[PauliString], n: int | None = None) -> "StabilizerTableau":
        if n is None:
            if not generators:
                raise ValueError("empty tableau needs an explicit qubit count")
            n = generators[0].n
        w = _words(n)
        xs = np.zeros((len(generators), w), dtype=np.uint64)
        zs = np.zeros((len(generators), w), dtype=np.uint64)
        phases = np.zeros(len(generators), dtype=np.uint8)
        for i, g in enumerate(generators):
            if g.n != n:
                raise SizeMismatchError(f"generator {i} acts on {g.n} qubits, tableau on {n}")
            xs[i] = _int_to_words(g.x, w)
            zs[i] = _int_to_words(g.z, w)
            phases[i] = g.phase & 3
        return cls(n, xs, zs, phases)

    @classmethod
    def plus_state(cls, n: int) -> "StabilizerTableau":
        """|+...+>: one X generator per qubit."""
        return cls.from_generators([PauliString.single(n, q, "X") for q in range(n)])

    @classmethod
    def zero_state(cls, n: int) -> "StabilizerTableau":
        return cls.from_generators([PauliString.single(n, q, "Z") for q in range(n)])

    def copy(self) -> "StabilizerTableau":
        return StabilizerTableau(self.n, self.xs.copy(), self.zs.copy(), self.phases.copy())

    @property
    def num_generators(self) -> int:
        return self.xs.shape[0]

    def generator(self, i: int) -> PauliString:
        return PauliString(self.n, _words_to_int(self.xs[i]), _words_to_int(self.zs[i]), int(self.phases[i]))

    def generators(self) -> list[PauliString]:
        return [self.generator(i) for i in range(self.num_generators)]

    # -- internals -----------------------------------------------------------

    def _column(self, block: np.ndarray, qubit: int) -> np.ndarray:
        w, b = qubit >> 6, qubit & 63
        return ((block[:, w] >> np.uint64(b)) & np.uint64(1)).astype(bool)

    def _anticommute_mask(self, p: PauliString) -> np.ndarray:
        w = _words(self.n)
        px = _int_to_words(p.x, w)
        pz = _int_to_words(p.z, w)
        par = _fold_parity(self.xs & pz[None, :]) ^ _fold_parity(self.zs & px[None, :])
        return par.astype(bool)

    def _mult_rows_by(self, mask: np.ndarray, x: np.ndarray, z: np.ndarray, phase: int) -> None:
        """row <- row * g for every masked row (g given as packed words)."""
        if not mask.any():
            return
        # phase(h*g) = ph + pg + 2*parity(z_h & x_g)
        cross = _fold_parity(self.zs[mask] & x[None, :])
        self.phases[mask] = (self.phases[mask] + phase + 2 * cross) & 3
        self.xs[mask] ^= x[None, :]
        self.zs[mask] ^= z[None, :]

    def _set_row(self, i: int, p: PauliString) -> None:
        w = _words(self.n)
        self.xs[i] = _int_to_words(p.x, w)
        self.zs[i] = _int_to_words(p.z, w)
        self.phases[i] = p.phase & 3

    # -- Clifford conjugation -------------------------------------------------

    def apply_gate(self, gate: CliffordGate | tuple) -> None:
        if isinstance(gate, tuple):
            gate = CliffordGate(gate[0], tuple(gate[1:]))
        kind, targets = gate.kind, gate.targets
        for t in targets:
            if not 0 <= t < self.n:
                raise IndexError(f"target {t} out of range for n={self.n}")
        if kind in ("CZ", "CX"):
            self._apply_two(kind, *targets)
        else:
            self._apply_one(kind, targets[0])

    def apply_circuit(self, gates) -> None:
        for g in gates:
            self.apply_gate(g)

    def _apply_one(self, kind: str, q: int) -> None:
        w, b = q >> 6, q & 63
        bit = np.uint64(1 << b)
        xcol = (self.xs[:, w] & bit) != 0
        zcol = (self.zs[:, w] & bit) != 0
        if kind == "H":
            self.phases[xcol & zcol] = (self.phases[xcol & zcol] + 2) & 3
            self.xs[:, w] ^= np.where(xcol ^ zcol, bit, np.uint64(0))
            self.zs[:, w] ^= np.where(xcol ^ zcol, bit, np.uint64(0))
        elif kind == "S":
            # X -> i X Z (stored phase +1 where x bit set)
            self.phases[xcol] = (self.phases[xcol] + 1) & 3
            self.zs[:, w] ^= np.where(xcol, bit, np.uint64(0))
        elif kind == "SDG":
            self.phases[xcol] = (self.phases[xcol] + 3) & 3
            self.zs[:, w] ^= np.where(xcol, bit, np.uint64(0))
        elif kind == "X":
            self.phases[zcol] = (self.phases[zcol] + 2) & 3
        elif kind == "Z":
            self.phases[xcol] = (self.phases[xcol] + 2) & 3
        elif kind == "Y":
            flip = xcol ^ zcol
            self.phases[flip] = (self.phases[flip] + 2) & 3
        elif kind in ("SX", "SXDG", "SY", "SYDG"):
            self._apply_local(LocalClifford.named(kind), q)
        else:
            raise ValueError(f"unknown single-qubit gate {kind!r}")

    def _apply_two(self, kind: str, a: int, b: int) -> None:
        wa, ba = a >> 6, a & 63
        wb, bb = b >> 6, b & 63
        bit_a, bit_b = np.uint64(1 << ba), np.uint64(1 << bb)
        xa = (self.xs[:, wa] & bit_a) != 0
        za = (self.zs[:, wa] & bit_a) != 0
        xb = (self.xs[:, wb] & bit_b) != 0
        zb = (self.zs[:, wb] & bit_b) != 0
        if kind == "CZ":
            self.phases[xa & xb] = (self.phases[xa & xb] + 2) & 3
            self.zs[:, wb] ^= np.where(xa, bit_b, np.uint64(0))
            self.zs[:, wa] ^= np.where(xb, bit_a, np.uint64(0))
        elif kind == "CX":
            # control a, target b; phase-free in the i^p X^x Z^z convention
            self.xs[:, wb] ^= np.where(xa, bit_b, np.uint64(0))
            self.zs[:, wa] ^= np.where(zb, bit_a, np.uint64(0))
        else:
            raise ValueError(f"unknown two-qubit gate {kind!r}")

    def _apply_local(self, lc: LocalClifford, q: int) -> None:
        """Conjugate all rows by a single-qubit Clifford at qubit q."""
        w, b = q >> 6, q & 63
        bit = np.uint64(1 << b)
        xcol = (self.xs[:, w] & bit) != 0
        zcol = (self.zs[:, w] & bit) != 0
        for xv, zv in ((1, 0), (0, 1), (1, 1)):
            sel = (xcol == bool(xv)) & (zcol == bool(zv))
            if not sel.any():
                continue
            img = lc.conjugate_one(xv, zv)
            # remove the old letter's intrinsic phase contribution: the
            # stored row phase already accounts for the raw (x, z) bits only,
            # so the delta is exactly img.phase.
            self.phases[sel] = (self.phases[sel] + img.phase) & 3
            if (img.x & 1) != xv:
                self.xs[sel, w] ^= bit
            if (img.z & 1) != zv:
                self.zs[sel, w] ^= bit

    def apply_local(self, lc: LocalClifford, q: int) -> None:
        self._apply_local(lc, q)

    def apply_pauli(self, p: PauliString) -> None:
        """Conjugate the state by a Pauli: flips signs of anticommuting rows."""
        if p.n != self.n:
            raise SizeMismatchError(f"{p.n} != {self.n} qubits")
        mask = self._anticommute_mask(p)
        self.phases[mask] = (self.phases[mask] + 2) & 3

    # -- measurement ----------------------------------------------------------

    def measure_pauli(
        self,
        p: PauliString,
        rng: np.random.Generator | None = None,
        forced: int | None = None,
    ) -> int:
        """Projectively measure a Hermitian Pauli; returns the outcome.

        Deterministic outcomes leave the state unchanged.  Random outcomes
        draw from ``rng`` unless ``forced`` overrides them.
        """
        if p.n != self.n:
            raise SizeMismatchError(f"{p.n} != {self.n} qubits")
        if p.is_identity:
            raise ValueError("cannot measure the identity")
        if not p.is_hermitian:
            raise ValueError("measurement operator must be Hermitian")
        mask = self._anticommute_mask(p)
        if not mask.any():
            sign = self.contains(p)
            if sign is None:
                raise RankDeficiencyError(
                    "operator commutes with the group but is not in it; "
                    "the tableau does not pin a unique state"
                )
            outcome = int(sign.real)
            if forced is not None and forced != outcome:
                raise MeasurementContradictionError(
                    f"forced outcome {forced} contradicts deterministic {outcome}"
                )
            return outcome
        if forced is not None:
            outcome = forced
        else:
            if rng is None:
                rng = np.random.default_rng()
            outcome = 1 if rng.integers(2) == 0 else -1
        pivot = int(np.flatnonzero(mask)[0])
        px = self.xs[pivot].copy()
        pz = self.zs[pivot].copy()
        pphase = int(self.phases[pivot])
        mask[pivot] = False
        self._mult_rows_by(mask, px, pz, pphase)
        new_row = p if outcome == 1 else p.negated()
        self._set_row(pivot, new_row)
        return outcome

    def measure_single(
        self,
        qubit: int,
        basis: str,
        rng: np.random.Generator | None = None,
        forced: int | None = None,
    ) -> int:
        """Single-qubit measurement via column masks: O(rows) instead of
        O(rows x words), which is what keeps lattice-sized sweeps cheap."""
        xcol = self._column(self.xs, qubit)
        zcol = self._column(self.zs, qubit)
        if basis == "X":
            mask = zcol
        elif basis == "Z":
            mask = xcol
        elif basis == "Y":
            mask = xcol ^ zcol
        else:
            raise ValueError(f"basis must be X, Y or Z, not {basis!r}")
        p = PauliString.single(self.n, qubit, basis)
        if not mask.any():
            return self.measure_pauli(p, rng=rng, forced=forced)
        if forced is not None:
            outcome = forced
        else:
            if rng is None:
                rng = np.random.default_rng()
            outcome = 1 if rng.integers(2) == 0 else -1
        pivot = int(np.flatnonzero(mask)[0])
        px = self.xs[pivot].copy()
        pz = self.zs[pivot].copy()
        pphase = int(self.phases[pivot])
        mask = mask.copy()
        mask[pivot] = False
        self._mult_rows_by(mask, px, pz, pphase)
        self._set_row(pivot, p if outcome == 1 else p.negated())
        return outcome

    # -- canonical form and membership ------------------------------------------

    def canonical_form(self) -> "StabilizerTableau":
        """Row-reduced echelon form: X block first, pivots at the lowest
        qubit index.  Equal canonical forms <=> equal signed groups."""
        out = self.copy()
        out._reduce(check_rank=True)
        return out

    def _reduce(self, check_rank: bool = False) -> list[tuple[int, int]]:
        """In-place RREF.  Returns the pivot list as (block, qubit) pairs,
        block 0 = X, block 1 = Z."""
        pivots: list[tuple[int, int]] = []
        row = 0
        nrows = self.num_generators
        for block_id, block in ((0, self.xs), (1, self.zs)):
            for q in range(self.n):
                if row == nrows:
                    break
                col = self._column(block, q)
                cand = np.flatnonzero(col[row:])
                if cand.size == 0:
                    continue
                pivot = row + int(cand[0])
                if pivot != row:
                    self._swap_rows(row, pivot)
                    col = self._column(block, q)
                elim = col.copy()
                elim[row] = False
                self._mult_rows_by(elim, self.xs[row].copy(), self.zs[row].copy(), int(self.phases[row]))
                pivots.append((block_id, q))
                row += 1
        if check_rank and row < nrows:
            raise RankDeficiencyError(f"only {row} of {nrows} generators are independent")
        return pivots

    def _swap_rows(self, i: int, j: int) -> None:
        self.xs[[i, j]] = self.xs[[j, i]]
        self.zs[[i, j]] = self.zs[[j, i]]
        self.phases[[i, j]] = self.phases[[j, i]]

    def same_group(self, other: "StabilizerTableau") -> bool:
        a, b = self.canonical_form(), other.canonical_form()
        return (
            a.n == b.n
            and a.num_generators == b.num_generators
            and np.array_equal(a.xs, b.xs)
            and np.array_equal(a.zs, b.zs)
            and np.array_equal(a.phases, b.phases)
        )

    def contains(self, p: PauliString) -> complex | None:
        """Return s with s*p in the group (s in {1, -1, i, -i}), else None."""
        if p.n != self.n:
            raise SizeMismatchError(f"{p.n} != {self.n} qubits")
        red = self.copy()
        pivots = red._reduce()
        residual = p
        for i, (block_id, q) in enumerate(pivots):
            bits = residual.x if block_id == 0 else residual.z
            if bits >> q & 1:
                residual = residual * red.generator(i)
        if residual.x or residual.z:
            return None
        # residual = p * (product of generators) = i^k I, so i^-k * p is in
        # the group.
        return 1j ** (-residual.phase % 4)

    def subgroup_supported_on(self, qubits: list[int]) -> list[PauliString]:
        """Generators of the subgroup whose support lies inside ``qubits``.

        Found by eliminating the complement's columns first; rows left with
        no support outside the window generate the subgroup.
        """
        outside = [q for q in range(self.n) if q not in set(qubits)]
        red = self.copy()
        red._reduce_columns(outside)
        keep = []
        w = _words(self.n)
        out_mask_words = _int_to_words(sum(1 << q for q in outside), w)
        for i in range(red.num_generators):
            if not ((red.xs[i] | red.zs[i]) & out_mask_words).any():
                keep.append(red.generator(i))
        return keep

    def _reduce_columns(self, qubits: list[int]) -> None:
        """Partial RREF over the X then Z columns of the given qubits."""
        row = 0
        nrows = self.num_generators
        for block in (self.xs, self.zs):
            for q in qubits:
                if row == nrows:
                    return
                col = self._column(block, q)
                cand = np.flatnonzero(col[row:])
                if cand.size == 0:
                    continue
                pivot = row + int(cand[0])
                if pivot != row:
                    self._swap_rows(row, pivot)
                    col = self._column(block, q)
                elim = col.copy()
                elim[row] = False
                self._mult_rows_by(elim, self.xs[row].copy(), self.zs[row].copy(), int(self.phases[row]))
                row += 1

    # -- restriction -------------------------------------------------------------

    def factor_out(self, qubits: list[int]) -> "StabilizerTableau":
        """Drop qubits that are in a product state with the rest.

        Valid after the qubits have been measured: exactly one canonical
        generator touches each of them.
        """
        drop = sorted(set(qubits))
        keep = [q for q in range(self.n) if q not in set(drop)]
        red = self.copy()
        red._reduce_columns(drop)
        w = _words(self.n)
        drop_words = _int_to_words(sum(1 << q for q in drop), w)
        survivors = [
            red.generator(i)
            for i in range(red.num_generators)
            if not ((red.xs[i] | red.zs[i]) & drop_words).any()
        ]
        if len(survivors) != self.num_generators - len(drop):
            raise ValueError(f"qubits {drop} are still entangled with the rest")
        return StabilizerTableau.from_generators(
            [g.restricted(keep) for g in survivors], n=len(keep)
        )

    # -- validation ---------------------------------------------------------------

    def validate(self) -> list[str]:
        """Structural check: hermitian signs, pairwise commuting, independent."""
        problems = []
        for i in range(self.num_generators):
            g = self.generator(i)
            if not g.is_hermitian:
                problems.append(f"generator {i} has imaginary sign: {g.to_label()}")
            if g.is_identity:
                problems.append(f"generator {i} is the identity")
        gens = self.generators()
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                if not gens[i].commutes_with(gens[j]):
                    problems.append(f"generators {i} and {j} anticommute")
        try:
            self.canonical_form()
        except RankDeficiencyError as exc:
            problems.append(str(exc))
        return problems

    def __repr__(self) -> str:
        labels = ", ".join(g.to_label() for g in self.generators()[:6])
        more = "..." if self.num_generators > 6 else ""
        return f"StabilizerTableau(n={self.n}, [{labels}{more}])"
