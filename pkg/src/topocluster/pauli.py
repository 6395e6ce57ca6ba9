"""Signed multi-qubit Pauli operators and single-qubit Clifford actions.

A Pauli operator is stored as ``i^phase * X^x * Z^z`` where ``x`` and ``z``
are integer bit masks (bit q = qubit q) and ``phase`` runs mod 4.  With this
convention multiplication needs a single parity:

    (i^p X^a Z^b)(i^q X^c Z^d) = i^(p + q + 2*parity(b & c)) X^(a^c) Z^(b^d)

The printable label uses Y letters, which each absorb one factor of i
(Y = i X Z), so the label sign is ``i^(phase - #Y)``.
"""

from __future__ import annotations

SIGNS = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_SIGN_VALUE = {0: 1, 1: 1j, 2: -1, 3: -1j}
_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_LETTER = {bits: letter for letter, bits in _LETTER_BITS.items()}


class SizeMismatchError(ValueError):
    """Operands act on different qubit counts."""


class PauliString:
    """Signed Pauli operator on ``n`` qubits."""

    __slots__ = ("n", "x", "z", "phase")

    def __init__(self, n: int, x: int = 0, z: int = 0, phase: int = 0):
        if n < 0:
            raise ValueError("negative qubit count")
        mask = (1 << n) - 1
        self.n = n
        self.x = x & mask
        self.z = z & mask
        self.phase = phase & 3

    # -- constructors ---------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str, sign: int = 0) -> "PauliString":
        """One-letter operator, e.g. single(4, 2, "Y")."""
        if not 0 <= qubit < n:
            raise IndexError(f"qubit {qubit} out of range for n={n}")
        xb, zb = _LETTER_BITS[letter]
        # Stored phase carries the i of every Y letter.
        return cls(n, xb << qubit, zb << qubit, sign + (xb & zb))

    @classmethod
    def from_letters(cls, n: int, letters: dict[int, str], sign: int = 0) -> "PauliString":
        x = z = 0
        ys = 0
        for qubit, letter in letters.items():
            if not 0 <= qubit < n:
                raise IndexError(f"qubit {qubit} out of range for n={n}")
            xb, zb = _LETTER_BITS[letter]
            x |= xb << qubit
            z |= zb << qubit
            ys += xb & zb
        return cls(n, x, z, sign + ys)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse a literal like ``-iYXZI``; qubit 0 is the leftmost letter."""
        body = label
        sign = 0
        for prefix, value in (("+i", 1), ("-i", 3), ("+", 0), ("-", 2)):
            if label.startswith(prefix):
                sign = value
                body = label[len(prefix):]
                break
        if not body or any(c not in _LETTER_BITS for c in body):
            raise ValueError(f"bad Pauli literal: {label!r}")
        x = z = 0
        ys = 0
        for q, c in enumerate(body):
            xb, zb = _LETTER_BITS[c]
            x |= xb << q
            z |= zb << q
            ys += xb & zb
        return cls(len(body), x, z, sign + ys)

    # -- presentation ---------------------------------------------------

    def to_label(self) -> str:
        letters = "".join(self.letter_at(q) for q in range(self.n))
        return SIGNS[self.label_phase] + letters

    @property
    def label_phase(self) -> int:
        """Phase exponent of the label form (Y letters extracted)."""
        return (self.phase - (self.x & self.z).bit_count()) & 3

    @property
    def sign(self) -> complex:
        """Label sign as a complex number in {1, i, -1, -i}."""
        return _SIGN_VALUE[self.label_phase]

    def letter_at(self, qubit: int) -> str:
        return _BITS_LETTER[(self.x >> qubit & 1, self.z >> qubit & 1)]

    def __repr__(self) -> str:
        return f"PauliString({self.to_label()!r})"

    # -- algebra ---------------------------------------------------------

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.n != other.n:
            raise SizeMismatchError(f"{self.n} != {other.n} qubits")
        phase = self.phase + other.phase + 2 * ((self.z & other.x).bit_count() & 1)
        return PauliString(self.n, self.x ^ other.x, self.z ^ other.z, phase)

    def commutes_with(self, other: "PauliString") -> bool:
        if self.n != other.n:
            raise SizeMismatchError(f"{self.n} != {other.n} qubits")
        return ((self.x & other.z).bit_count() + (self.z & other.x).bit_count()) % 2 == 0

    def dagger(self) -> "PauliString":
        phase = -self.phase + 2 * ((self.x & self.z).bit_count() & 1)
        return PauliString(self.n, self.x, self.z, phase)

    def negated(self) -> "PauliString":
        return PauliString(self.n, self.x, self.z, self.phase + 2)

    def times_i(self, k: int = 1) -> "PauliString":
        return PauliString(self.n, self.x, self.z, self.phase + k)

    @property
    def is_hermitian(self) -> bool:
        return self.label_phase % 2 == 0

    @property
    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def support(self) -> list[int]:
        bits = self.x | self.z
        return [q for q in range(self.n) if bits >> q & 1]

    # -- reindexing -------------------------------------------------------

    def embedded(self, n: int, positions: dict[int, int]) -> "PauliString":
        """Map qubit q of self onto positions[q] of an n-qubit operator."""
        x = z = 0
        for q, p in positions.items():
            if not 0 <= p < n:
                raise IndexError(f"target qubit {p} out of range for n={n}")
            x |= (self.x >> q & 1) << p
            z |= (self.z >> q & 1) << p
        return PauliString(n, x, z, self.phase)

    def restricted(self, qubits: list[int]) -> "PauliString":
        """Project onto the listed qubits (must carry the whole support)."""
        keep = set(qubits)
        if any(q not in keep for q in self.support()):
            raise ValueError("support extends beyond the restriction set")
        x = z = 0
        for i, q in enumerate(qubits):
            x |= (self.x >> q & 1) << i
            z |= (self.z >> q & 1) << i
        return PauliString(len(qubits), x, z, self.phase)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return (self.n, self.x, self.z, self.phase) == (other.n, other.x, other.z, other.phase)

    def __hash__(self) -> int:
        return hash((self.n, self.x, self.z, self.phase))


class LocalClifford:
    """Single-qubit Clifford, represented by the images of X and Z.

    Global phase is irrelevant for conjugation, so the pair
    (U X U^dag, U Z U^dag) of signed one-qubit Paulis identifies U among the
    24 single-qubit Cliffords.
    """

    __slots__ = ("image_x", "image_z")

    def __init__(self, image_x: PauliString, image_z: PauliString):
        self.image_x = image_x
        self.image_z = image_z

    @classmethod
    def named(cls, name: str) -> "LocalClifford":
        return dict(_NAMED_LOCALS)[name]

    def conjugate_one(self, x: int, z: int, phase: int = 0) -> PauliString:
        """Image of i^phase X^x Z^z under conjugation by this Clifford."""
        out = PauliString(1, 0, 0, phase)
        if x:
            out = out * self.image_x
        if z:
            out = out * self.image_z
        return out

    def then(self, later: "LocalClifford") -> "LocalClifford":
        """Composite 'apply self first, then later' (= later @ self)."""
        return LocalClifford(
            _conj_by(later, self.image_x),
            _conj_by(later, self.image_z),
        )

    def inverse(self) -> "LocalClifford":
        cached = _INVERSES.get(self._key())
        if cached is not None:
            return cached
        for cand in _ALL_LOCALS:
            if self.then(cand) == _IDENTITY_LOCAL:
                _INVERSES[self._key()] = cand
                return cand
        raise AssertionError("inverse not found; table corrupt")

    @property
    def is_identity(self) -> bool:
        return self == _IDENTITY_LOCAL

    @property
    def is_pauli(self) -> bool:
        """True when conjugation only flips signs (U is a Pauli)."""
        return (
            self.image_x.x == 1 and self.image_x.z == 0
            and self.image_z.x == 0 and self.image_z.z == 1
        )

    def pauli_part(self) -> tuple["LocalClifford", "LocalClifford"]:
        """Split self = C * P with P a Pauli and C sign-free on X and Z.

        Returns (C, P).  C is the unique rotation part whose X/Z images are
        positively signed; P fixes the missing signs.
        """
        cached = _PAULI_PARTS.get(self._key())
        if cached is not None:
            return cached
        cx = PauliString(1, self.image_x.x, self.image_x.z, (self.image_x.x & self.image_x.z))
        cz = PauliString(1, self.image_z.x, self.image_z.z, (self.image_z.x & self.image_z.z))
        rot = LocalClifford(cx, cz)
        pauli = self.then(rot.inverse())
        _PAULI_PARTS[self._key()] = (rot, pauli)
        return rot, pauli

    def gate_word(self) -> str:
        """Decomposition into H/S gates, leftmost applied first."""
        return _GATE_WORDS[self._key()]

    def _key(self) -> tuple:
        return (
            self.image_x.x, self.image_x.z, self.image_x.phase,
            self.image_z.x, self.image_z.z, self.image_z.phase,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LocalClifford):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        names = {lc: name for name, lc in _NAMED_LOCALS}
        if self in names:
            return f"LocalClifford[{names[self]}]"
        return f"LocalClifford[{self.gate_word()}]"


def _conj_by(u: LocalClifford, p: PauliString) -> PauliString:
    return u.conjugate_one(p.x, p.z, p.phase)


def _p1(label: str) -> PauliString:
    return PauliString.from_label(label)


# Images derived from the 2x2 matrix algebra; verified against a dense
# oracle in the test suite.
_NAMED_LOCALS: list[tuple[str, LocalClifford]] = [
    ("I", LocalClifford(_p1("X"), _p1("Z"))),
    ("X", LocalClifford(_p1("X"), _p1("-Z"))),
    ("Y", LocalClifford(_p1("-X"), _p1("-Z"))),
    ("Z", LocalClifford(_p1("-X"), _p1("Z"))),
    ("H", LocalClifford(_p1("Z"), _p1("X"))),
    # S = diag(1, i) = sqrt(Z)
    ("S", LocalClifford(_p1("Y"), _p1("Z"))),
    ("SDG", LocalClifford(_p1("-Y"), _p1("Z"))),
    # sqrt(X) and inverse
    ("SX", LocalClifford(_p1("X"), _p1("-Y"))),
    ("SXDG", LocalClifford(_p1("X"), _p1("Y"))),
    # exp(-i pi Y / 4) and inverse: rotations taking Z to X
    ("SYDG", LocalClifford(_p1("-Z"), _p1("X"))),
    ("SY", LocalClifford(_p1("Z"), _p1("-X"))),
]

_IDENTITY_LOCAL = _NAMED_LOCALS[0][1]
_INVERSES: dict[tuple, "LocalClifford"] = {}
_PAULI_PARTS: dict[tuple, tuple] = {}


def _enumerate_locals() -> list[LocalClifford]:
    seen: dict[tuple, LocalClifford] = {}
    frontier = [lc for _, lc in _NAMED_LOCALS]
    for lc in frontier:
        seen[lc._key()] = lc
    gens = [LocalClifford.named("H"), LocalClifford.named("S")]
    while frontier:
        nxt = []
        for lc in frontier:
            for g in gens:
                cand = lc.then(g)
                if cand._key() not in seen:
                    seen[cand._key()] = cand
                    nxt.append(cand)
        frontier = nxt
    return list(seen.values())


def _gate_words() -> dict[tuple, str]:
    # BFS from identity over {H, S} products; every single-qubit Clifford is
    # reached (24 elements mod phase).
    words: dict[tuple, str] = {_IDENTITY_LOCAL._key(): ""}
    frontier = [_IDENTITY_LOCAL]
    gens = [("H", LocalClifford.named("H")), ("S", LocalClifford.named("S"))]
    while frontier:
        nxt = []
        for lc in frontier:
            word = words[lc._key()]
            for name, g in gens:
                cand = lc.then(g)
                if cand._key() not in words:
                    words[cand._key()] = word + ("" if not word else " ") + name
                    nxt.append(cand)
        frontier = nxt
    return words


_ALL_LOCALS = _enumerate_locals()
_GATE_WORDS = _gate_words()

assert len(_ALL_LOCALS) == 24, "single-qubit Clifford catalog must have 24 entries"
assert len(_GATE_WORDS) == 24
