"""CSS topological code constructors, validators and string operators.

A code is a set of qubits with z-cells and x-cells: the supports of the
Z-type and X-type stabilizer generators.  Builders attach lattice geometry,
cell colors (for the color codes) and geometric logical operators where
they have a natural shape; everything else is derived by GF(2) linear
algebra.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import gf2
from .pauli import PauliString
from .tableau import RankDeficiencyError, StabilizerTableau


@dataclass(frozen=True)
class LogicalOperator:
    kind: str  # "Lx" or "Lz"
    support: tuple[int, ...]
    direction: int | None = None
    color: str | None = None

    def operator(self, n: int) -> PauliString:
        letter = "X" if self.kind == "Lx" else "Z"
        return PauliString.from_letters(n, {q: letter for q in self.support})


@dataclass(frozen=True)
class Move:
    """One excitation hop on the z-cell graph.

    Applying X to ``qubits`` flips exactly the z-cells ``a`` and ``b``
    (None marks the lattice boundary).
    """

    a: int | None
    b: int | None
    qubits: tuple[int, ...]


@dataclass(frozen=True)
class StringOperator:
    pauli_kind: str  # "e", "m" or "eps"
    path: tuple[int, ...]
    operator: PauliString
    endpoints: tuple[tuple[str, int], ...]


class CssCode:
    """Qubits plus Z-type and X-type stabilizer supports."""

    def __init__(
        self,
        n: int,
        z_cells: list[tuple[int, ...]],
        x_cells: list[tuple[int, ...]],
        name: str = "css",
        cell_colors: list[str] | None = None,
        geometry: dict[int, tuple[float, ...]] | None = None,
        logical_xs: list[LogicalOperator] | None = None,
        logical_zs: list[LogicalOperator] | None = None,
        moves: list[Move] | None = None,
    ):
        self.n = n
        self.z_cells = [tuple(sorted(c)) for c in z_cells]
        self.x_cells = [tuple(sorted(c)) for c in x_cells]
        self.name = name
        self.cell_colors = cell_colors
        self.geometry = geometry
        self._logical_xs = logical_xs
        self._logical_zs = logical_zs
        self._moves = moves

    # -- operators ---------------------------------------------------------

    def z_operator(self, i: int) -> PauliString:
        return PauliString.from_letters(self.n, {q: "Z" for q in self.z_cells[i]})

    def x_operator(self, i: int) -> PauliString:
        return PauliString.from_letters(self.n, {q: "X" for q in self.x_cells[i]})

    def stabilizer_operators(self) -> list[PauliString]:
        return [self.z_operator(i) for i in range(len(self.z_cells))] + [
            self.x_operator(i) for i in range(len(self.x_cells))
        ]

    # -- ranks and dependencies ------------------------------------------------

    def _bitsets(self, cells) -> list[int]:
        return [sum(1 << q for q in c) for c in cells]

    def z_rank(self) -> int:
        return gf2.rank(self._bitsets(self.z_cells))

    def x_rank(self) -> int:
        return gf2.rank(self._bitsets(self.x_cells))

    def z_constraints(self) -> list[list[int]]:
        """Index sets of z-cells whose product is the identity."""
        return gf2.dependency_sets(self._bitsets(self.z_cells), self.n)

    def x_constraints(self) -> list[list[int]]:
        return gf2.dependency_sets(self._bitsets(self.x_cells), self.n)

    def independent_z_cells(self) -> list[int]:
        """Greedy lowest-index maximal independent subset of z-cells."""
        chosen: list[int] = []
        rows: list[int] = []
        for i, bits in enumerate(self._bitsets(self.z_cells)):
            if gf2.rank(rows + [bits]) > len(rows):
                rows.append(bits)
                chosen.append(i)
        return chosen

    def independent_x_cells(self) -> list[int]:
        chosen: list[int] = []
        rows: list[int] = []
        for i, bits in enumerate(self._bitsets(self.x_cells)):
            if gf2.rank(rows + [bits]) > len(rows):
                rows.append(bits)
                chosen.append(i)
        return chosen

    def degeneracy(self) -> int:
        return 1 << (self.n - self.z_rank() - self.x_rank())

    def num_logical(self) -> int:
        return self.n - self.z_rank() - self.x_rank()

    # -- validation ----------------------------------------------------------

    def validate(self) -> list[str]:
        """List every commutation violation (odd z-cell/x-cell overlap)."""
        problems = []
        zbits = self._bitsets(self.z_cells)
        xbits = self._bitsets(self.x_cells)
        for i, zb in enumerate(zbits):
            for j, xb in enumerate(xbits):
                if (zb & xb).bit_count() % 2:
                    problems.append(f"z-cell {i} and x-cell {j} overlap on an odd qubit count")
        for kind, cells in (("z", self.z_cells), ("x", self.x_cells)):
            for i, c in enumerate(cells):
                if any(q < 0 or q >= self.n for q in c):
                    problems.append(f"{kind}-cell {i} references a qubit out of range")
                if not c:
                    problems.append(f"{kind}-cell {i} is empty")
        return problems

    # -- logical operators -------------------------------------------------------

    def logical_xs(self) -> list[LogicalOperator]:
        if self._logical_xs is None:
            self._logical_xs, self._logical_zs = _compute_logicals(self)
        return self._logical_xs

    def logical_zs(self) -> list[LogicalOperator]:
        if self._logical_zs is None:
            self._logical_xs, self._logical_zs = _compute_logicals(self)
        return self._logical_zs

    # -- excitation moves ----------------------------------------------------------

    def excitation_moves(self) -> list[Move]:
        """Hops for pairing excited z-cells: single-qubit hops derived from
        qubit membership plus any lattice-specific links the builder added
        (e.g. the two-qubit colored links of the hexagonal code)."""
        membership: dict[int, list[int]] = {q: [] for q in range(self.n)}
        for i, c in enumerate(self.z_cells):
            for q in c:
                membership[q].append(i)
        moves = []
        for q, cells in membership.items():
            if len(cells) == 2:
                moves.append(Move(cells[0], cells[1], (q,)))
            elif len(cells) == 1:
                moves.append(Move(cells[0], None, (q,)))
        if self._moves is not None:
            moves.extend(self._moves)
        return moves

    def has_boundary(self) -> bool:
        return any(m.a is None or m.b is None for m in self.excitation_moves())

    # -- state construction -----------------------------------------------------------

    def stabilizer_state(self, logical_class: tuple[int, ...] | None = None) -> StabilizerTableau:
        """Tableau of one code state; logical_class bit k = 1 flips the sign
        of the k-th logical X operator."""
        k = self.num_logical()
        if logical_class is None:
            logical_class = (0,) * k
        if len(logical_class) != k:
            raise ValueError(f"logical class needs {k} bits, got {len(logical_class)}")
        gens = [self.z_operator(i) for i in self.independent_z_cells()]
        gens += [self.x_operator(i) for i in self.independent_x_cells()]
        lx = self.logical_xs()
        if len(lx) != k:
            raise RankDeficiencyError(
                f"found {len(lx)} logical X operators for {k} logical qubits"
            )
        for bit, op in zip(logical_class, lx):
            p = op.operator(self.n)
            gens.append(p.negated() if bit else p)
        if len(gens) != self.n:
            raise RankDeficiencyError(
                f"{len(gens)} generators for {self.n} qubits; code is inconsistent"
            )
        tab = StabilizerTableau.from_generators(gens, n=self.n)
        tab.canonical_form()  # raises on dependence
        return tab

    # -- anyon strings -------------------------------------------------------------------

    def syndrome(self, p: PauliString) -> list[tuple[str, int]]:
        """Cells whose stabilizer anticommutes with p."""
        out = []
        for i in range(len(self.z_cells)):
            if not self.z_operator(i).commutes_with(p):
                out.append(("z", i))
        for i in range(len(self.x_cells)):
            if not self.x_operator(i).commutes_with(p):
                out.append(("x", i))
        return out

    def anyon_string(self, kind: str, path: list[int]) -> StringOperator:
        """String operator along a qubit path.

        e strings are Z-type (endpoints on x-cells), m strings are X-type
        (endpoints on z-cells), eps strings are Y-type staircases creating
        one pair of each.
        """
        if kind not in ("e", "m", "eps"):
            raise ValueError(f"unknown string kind {kind!r}")
        if not path:
            raise ValueError("empty path")
        letter = {"e": "Z", "m": "X", "eps": "Y"}[kind]
        share_z = {"m", "eps"}
        share_x = {"e", "eps"}
        zmemb: dict[int, set[int]] = {q: set() for q in range(self.n)}
        xmemb: dict[int, set[int]] = {q: set() for q in range(self.n)}
        for i, c in enumerate(self.z_cells):
            for q in c:
                zmemb[q].add(i)
        for i, c in enumerate(self.x_cells):
            for q in c:
                xmemb[q].add(i)
        for a, b in zip(path, path[1:]):
            if kind in share_z and not (zmemb[a] & zmemb[b]):
                raise ValueError(f"qubits {a},{b} share no z-cell: path disconnected")
            if kind in share_x and not (xmemb[a] & xmemb[b]):
                raise ValueError(f"qubits {a},{b} share no x-cell: path disconnected")
        op = PauliString.from_letters(self.n, {q: letter for q in path})
        endpoints = tuple(self.syndrome(op))
        return StringOperator(kind, tuple(path), op, endpoints)

    # -- misc --------------------------------------------------------------------

    def dual(self) -> "CssCode":
        """Qubit-wise Hadamard: z-cells and x-cells trade places."""
        return CssCode(
            self.n,
            [tuple(c) for c in self.x_cells],
            [tuple(c) for c in self.z_cells],
            name=f"dual-{self.name}" if not self.name.startswith("dual-") else self.name[5:],
            cell_colors=None,
            geometry=self.geometry,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CssCode):
            return NotImplemented
        return (
            self.n == other.n
            and sorted(self.z_cells) == sorted(other.z_cells)
            and sorted(self.x_cells) == sorted(other.x_cells)
        )

    # -- serialization --------------------------------------------------------------

    def to_json(self) -> str:
        data = {
            "name": self.name,
            "n": self.n,
            "z_cells": [list(c) for c in self.z_cells],
            "x_cells": [list(c) for c in self.x_cells],
        }
        if self.cell_colors is not None:
            data["colors"] = self.cell_colors
        if self.geometry is not None:
            data["geometry"] = {str(q): list(pos) for q, pos in self.geometry.items()}
        if self._logical_xs is not None:
            data["logical_xs"] = [list(op.support) for op in self._logical_xs]
            data["logical_zs"] = [list(op.support) for op in (self._logical_zs or [])]
        if self._moves is not None:
            data["moves"] = [
                [m.a, m.b, list(m.qubits)] for m in self._moves
            ]
        return json.dumps(data, indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "CssCode":
        data = json.loads(text)
        geometry = None
        if "geometry" in data:
            geometry = {int(q): tuple(pos) for q, pos in data["geometry"].items()}
        logical_xs = logical_zs = None
        if "logical_xs" in data:
            logical_xs = [LogicalOperator("Lx", tuple(s)) for s in data["logical_xs"]]
            logical_zs = [LogicalOperator("Lz", tuple(s)) for s in data.get("logical_zs", [])]
        moves = None
        if "moves" in data:
            moves = [Move(a, b, tuple(qs)) for a, b, qs in data["moves"]]
        return cls(
            data["n"],
            [tuple(c) for c in data["z_cells"]],
            [tuple(c) for c in data["x_cells"]],
            name=data.get("name", "css"),
            cell_colors=data.get("colors"),
            geometry=geometry,
            logical_xs=logical_xs,
            logical_zs=logical_zs,
            moves=moves,
        )


def _compute_logicals(code: CssCode) -> tuple[list[LogicalOperator], list[LogicalOperator]]:
    """Paired logical operators over GF(2).

    X logicals: ker(z-cell matrix) modulo the x-cell row space; Z logicals
    symmetrically; then pair so logical_x[i] anticommutes exactly with
    logical_z[i].
    """
    zrows = [sum(1 << q for q in c) for c in code.z_cells]
    xrows = [sum(1 << q for q in c) for c in code.x_cells]
    xcands = _coset_basis(gf2.nullspace(zrows, code.n), xrows)
    zcands = _coset_basis(gf2.nullspace(xrows, code.n), zrows)
    k = code.num_logical()
    if len(xcands) != k or len(zcands) != k:
        raise RankDeficiencyError(
            f"logical extraction found {len(xcands)} X / {len(zcands)} Z candidates for k={k}"
        )
    # Symplectic pairing by Gaussian elimination on the Gram matrix.
    xs = list(xcands)
    zs = list(zcands)
    for i in range(k):
        j = next((j for j in range(i, k) if (xs[i] & zs[j]).bit_count() % 2), None)
        if j is None:
            raise RankDeficiencyError("logical candidates fail to pair symplectically")
        zs[i], zs[j] = zs[j], zs[i]
        for j in range(k):
            if j != i and (xs[j] & zs[i]).bit_count() % 2:
                xs[j] ^= xs[i]
        for j in range(k):
            if j != i and (xs[i] & zs[j]).bit_count() % 2:
                zs[j] ^= zs[i]
    def to_ops(rows, kind):
        return [
            LogicalOperator(kind, tuple(q for q in range(code.n) if r >> q & 1))
            for r in rows
        ]
    return to_ops(xs, "Lx"), to_ops(zs, "Lz")


def _coset_basis(kernel: list[int], modulo_rows: list[int]) -> list[int]:
    """Representatives of kernel elements independent of the row space."""
    base = list(modulo_rows)
    out = []
    for v in kernel:
        if gf2.rank(base + [v]) > gf2.rank(base):
            base.append(v)
            out.append(v)
    return out


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def build_toric_2d(L: int, topology: str = "torus", holes: list[int] | None = None) -> CssCode:
    """Square-lattice code with qubits on edges.

    torus: L x L periodic, plaquette z-cells and vertex x-cells.
    planar: L x L plaquette patch, smooth left/right and rough top/bottom
    boundaries.  ``holes`` lists plaquette indices whose z-cell is removed.
    """
    if L < 2:
        raise ValueError("L must be at least 2")
    holes = list(holes or [])
    if topology == "torus":
        code = _toric_torus(L)
    elif topology == "planar":
        code = _toric_planar(L)
    else:
        raise ValueError(f"unknown topology {topology!r}")
    if holes:
        for h in holes:
            if not 0 <= h < len(code.z_cells):
                raise IndexError(f"hole index {h} out of range")
        keep = [c for i, c in enumerate(code.z_cells) if i not in set(holes)]
        code = CssCode(
            code.n, keep, code.x_cells,
            name=f"{code.name}-holes{len(holes)}",
            geometry=code.geometry,
        )
    return code


def _toric_torus(L: int) -> CssCode:
    def h(x, y):  # edge from (x,y) to (x+1,y)
        return (y % L) * L + (x % L)

    def v(x, y):  # edge from (x,y) to (x,y+1)
        return L * L + (y % L) * L + (x % L)

    n = 2 * L * L
    z_cells = []
    for y in range(L):
        for x in range(L):
            z_cells.append((h(x, y), h(x, y + 1), v(x, y), v(x + 1, y)))
    x_cells = []
    for y in range(L):
        for x in range(L):
            x_cells.append((h(x, y), h(x - 1, y), v(x, y), v(x, y - 1)))
    geometry = {}
    for y in range(L):
        for x in range(L):
            geometry[h(x, y)] = (x + 0.5, float(y))
            geometry[v(x, y)] = (float(x), y + 0.5)
    logical_zs = [
        LogicalOperator("Lz", tuple(h(x, 0) for x in range(L)), direction=0),
        LogicalOperator("Lz", tuple(v(0, y) for y in range(L)), direction=1),
    ]
    logical_xs = [
        LogicalOperator("Lx", tuple(v(x, 0) for x in range(L)), direction=0),
        LogicalOperator("Lx", tuple(h(0, y) for y in range(L)), direction=1),
    ]
    return CssCode(
        n, z_cells, x_cells, name=f"toric2d-L{L}",
        geometry=geometry, logical_xs=logical_xs, logical_zs=logical_zs,
    )


def _toric_planar(L: int) -> CssCode:
    # h-edges exist for rows 1..L-1 only (rough top/bottom), v-edges everywhere.
    hidx = {}
    for y in range(1, L):
        for x in range(L):
            hidx[(x, y)] = len(hidx)
    vbase = len(hidx)
    vidx = {}
    for y in range(L):
        for x in range(L + 1):
            vidx[(x, y)] = vbase + len(vidx)
    n = len(hidx) + len(vidx)
    z_cells = []
    for y in range(L):
        for x in range(L):
            cell = [vidx[(x, y)], vidx[(x + 1, y)]]
            if (x, y) in hidx:
                cell.append(hidx[(x, y)])
            if (x, y + 1) in hidx:
                cell.append(hidx[(x, y + 1)])
            z_cells.append(tuple(cell))
    x_cells = []
    for y in range(1, L):
        for x in range(L + 1):
            cell = [vidx[(x, y - 1)], vidx[(x, y)]]
            if (x, y) in hidx:
                cell.append(hidx[(x, y)])
            if (x - 1, y) in hidx:
                cell.append(hidx[(x - 1, y)])
            x_cells.append(tuple(cell))
    geometry = {}
    for (x, y), q in hidx.items():
        geometry[q] = (x + 0.5, float(y))
    for (x, y), q in vidx.items():
        geometry[q] = (float(x), y + 0.5)
    logical_zs = [LogicalOperator("Lz", tuple(vidx[(0, y)] for y in range(L)), direction=1)]
    logical_xs = [LogicalOperator("Lx", tuple(vidx[(x, 0)] for x in range(L + 1)), direction=0)]
    return CssCode(
        n, z_cells, x_cells, name=f"planar2d-L{L}",
        geometry=geometry, logical_xs=logical_xs, logical_zs=logical_zs,
    )


def build_triangle_patch(hole: bool = True) -> CssCode:
    """Two-row triangular patch with qubits on the nine edges.

    z-cells are the three upward triangles (the central downward one is the
    hole when requested); x-cells are the six vertex stars.
    """
    verts = [(0, 0), (-1, 1), (1, 1), (-2, 2), (0, 2), (2, 2)]
    edges = [
        (0, 1), (0, 2), (1, 2),
        (1, 3), (1, 4), (2, 4), (2, 5),
        (3, 4), (4, 5),
    ]
    eidx = {e: i for i, e in enumerate(edges)}

    def e(a, b):
        return eidx[(a, b) if (a, b) in eidx else (b, a)]

    triangles = [
        (e(0, 1), e(0, 2), e(1, 2)),     # top
        (e(1, 3), e(1, 4), e(3, 4)),     # lower left
        (e(2, 4), e(2, 5), e(4, 5)),     # lower right
        (e(1, 2), e(1, 4), e(2, 4)),     # central (downward)
    ]
    z_cells = triangles[:3] if hole else triangles
    x_cells = []
    for vtx in range(6):
        star = tuple(i for (a, b), i in eidx.items() if vtx in (a, b))
        x_cells.append(star)
    geometry = {
        i: ((verts[a][0] + verts[b][0]) / 2, (verts[a][1] + verts[b][1]) / 2)
        for (a, b), i in eidx.items()
    }
    return CssCode(
        9, z_cells, x_cells,
        name="triangle-hole" if hole else "triangle",
        geometry=geometry,
    )


def build_toric_3d(Lx: int, Ly: int, Lz: int, convention: str = "primal") -> CssCode:
    """Cubic-lattice code with qubits on edges (periodic in all directions).

    primal: z-cells on plaquettes, x-cells on vertices.
    dual: z-cells on vertices, x-cells on plaquettes (the qubit-wise
    Hadamard image of primal).
    """
    if min(Lx, Ly, Lz) < 2:
        raise ValueError("each dimension must be at least 2")
    dims = (Lx, Ly, Lz)
    nsites = Lx * Ly * Lz

    def site(x, y, z):
        return ((z % Lz) * Ly + (y % Ly)) * Lx + (x % Lx)

    def edge(axis, x, y, z):
        return axis * nsites + site(x, y, z)

    n = 3 * nsites
    unit = {0: (1, 0, 0), 1: (0, 1, 0), 2: (0, 0, 1)}

    vertex_cells = []
    for z in range(Lz):
        for y in range(Ly):
            for x in range(Lx):
                cell = []
                for axis in range(3):
                    dx, dy, dz = unit[axis]
                    cell.append(edge(axis, x, y, z))
                    cell.append(edge(axis, x - dx, y - dy, z - dz))
                vertex_cells.append(tuple(cell))
    plaquette_cells = []
    for z in range(Lz):
        for y in range(Ly):
            for x in range(Lx):
                for a1, a2 in ((0, 1), (0, 2), (1, 2)):
                    d1, d2 = unit[a1], unit[a2]
                    plaquette_cells.append(
                        (
                            edge(a1, x, y, z),
                            edge(a1, x + d2[0], y + d2[1], z + d2[2]),
                            edge(a2, x, y, z),
                            edge(a2, x + d1[0], y + d1[1], z + d1[2]),
                        )
                    )
    geometry = {}
    for z in range(Lz):
        for y in range(Ly):
            for x in range(Lx):
                for axis in range(3):
                    dx, dy, dz = unit[axis]
                    geometry[edge(axis, x, y, z)] = (x + dx / 2, y + dy / 2, z + dz / 2)
    if convention == "primal":
        return CssCode(
            n, plaquette_cells, vertex_cells,
            name=f"toric3d-{Lx}x{Ly}x{Lz}", geometry=geometry,
        )
    if convention == "dual":
        return CssCode(
            n, vertex_cells, plaquette_cells,
            name=f"toric3d-dual-{Lx}x{Ly}x{Lz}", geometry=geometry,
        )
    raise ValueError(f"unknown convention {convention!r}")


def build_color_2d(L: int) -> CssCode:
    """Hexagonal-lattice color code on an L x L torus of hexagons.

    Qubits sit on the vertices (two per hexagon); every face carries both a
    z-cell and an x-cell on the same support.  Faces are three-colored,
    which needs L divisible by 3.
    """
    if L < 3 or L % 3:
        raise ValueError("hexagonal torus is three-colorable only for L divisible by 3")

    def q(i, j, s):
        return ((i % L) * L + (j % L)) * 2 + s

    def face(i, j):
        return (
            q(i, j, 0), q(i, j, 1), q(i, j + 1, 0),
            q(i - 1, j + 1, 1), q(i - 1, j + 1, 0), q(i - 1, j, 1),
        )

    n = 2 * L * L
    faces = []
    colors = []
    for i in range(L):
        for j in range(L):
            faces.append(tuple(sorted(face(i, j))))
            colors.append("rgb"[(i + 2 * j) % 3])
    geometry = {}
    for i in range(L):
        for j in range(L):
            bx = 1.5 * i + 0.75 * j
            by = j * 1.3
            geometry[q(i, j, 0)] = (bx, by)
            geometry[q(i, j, 1)] = (bx + 0.75, by + 0.4)
    moves = []
    fidx = {(i, j): i * L + j for i in range(L) for j in range(L)}
    for i in range(L):
        for j in range(L):
            moves.append(Move(fidx[(i, j)], fidx[((i + 1) % L, (j + 1) % L)],
                              (q(i, j + 1, 0), q(i, j + 1, 1))))
            moves.append(Move(fidx[(i, j)], fidx[((i + 2) % L, (j - 1) % L)],
                              (q(i + 1, j, 0), q(i, j, 1))))
    logical_xs = []
    logical_zs = []
    for color_offset, (di, dj) in ((0, (1, 1)), (1, (2, -1))):
        # Chains of same-color hops; one loop per color and direction.
        for ci, cj in ((0, 0), (1, 0), (2, 0)):
            support: set[int] = set()
            i, j = ci, cj
            for _ in range(L):
                if (di, dj) == (1, 1):
                    support ^= {q(i, j + 1, 0), q(i, j + 1, 1)}
                else:
                    support ^= {q(i + 1, j, 0), q(i, j, 1)}
                i, j = (i + di) % L, (j + dj) % L
            color = "rgb"[(ci + 2 * cj) % 3]
            logical_xs.append(
                LogicalOperator("Lx", tuple(sorted(support)), direction=color_offset, color=color)
            )
            logical_zs.append(
                LogicalOperator("Lz", tuple(sorted(support)), direction=color_offset, color=color)
            )
    code = CssCode(
        n, list(faces), list(faces),
        name=f"color2d-L{L}", cell_colors=colors,
        geometry=geometry, moves=moves,
    )
    # Geometric colored loops over-generate (they span k + dependent ones);
    # keep them as metadata and let the paired logicals be computed.
    code.colored_loops = (logical_xs, logical_zs)  # type: ignore[attr-defined]
    return code


def build_colex_3d(preset: str) -> CssCode:
    """Hand-encoded three-dimensional colored-cell presets.

    three_cell: one 32-qubit central cell and two 8-qubit cubes, joined by
    quadrilateral faces.  six_cell: the same drum with four lateral cubes,
    carrying a proper four-coloring of cells and connector edges.
    """
    if preset == "three_cell":
        return _colex_drum(lateral_cubes=0)
    if preset == "six_cell":
        return _colex_drum(lateral_cubes=3)
    raise ValueError(f"unknown preset {preset!r}")


def _colex_drum(lateral_cubes: int) -> CssCode:
    # Central cell: four rings of eight vertices (0..31), stacked.
    rings = [list(range(8 * r, 8 * r + 8)) for r in range(4)]
    n = 32
    z_cells = [tuple(range(32))]
    colors = ["g"]
    x_cells = []
    for r in range(3):
        for i in range(8):
            x_cells.append(
                tuple(sorted((rings[r][i], rings[r][(i + 1) % 8],
                              rings[r + 1][(i + 1) % 8], rings[r + 1][i])))
            )
    moves: list[Move] = []
    edge_colors: list[tuple[int, int, str]] = []
    # Vertical edges alternate r/g by level so mid-ring vertices stay rainbow;
    # slots hosting a lateral connector give up their g vertical.
    removed_verticals: set[tuple[int, int]] = set()
    for r in range(4):
        for i in range(8):
            edge_colors.append((rings[r][i], rings[r][(i + 1) % 8], "yb"[i % 2]))
    def emit_verticals():
        for r in range(3):
            color = "r" if r != 1 else "g"
            for i in range(8):
                if (r, i) not in removed_verticals:
                    edge_colors.append((rings[r][i], rings[r + 1][i], color))

    def add_cube(ring, offsets, color):
        nonlocal n
        base = n
        own = list(range(base, base + 8))
        n += 8
        inner, outer = own[:4], own[4:]
        z_cells.append(tuple(own))
        colors.append(color)
        cube_idx = len(z_cells) - 1
        # cube faces
        x_cells.append(tuple(inner))
        x_cells.append(tuple(outer))
        for i in range(4):
            x_cells.append(
                tuple(sorted((inner[i], inner[(i + 1) % 4], outer[(i + 1) % 4], outer[i])))
            )
            edge_colors.append((inner[i], inner[(i + 1) % 4], "yb"[i % 2]))
            edge_colors.append((outer[i], outer[(i + 1) % 4], "yb"[i % 2]))
            edge_colors.append((inner[i], outer[i], "r"))
        # connector faces onto the central ring (even ring slots)
        anchors = [ring[o] for o in offsets]
        for i in range(4):
            a1, a2 = anchors[i], anchors[(i + 1) % 4]
            x_cells.append(tuple(sorted((inner[i], inner[(i + 1) % 4], a2, a1))))
            edge_colors.append((inner[i], a1, "g"))
        moves.append(Move(0, cube_idx, (anchors[0], inner[0])))
        return cube_idx

    add_cube(rings[0], (0, 2, 4, 6), "r")
    add_cube(rings[3], (0, 2, 4, 6), "r")
    lateral_specs = [(1, 1, "b"), (2, 1, "b"), (1, 0, "y")]
    for c in range(lateral_cubes):
        ring_no, offset, color = lateral_specs[c]
        slots = tuple((offset + 2 * t) % 8 for t in range(4))
        for s in slots:
            removed_verticals.add((1, s) if ring_no == 1 else (1, s))
        add_cube(rings[ring_no], slots, color)
    emit_verticals()
    geometry = {}
    for r in range(4):
        for i in range(8):
            geometry[rings[r][i]] = (float(i), float(3 - r) * 2)
    for q in range(32, n):
        geometry[q] = (float(q % 8) + 0.3, -2.0 - (q - 32) // 8 * 1.5)
    name = "colex3d-three" if lateral_cubes == 0 else "colex3d-six"
    code = CssCode(n, z_cells, x_cells, name=name, cell_colors=colors,
                   geometry=geometry, moves=moves)
    code.edge_colors = edge_colors  # type: ignore[attr-defined]
    return code


def coloring_report(code: CssCode) -> list[str]:
    """Check cell and edge colorings of a colored-cell code.

    Proper means: cells sharing a qubit carry different colors, every
    connector edge carries a color, and no vertex touches two same-colored
    edges.
    """
    problems = []
    if code.cell_colors is None:
        return ["code has no cell colors"]
    for i in range(len(code.z_cells)):
        for j in range(i + 1, len(code.z_cells)):
            if set(code.z_cells[i]) & set(code.z_cells[j]):
                if code.cell_colors[i] == code.cell_colors[j]:
                    problems.append(f"adjacent cells {i},{j} share color {code.cell_colors[i]}")
    edge_colors = getattr(code, "edge_colors", None)
    if edge_colors is not None:
        at_vertex: dict[int, list[str]] = {}
        for a, b, col in edge_colors:
            if not col:
                problems.append(f"edge {a}-{b} is uncolored")
            at_vertex.setdefault(a, []).append(col)
            at_vertex.setdefault(b, []).append(col)
        for v, cols in at_vertex.items():
            if len(cols) != len(set(cols)):
                problems.append(f"vertex {v} touches two edges of the same color")
    return problems
