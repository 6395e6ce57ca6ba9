"""Graph states and Pauli-measurement rewrite rules.

A graph state is tracked as a simple graph plus pending per-vertex local
Clifford byproducts.  Measuring a vertex in a Pauli basis rewrites the graph
(deletion, local complementation, or the pivot composite) and pushes the
outcome-dependent byproducts onto the neighbors; the byproducts stay lazy
until the state is exported to a tableau.

Every rule is certified elsewhere against direct tableau measurement; the
sign conventions baked in here are exactly the ones that make that
equivalence hold.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .pauli import LocalClifford, PauliString
from .tableau import StabilizerTableau


@dataclass
class RuleApplication:
    rule: str
    touched: list[int]
    outcomes: list[int]
    corrections: list[str] = field(default_factory=list)


class Graph:
    """Simple undirected graph on integer vertex ids."""

    __slots__ = ("adj",)

    def __init__(self, vertices=(), edges=()):
        self.adj: dict[int, set[int]] = {}
        for v in vertices:
            self.add_vertex(v)
        for a, b in edges:
            self.add_edge(a, b)

    def add_vertex(self, v: int) -> None:
        self.adj.setdefault(v, set())

    def add_edge(self, a: int, b: int) -> None:
        if a == b:
            raise ValueError("self loops are not allowed")
        self.add_vertex(a)
        self.add_vertex(b)
        self.adj[a].add(b)
        self.adj[b].add(a)

    def remove_vertex(self, v: int) -> None:
        for b in self.adj.pop(v):
            self.adj[b].discard(v)

    def toggle_edge(self, a: int, b: int) -> None:
        if b in self.adj[a]:
            self.adj[a].discard(b)
            self.adj[b].discard(a)
        else:
            self.adj[a].add(b)
            self.adj[b].add(a)

    def neighbors(self, v: int) -> set[int]:
        return self.adj[v]

    def vertices(self) -> list[int]:
        return sorted(self.adj)

    def edges(self) -> list[tuple[int, int]]:
        return sorted((a, b) for a in self.adj for b in self.adj[a] if a < b)

    def has_vertex(self, v: int) -> bool:
        return v in self.adj

    def copy(self) -> "Graph":
        g = Graph()
        g.adj = {v: set(nb) for v, nb in self.adj.items()}
        return g

    def local_complement(self, v: int) -> None:
        nbrs = sorted(self.adj[v])
        for i in range(len(nbrs)):
            for j in range(i + 1, len(nbrs)):
                self.toggle_edge(nbrs[i], nbrs[j])

    # -- serialization ----------------------------------------------------

    def to_text(self) -> str:
        lines = []
        for v in self.vertices():
            nbrs = " ".join(str(b) for b in sorted(self.adj[v]))
            lines.append(f"{v}: {nbrs}".rstrip())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        g = cls()
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            head, _, rest = line.partition(":")
            v = int(head)
            g.add_vertex(v)
            for tok in rest.split():
                g.add_edge(v, int(tok))
        return g

    def to_dot(self) -> str:
        lines = ["graph G {", "  node [shape=circle];"]
        for v in self.vertices():
            lines.append(f"  {v};")
        for a, b in self.edges():
            lines.append(f"  {a} -- {b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


_IDENT = LocalClifford.named("I")
_BASIS_BITS = {"X": (1, 0), "Y": (1, 1), "Z": (0, 1)}


class GraphStateRep:
    """Graph plus pending byproducts and the classical measurement record."""

    __slots__ = ("graph", "locals", "record", "applications")

    def __init__(self, graph: Graph | None = None):
        self.graph = graph if graph is not None else Graph()
        self.locals: dict[int, LocalClifford] = {}
        self.record: dict[int, int] = {}
        self.applications: list[RuleApplication] = []

    @classmethod
    def from_edges(cls, vertices, edges) -> "GraphStateRep":
        return cls(Graph(vertices, edges))

    def copy(self) -> "GraphStateRep":
        rep = GraphStateRep(self.graph.copy())
        rep.locals = dict(self.locals)
        rep.record = dict(self.record)
        rep.applications = list(self.applications)
        return rep

    # -- byproduct bookkeeping --------------------------------------------

    def local_at(self, v: int) -> LocalClifford:
        return self.locals.get(v, _IDENT)

    def push_local(self, v: int, op: LocalClifford) -> None:
        """Record 'op' applied before whatever is already pending at v."""
        combined = op.then(self.local_at(v))
        if combined.is_identity:
            self.locals.pop(v, None)
        else:
            self.locals[v] = combined

    def push_outer_local(self, v: int, op: LocalClifford) -> None:
        """Record 'op' applied on top of (after) the pending byproducts."""
        combined = self.local_at(v).then(op)
        if combined.is_identity:
            self.locals.pop(v, None)
        else:
            self.locals[v] = combined

    # -- export -------------------------------------------------------------

    def vertex_index(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.graph.vertices())}

    def base_generators(self) -> list[PauliString]:
        index = self.vertex_index()
        n = len(index)
        gens = []
        for v in self.graph.vertices():
            letters = {index[v]: "X"}
            for b in self.graph.neighbors(v):
                letters[index[b]] = "Z"
            gens.append(PauliString.from_letters(n, letters))
        return gens

    def to_tableau(self) -> StabilizerTableau:
        """Stabilizer tableau of the byproduct-conjugated graph state."""
        index = self.vertex_index()
        tab = StabilizerTableau.from_generators(self.base_generators(), n=len(index))
        for v, op in self.locals.items():
            if v in index and not op.is_identity:
                tab.apply_local(op, index[v])
        return tab

    # -- measurement dispatch -------------------------------------------------

    def measure(
        self,
        v: int,
        basis: str,
        outcome: int | None = None,
        rng: np.random.Generator | None = None,
        special: int | None = None,
    ) -> int:
        """Measure vertex v in a Pauli basis and rewrite the graph.

        ``outcome`` forces the physical result; otherwise it is drawn from
        ``rng``.  ``special`` picks the distinguished neighbor of the X rule
        (lowest index by default).
        """
        if not self.graph.has_vertex(v):
            raise KeyError(f"vertex {v} not in graph")
        if basis not in _BASIS_BITS:
            raise ValueError(f"basis must be X, Y or Z, not {basis!r}")
        if outcome is None:
            if rng is None:
                rng = np.random.default_rng()
            outcome = 1 if rng.integers(2) == 0 else -1
        elif outcome not in (1, -1):
            raise ValueError("outcome must be +1 or -1")

        # Pending byproduct at v turns the physical basis into an effective
        # one on the bare graph state: P U|G> = U (U^dag P U)|G>.
        pending = self.locals.pop(v, _IDENT)
        xb, zb = _BASIS_BITS[basis]
        eff = pending.inverse().conjugate_one(xb, zb, xb & zb)
        eff_letter = {(1, 0): "X", (1, 1): "Y", (0, 1): "Z"}[(eff.x, eff.z)]
        eff_sign = 1 if eff.label_phase == 0 else -1
        eff_outcome = outcome * eff_sign

        if eff_letter == "Z":
            self._rule_z(v, eff_outcome)
        elif eff_letter == "Y":
            self._rule_y(v, eff_outcome)
        else:
            self._rule_x(v, eff_outcome, special)
        self.record[v] = outcome
        return outcome

    def measure_z(self, v: int, outcome: int) -> "GraphStateRep":
        out = self.copy()
        out.measure(v, "Z", outcome=outcome)
        return out

    def measure_y(self, v: int, outcome: int) -> "GraphStateRep":
        out = self.copy()
        out.measure(v, "Y", outcome=outcome)
        return out

    def measure_x(self, v: int, outcome: int, special: int | None = None) -> "GraphStateRep":
        out = self.copy()
        out.measure(v, "X", outcome=outcome, special=special)
        return out

    # -- raw rules --------------------------------------------------------------

    def _rule_z(self, v: int, outcome: int) -> None:
        nbrs = sorted(self.graph.neighbors(v))
        self.graph.remove_vertex(v)
        corrections = []
        if outcome == -1:
            for b in nbrs:
                self.push_local(b, LocalClifford.named("Z"))
                corrections.append(f"Z{b}")
        self.applications.append(RuleApplication("measure_z", [v], [outcome], corrections))

    def _rule_y(self, v: int, outcome: int) -> None:
        nbrs = sorted(self.graph.neighbors(v))
        self.graph.local_complement(v)
        self.graph.remove_vertex(v)
        name = "S" if outcome == 1 else "SDG"
        corrections = []
        for b in nbrs:
            self.push_local(b, LocalClifford.named(name))
            corrections.append(f"{name}{b}")
        self.applications.append(RuleApplication("measure_y", [v], [outcome], corrections))

    def _rule_x(self, v: int, outcome: int, special: int | None) -> None:
        nbrs = sorted(self.graph.neighbors(v))
        corrections: list[str] = []
        if not nbrs:
            # Isolated vertex: |+> or |->, graph unchanged elsewhere.
            self.graph.remove_vertex(v)
            self.applications.append(RuleApplication("measure_x", [v], [outcome], []))
            return
        b0 = special if special is not None else nbrs[0]
        if b0 not in self.graph.neighbors(v):
            raise ValueError(f"special neighbor {b0} is not adjacent to {v}")
        nv = set(nbrs)
        nb0 = set(self.graph.neighbors(b0))
        if outcome == 1:
            rot, zset = "SY", sorted(nv - nb0 - {b0})
        else:
            rot, zset = "SYDG", sorted(nb0 - nv - {v})
        self.graph.local_complement(b0)
        self.graph.local_complement(v)
        self.graph.remove_vertex(v)
        self.graph.local_complement(b0)
        self.push_local(b0, LocalClifford.named(rot))
        corrections.append(f"{rot}{b0}")
        for b in zset:
            self.push_local(b, LocalClifford.named("Z"))
            corrections.append(f"Z{b}")
        self.applications.append(RuleApplication("measure_x", [v], [outcome], corrections))

    # -- composite rules -----------------------------------------------------------

    def uniformize(
        self,
        a: int,
        b: int,
        outcomes: tuple[int, int] | None = None,
        rng: np.random.Generator | None = None,
    ) -> tuple[int, int]:
        """Merge the neighborhoods of b into the third vertex of the a-b
        bridge by X-measuring first a and then b.

        Vertex a must be adjacent to exactly {c, b}; after the two
        measurements c has absorbed N(b) and both a, b are gone.
        """
        na = self.graph.neighbors(a)
        if b not in na or len(na) != 2:
            raise ValueError("first vertex must bridge exactly the absorbed vertex and the survivor")
        (c,) = sorted(na - {b})
        o1 = self.measure(a, "X", outcome=None if outcomes is None else outcomes[0], rng=rng, special=c)
        o2 = self.measure(b, "X", outcome=None if outcomes is None else outcomes[1], rng=rng, special=c)
        self.applications.append(RuleApplication("uniformize", [a, b, c], [o1, o2]))
        return o1, o2

    def contract_link(
        self,
        v: int,
        outcome: int | None = None,
        rng: np.random.Generator | None = None,
    ) -> int:
        """Remove a degree-2 subdivision vertex by Y-measuring it."""
        if len(self.graph.neighbors(v)) != 2:
            raise ValueError(f"vertex {v} is not a subdivision vertex")
        o = self.measure(v, "Y", outcome=outcome, rng=rng)
        self.applications.append(RuleApplication("link_contract", [v], [o]))
        return o

    def subdivide_edge(self, a: int, b: int, new_vertex: int) -> None:
        """Design-time inverse of contract_link: put new_vertex on edge a-b."""
        if b not in self.graph.neighbors(a):
            raise ValueError(f"no edge {a}-{b}")
        if self.graph.has_vertex(new_vertex):
            raise ValueError(f"vertex {new_vertex} already present")
        self.graph.toggle_edge(a, b)
        self.graph.add_edge(a, new_vertex)
        self.graph.add_edge(new_vertex, b)
