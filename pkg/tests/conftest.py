"""Shared oracle helpers for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from topocluster.dense import state_from_generators
from topocluster.graphstate import Graph, GraphStateRep
from topocluster.pauli import PauliString
from topocluster.tableau import StabilizerTableau


def random_pauli(rng: np.random.Generator, n: int) -> PauliString:
    return PauliString(
        n,
        int(rng.integers(0, 1 << n)),
        int(rng.integers(0, 1 << n)),
        int(rng.integers(4)),
    )


def random_graph(rng: np.random.Generator, n: int, p: float = 0.45) -> Graph:
    g = Graph(range(n))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                g.add_edge(i, j)
    return g


def measured_equivalent(
    rep: GraphStateRep,
    v: int,
    basis: str,
    outcome: int,
    special: int | None = None,
    dense: bool = False,
) -> bool | None:
    """Compare a graph rule against direct tableau measurement.

    Returns None when the forced outcome contradicts a deterministic
    measurement (no branch to compare).
    """
    before = rep.to_tableau()
    idx = rep.vertex_index()
    p = PauliString.single(len(idx), idx[v], basis)
    direct = before.copy()
    try:
        direct.measure_pauli(p, forced=outcome)
    except Exception:
        return None
    reduced = direct.factor_out([idx[v]])
    after = rep.copy()
    after.measure(v, basis, outcome=outcome, special=special)
    t2 = after.to_tableau()
    if not reduced.same_group(t2):
        return False
    if dense:
        d1 = state_from_generators(reduced.n, reduced.generators())
        d2 = state_from_generators(t2.n, t2.generators())
        if d1.fidelity(d2) < 1 - 1e-10:
            return False
    return True


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240811)
