"""GF(2) linear algebra on integer bitsets.

Rows are Python ints used as bit vectors (bit i = column i).  Arbitrary
precision makes these word-packed for free, and ``int.bit_count`` gives a
word-parallel popcount.
"""

from __future__ import annotations


def rank(rows: list[int]) -> int:
    """Rank of the row set over GF(2)."""
    work = [r for r in rows if r]
    rk = 0
    while work:
        pivot = min(work, key=lambda r: r.bit_length())
        bit = 1 << (pivot.bit_length() - 1)
        work = [r ^ pivot if r & bit else r for r in work]
        work = [r for r in work if r]
        rk += 1
    return rk


def rref(rows: list[int], n_cols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form.

    Returns (reduced_rows, pivot_cols); zero rows are dropped.  Columns are
    eliminated from the lowest bit upward.
    """
    work = list(rows)
    pivots: list[int] = []
    out: list[int] = []
    row_idx = 0
    for col in range(n_cols):
        bit = 1 << col
        pivot = next((i for i in range(row_idx, len(work)) if work[i] & bit), None)
        if pivot is None:
            continue
        work[row_idx], work[pivot] = work[pivot], work[row_idx]
        for i in range(len(work)):
            if i != row_idx and work[i] & bit:
                work[i] ^= work[row_idx]
        pivots.append(col)
        row_idx += 1
        if row_idx == len(work):
            break
    out = [r for r in work[:row_idx]]
    return out, pivots


def in_rowspan(vec: int, rows: list[int]) -> bool:
    """True if vec lies in the GF(2) span of rows."""
    return rank(rows + [vec]) == rank(rows)


def solve(rows: list[int], n_cols: int, target: int) -> list[int] | None:
    """Find row indices whose XOR equals target, or None.

    Solves x^T A = target for the row combination; returns the list of
    selected row indices (one valid solution).
    """
    # Augment each row with a tag bit identifying its original index.
    tagged = [(rows[i], 1 << i) for i in range(len(rows))]
    cur_t = target
    cur_tag = 0
    reduced: list[tuple[int, int]] = []
    for col in range(n_cols):
        bit = 1 << col
        pivot = next((i for i in range(len(tagged)) if tagged[i][0] & bit), None)
        if pivot is None:
            continue
        prow, ptag = tagged.pop(pivot)
        tagged = [(r ^ prow, t ^ ptag) if r & bit else (r, t) for (r, t) in tagged]
        if cur_t & bit:
            cur_t ^= prow
            cur_tag ^= ptag
        reduced.append((prow, ptag))
    if cur_t:
        return None
    return [i for i in range(len(rows)) if cur_tag & (1 << i)]


def nullspace(rows: list[int], n_cols: int) -> list[int]:
    """Basis of {x : for all rows r, |x & r| even}, i.e. ker of the matrix
    with the given rows, as bitsets over the columns."""
    reduced, pivots = rref(rows, n_cols)
    pivot_set = set(pivots)
    free = [c for c in range(n_cols) if c not in pivot_set]
    basis = []
    for f in free:
        vec = 1 << f
        for r, p in zip(reduced, pivots):
            if r & (1 << f):
                vec |= 1 << p
        basis.append(vec)
    return basis


def dependency_sets(rows: list[int], n_cols: int) -> list[list[int]]:
    """Index sets of rows whose XOR vanishes (basis of row dependencies)."""
    tagged = [rows[i] | (1 << (n_cols + i)) for i in range(len(rows))]
    reduced, _ = rref(tagged, n_cols + len(rows))
    mask = (1 << n_cols) - 1
    deps = []
    for r in reduced:
        if r & mask == 0 and r:
            deps.append([i for i in range(len(rows)) if r >> (n_cols + i) & 1])
    return deps
