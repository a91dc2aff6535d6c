"""Smith normal form over the integers, with unimodular transforms."""

from __future__ import annotations

from typing import Sequence


def _swap_rows(M, i, j):
    M[i], M[j] = M[j], M[i]


def _swap_cols(M, i, j):
    for row in M:
        row[i], row[j] = row[j], row[i]


def smith_normal_form(A: Sequence[Sequence[int]]):
    """Return ``(D, U, V)`` with ``U A V = D`` diagonal, ``d_1 | d_2 | ...``, d_i >= 0.

    Exact arithmetic on Python ints; ``U`` and ``V`` are unimodular.
    """
    D = [[int(v) for v in row] for row in A]
    m = len(D)
    n = len(D[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_op(dst, src, q):  # row dst -= q * row src
        if q:
            D[dst] = [a - q * b for a, b in zip(D[dst], D[src])]
            U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def col_op(dst, src, q):  # col dst -= q * col src
        if q:
            for M in (D, V):
                for row in M:
                    row[dst] -= q * row[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
            if not entries:
                break
            _, pi, pj = min(entries)
            if pi != t:
                _swap_rows(D, t, pi)
                _swap_rows(U, t, pi)
            if pj != t:
                _swap_cols(D, t, pj)
                _swap_cols(V, t, pj)
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                row_op(i, t, D[i][t] // p)
                dirty |= D[i][t] != 0
            for j in range(t + 1, n):
                col_op(j, t, D[t][j] // p)
                dirty |= D[t][j] != 0
            if dirty:
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p),
                None,
            )
            if bad is None:
                break
            # fold the offending row into row t and reduce again
            i = bad[0]
            D[t] = [a + b for a, b in zip(D[t], D[i])]
            U[t] = [a + b for a, b in zip(U[t], U[i])]
        if t < m and t < n and D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
    return D, U, V


def invariant_factors(A) -> list[int]:
    D, _, _ = smith_normal_form(A)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]
