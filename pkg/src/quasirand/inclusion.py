"""Set-inclusion matrices, exact rank, and the log-linearized pair system.

The inclusion matrix of parameters (r, h) has one row per h-element subset
of {0..r-1} and one column per 2-element subset, with a 1 exactly when the
pair lies inside the h-set.  Rows and columns are ordered colexicographically
-- sorted by largest element, then the next -- which keeps every index
reproducible.  For r >= h+2 the matrix has full column rank C(r,2), so the
linear system it defines on per-pair unknowns has a unique least-squares
solution.

Rank is computed over the rationals by fraction-free (Bareiss) elimination
on Python integers: the 0/1 entries grow into exact minors, never floats,
so the full-rank validation carries no rounding risk.  The least-squares
solve, whose right-hand side comes from logarithms, is floating point with
the residual reported.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .patterns import PatternGraph

# enumeration caps keeping exact elimination fast
MAX_R = 12
MAX_H = 6


def colex_subsets(r: int, k: int) -> list[tuple[int, ...]]:
    """k-element subsets of {0..r-1} in colexicographic order."""
    return sorted(combinations(range(r), k), key=lambda t: t[::-1])


@dataclass(frozen=True)
class InclusionMatrix:
    r: int
    h: int
    matrix: np.ndarray                     # C(r,h) x C(r,2) of 0/1
    row_subsets: tuple                     # h-subsets, colex order
    col_pairs: tuple                       # 2-subsets, colex order

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


def build_inclusion_matrix(r: int, h: int) -> InclusionMatrix:
    """Containment matrix of h-subsets versus pairs; requires 2 < h <= r."""
    if h <= 2:
        raise ValueError("h must be greater than 2")
    if r < h:
        raise ValueError("r must be at least h")
    if r > MAX_R or h > MAX_H:
        raise ValueError(f"desk-scale cap exceeded (r <= {MAX_R}, h <= {MAX_H})")
    rows = colex_subsets(r, h)
    cols = colex_subsets(r, 2)
    col_index = {pair: c for c, pair in enumerate(cols)}
    mat = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for i, subset in enumerate(rows):
        for pair in combinations(subset, 2):
            mat[i, col_index[pair]] = 1
    mat.setflags(write=False)
    return InclusionMatrix(r, h, mat, tuple(rows), tuple(cols))


def exact_rank(matrix) -> int:
    """Rank over the rationals via fraction-free Bareiss elimination.

    Accepts an InclusionMatrix or any integer matrix.  All arithmetic is on
    Python integers; divisions in the Bareiss update are exact.
    """
    if isinstance(matrix, InclusionMatrix):
        matrix = matrix.matrix
    arr = np.asarray(matrix)
    if arr.ndim != 2:
        raise ValueError("need a 2-d matrix")
    M = [[int(x) for x in row] for row in arr.tolist()]
    n_rows = len(M)
    n_cols = len(M[0]) if n_rows else 0
    rank = 0
    prev = 1
    for col in range(n_cols):
        pivot_row = None
        for rr in range(rank, n_rows):
            if M[rr][col] != 0:
                pivot_row = rr
                break
        if pivot_row is None:
            continue
        M[rank], M[pivot_row] = M[pivot_row], M[rank]
        pivot = M[rank][col]
        prow = M[rank]
        for rr in range(rank + 1, n_rows):
            row = M[rr]
            factor = row[col]
            for cc in range(col, n_cols):
                row[cc] = (pivot * row[cc] - factor * prow[cc]) // prev
        prev = pivot
        rank += 1
        if rank == n_rows:
            break
    return rank


@dataclass
class LinearSystem:
    matrix: InclusionMatrix
    rhs: np.ndarray
    solution: np.ndarray                  # one value per pair, colex order
    residual_norm: float

    def pair_value(self, i: int, j: int) -> float:
        key = (i, j) if i < j else (j, i)
        idx = self.matrix.col_pairs.index(key)
        return float(self.solution[idx])


def solve_log_system(H: PatternGraph, r: int, rhs) -> LinearSystem:
    """Least-squares solution of A(r, h) y = rhs on the per-pair unknowns.

    Requires r >= h+2 so the column rank is full and the solution unique.
    A constant rhs with every entry c*C(h,2) yields y identically c, since
    every row has exactly C(h,2) ones.
    """
    h = H.h
    if r < h + 2:
        raise ValueError("need r >= h + 2 for a unique solution")
    rhs = np.asarray(rhs, dtype=np.float64)
    expected_len = comb(r, h)
    if rhs.shape != (expected_len,):
        raise ValueError(f"rhs must have length C({r},{h}) = {expected_len}")
    A = build_inclusion_matrix(r, h)
    dense = A.matrix.astype(np.float64)
    solution, _, _, _ = np.linalg.lstsq(dense, rhs, rcond=None)
    residual = float(np.linalg.norm(dense @ solution - rhs))
    return LinearSystem(A, rhs, solution, residual)


def format_matrix(A: InclusionMatrix) -> str:
    """Dense 0/1 text dump, one row per line, for cross-checking."""
    return "\n".join("".join(str(int(x)) for x in row) for row in A.matrix)


def write_matrix(A: InclusionMatrix, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{A.shape[0]} {A.shape[1]}\n")
        fh.write(format_matrix(A))
        fh.write("\n")
