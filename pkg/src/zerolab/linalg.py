"""Sparse exact linear algebra over the rationals.

Rows are dicts ``{column: Fraction}``.  Only what the rest of the package
needs: rank, row echelon form and kernel bases.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Sequence

SparseRow = Dict[int, Fraction]


def _to_sparse(row) -> SparseRow:
    if isinstance(row, dict):
        return {c: Fraction(v) for c, v in row.items() if v}
    return {c: Fraction(v) for c, v in enumerate(row) if v}


def echelon(rows: Sequence) -> List[SparseRow]:
    """Reduced row echelon form; returns the nonzero rows, pivots ascending.

    Each returned row has a pivot entry equal to 1 at ``min(row)``.
    """
    pivots: Dict[int, SparseRow] = {}
    for raw in rows:
        row = _to_sparse(raw)
        while row:
            col = min(row)
            piv = pivots.get(col)
            if piv is None:
                inv = 1 / row[col]
                row = {c: v * inv for c, v in row.items()}
                pivots[col] = row
                break
            f = row[col]
            for c, v in piv.items():
                nv = row.get(c, 0) - f * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
    # back substitution, from the largest pivot down
    cols = sorted(pivots)
    for i in range(len(cols) - 1, -1, -1):
        prow = pivots[cols[i]]
        for j in range(i):
            other = pivots[cols[j]]
            f = other.get(cols[i])
            if f:
                for c, v in prow.items():
                    nv = other.get(c, 0) - f * v
                    if nv:
                        other[c] = nv
                    else:
                        other.pop(c, None)
    return [pivots[c] for c in cols]


def rank(rows: Sequence) -> int:
    pivots: Dict[int, SparseRow] = {}
    for raw in rows:
        row = _to_sparse(raw)
        while row:
            col = min(row)
            piv = pivots.get(col)
            if piv is None:
                inv = 1 / row[col]
                pivots[col] = {c: v * inv for c, v in row.items()}
                break
            f = row[col]
            for c, v in piv.items():
                nv = row.get(c, 0) - f * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
    return len(pivots)


def nullspace(rows: Sequence, ncols: int) -> List[List[Fraction]]:
    """Basis of ``{x : A x = 0}`` for the matrix whose rows are ``rows``."""
    ech = echelon(rows)
    pivot_cols = [min(r) for r in ech]
    free = [c for c in range(ncols) if c not in set(pivot_cols)]
    basis = []
    for fcol in free:
        vec = [Fraction(0)] * ncols
        vec[fcol] = Fraction(1)
        for prow, pc in zip(ech, pivot_cols):
            v = prow.get(fcol)
            if v:
                vec[pc] = -v
        basis.append(vec)
    return basis


def transpose(rows: Sequence[SparseRow]) -> List[SparseRow]:
    cols: Dict[int, SparseRow] = {}
    for i, row in enumerate(rows):
        for c, v in _to_sparse(row).items():
            cols.setdefault(c, {})[i] = v
    if not cols:
        return []
    return [cols.get(c, {}) for c in range(max(cols) + 1)]
