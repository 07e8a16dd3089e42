"""Small dense helpers over Z/p (Python ints) for section spaces and kernels."""
from __future__ import annotations


def rref_mod_p(rows, p: int):
    """Reduced row echelon form; the pivot of each row is its leftmost nonzero.

    Returns ``(reduced_rows, pivot_columns)`` with zero rows dropped.
    """
    rows = [[int(x) % p for x in r] for r in rows]
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def nullspace_mod_p(rows, ncols: int, p: int) -> list[list[int]]:
    """Basis of {x : rows . x = 0}, one vector per free column."""
    reduced, pivots = rref_mod_p(rows, p) if rows else ([], [])
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        x = [0] * ncols
        x[f] = 1
        for row, c in zip(reduced, pivots):
            if row[f]:
                x[c] = (-row[f]) % p
        basis.append(x)
    return basis
