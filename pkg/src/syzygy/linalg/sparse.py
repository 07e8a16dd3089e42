"""Row-sparse matrices over Z/p and their text serialization."""
from __future__ import annotations

import numpy as np

from ..errors import DimensionMismatch, MalformedMatrixFile


class SparseMatrix:
    """CSR matrix with canonical entries in [0, p), no explicit zeros.

    Column indices are strictly increasing within each row.
    """

    __slots__ = ("nrows", "ncols", "indptr", "indices", "data", "p")

    def __init__(self, nrows, ncols, indptr, indices, data, p):
        self.nrows = int(nrows)
        self.ncols = int(ncols)
        self.indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        self.indices = np.ascontiguousarray(indices, dtype=np.int64)
        self.data = np.ascontiguousarray(data, dtype=np.int64)
        self.p = int(p)
        if len(self.indptr) != self.nrows + 1:
            raise DimensionMismatch("indptr length must be nrows + 1")

    @classmethod
    def from_coo(cls, nrows, ncols, rows, cols, vals, p):
        """Build from triplets; duplicates are summed and zeros dropped."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        if isinstance(vals, np.ndarray) and vals.dtype == np.int64:
            vals = vals % p
        else:
            vals = np.array([int(v) % p for v in vals], dtype=np.int64)
        if len(rows) and (rows.min() < 0 or rows.max() >= nrows or cols.min() < 0 or cols.max() >= ncols):
            raise DimensionMismatch("entry index outside matrix shape")
        order = np.lexsort((cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]
        if len(rows) > 1:
            dup = (rows[1:] == rows[:-1]) & (cols[1:] == cols[:-1])
            if dup.any():
                keep = np.concatenate([[True], ~dup])
                group = np.cumsum(keep) - 1
                summed = [0] * int(keep.sum())
                for g, v in zip(group.tolist(), vals.tolist()):
                    summed[g] = (summed[g] + v) % p
                rows, cols = rows[keep], cols[keep]
                vals = np.asarray(summed, dtype=np.int64)
        nz = vals != 0
        rows, cols, vals = rows[nz], cols[nz], vals[nz]
        indptr = np.zeros(nrows + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=nrows), out=indptr[1:])
        return cls(nrows, ncols, indptr, cols, vals, p)

    @classmethod
    def from_dense(cls, dense, p):
        dense = [[int(x) % p for x in row] for row in dense]
        nrows = len(dense)
        ncols = len(dense[0]) if nrows else 0
        trip = [(i, j, v) for i, row in enumerate(dense) for j, v in enumerate(row) if v]
        rows, cols, vals = zip(*trip) if trip else ((), (), ())
        return cls.from_coo(nrows, ncols, rows, cols, vals, p)

    @classmethod
    def zeros(cls, nrows, ncols, p):
        return cls(nrows, ncols, np.zeros(nrows + 1, dtype=np.int64), [], [], p)

    @classmethod
    def identity(cls, n, p):
        return cls(n, n, np.arange(n + 1), np.arange(n), np.ones(n, dtype=np.int64), p)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def nnz(self):
        return int(self.indptr[-1])

    def row(self, i):
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return list(zip(self.indices[lo:hi].tolist(), self.data[lo:hi].tolist()))

    @property
    def rows(self):
        return [self.row(i) for i in range(self.nrows)]

    def coo(self):
        rows = np.repeat(np.arange(self.nrows, dtype=np.int64), np.diff(self.indptr))
        return rows, self.indices, self.data

    def transpose(self):
        r, c, v = self.coo()
        return SparseMatrix.from_coo(self.ncols, self.nrows, c, r, v, self.p)

    def permute(self, row_perm=None, col_perm=None):
        """Matrix with row i moved to row_perm[i] and column j to col_perm[j]."""
        r, c, v = self.coo()
        if row_perm is not None:
            r = np.asarray(row_perm, dtype=np.int64)[r]
        if col_perm is not None:
            c = np.asarray(col_perm, dtype=np.int64)[c]
        return SparseMatrix.from_coo(self.nrows, self.ncols, r, c, v, self.p)

    def scale_rows(self, factors):
        factors = [int(f) % self.p for f in factors]
        r, c, v = self.coo()
        vals = [x * factors[i] % self.p for i, x in zip(r.tolist(), v.tolist())]
        return SparseMatrix.from_coo(self.nrows, self.ncols, r, c, vals, self.p)

    def hstack(self, other):
        if other.nrows != self.nrows or other.p != self.p:
            raise DimensionMismatch("hstack needs equal row counts and moduli")
        r1, c1, v1 = self.coo()
        r2, c2, v2 = other.coo()
        return SparseMatrix.from_coo(
            self.nrows, self.ncols + other.ncols,
            np.concatenate([r1, r2]), np.concatenate([c1, c2 + self.ncols]),
            np.concatenate([v1, v2]), self.p,
        )

    def to_dense(self):
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i in range(self.nrows):
            for j, v in self.row(i):
                out[i][j] = v
        return out

    def tobytes(self) -> bytes:
        head = np.array([self.nrows, self.ncols, self.p], dtype=np.int64).tobytes()
        return head + self.indptr.tobytes() + self.indices.tobytes() + self.data.tobytes()

    def __eq__(self, other):
        return isinstance(other, SparseMatrix) and self.tobytes() == other.tobytes()

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz}, p={self.p})"


def write_matrix_text(M: SparseMatrix, fh) -> None:
    """``<nrows> <ncols> <modulus>``, then ``<i> <j> <v>`` (1-based), then ``0 0 0``."""
    fh.write(f"{M.nrows} {M.ncols} {M.p}\n")
    for i in range(M.nrows):
        for j, v in M.row(i):
            fh.write(f"{i + 1} {j + 1} {v}\n")
    fh.write("0 0 0\n")


def read_matrix_text(fh) -> SparseMatrix:
    from ..ff import FieldCtx

    lines = [ln.split() for ln in fh if ln.strip()]
    if not lines:
        raise MalformedMatrixFile("empty matrix file")
    try:
        head = [int(x) for x in lines[0]]
        body = [[int(x) for x in parts] for parts in lines[1:]]
    except ValueError as exc:
        raise MalformedMatrixFile(f"non-integer token: {exc}") from exc
    if len(head) != 3:
        raise MalformedMatrixFile("header must be '<nrows> <ncols> <modulus>'")
    nrows, ncols, p = head
    if nrows < 0 or ncols < 0:
        raise MalformedMatrixFile("negative dimension")
    try:
        FieldCtx(p)
    except (ValueError, ArithmeticError) as exc:
        raise MalformedMatrixFile(f"bad modulus: {exc}") from exc
    if not body or body[-1] != [0, 0, 0]:
        raise MalformedMatrixFile("missing '0 0 0' terminator")
    body = body[:-1]
    seen = set()
    rows, cols, vals = [], [], []
    for parts in body:
        if len(parts) != 3:
            raise MalformedMatrixFile(f"bad entry line {parts}")
        i, j, v = parts
        if not (1 <= i <= nrows and 1 <= j <= ncols):
            raise MalformedMatrixFile(f"entry ({i}, {j}) outside {nrows}x{ncols}")
        if (i, j) in seen:
            raise MalformedMatrixFile(f"duplicate entry ({i}, {j})")
        seen.add((i, j))
        rows.append(i - 1)
        cols.append(j - 1)
        vals.append(v % p)
    return SparseMatrix.from_coo(nrows, ncols, rows, cols, vals, p)
