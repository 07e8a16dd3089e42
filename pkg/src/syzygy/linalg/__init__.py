"""Exact sparse linear algebra over Z/p.

The hot kernels come from the compiled ``_core`` extension when it is
importable and from ``_pure`` otherwise.  ``SYZYGY_BACKEND=python`` forces the
fallback; ``get_backend`` gives explicit access to either one.
"""
from __future__ import annotations

import importlib
import os
from dataclasses import dataclass

import numpy as np

from ..errors import DimensionMismatch
from .sparse import SparseMatrix, read_matrix_text, write_matrix_text

__all__ = [
    "BACKEND",
    "SparseMatrix",
    "WiedemannResult",
    "available_backends",
    "get_backend",
    "matvec",
    "matvec_transpose",
    "mulmod_arrays",
    "rank_elimination",
    "rank_wiedemann",
    "read_matrix_text",
    "write_matrix_text",
]

_MODULES = {"cython": "._core", "python": "._pure"}


def get_backend(name: str | None = None):
    """Kernel module by name (``cython`` or ``python``); None selects the default."""
    if name is None:
        return _default
    return importlib.import_module(_MODULES[name], __name__)


def available_backends() -> list[str]:
    out = []
    for name in _MODULES:
        try:
            get_backend(name)
        except ImportError:
            continue
        out.append(name)
    return out


def _select():
    if os.environ.get("SYZYGY_BACKEND", "").lower() in ("python", "pure"):
        return get_backend("python")
    try:
        return get_backend("cython")
    except ImportError:
        return get_backend("python")


_default = _select()
BACKEND = _default.NAME


def mulmod_arrays(a, b, p: int) -> np.ndarray:
    """Elementwise a*b mod p for canonical int64 arrays."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if p < (1 << 31):
        return a * b % p
    return (a.astype(object) * b.astype(object) % p).astype(np.int64)


def matvec(M: SparseMatrix, v, backend: str | None = None) -> np.ndarray:
    v = np.ascontiguousarray(v, dtype=np.int64) % M.p
    if len(v) != M.ncols:
        raise DimensionMismatch(f"vector length {len(v)} != ncols {M.ncols}")
    return get_backend(backend).csr_matvec(M.indptr, M.indices, M.data, v, M.p)


def matvec_transpose(M: SparseMatrix, v, backend: str | None = None) -> np.ndarray:
    v = np.ascontiguousarray(v, dtype=np.int64) % M.p
    if len(v) != M.nrows:
        raise DimensionMismatch(f"vector length {len(v)} != nrows {M.nrows}")
    T = M.transpose()
    return get_backend(backend).csr_matvec(T.indptr, T.indices, T.data, v, M.p)


def rank_elimination(M: SparseMatrix, backend: str | None = None) -> int:
    """Exact rank by sparse Gaussian elimination with Markowitz pivoting."""
    if M.nnz == 0:
        return 0
    kern = get_backend(backend)
    return int(kern.markowitz_rank(M.nrows, M.ncols, M.indptr, M.indices, M.data, M.p))


@dataclass(frozen=True)
class WiedemannResult:
    rank: int
    certified: bool = False


def _wiedemann_once(A: SparseMatrix, At: SparseMatrix, rng, kern) -> int:
    p = A.p
    m, n = A.shape
    d1 = rng.integers(1, p, size=n, dtype=np.int64) if p > 2 else np.ones(n, dtype=np.int64)
    d2 = rng.integers(1, p, size=m, dtype=np.int64) if p > 2 else np.ones(m, dtype=np.int64)
    v = rng.integers(0, p, size=n, dtype=np.int64)
    # B = D1 A^T D2 A D1, with D1 folded into the columns of A
    data = mulmod_arrays(A.data, d1[A.indices], p)
    tdata = mulmod_arrays(At.data, d1[np.repeat(np.arange(n), np.diff(At.indptr))], p)
    seq = kern.krylov_symmetric(A.indptr, A.indices, data, At.indptr, At.indices, tdata,
                                d2, v, p, 2 * n)
    conn, _ = kern.berlekamp_massey(np.ascontiguousarray(seq, dtype=np.int64), p)
    nz = np.flatnonzero(conn)
    return int(nz[-1]) if len(nz) else 0


def rank_wiedemann(M: SparseMatrix, seed: int = 0, trials: int = 2,
                   backend: str | None = None) -> WiedemannResult:
    """Probabilistic black-box rank; never exceeds the true rank.

    The rank of the symmetric preconditioned operator D1 A^T D2 A D1 (built
    on the smaller side of M) is read off as the degree of the
    Berlekamp-Massey connection polynomial of v^T B^i v, i.e. the minimal
    polynomial with its power of x removed.  The maximum over ``trials``
    independent preconditioners is returned.
    """
    if M.nnz == 0:
        return WiedemannResult(0)
    kern = get_backend(backend)
    A = M if M.nrows >= M.ncols else M.transpose()
    At = A.transpose()
    best = 0
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        best = max(best, _wiedemann_once(A, At, rng, kern))
    return WiedemannResult(best)
