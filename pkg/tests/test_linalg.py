import io
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from syzygy.errors import DimensionMismatch, MalformedMatrixFile
from syzygy.linalg import (
    SparseMatrix,
    get_backend,
    matvec,
    matvec_transpose,
    rank_elimination,
    rank_wiedemann,
    read_matrix_text,
    write_matrix_text,
)

P = 2147483647


def random_sparse(rng, m, n, density, p, rank=None):
    """Random sparse matrix, optionally of bounded rank (product of two sparse factors)."""
    if rank is None:
        trip = [(i, j, rng.randrange(1, p)) for i in range(m) for j in range(n) if rng.random() < density]
        r, c, v = zip(*trip) if trip else ((), (), ())
        return SparseMatrix.from_coo(m, n, r, c, v, p)
    L = [[rng.randrange(p) if rng.random() < 0.5 else 0 for _ in range(rank)] for _ in range(m)]
    R = [[rng.randrange(p) if rng.random() < density * 3 else 0 for _ in range(n)] for _ in range(rank)]
    dense = [[sum(L[i][t] * R[t][j] for t in range(rank)) % p for j in range(n)] for i in range(m)]
    return SparseMatrix.from_dense(dense, p)


def test_rank_examples(backend):
    assert rank_elimination(SparseMatrix.identity(7, P), backend) == 7
    assert rank_elimination(SparseMatrix.zeros(5, 9, P), backend) == 0
    assert rank_elimination(SparseMatrix.from_dense([[1, 2], [2, 4]], 7), backend) == 1
    assert rank_elimination(SparseMatrix.zeros(0, 0, P), backend) == 0


def test_wiedemann_examples(backend):
    assert rank_wiedemann(SparseMatrix.identity(9, P), seed=3, backend=backend).rank == 9
    res = rank_wiedemann(SparseMatrix.zeros(4, 6, P), backend=backend)
    assert res.rank == 0 and res.certified is False


def test_matvec_examples(backend):
    rng = np.random.default_rng(0)
    v = rng.integers(0, P, 6)
    assert (matvec(SparseMatrix.identity(6, P), v, backend) == v).all()
    assert not matvec(SparseMatrix.zeros(3, 6, P), v, backend).any()
    M = SparseMatrix.from_dense([[1, 0, 5], [0, 3, 2]], 7)
    assert matvec(M, [0, 0, 1], backend).tolist() == [5, 2]
    assert matvec_transpose(M, [1, 1], backend).tolist() == [1, 3, 0]
    with pytest.raises(DimensionMismatch):
        matvec(M, [1, 2], backend)
    with pytest.raises(DimensionMismatch):
        matvec_transpose(M, [1, 2, 3], backend)


@pytest.mark.parametrize("p", [7, 65537, P, 2**61 - 1])
def test_matvec_against_python_ints(backend, p):
    rng = random.Random(p)
    M = random_sparse(rng, 40, 30, 0.3, p)
    x = [rng.randrange(p) for _ in range(30)]
    want = [sum(a * x[j] for j, a in M.row(i)) % p for i in range(40)]
    assert matvec(M, x, backend).tolist() == want
    y = [rng.randrange(p) for _ in range(40)]
    want_t = [sum(y[i] * M.to_dense()[i][j] for i in range(40)) % p for j in range(30)]
    assert matvec_transpose(M, y, backend).tolist() == want_t


@pytest.mark.parametrize("p", [2, 3, 7, 101, P, 2**61 - 1])
def test_elimination_matches_dense_oracle(backend, p):
    rng = random.Random(p + 1)
    for _ in range(40):
        m, n = rng.randint(1, 30), rng.randint(1, 30)
        r = rng.choice([None, 1, 2, 5])
        M = random_sparse(rng, m, n, rng.choice([0.05, 0.2, 0.6]), p, rank=r)
        assert rank_elimination(M, backend) == oracles.dense_rank_mod_p(M.to_dense(), p)


def test_backends_agree_on_koszul_sized_matrix():
    rng = random.Random(4)
    M = random_sparse(rng, 300, 200, 0.02, P)
    ranks = {b: rank_elimination(M, b) for b in ("python",)}
    try:
        get_backend("cython")
        ranks["cython"] = rank_elimination(M, "cython")
    except ImportError:
        pass
    assert len(set(ranks.values())) == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_rank_invariances(seed):
    rng = random.Random(seed)
    p = rng.choice([5, 101, P])
    m, n = rng.randint(1, 25), rng.randint(1, 25)
    M = random_sparse(rng, m, n, 0.25, p, rank=rng.choice([None, 3]))
    r = rank_elimination(M)
    assert rank_elimination(M.transpose()) == r
    rp, cp = list(range(m)), list(range(n))
    rng.shuffle(rp)
    rng.shuffle(cp)
    assert rank_elimination(M.permute(rp, cp)) == r
    assert rank_elimination(M.scale_rows([rng.randrange(1, p) for _ in range(m)])) == r
    assert rank_wiedemann(M, seed=seed).rank <= r


def test_wiedemann_agrees_with_elimination_on_low_rank(backend):
    rng = random.Random(9)
    for r in (0, 1, 4, 17):
        M = random_sparse(rng, 60, 45, 0.05, P, rank=r) if r else SparseMatrix.zeros(60, 45, P)
        assert rank_wiedemann(M, seed=r, backend=backend).rank == rank_elimination(M) <= r


def test_wiedemann_deterministic_per_seed():
    M = random_sparse(random.Random(1), 50, 80, 0.05, P)
    assert rank_wiedemann(M, seed=5) == rank_wiedemann(M, seed=5)


def test_berlekamp_massey_kernels_agree():
    p = 1000003
    rng = random.Random(2)
    cython = None
    try:
        cython = get_backend("cython")
    except ImportError:
        pass
    pure = get_backend("python")
    # sequence with known recurrence s_n = 3 s_{n-1} + 5 s_{n-3}
    s = [1, 4, 9]
    for _ in range(40):
        s.append((3 * s[-1] + 5 * s[-3]) % p)
    C, L = pure.berlekamp_massey(np.array(s, dtype=np.int64), p)
    assert L == 3 and C.tolist() == [1, p - 3, 0, p - 5]
    if cython is not None:
        for _ in range(20):
            seq = np.array([rng.randrange(p) for _ in range(rng.randint(1, 60))], dtype=np.int64)
            a, b = pure.berlekamp_massey(seq, p), cython.berlekamp_massey(seq, p)
            assert a[1] == b[1] and a[0].tolist() == b[0].tolist()


def test_sparse_matrix_invariants():
    M = SparseMatrix.from_coo(3, 4, [0, 0, 2, 2, 1], [3, 1, 0, 0, 2], [5, -1, 3, 4, 7], 7)
    assert M.row(0) == [(1, 6), (3, 5)]
    assert M.row(1) == []  # 7 = 0 mod 7 dropped
    assert M.row(2) == []  # 3 + 4 = 0 mod 7
    assert M.nnz == 2
    with pytest.raises(DimensionMismatch):
        SparseMatrix.from_coo(2, 2, [2], [0], [1], 7)


def test_text_roundtrip():
    M = SparseMatrix.from_dense([[0, 3, 0], [1, 0, 6]], 7)
    buf = io.StringIO()
    write_matrix_text(M, buf)
    assert buf.getvalue() == "2 3 7\n1 2 3\n2 1 1\n2 3 6\n0 0 0\n"
    buf.seek(0)
    assert read_matrix_text(buf) == M


@pytest.mark.parametrize("text", [
    "",
    "2 2\n0 0 0\n",
    "2 2 6\n0 0 0\n",
    "2 2 7\n1 1 1\n",
    "2 2 7\n3 1 1\n0 0 0\n",
    "2 2 7\n1 1 1\n1 1 2\n0 0 0\n",
    "2 2 7\n1 x 1\n0 0 0\n",
])
def test_malformed_text(text):
    with pytest.raises(MalformedMatrixFile):
        read_matrix_text(io.StringIO(text))
