"""Pure-Python/numpy versions of the compiled kernels in ``_core.pyx``.

Same signatures and results; used when the extension is unavailable or
``SYZYGY_BACKEND=python`` is set.  Vector kernels use int64 numpy arithmetic
for p < 2^31 and Python-int object arrays above that.
"""
import heapq

import numpy as np

NAME = "python"

_SMALL = 1 << 31


def _dtype(p):
    return np.int64 if p < _SMALL else object


def csr_matvec(indptr, indices, data, x, p):
    nrows = len(indptr) - 1
    dt = _dtype(p)
    if len(indices) == 0:
        return np.zeros(nrows, dtype=np.int64)
    prod = np.asarray(data).astype(dt) * np.asarray(x).astype(dt)[np.asarray(indices)] % p
    # prefix sums of reduced products: nnz * 2^31 stays below 2^63
    cs = np.concatenate([np.zeros(1, dtype=dt), np.cumsum(prod)])
    ip = np.asarray(indptr)
    return ((cs[ip[1:]] - cs[ip[:-1]]) % p).astype(np.int64)


def _dot(a, b, p):
    if p < _SMALL:
        return int((a * b % p).sum() % p)
    return int(sum(int(x) * int(y) for x, y in zip(a, b)) % p)


def krylov_symmetric(indptr, indices, data, t_indptr, t_indices, t_data, d2, v, p, nterms):
    n = len(t_indptr) - 1
    seq = np.zeros(nterms, dtype=np.int64)
    if n == 0 or nterms == 0:
        return seq
    dt = _dtype(p)
    d2 = np.asarray(d2).astype(dt)
    x = np.asarray(v).astype(dt)
    t = 0
    while t < nterms:
        seq[t] = _dot(x, x, p)
        t += 1
        if t >= nterms:
            break
        y = csr_matvec(indptr, indices, data, x, p).astype(dt) * d2 % p
        w = csr_matvec(t_indptr, t_indices, t_data, y, p).astype(dt)
        seq[t] = _dot(x, w, p)
        t += 1
        x = w
    return seq


def berlekamp_massey(seq, p):
    s = [int(a) for a in seq]
    N = len(s)
    C = [1] + [0] * (N + 1)
    B = [1] + [0] * (N + 1)
    L, m, b = 0, 1, 1
    for n in range(N):
        d = s[n]
        for i in range(1, L + 1):
            d += C[i] * s[n - i]
        d %= p
        if d == 0:
            m += 1
            continue
        coef = d * pow(b, -1, p) % p
        T = C[:] if 2 * L <= n else None
        for i, bi in enumerate(B[: N + 2 - m]):
            if bi:
                C[i + m] = (C[i + m] - coef * bi) % p
        if T is not None:
            L = n + 1 - L
            B, b, m = T, d, 1
        else:
            m += 1
    return np.array(C[: L + 1], dtype=np.int64), L


def markowitz_rank(nrows, ncols, indptr, indices, data, p):
    rows = []
    for i in range(nrows):
        lo, hi = int(indptr[i]), int(indptr[i + 1])
        rows.append({int(c): int(v) for c, v in zip(indices[lo:hi], data[lo:hi])})
    col_rows = [set() for _ in range(ncols)]
    for i, row in enumerate(rows):
        for c in row:
            col_rows[c].add(i)
    cheap = [(len(s), c) for c, s in enumerate(col_rows) if s]
    rheap = [(len(r), i) for i, r in enumerate(rows) if r]
    heapq.heapify(cheap)
    heapq.heapify(rheap)
    rank = 0
    while True:
        while cheap and (cheap[0][0] == 0 or len(col_rows[cheap[0][1]]) != cheap[0][0]):
            heapq.heappop(cheap)
        if not cheap:
            break
        while rheap and (rheap[0][0] == 0 or len(rows[rheap[0][1]]) != rheap[0][0]):
            heapq.heappop(rheap)
        cl, c = cheap[0]
        rl, r = min((len(rows[i]), i) for i in col_rows[c])
        best = ((rl - 1) * (cl - 1), r, c)
        if rheap:
            rl, r = rheap[0]
            cl, c = min((len(col_rows[j]), j) for j in rows[r])
            best = min(best, ((rl - 1) * (cl - 1), r, c))
        _, pr, pc = best
        prow = rows[pr]
        inv = pow(prow[pc], -1, p)
        for j in prow:
            col_rows[j].discard(pr)
        for r in sorted(col_rows[pc]):
            row = rows[r]
            f = row[pc] * inv % p
            for j, v in prow.items():
                nv = (row.get(j, 0) - f * v) % p
                if nv:
                    if j not in row:
                        col_rows[j].add(r)
                        heapq.heappush(cheap, (len(col_rows[j]), j))
                    row[j] = nv
                else:
                    del row[j]
                    col_rows[j].discard(r)
                    if col_rows[j]:
                        heapq.heappush(cheap, (len(col_rows[j]), j))
            if row:
                heapq.heappush(rheap, (len(row), r))
        for j in prow:
            if col_rows[j]:
                heapq.heappush(cheap, (len(col_rows[j]), j))
        rows[pr] = {}
        rank += 1
    return rank
