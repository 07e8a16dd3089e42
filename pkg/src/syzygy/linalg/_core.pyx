# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
# distutils: language = c++
"""Compiled kernels: Markowitz elimination, sparse matvec, Krylov sequences
and Berlekamp-Massey, all exact modulo a prime p < 2^62."""

from libcpp.vector cimport vector
from libcpp.queue cimport priority_queue
from libcpp.pair cimport pair

import numpy as np

NAME = "cython"

ctypedef unsigned long long u64
ctypedef long long i64

cdef extern from *:
    """
    typedef unsigned __int128 syz_u128;
    """
    ctypedef unsigned long long syz_u128

ctypedef pair[i64, i64] entry_t


cdef inline u64 mulmod(u64 a, u64 b, u64 p) noexcept nogil:
    return <u64>((<syz_u128>a * b) % p)


cdef inline u64 addmod(u64 a, u64 b, u64 p) noexcept nogil:
    cdef u64 s = a + b
    return s - p if s >= p else s


cdef inline u64 submod(u64 a, u64 b, u64 p) noexcept nogil:
    return a - b if a >= b else a + p - b


cdef u64 invmod(u64 a, u64 p) noexcept nogil:
    cdef i64 t = 0, nt = 1, r = <i64>p, nr = <i64>a, q, tmp
    while nr != 0:
        q = r // nr
        tmp = t - q * nt
        t = nt
        nt = tmp
        tmp = r - q * nr
        r = nr
        nr = tmp
    if t < 0:
        t += <i64>p
    return <u64>t


cdef inline u64 reduce128(syz_u128 acc, u64 p) noexcept nogil:
    if (acc >> 64) == 0:
        return (<u64>acc) % p
    return <u64>(acc % p)


cdef inline int acc_chunk(u64 p) noexcept nogil:
    # products below 2^64 when p < 2^32, otherwise below 2^124
    return 1 << 30 if p < (1ULL << 32) else 8


cdef void _csr_matvec(const i64* indptr, const i64* indices, const u64* data,
                      const u64* x, u64* y, i64 nrows, u64 p) noexcept nogil:
    cdef i64 i, j, lo, hi
    cdef syz_u128 acc
    cdef int chunk = acc_chunk(p), cnt
    for i in range(nrows):
        acc = 0
        cnt = 0
        lo = indptr[i]
        hi = indptr[i + 1]
        for j in range(lo, hi):
            acc += <syz_u128>data[j] * x[indices[j]]
            cnt += 1
            if cnt == chunk:
                acc %= p
                cnt = 0
        y[i] = reduce128(acc, p)


cdef u64 _dot(const u64* a, const u64* b, i64 n, u64 p) noexcept nogil:
    cdef syz_u128 acc = 0
    cdef i64 i
    cdef int chunk = acc_chunk(p), cnt = 0
    for i in range(n):
        acc += <syz_u128>a[i] * b[i]
        cnt += 1
        if cnt == chunk:
            acc %= p
            cnt = 0
    return reduce128(acc, p)


def csr_matvec(const i64[::1] indptr, const i64[::1] indices, const i64[::1] data,
               const i64[::1] x, u64 p):
    """y = A x for a CSR matrix with canonical entries."""
    cdef i64 nrows = indptr.shape[0] - 1
    y = np.zeros(nrows, dtype=np.int64)
    cdef i64[::1] yv = y
    if nrows == 0:
        return y
    if x.shape[0] == 0:
        return y
    with nogil:
        _csr_matvec(&indptr[0], &indices[0] if indices.shape[0] else NULL,
                    <const u64*>(&data[0]) if data.shape[0] else NULL,
                    <const u64*>&x[0], <u64*>&yv[0], nrows, p)
    return y


def krylov_symmetric(const i64[::1] indptr, const i64[::1] indices, const i64[::1] data,
                     const i64[::1] t_indptr, const i64[::1] t_indices, const i64[::1] t_data,
                     const i64[::1] d2, const i64[::1] v, u64 p, i64 nterms):
    """Scalar sequence s_i = v^T B^i v for B = A^T diag(d2) A.

    ``A`` is given in CSR (m x n) together with the CSR of its transpose.
    Two terms are produced per application of B: s_{2i} = x_i.x_i and
    s_{2i+1} = x_i.(B x_i) with x_i = B^i v.
    """
    cdef i64 m = indptr.shape[0] - 1
    cdef i64 n = t_indptr.shape[0] - 1
    seq = np.zeros(nterms, dtype=np.int64)
    if n == 0 or nterms == 0:
        return seq
    cdef u64[::1] s = seq.view(np.uint64)
    cdef u64[::1] x = np.array(v, dtype=np.uint64)
    cdef u64[::1] w = np.zeros(n, dtype=np.uint64)
    cdef u64[::1] y = np.zeros(max(m, 1), dtype=np.uint64)
    cdef const u64* dd = <const u64*>&d2[0] if m else NULL
    cdef const i64* ip = &indptr[0]
    cdef const i64* ix = &indices[0] if indices.shape[0] else NULL
    cdef const u64* da = <const u64*>&data[0] if data.shape[0] else NULL
    cdef const i64* tip = &t_indptr[0]
    cdef const i64* tix = &t_indices[0] if t_indices.shape[0] else NULL
    cdef const u64* tda = <const u64*>&t_data[0] if t_data.shape[0] else NULL
    cdef i64 t = 0, i
    cdef u64* xp = &x[0]
    cdef u64* wp = &w[0]
    cdef u64* tmp
    with nogil:
        while t < nterms:
            s[t] = _dot(xp, xp, n, p)
            t += 1
            if t >= nterms:
                break
            if m:
                _csr_matvec(ip, ix, da, xp, &y[0], m, p)
                for i in range(m):
                    y[i] = mulmod(y[i], dd[i], p)
            _csr_matvec(tip, tix, tda, &y[0], wp, n, p)
            s[t] = _dot(xp, wp, n, p)
            t += 1
            tmp = xp
            xp = wp
            wp = tmp
    return seq


def berlekamp_massey(const i64[::1] seq, u64 p):
    """Shortest connection polynomial C (C[0] = 1) generating ``seq``.

    Returns ``(C, L)`` where L is the linear complexity; ``C`` has length
    L + 1 and its degree may be below L.
    """
    cdef i64 N = seq.shape[0]
    cdef const u64* s = <const u64*>&seq[0] if N else NULL
    cdef vector[u64] C, B, T
    C.assign(N + 2, 0)
    B.assign(N + 2, 0)
    T.assign(N + 2, 0)
    C[0] = 1
    B[0] = 1
    cdef i64 L = 0, m = 1, n, i, lenB = 1, lenC = 1, lenT = 0
    cdef u64 b = 1, d, coef, wpre, qq, r
    cdef syz_u128 acc
    cdef int chunk = acc_chunk(p), cnt
    with nogil:
        for n in range(N):
            acc = s[n]
            cnt = 0
            for i in range(1, L + 1):
                acc += <syz_u128>C[i] * s[n - i]
                cnt += 1
                if cnt == chunk:
                    acc %= p
                    cnt = 0
            d = reduce128(acc, p)
            if d == 0:
                m += 1
                continue
            coef = mulmod(d, invmod(b, p), p)
            wpre = <u64>((<syz_u128>coef << 64) // p)
            if 2 * L <= n:
                for i in range(lenC):
                    T[i] = C[i]
                lenT = lenC
            if lenB + m > lenC:
                lenC = lenB + m
            for i in range(lenB):
                # Shoup multiplication by the fixed scalar coef
                qq = <u64>((<syz_u128>B[i] * wpre) >> 64)
                r = B[i] * coef - qq * p
                if r >= p:
                    r -= p
                C[i + m] = submod(C[i + m], r, p)
            if 2 * L <= n:
                L = n + 1 - L
                for i in range(lenT):
                    B[i] = T[i]
                for i in range(lenT, lenB):
                    B[i] = 0
                lenB = lenT
                b = d
                m = 1
            else:
                m += 1
    out = np.zeros(L + 1, dtype=np.int64)
    cdef i64[::1] ov = out
    for i in range(min(L + 1, lenC)):
        ov[i] = <i64>C[i]
    return out, L


cdef inline i64 _find(vector[int]& cols, int c) noexcept nogil:
    cdef i64 lo = 0, hi = <i64>cols.size() - 1, mid
    while lo <= hi:
        mid = (lo + hi) >> 1
        if cols[mid] == c:
            return mid
        if cols[mid] < c:
            lo = mid + 1
        else:
            hi = mid - 1
    return -1


cdef i64 _markowitz(i64 nrows, i64 ncols, vector[vector[int]]& rcols,
                    vector[vector[u64]]& rvals, u64 p) except -1 nogil:
    cdef vector[vector[int]] crows = vector[vector[int]](ncols)
    cdef vector[i64] ccount = vector[i64](ncols, 0)
    cdef vector[char] ractive = vector[char](nrows, 1)
    cdef vector[i64] stamp = vector[i64](nrows, -1)
    cdef priority_queue[entry_t] cheap, rheap
    cdef vector[int] targets, ncols_buf
    cdef vector[u64] nvals_buf
    cdef i64 i, j, c, r, rank = 0, step = 0
    cdef i64 best_cost, cost, br, bc, cand_r, cand_c, rl, cl
    cdef i64 a, bidx, la, lb, pos
    cdef int cc
    cdef u64 inv, f, v, t
    for i in range(nrows):
        for j in range(<i64>rcols[i].size()):
            crows[rcols[i][j]].push_back(<int>i)
            ccount[rcols[i][j]] += 1
        if rcols[i].size():
            rheap.push(entry_t(-<i64>rcols[i].size(), -i))
    for j in range(ncols):
        if ccount[j]:
            cheap.push(entry_t(-ccount[j], -j))
    while True:
        # lazily discard stale heap entries
        while not cheap.empty():
            c = -cheap.top().second
            if ccount[c] > 0 and ccount[c] == -cheap.top().first:
                break
            cheap.pop()
        if cheap.empty():
            break
        while not rheap.empty():
            r = -rheap.top().second
            if ractive[r] and <i64>rcols[r].size() > 0 and <i64>rcols[r].size() == -rheap.top().first:
                break
            rheap.pop()
        step += 1
        # candidate 1: sparsest column, sparsest row inside it
        c = -cheap.top().second
        cl = ccount[c]
        cand_r = -1
        rl = 0
        for j in range(<i64>crows[c].size()):
            r = crows[c][j]
            if not ractive[r] or stamp[r] == step:
                continue
            stamp[r] = step
            if _find(rcols[r], <int>c) < 0:
                continue
            if cand_r < 0 or <i64>rcols[r].size() < rl or (<i64>rcols[r].size() == rl and r < cand_r):
                cand_r = r
                rl = rcols[r].size()
        best_cost = (rl - 1) * (cl - 1)
        br = cand_r
        bc = c
        # candidate 2: sparsest row, sparsest column inside it
        if not rheap.empty():
            r = -rheap.top().second
            rl = rcols[r].size()
            cand_c = -1
            for j in range(rl):
                cc = rcols[r][j]
                if cand_c < 0 or ccount[cc] < cl or (ccount[cc] == cl and cc < cand_c):
                    cand_c = cc
                    cl = ccount[cc]
            cost = (rl - 1) * (cl - 1)
            if cost < best_cost or (cost == best_cost and (r < br or (r == br and cand_c < bc))):
                best_cost = cost
                br = r
                bc = cand_c
        # eliminate column bc using row br
        pos = _find(rcols[br], <int>bc)
        inv = invmod(rvals[br][pos], p)
        ractive[br] = 0
        targets.clear()
        step += 1
        for j in range(<i64>crows[bc].size()):
            r = crows[bc][j]
            if not ractive[r] or stamp[r] == step:
                continue
            stamp[r] = step
            if _find(rcols[r], <int>bc) >= 0:
                targets.push_back(<int>r)
        lb = rcols[br].size()
        for j in range(<i64>targets.size()):
            r = targets[j]
            f = mulmod(rvals[r][_find(rcols[r], <int>bc)], inv, p)
            la = rcols[r].size()
            ncols_buf.clear()
            nvals_buf.clear()
            a = 0
            bidx = 0
            while a < la or bidx < lb:
                if bidx >= lb or (a < la and rcols[r][a] < rcols[br][bidx]):
                    ncols_buf.push_back(rcols[r][a])
                    nvals_buf.push_back(rvals[r][a])
                    a += 1
                elif a >= la or rcols[br][bidx] < rcols[r][a]:
                    cc = rcols[br][bidx]
                    ncols_buf.push_back(cc)
                    nvals_buf.push_back(submod(0, mulmod(f, rvals[br][bidx], p), p))
                    ccount[cc] += 1
                    crows[cc].push_back(<int>r)
                    cheap.push(entry_t(-ccount[cc], -cc))
                    bidx += 1
                else:
                    cc = rcols[r][a]
                    v = submod(rvals[r][a], mulmod(f, rvals[br][bidx], p), p)
                    if v:
                        ncols_buf.push_back(cc)
                        nvals_buf.push_back(v)
                    else:
                        ccount[cc] -= 1
                        if ccount[cc] > 0:
                            cheap.push(entry_t(-ccount[cc], -cc))
                    a += 1
                    bidx += 1
            rcols[r].swap(ncols_buf)
            rvals[r].swap(nvals_buf)
            if rcols[r].size():
                rheap.push(entry_t(-<i64>rcols[r].size(), -r))
        for j in range(lb):
            cc = rcols[br][j]
            ccount[cc] -= 1
            if ccount[cc] > 0:
                cheap.push(entry_t(-ccount[cc], -cc))
        vector[int]().swap(rcols[br])
        vector[u64]().swap(rvals[br])
        vector[int]().swap(crows[bc])
        rank += 1
    return rank


def markowitz_rank(i64 nrows, i64 ncols, const i64[::1] indptr, const i64[::1] indices,
                   const i64[::1] data, u64 p):
    """Rank mod p by sparse Gaussian elimination with Markowitz pivoting.

    Each step compares two candidates, the sparsest column (paired with its
    sparsest row) and the sparsest row (paired with its sparsest column), and
    keeps the one with the smaller fill estimate (r-1)(c-1); ties go to the
    lower row, then the lower column.
    """
    cdef vector[vector[int]] rcols = vector[vector[int]](nrows)
    cdef vector[vector[u64]] rvals = vector[vector[u64]](nrows)
    cdef i64 i, j
    for i in range(nrows):
        rcols[i].reserve(indptr[i + 1] - indptr[i])
        rvals[i].reserve(indptr[i + 1] - indptr[i])
        for j in range(indptr[i], indptr[i + 1]):
            rcols[i].push_back(<int>indices[j])
            rvals[i].push_back(<u64>data[j])
    cdef i64 rank
    with nogil:
        rank = _markowitz(nrows, ncols, rcols, rvals, p)
    return rank
