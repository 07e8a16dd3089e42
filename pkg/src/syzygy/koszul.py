"""Koszul complexes of the section ring and their middle cohomology.

The complex at (p, q) is

    L^{p+1} V (x) B_{q-1}  -->  L^p V (x) B_q  -->  L^{p-1} V (x) B_{q+1}

with V = B_1 and the differential

    d(e_{i_1} ^ ... ^ e_{i_p} (x) s) = sum_j (-1)^(j-1) e_{i_1} ^ ..^e_{i_j}^.. ^ e_{i_p} (x) v_{i_j} s

for strictly increasing indices.  Basis vectors of L^p V (x) B_q are indexed
by ``comb_rank(S) * dim B_q + b``: combination-major, section-minor.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import DimensionMismatch, IndexOutOfRange, ResourceCap
from .ff import FieldCtx
from .linalg import SparseMatrix, matvec, rank_elimination, rank_wiedemann
from .linalg.dense import nullspace_mod_p
from .ring import CURVE, VERONESE, CurveForm, SectionSpace, build_section_space, mul_into

ELIMINATION = "elimination"
WIEDEMANN = "wiedemann"

DEFAULT_MEM_BUDGET = 16 << 30
MAX_NNZ = 1 << 31


def comb_rank(subset, n: int) -> int:
    """Colexicographic rank of a strictly increasing subset of {0..n-1}."""
    prev = -1
    r = 0
    for t, s in enumerate(subset):
        if not (prev < s < n):
            raise IndexOutOfRange(f"{list(subset)} is not an increasing subset of range({n})")
        r += comb(s, t + 1)
        prev = s
    return r


def comb_unrank(r: int, n: int, p: int) -> list[int]:
    if not 0 <= r < comb(n, p):
        raise IndexOutOfRange(f"rank {r} outside [0, C({n},{p}))")
    out = [0] * p
    s = n - 1
    for t in range(p, 0, -1):
        while comb(s, t) > r:
            s -= 1
        out[t - 1] = s
        r -= comb(s, t)
        s -= 1
    return out


@lru_cache(maxsize=64)
def colex_subsets(n: int, p: int) -> np.ndarray:
    """All p-subsets of range(n) as rows of an array, in colex order."""
    if p == 0:
        return np.zeros((1, 0), dtype=np.int64)
    subs = sorted(combinations(range(n), p), key=lambda s: s[::-1])
    return np.array(subs, dtype=np.int64).reshape(-1, p)


@lru_cache(maxsize=8)
def _binom_table(n: int) -> np.ndarray:
    return np.array([[comb(a, b) for b in range(n + 2)] for a in range(n + 1)], dtype=np.int64)


def mem_budget() -> int:
    env = os.environ.get("SYZYGY_MEM_BUDGET")
    return int(env) if env else DEFAULT_MEM_BUDGET


def estimate_bytes(nrows: int, ncols: int, nnz: int) -> int:
    """Worst-case working set of an exact rank computation.

    Storage for the matrix plus its transpose, or the dense Schur complement
    that full fill-in would produce, whichever is larger.
    """
    return max(24 * nnz, 8 * min(nrows, ncols) ** 2)


@dataclass(frozen=True)
class KoszulReport:
    p: int
    q: int
    side: str
    dim_middle: int
    rank_out: int
    rank_in: int
    dim_K: int
    method: str
    certified: bool

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "side": self.side,
            "dim_middle": self.dim_middle,
            "rank_out": self.rank_out,
            "rank_in": self.rank_in,
            "dim_K": self.dim_K,
            "method": self.method,
            "certified": self.certified,
        }


@dataclass(frozen=True)
class InjectionResult:
    injective: bool
    dim_source: int
    dim_target: int
    chain_map_ok: bool

    def as_dict(self) -> dict:
        return {
            "injective": self.injective,
            "dim_source": self.dim_source,
            "dim_target": self.dim_target,
            "chain_map_ok": self.chain_map_ok,
        }


def _mult_table(gens, bq: SectionSpace, bq1: SectionSpace):
    """Padded arrays (targets, coeffs) of shape (n, dim B_q, max terms)."""
    entries = [[mul_into(m, b, bq, bq1) for b in range(bq.dim)] for m in gens]
    width = max((len(e) for row in entries for e in row), default=1)
    idx = np.zeros((len(gens), bq.dim, width), dtype=np.int64)
    val = np.zeros((len(gens), bq.dim, width), dtype=np.int64)
    for i, row in enumerate(entries):
        for b, terms in enumerate(row):
            for t, (pos, c) in enumerate(terms):
                idx[i, b, t] = pos
                val[i, b, t] = c
    return idx, val


def assemble_differential(p: int, V: SectionSpace, bq: SectionSpace, bq1: SectionSpace,
                          v_perm=None) -> SparseMatrix:
    """Matrix of d_{p,q}: L^p V (x) B_q -> L^{p-1} V (x) B_{q+1}.

    ``v_perm`` reorders the generators of V (generator i is basis element
    ``v_perm[i]`` of V); it exists to test basis-order invariance.
    """
    n = V.dim
    if V.q != 1 or bq1.q != bq.q + 1:
        raise DimensionMismatch("need V = B_1 and consecutive section spaces B_q, B_{q+1}")
    if len({V.p, bq.p, bq1.p}) != 1 or len({V.k, bq.k, bq1.k}) != 1:
        raise DimensionMismatch("section spaces built over different fields or curves")
    if not 1 <= p <= n:
        raise DimensionMismatch(f"exterior power {p} outside [1, {n}]")
    mod = V.p
    gens = list(V.pivot_monomials)
    if v_perm is not None:
        gens = [gens[i] for i in v_perm]
    idx, val = _mult_table(gens, bq, bq1)
    width = idx.shape[2]
    subs = colex_subsets(n, p)
    nsub = subs.shape[0]
    binom = _binom_table(n)
    t_idx = np.arange(p)
    w_hi = binom[subs, t_idx + 1]  # C(s_t, t+1): weight at its own position
    w_lo = binom[subs, t_idx]  # C(s_t, t): weight after shifting down one slot
    pre = np.concatenate([np.zeros((nsub, 1), dtype=np.int64), np.cumsum(w_hi, axis=1)], axis=1)
    suf = np.concatenate([np.cumsum(w_lo[:, ::-1], axis=1)[:, ::-1], np.zeros((nsub, 1), dtype=np.int64)], axis=1)
    col_base = np.arange(nsub, dtype=np.int64) * bq.dim
    rows, cols, vals = [], [], []
    b_range = np.arange(bq.dim, dtype=np.int64)
    for j in range(p):
        e = subs[:, j]
        face = pre[:, j] + suf[:, j + 1]  # colex rank of S minus its j-th element
        r = (face * bq1.dim)[:, None, None] + idx[e]
        c = np.broadcast_to((col_base[:, None] + b_range[None, :])[:, :, None], r.shape)
        v = val[e]
        if j % 2:
            v = np.where(v != 0, mod - v, 0)
        keep = v != 0
        rows.append(r[keep])
        cols.append(c[keep])
        vals.append(v[keep])
    nrows = comb(n, p - 1) * bq1.dim
    ncols = nsub * bq.dim
    del width
    return SparseMatrix.from_coo(nrows, ncols, np.concatenate(rows), np.concatenate(cols),
                                 np.concatenate(vals), mod)


class KoszulComplex:
    """Koszul complexes of one section ring (curve or veronese side).

    Section spaces and assembled differentials are cached per instance.
    """

    def __init__(self, form: CurveForm, ctx: FieldCtx, mode: str = CURVE, v_perm=None,
                 budget: int | None = None):
        self.form = form
        self.ctx = ctx
        self.mode = mode
        self.v_perm = None if v_perm is None else tuple(v_perm)
        self.budget = mem_budget() if budget is None else budget
        self._spaces: dict[int, SectionSpace] = {}
        self._diffs: dict[tuple[int, int], SparseMatrix] = {}

    @property
    def side(self) -> str:
        return VERONESE if self.mode == VERONESE else CURVE

    def space(self, q: int) -> SectionSpace:
        if q not in self._spaces:
            self._spaces[q] = build_section_space(q, self.form, self.ctx, self.mode)
        return self._spaces[q]

    @property
    def n(self) -> int:
        return self.space(1).dim

    def chain_dim(self, p: int, q: int) -> int:
        if q < 0 or p < 0 or p > self.n:
            return 0
        return comb(self.n, p) * self.space(q).dim

    def estimate(self, p: int, q: int) -> tuple[int, int, int]:
        """(nrows, ncols, nnz estimate) of d_{p,q} without assembling it."""
        bq, bq1 = self.space(q), self.space(q + 1)
        shift = self.form.k - 1
        lens = [len(bq1.expand_monomial(tuple(a + b for a, b in zip(m, s))))
                for m in self.space(1).pivot_monomials for s in bq.pivot_monomials]
        avg = sum(lens) / max(len(lens), 1)
        del shift
        ncols = self.chain_dim(p, q)
        return self.chain_dim(p - 1, q + 1), ncols, int(ncols * p * avg)

    def check_budget(self, p: int, q: int) -> None:
        nrows, ncols, nnz = self.estimate(p, q)
        need = estimate_bytes(nrows, ncols, nnz)
        if nnz > MAX_NNZ or need > self.budget:
            raise ResourceCap(
                f"d_{{{p},{q}}} ({nrows} x {ncols}, ~{nnz} nonzeros) needs ~{need} bytes, "
                f"budget is {self.budget}"
            )

    def differential(self, p: int, q: int) -> SparseMatrix:
        key = (p, q)
        if key not in self._diffs:
            self.check_budget(p, q)
            self._diffs[key] = assemble_differential(
                p, self.space(1), self.space(q), self.space(q + 1), self.v_perm
            )
        return self._diffs[key]

    def _rank(self, p: int, q: int, method: str, seed: int) -> int:
        if q < 0 or p < 1 or p > self.n or self.chain_dim(p, q) == 0:
            return 0
        M = self.differential(p, q)
        if method == ELIMINATION:
            return rank_elimination(M)
        if method == WIEDEMANN:
            return rank_wiedemann(M, seed=seed).rank
        raise ValueError(f"unknown rank method {method!r}")

    def kpq(self, p: int, q: int, method: str = ELIMINATION, seed: int = 0,
            threads: int = 1) -> KoszulReport:
        """dim K_{p,q} = dim(L^p V (x) B_q) - rank d_{p,q} - rank d_{p+1,q-1}."""
        if p < 0 or q < 0:
            raise DimensionMismatch("p and q must be non-negative")
        middle = self.chain_dim(p, q)
        for pp, qq in ((p, q), (p + 1, q - 1)):
            if qq >= 0 and 1 <= pp <= self.n:
                self.check_budget(pp, qq)
        jobs = [(p, q), (p + 1, q - 1)]
        if threads > 1:
            for pp, qq in jobs:  # assemble up front; the cache is not thread-safe
                if qq >= 0 and 1 <= pp <= self.n and self.chain_dim(pp, qq):
                    self.differential(pp, qq)
            with ThreadPoolExecutor(max_workers=2) as pool:
                r_out, r_in = pool.map(lambda a: self._rank(a[0], a[1], method, seed), jobs)
        else:
            r_out, r_in = (self._rank(pp, qq, method, seed) for pp, qq in jobs)
        return KoszulReport(
            p=p, q=q, side=self.side, dim_middle=middle, rank_out=r_out, rank_in=r_in,
            dim_K=middle - r_out - r_in, method=method, certified=(method == ELIMINATION),
        )


def kpq_dimension(p: int, q: int, complex_: KoszulComplex, method: str = ELIMINATION,
                  seed: int = 0, threads: int = 1) -> KoszulReport:
    return complex_.kpq(p, q, method=method, seed=seed, threads=threads)


def sparse_nullspace(M: SparseMatrix) -> list[dict]:
    """Kernel basis of M as sparse {column: value} dicts.

    The matrix is split into connected components of its row/column incidence
    graph and each block is solved densely; Koszul matrices of the Veronese
    side split into many small multigraded blocks.
    """
    p = M.p
    r, c, v = M.coo()
    n_nodes = M.nrows + M.ncols
    g = coo_matrix((np.ones(len(r)), (r, M.nrows + c)), shape=(n_nodes, n_nodes))
    _, labels = connected_components(g, directed=False)
    col_labels = labels[M.nrows:]
    by_label: dict[int, list[int]] = {}
    for j, lab in enumerate(col_labels.tolist()):
        by_label.setdefault(lab, []).append(j)
    row_of = {}
    for i, lab in enumerate(labels[: M.nrows].tolist()):
        row_of.setdefault(lab, []).append(i)
    basis = []
    for lab in sorted(by_label, key=lambda a: by_label[a][0]):
        cols_ = by_label[lab]
        local = {j: t for t, j in enumerate(cols_)}
        dense = []
        for i in row_of.get(lab, []):
            row = [0] * len(cols_)
            for j, val in M.row(i):
                row[local[j]] = val
            dense.append(row)
        for x in nullspace_mod_p(dense, len(cols_), p):
            basis.append({cols_[t]: a for t, a in enumerate(x) if a})
    return basis


class _Echelon:
    """Incrementally maintained row echelon basis of sparse vectors."""

    def __init__(self, p: int):
        self.p = p
        self.rows: dict[int, dict] = {}  # pivot column -> vector with pivot entry 1

    def reduce(self, vec: dict) -> dict:
        p = self.p
        vec = {j: a % p for j, a in vec.items() if a % p}
        while vec:
            piv = min(j for j in vec if j in self.rows) if any(j in self.rows for j in vec) else None
            if piv is None:
                break
            f = vec[piv]
            for j, a in self.rows[piv].items():
                nv = (vec.get(j, 0) - f * a) % p
                if nv:
                    vec[j] = nv
                else:
                    vec.pop(j, None)
        return vec

    def add(self, vec: dict) -> bool:
        red = self.reduce(vec)
        if not red:
            return False
        piv = min(red)
        inv = pow(red[piv], -1, self.p)
        self.rows[piv] = {j: a * inv % self.p for j, a in red.items()}
        return True


def _columns(M: SparseMatrix) -> list[dict]:
    T = M.transpose()
    return [dict(T.row(j)) for j in range(T.nrows)]


def injection_check(p: int, veronese: KoszulComplex, curve: KoszulComplex,
                    method: str = ELIMINATION) -> InjectionResult:
    """Is K_{p,1} of the Veronese side mapped injectively into K_{p,1} of the curve?

    A basis of the Veronese cohomology (kernel representatives modulo the
    incoming image) is pushed through the quotient map B_1(ver) -> B_1(curve)
    coordinatewise; the images must be cycles on the curve side and stay
    independent modulo the curve-side image of d_{p+1,0}.
    """
    if veronese.mode != VERONESE or curve.mode != CURVE:
        raise DimensionMismatch("injection_check expects (veronese, curve) complexes")
    n = veronese.n
    mod = veronese.ctx.p
    target = curve.kpq(p, 1, method=method)
    if p < 1 or p > n:
        return InjectionResult(True, 0, target.dim_K, True)

    ech = _Echelon(mod)
    if p + 1 <= n:
        for col in _columns(veronese.differential(p + 1, 0)):
            ech.add(col)
    reps = [vec for vec in sparse_nullspace(veronese.differential(p, 1)) if ech.add(vec)]

    b_ver, b_cur = veronese.space(1), curve.space(1)
    dv, dc = b_ver.dim, b_cur.dim
    images = []
    for vec in reps:
        img: dict = {}
        for j, a in vec.items():
            s, b = divmod(j, dv)
            for pos, c in b_cur.expand_monomial(b_ver.pivot_monomials[b]):
                key = s * dc + pos
                img[key] = (img.get(key, 0) + a * c) % mod
        images.append({j: a for j, a in img.items() if a})

    A_cur = curve.differential(p, 1)
    chain_ok = True
    for img in images:
        x = np.zeros(A_cur.ncols, dtype=np.int64)
        for j, a in img.items():
            x[j] = a
        if np.any(matvec(A_cur, x)):
            chain_ok = False
            break

    ech_cur = _Echelon(mod)
    if p + 1 <= n:
        for col in _columns(curve.differential(p + 1, 0)):
            ech_cur.add(col)
    independent = all(ech_cur.add(img) for img in images)
    return InjectionResult(
        injective=chain_ok and independent,
        dim_source=len(reps),
        dim_target=target.dim_K,
        chain_map_ok=chain_ok,
    )
