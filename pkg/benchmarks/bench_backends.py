"""Compare the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_backends.py            # k = 3, 4
    python benchmarks/bench_backends.py --k 3 4 5  # adds the k=5 elimination

Each row times one kernel on one Koszul differential d_{h0-k,1} of the
Fermat curve; both backends must return the same value.
"""
import argparse
import time

import numpy as np

from syzygy.ff import make_field
from syzygy.koszul import KoszulComplex
from syzygy.linalg import available_backends, get_backend, rank_elimination, rank_wiedemann
from syzygy.ring import CURVE, fermat_curve


def timeit(fn, repeat=3):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--k", type=int, nargs="+", default=[3, 4])
    ap.add_argument("--wiedemann-max-cols", type=int, default=2500,
                    help="skip Wiedemann on larger matrices (quadratic in the column count)")
    args = ap.parse_args()
    ctx = make_field()
    backends = available_backends()
    print(f"backends: {backends}")
    print(f"{'k':>2} {'kernel':<12} {'shape':>16} {'nnz':>8} " + " ".join(f"{b + ' (s)':>14}" for b in backends)
          + "   speedup")
    for k in args.k:
        cx = KoszulComplex(fermat_curve(k, ctx), ctx, CURVE)
        M = cx.differential(cx.n - k, 1)
        shape = f"{M.nrows}x{M.ncols}"
        x = np.random.default_rng(0).integers(0, ctx.p, M.ncols)
        jobs = {
            "matvec": lambda b: get_backend(b).csr_matvec(M.indptr, M.indices, M.data, x, ctx.p).sum(),
            "elimination": lambda b: rank_elimination(M, b),
        }
        if M.ncols <= args.wiedemann_max_cols:
            jobs["wiedemann"] = lambda b: rank_wiedemann(M, seed=0, trials=1, backend=b).rank
        for name, job in jobs.items():
            times, outs = [], []
            for b in backends:
                t, out = timeit(lambda: job(b), repeat=1 if name != "matvec" else 5)
                times.append(t)
                outs.append(out)
            assert len(set(outs)) == 1, f"backends disagree on {name}: {outs}"
            speed = f"{times[-1] / times[0]:8.1f}x" if len(times) > 1 else ""
            print(f"{k:>2} {name:<12} {shape:>16} {M.nnz:>8} " + " ".join(f"{t:14.4f}" for t in times)
                  + f"   {speed}")


if __name__ == "__main__":
    main()
