"""The plane-curve construction and the non-vanishing verification pipeline.

C is a smooth plane curve of degree k+1 and L is cut out by forms of degree
k-1.  Then h0(L) = C(k+1, 2), the embedding by |L| factors through the
(k-1)-th Veronese surface, and K_{h0-k,1}(C, L) is nonzero even though
deg L = 2g + k - 1.
"""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import comb

from .errors import BadK, CharDividesDegree, IdentityFailure
from .ff import FieldCtx
from .koszul import (
    ELIMINATION,
    InjectionResult,
    KoszulComplex,
    KoszulReport,
    injection_check,
)
from .ring import CURVE, VERONESE, CurveForm, build_section_space, parse_curve_spec, scan_singular_points

CERTIFIED_FERMAT = "certified-fermat"
UNVERIFIED = "unverified"

# Properties the pipeline relies on without computing them.
ASSUMED = ("gonality(C) = k for smooth plane curves of degree k+1", "L very ample (degree argument)")


@dataclass(frozen=True)
class Instance:
    k: int
    ctx: FieldCtx
    curve: CurveForm
    g: int
    deg_L: int
    h0: int
    smoothness: str
    singular_points: tuple | None = None  # F_p-rational scan result, None if not scanned

    @property
    def violation_index(self) -> int:
        return self.h0 - self.k

    @property
    def conjectural_bound(self) -> int:
        return self.h0 - self.k - 1

    def summary(self) -> dict:
        return {"g": self.g, "deg_L": self.deg_L, "h0": self.h0}


def instance_identities(k: int) -> dict:
    """Closed-form invariants of the construction, each computed two ways."""
    d = k + 1
    g = k * (k - 1) // 2
    checks = {
        "genus": (g, (d - 1) * (d - 2) // 2),
        "deg_L": ((k - 1) * (k + 1), 2 * g + k - 1),
        "h0": (comb(k + 1, 2), comb((k - 1) + 2, 2)),
    }
    return {name: {"value": a, "check": b, "ok": a == b} for name, (a, b) in checks.items()}


def build_instance(k: int, ctx: FieldCtx, curve_spec: str | CurveForm = "fermat",
                   scan_limit: int = 200_000) -> Instance:
    if k < 3:
        raise BadK(f"k must be at least 3, got {k}")
    curve = curve_spec if isinstance(curve_spec, CurveForm) else parse_curve_spec(curve_spec, k, ctx)
    if curve.k != k:
        raise BadK(f"curve form has k={curve.k}, requested k={k}")
    if curve.is_fermat and (k + 1) % ctx.p == 0:
        raise CharDividesDegree(f"p={ctx.p} divides k+1={k + 1}; the Fermat curve is singular")
    curve.validate()
    ids = instance_identities(k)
    bad = [name for name, v in ids.items() if not v["ok"]]
    if bad:
        raise IdentityFailure(f"identity check failed: {bad}")
    h0 = ids["h0"]["value"]
    dim_b1 = build_section_space(1, curve, ctx, CURVE).dim
    if dim_b1 != h0:
        raise IdentityFailure(f"dim B_1 = {dim_b1} differs from C(k+1, 2) = {h0}")
    if curve.is_fermat:
        smooth, sing = CERTIFIED_FERMAT, None
    else:
        smooth = UNVERIFIED
        found = scan_singular_points(curve, ctx, scan_limit)
        sing = None if found is None else tuple(found)
    return Instance(k=k, ctx=ctx, curve=curve, g=ids["genus"]["value"], deg_L=ids["deg_L"]["value"],
                    h0=h0, smoothness=smooth, singular_points=sing)


@dataclass
class VerificationReport:
    instance: Instance
    veronese_K: KoszulReport
    curve_K: KoszulReport
    injection: InjectionResult | None
    theorem_holds: bool
    violation_index: int
    conjectural_bound: int
    method: str
    certified: bool
    timings_ms: dict = field(default_factory=dict)

    @property
    def veronese_le_curve(self) -> bool:
        return self.veronese_K.dim_K <= self.curve_K.dim_K

    @property
    def passed(self) -> bool:
        ok = self.theorem_holds and self.veronese_le_curve
        if self.injection is not None:
            ok = ok and self.injection.injective
        return ok


def _timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, int(round((time.perf_counter() - t0) * 1000))


def verify_theorem(k: int, ctx: FieldCtx, curve_spec="fermat", method: str = ELIMINATION,
                   with_injection: bool = False, seed: int = 0, threads: int = 1,
                   budget: int | None = None) -> VerificationReport:
    """Compute K_{h0-k,1} on the Veronese and curve sides and compare."""
    timings = {}
    inst, timings["instance"] = _timed(build_instance, k, ctx, curve_spec)
    p = inst.violation_index
    ver = KoszulComplex(inst.curve, ctx, VERONESE, budget=budget)
    cur = KoszulComplex(inst.curve, ctx, CURVE, budget=budget)
    # fail fast on the budget before any rank work
    for cx in (ver, cur):
        cx.check_budget(p, 1)
        if p + 1 <= cx.n:
            cx.check_budget(p + 1, 0)
    inner = 2 if threads > 1 else 1
    if threads > 1:
        with ThreadPoolExecutor(max_workers=2) as pool:
            fv = pool.submit(_timed, ver.kpq, p, 1, method, seed, inner)
            fc = pool.submit(_timed, cur.kpq, p, 1, method, seed, inner)
            (rv, timings["veronese"]), (rc, timings["curve"]) = fv.result(), fc.result()
    else:
        rv, timings["veronese"] = _timed(ver.kpq, p, 1, method, seed)
        rc, timings["curve"] = _timed(cur.kpq, p, 1, method, seed)
    inj = None
    if with_injection:
        inj, timings["injection"] = _timed(injection_check, p, ver, cur, method)
    return VerificationReport(
        instance=inst,
        veronese_K=rv,
        curve_K=rc,
        injection=inj,
        theorem_holds=rc.dim_K >= 1,
        violation_index=p,
        conjectural_bound=inst.conjectural_bound,
        method=method,
        certified=(method == ELIMINATION),
        timings_ms=timings,
    )


@dataclass(frozen=True)
class RowEntry:
    report: KoszulReport
    conjecture_predicts_zero: bool


def gonality_row(k: int, ctx: FieldCtx, curve_spec="fermat", i_from: int = 0, i_to: int | None = None,
                 method: str = ELIMINATION, seed: int = 0, threads: int = 1,
                 budget: int | None = None) -> list[RowEntry]:
    """dim K_{i,1}(C, L) for i_from <= i <= i_to, against the conjectured shape."""
    inst = build_instance(k, ctx, curve_spec)
    if i_to is None:
        i_to = inst.h0
    if not 0 <= i_from <= i_to <= inst.h0:
        raise ValueError(f"need 0 <= from <= to <= h0 = {inst.h0}, got {i_from}..{i_to}")
    cx = KoszulComplex(inst.curve, ctx, CURVE, budget=budget)
    for i in range(i_from, i_to + 1):
        for pp, qq in ((i, 1), (i + 1, 0)):
            if 1 <= pp <= cx.n:
                cx.check_budget(pp, qq)
    bound = inst.conjectural_bound
    return [
        RowEntry(cx.kpq(i, 1, method, seed, threads), conjecture_predicts_zero=(i < 1 or i > bound))
        for i in range(i_from, i_to + 1)
    ]


def betti_table(k: int, ctx: FieldCtx, curve_spec="fermat", side: str = VERONESE, qmax: int = 1,
                pmax: int | None = None, method: str = ELIMINATION, seed: int = 0, threads: int = 1,
                budget: int | None = None) -> list[KoszulReport]:
    """dim K_{p,q} for 0 <= q <= qmax, 0 <= p <= pmax on one side."""
    if not 0 <= qmax <= 2:
        raise ValueError("qmax must be in 0..2")
    inst = build_instance(k, ctx, curve_spec)
    cx = KoszulComplex(inst.curve, ctx, VERONESE if side == VERONESE else CURVE, budget=budget)
    if pmax is None:
        pmax = cx.n
    if not 0 <= pmax <= cx.n:
        raise ValueError(f"pmax must be in 0..{cx.n}")
    for q in range(qmax + 1):
        for p in range(pmax + 1):
            for pp, qq in ((p, q), (p + 1, q - 1)):
                if qq >= 0 and 1 <= pp <= cx.n:
                    cx.check_budget(pp, qq)
    return [cx.kpq(p, q, method, seed, threads) for q in range(qmax + 1) for p in range(pmax + 1)]
