"""Graded pieces of k[x, y, z], plane curve forms and section spaces.

Monomials are exponent triples ``(a, b, c)`` standing for x^a y^b z^c.
Within a fixed degree they are ordered graded-lexicographically with
x > y > z, so index 0 is always the pure power of x.

A :class:`SectionSpace` models ``B_q = S_{q(k-1)} / F * S_{q(k-1)-(k+1)}``
(curve mode) or all of ``S_{q(k-1)}`` (veronese mode).  The quotient basis is
the set of monomials that are *not* leading terms of the reduced row echelon
form of the relation rows ``F * m``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .errors import DegreeMismatch, IndexOutOfRange, InvalidForm
from .ff import FieldCtx
from .linalg.dense import rref_mod_p

Monomial = tuple  # (a, b, c)

CURVE = "curve"
VERONESE = "veronese"


def monomials_of_degree(d: int) -> list[Monomial]:
    """All C(d+2, 2) monomials of degree ``d`` in grlex order, x > y > z."""
    if d < 0:
        return []
    return [(a, b, d - a - b) for a in range(d, -1, -1) for b in range(d - a, -1, -1)]


def monomial_index(m: Monomial) -> int:
    """Position of ``m`` in ``monomials_of_degree(deg m)``."""
    a, b, c = m
    t = b + c
    return t * (t + 1) // 2 + c


def num_monomials(d: int) -> int:
    return comb(d + 2, 2) if d >= 0 else 0


def mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    return (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])


@dataclass(frozen=True)
class CurveForm:
    """Homogeneous form F of degree k+1 defining the plane curve."""

    k: int
    coeffs: dict  # Monomial -> canonical residue, zero entries omitted
    descriptor: str = "fermat"

    @property
    def degree(self) -> int:
        return self.k + 1

    @property
    def is_fermat(self) -> bool:
        d = self.degree
        return self.coeffs == {(d, 0, 0): 1, (0, d, 0): 1, (0, 0, d): 1}

    def validate(self) -> None:
        if not self.coeffs:
            raise InvalidForm("curve form is zero")
        for m, c in self.coeffs.items():
            if len(m) != 3 or min(m) < 0 or sum(m) != self.degree:
                raise InvalidForm(f"monomial {m} is not of degree {self.degree}")
            if c == 0:
                raise InvalidForm(f"explicit zero coefficient at {m}")

    def as_vector(self, ctx: FieldCtx) -> list[int]:
        v = [0] * num_monomials(self.degree)
        for m, c in self.coeffs.items():
            v[monomial_index(m)] = c % ctx.p
        return v

    def gradient_at(self, pt, ctx: FieldCtx) -> tuple[int, int, int]:
        p = ctx.p
        grad = [0, 0, 0]
        for m, c in self.coeffs.items():
            for var in range(3):
                e = m[var]
                if e == 0:
                    continue
                t = c * e
                for w in range(3):
                    ew = e - 1 if w == var else m[w]
                    t = t * pow(pt[w], ew, p) % p
                grad[var] = (grad[var] + t) % p
        return tuple(grad)


def fermat_curve(k: int, ctx: FieldCtx) -> CurveForm:
    d = k + 1
    return CurveForm(k, {(d, 0, 0): 1, (0, d, 0): 1, (0, 0, d): 1}, "fermat")


def random_curve(k: int, ctx: FieldCtx, seed: int) -> CurveForm:
    rng = random.Random(seed)
    coeffs = {}
    for m in monomials_of_degree(k + 1):
        c = rng.randrange(1, ctx.p) if ctx.p > 2 else 1
        coeffs[m] = c
    return CurveForm(k, coeffs, f"random:{seed}")


def read_curve_file(path, ctx: FieldCtx) -> CurveForm:
    """Parse ``k <k>`` followed by ``<a> <b> <c> <coeff>`` lines."""
    with open(path) as fh:
        lines = [ln.split() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or len(lines[0]) != 2 or lines[0][0] != "k":
        raise InvalidForm(f"{path}: first line must be 'k <k>'")
    try:
        k = int(lines[0][1])
        coeffs: dict = {}
        for parts in lines[1:]:
            if len(parts) != 4:
                raise InvalidForm(f"{path}: bad term line {' '.join(parts)!r}")
            a, b, c, v = map(int, parts)
            if min(a, b, c) < 0 or a + b + c != k + 1:
                raise InvalidForm(f"{path}: monomial ({a},{b},{c}) is not of degree {k + 1}")
            m = (a, b, c)
            coeffs[m] = (coeffs.get(m, 0) + v) % ctx.p
    except ValueError as exc:
        if isinstance(exc, InvalidForm):
            raise
        raise InvalidForm(f"{path}: {exc}") from exc
    coeffs = {m: v for m, v in coeffs.items() if v}
    form = CurveForm(k, coeffs, f"file:{path}")
    form.validate()
    return form


def parse_curve_spec(spec: str, k: int, ctx: FieldCtx) -> CurveForm:
    if spec == "fermat":
        return fermat_curve(k, ctx)
    if spec.startswith("random:"):
        return random_curve(k, ctx, int(spec.split(":", 1)[1]))
    if spec.startswith("file:"):
        form = read_curve_file(spec.split(":", 1)[1], ctx)
        if form.k != k:
            raise InvalidForm(f"curve file is for k={form.k}, requested k={k}")
        return form
    raise InvalidForm(f"unknown curve spec {spec!r}")


def scan_singular_points(form: CurveForm, ctx: FieldCtx, limit: int = 200_000):
    """Search P^2(F_p) for singular points of F when the plane is small enough.

    Returns a list of singular points, or None when ``p^2 + p + 1 > limit``
    (nothing was scanned).  Only F_p-rational points are considered, so an
    empty list is evidence, not a proof, of smoothness.
    """
    p = ctx.p
    if p * p + p + 1 > limit:
        return None
    pts = [(1, y, z) for y in range(p) for z in range(p)]
    pts += [(0, 1, z) for z in range(p)] + [(0, 0, 1)]
    return [pt for pt in pts if form.gradient_at(pt, ctx) == (0, 0, 0)]


@dataclass
class SectionSpace:
    """Graded piece B_q with a monomial basis and normal-form data."""

    q: int
    k: int
    mode: str
    p: int
    ambient_degree: int
    ambient: list  # all monomials of ambient_degree, grlex
    pivot_monomials: list  # quotient basis, grlex order
    basis_index: list  # ambient index of each basis monomial
    position: list  # ambient index -> basis position, or -1
    reduction_table: dict = field(default_factory=dict)  # ambient idx -> [(pos, coeff)]

    @property
    def dim(self) -> int:
        return len(self.pivot_monomials)

    def expand_monomial(self, m: Monomial) -> list[tuple[int, int]]:
        """Normal form of a single monomial of the ambient degree, sparse."""
        if sum(m) != self.ambient_degree:
            raise DegreeMismatch(f"monomial {m} has degree {sum(m)}, expected {self.ambient_degree}")
        i = monomial_index(m)
        pos = self.position[i]
        if pos >= 0:
            return [(pos, 1)]
        return self.reduction_table[i]


def expected_section_dim(q: int, k: int, mode: str = CURVE) -> int:
    d = q * (k - 1)
    if mode == VERONESE:
        return num_monomials(d)
    return num_monomials(d) - num_monomials(d - (k + 1))


def build_section_space(q: int, form: CurveForm, ctx: FieldCtx, mode: str = CURVE) -> SectionSpace:
    if q < 0:
        raise ValueError("twist index q must be non-negative")
    if mode not in (CURVE, VERONESE):
        raise ValueError(f"unknown mode {mode!r}")
    form.validate()
    k, p = form.k, ctx.p
    d = q * (k - 1)
    ambient = monomials_of_degree(d)
    e = d - (k + 1)
    reduced: list[list[int]] = []
    pivots: list[int] = []
    if mode == CURVE and e >= 0:
        fterms = [(m, c % p) for m, c in form.coeffs.items() if c % p]
        rows = []
        for m in monomials_of_degree(e):
            row = [0] * len(ambient)
            for fm, c in fterms:
                row[monomial_index(mono_mul(fm, m))] = c
            rows.append(row)
        reduced, pivots = rref_mod_p(rows, p)
    pivset = set(pivots)
    basis_index = [i for i in range(len(ambient)) if i not in pivset]
    position = [-1] * len(ambient)
    for pos, i in enumerate(basis_index):
        position[i] = pos
    table = {}
    for row, c in zip(reduced, pivots):
        # m_c + sum a_j m_j = 0  =>  m_c = -sum a_j m_j, j over basis monomials
        table[c] = [(position[j], (-row[j]) % p) for j in basis_index if row[j]]
    return SectionSpace(
        q=q,
        k=k,
        mode=mode,
        p=p,
        ambient_degree=d,
        ambient=ambient,
        pivot_monomials=[ambient[i] for i in basis_index],
        basis_index=basis_index,
        position=position,
        reduction_table=table,
    )


def normal_form(v: Sequence[int], space: SectionSpace) -> list[int]:
    """Project a vector over the ambient monomials onto the quotient basis."""
    if len(v) != len(space.ambient):
        raise DegreeMismatch(
            f"vector of length {len(v)} does not match degree {space.ambient_degree} "
            f"({len(space.ambient)} monomials)"
        )
    p = space.p
    out = [int(v[i]) % p for i in space.basis_index]
    for i, terms in space.reduction_table.items():
        c = int(v[i]) % p
        if c:
            for pos, a in terms:
                out[pos] = (out[pos] + c * a) % p
    return out


def mul_into(m: Monomial, b: int, bq: SectionSpace, bq1: SectionSpace) -> list[tuple[int, int]]:
    """Normal form in B_{q+1} of ``m`` times the b-th basis element of B_q."""
    if sum(m) != bq.k - 1:
        raise DegreeMismatch(f"multiplier {m} must have degree {bq.k - 1}")
    if not 0 <= b < bq.dim:
        raise IndexOutOfRange(f"basis index {b} outside [0, {bq.dim})")
    return bq1.expand_monomial(mono_mul(m, bq.pivot_monomials[b]))
