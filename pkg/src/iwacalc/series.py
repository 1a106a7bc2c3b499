"""Distinguished polynomials and truncated power series over a DVR.

TruncSeries models an element of O[[S]] known modulo (pi^N, S^M): it stores
coefficients of S^0 .. S^(M-1).  DistPoly models a distinguished polynomial
(monic, non-leading coefficients in the maximal ideal) known modulo pi^N.

Provides Weierstrass division and preparation, Newton polygons (slopes
reported in p-units, i.e. pi-valuation / e), the valuation of the root gap
of a quadratic, and quadratic root extraction over the declared ring by
completing the square and Hensel-lifting a residue square root (p odd).
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .dvr import DvrElem, DvrSpec
from .errors import IrreducibleError, PreconditionError, PrecisionError

__all__ = [
    "TruncSeries",
    "DistPoly",
    "weierstrass_divide",
    "weierstrass_prepare",
    "newton_polygon",
    "root_gap_valuation",
    "sqrt",
    "quad_split",
]


def _coerce(spec: DvrSpec, c, prec: Optional[int]) -> DvrElem:
    if isinstance(c, DvrElem):
        return c
    return spec.from_int(int(c), prec)


class TruncSeries:
    """A power series over O known modulo (pi^N, S^M); M = truncation order."""

    __slots__ = ("spec", "coeffs", "order")

    def __init__(self, spec: DvrSpec, coeffs: Sequence, order: Optional[int] = None,
                 prec: Optional[int] = None):
        coeffs = [_coerce(spec, c, prec) for c in coeffs]
        if order is None:
            order = len(coeffs)
        if order < 1:
            raise PrecisionError("series truncation order must be >= 1")
        while len(coeffs) < order:
            coeffs.append(spec.zero(prec))
        if len(coeffs) > order:
            coeffs = coeffs[:order]
        self.spec = spec
        self.coeffs = tuple(coeffs)
        self.order = order

    def coeff(self, i: int) -> DvrElem:
        if i >= self.order:
            raise PrecisionError(f"coefficient of S^{i} beyond truncation order {self.order}")
        return self.coeffs[i]

    def truncate(self, order: int) -> "TruncSeries":
        if order > self.order:
            raise PrecisionError("cannot raise truncation order")
        return TruncSeries(self.spec, self.coeffs[:order], order)

    def _align(self, other: "TruncSeries") -> int:
        if self.spec != other.spec:
            raise PreconditionError("mixed-ring series arithmetic")
        return min(self.order, other.order)

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        m = self._align(other)
        return TruncSeries(self.spec, [a + b for a, b in zip(self.coeffs[:m], other.coeffs[:m])], m)

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        m = self._align(other)
        return TruncSeries(self.spec, [a - b for a, b in zip(self.coeffs[:m], other.coeffs[:m])], m)

    def __neg__(self) -> "TruncSeries":
        return TruncSeries(self.spec, [-a for a in self.coeffs], self.order)

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        m = self._align(other)
        out = [self.spec.zero(min(a.prec for a in self.coeffs + other.coeffs))
               for _ in range(m)]
        for i, a in enumerate(self.coeffs[:m]):
            if a.is_exact_zero:
                continue
            for j, b in enumerate(other.coeffs[: m - i]):
                out[i + j] = out[i + j] + a * b
        return TruncSeries(self.spec, out, m)

    def scalar_mul(self, c: DvrElem) -> "TruncSeries":
        return TruncSeries(self.spec, [c * a for a in self.coeffs], self.order)

    def shift_up(self, k: int) -> "TruncSeries":
        """Multiply by S^k; the result is known modulo S^(order + k)."""
        zero = self.spec.zero(min(a.prec for a in self.coeffs))
        return TruncSeries(self.spec, [zero] * k + list(self.coeffs), self.order + k)

    def __call__(self, x: DvrElem) -> DvrElem:
        acc = self.spec.zero(x.prec)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    @property
    def is_unit(self) -> bool:
        return self.coeffs[0].valuation() == 0

    def inverse(self) -> "TruncSeries":
        if not self.is_unit:
            raise PreconditionError("series inverse requires a unit constant term")
        c0inv = self.coeffs[0].unit_inverse()
        out: List[DvrElem] = [c0inv]
        for n in range(1, self.order):
            acc = self.spec.zero(c0inv.prec)
            for i in range(1, n + 1):
                acc = acc + self.coeffs[i] * out[n - i]
            out.append(-(c0inv * acc))
        return TruncSeries(self.spec, out, self.order)

    def all_zero_at_precision(self) -> bool:
        return all(c.valuation() is None for c in self.coeffs)

    def __repr__(self):
        return f"TruncSeries({list(self.coeffs)!r}, order={self.order})"


class DistPoly:
    """A distinguished polynomial: monic, non-leading coefficients in (pi)."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: DvrSpec, coeffs: Sequence, prec: Optional[int] = None):
        coeffs = [_coerce(spec, c, prec) for c in coeffs]
        if not coeffs:
            raise PreconditionError("empty polynomial")
        lead = coeffs[-1]
        if not (lead.exact and lead.coords == spec.one().coords):
            raise PreconditionError("distinguished polynomial must be monic (leading coeff 1)")
        for c in coeffs[:-1]:
            v = c.valuation()
            if v == 0:
                raise PreconditionError("non-leading coefficient is a unit: not distinguished")
        self.spec = spec
        self.coeffs = tuple(coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: DvrElem) -> DvrElem:
        acc = self.spec.zero(x.prec)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def to_series(self, order: Optional[int] = None) -> TruncSeries:
        if order is None:
            order = self.degree + 1
        if order < self.degree + 1:
            raise PreconditionError("order too small to hold the polynomial")
        return TruncSeries(self.spec, list(self.coeffs), order)

    def __mul__(self, other: "DistPoly") -> "DistPoly":
        if self.spec != other.spec:
            raise PreconditionError("mixed-ring polynomial arithmetic")
        n, m = self.degree, other.degree
        prec = min(c.prec for c in self.coeffs + other.coeffs)
        out = [self.spec.zero(prec) for _ in range(n + m + 1)]
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        out[-1] = self.spec.one(prec)  # product of monics is monic
        return DistPoly(self.spec, out)

    @classmethod
    def from_roots(cls, spec: DvrSpec, roots: Sequence[DvrElem]) -> "DistPoly":
        coeffs = [spec.one(min(r.prec for r in roots))]
        for r in roots:
            new = [spec.zero(r.prec)] * (len(coeffs) + 1)
            for i, c in enumerate(coeffs):
                new[i + 1] = new[i + 1] + c
                new[i] = new[i] - r * c
            coeffs = new
        coeffs[-1] = spec.one(min(r.prec for r in roots))
        return cls(spec, coeffs)

    def __repr__(self):
        return f"DistPoly({list(self.coeffs)!r})"


def weierstrass_divide(f: Union[TruncSeries, DistPoly], d: DistPoly
                       ) -> Tuple[TruncSeries, List[DvrElem]]:
    """Divide f by a distinguished d: f = q*d + r with deg r < deg d.

    The identity holds exactly for the degree-<M representative of f; q is
    the Weierstrass quotient known modulo S^(M - deg d).
    """
    if isinstance(f, DistPoly):
        f = f.to_series(f.degree + 1)
    n = d.degree
    if n == 0:
        return f, []
    if f.order <= n:
        raise PrecisionError(
            f"truncation order {f.order} too small to divide by degree {n}"
        )
    work = list(f.coeffs)
    m = f.order
    q: List[DvrElem] = [None] * (m - n)
    for i in range(m - 1, n - 1, -1):
        c = work[i]
        q[i - n] = c
        for j in range(n):
            work[i - n + j] = work[i - n + j] - c * d.coeffs[j]
        work[i] = work[i] - c  # leading coefficient is exactly 1
    return TruncSeries(f.spec, q, m - n), work[:n]


def weierstrass_prepare(g: TruncSeries) -> Tuple[int, DistPoly, TruncSeries]:
    """Weierstrass form g = pi^mu * unit * F with F distinguished.

    Returns (mu, F, unit).  The unit is stripped deterministically; F = 1
    (degree 0) when g is pi^mu times a unit series.  As with division, the
    computation applies to the degree-<M representative of g: two series
    that agree modulo S^M but continue differently have different factors.
    """
    vals = [c.valuation() for c in g.coeffs]
    known = [v for v in vals if v is not None]
    if not known:
        raise PrecisionError("series indistinguishable from zero at precision")
    mu = min(known)
    h = TruncSeries(g.spec, [c.shift_down(mu) for c in g.coeffs], g.order)
    lam = next(i for i, c in enumerate(h.coeffs) if c.valuation() == 0)
    if lam == 0:
        return mu, DistPoly(g.spec, [g.spec.one(h.coeffs[0].prec)]), h
    if lam >= h.order:
        raise PrecisionError("truncation order too small for Weierstrass preparation")
    spec = g.spec
    prec = min(c.prec for c in h.coeffs)
    # The division below is exact for the degree-<M representative of h, so h
    # may be padded with exact zeros.  The quotient must be carried far enough
    # in S that its truncation error (~ pi^(order * smallest slope), slopes
    # are >= 1/lam) stays below the pi-precision of the coefficients.
    work_order = max(h.order, lam * (prec + 1) + 1)
    if work_order > h.order:
        h = TruncSeries(spec, list(h.coeffs) +
                        [spec.zero(prec)] * (work_order - h.order), work_order)
    # divide S^lam by h: S^lam = q*h + r, deg r < lam, q a unit
    target = TruncSeries(spec, [spec.zero(prec)] * lam + [spec.one(prec)], h.order)
    hh = TruncSeries(spec, h.coeffs[lam:], h.order - lam)
    hh_inv = hh.inverse()
    q = TruncSeries(spec, [spec.zero(prec)] * (h.order - lam), h.order - lam)
    res = target
    for _ in range(prec + 1):
        high = TruncSeries(spec, res.coeffs[lam:], res.order - lam)
        if high.all_zero_at_precision():
            break
        q = q + high * hh_inv
        res = target - _mul_trunc(q, h, h.order)
    r = res.coeffs[:lam]
    fcoeffs = [-c for c in r] + [spec.one(prec)]
    for c in fcoeffs[:-1]:
        if c.valuation() == 0:
            raise PrecisionError("Weierstrass factor not distinguished at precision")
    return mu, DistPoly(spec, fcoeffs), q.inverse()


def _mul_trunc(q: TruncSeries, h: TruncSeries, order: int) -> TruncSeries:
    """q*h as a series of the given order (q shorter than h is fine)."""
    spec = q.spec
    prec = min(c.prec for c in q.coeffs + h.coeffs)
    out = [spec.zero(prec) for _ in range(order)]
    for i, a in enumerate(q.coeffs):
        if a.is_exact_zero:
            continue
        for j, b in enumerate(h.coeffs):
            if i + j < order:
                out[i + j] = out[i + j] + a * b
    return TruncSeries(spec, out, order)


def newton_polygon(F: DistPoly) -> List[Tuple[Fraction, int]]:
    """Slopes of the lower hull of {(i, ord_pi(a_i))}, ascending.

    Slope s with multiplicity m means m roots of pi-valuation s*e; the
    returned slope is in p-units (pi-units divided by e).
    """
    if F.degree == 0:
        raise PreconditionError("Newton polygon of a constant")
    e = F.spec.e
    pts = []
    unknown = []
    for i, c in enumerate(F.coeffs):
        if c.is_exact_zero:
            continue
        v = c.valuation()
        if v is None:
            unknown.append((i, c.prec))
        else:
            pts.append((i, v))
    pts.sort()
    if pts[0][0] != 0:
        if any(i == 0 for i, _ in unknown):
            raise PrecisionError(
                "constant coefficient valuation indeterminate at precision"
            )
        raise PreconditionError(
            "polynomial divisible by S: roots of infinite valuation"
        )
    # lower convex hull, left to right
    hull: List[Tuple[int, int]] = []
    for x, y in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (x - x2) >= (y - y2) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append((x, y))
    def hull_height(x: int) -> Fraction:
        for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
            if x1 <= x <= x2:
                return Fraction(y1) + Fraction(y2 - y1, x2 - x1) * (x - x1)
        return Fraction(hull[-1][1])
    for i, prec in unknown:
        if i < hull[0][0] or Fraction(prec) < hull_height(i):
            raise PrecisionError(
                f"coefficient of S^{i} valuation indeterminate below the hull"
            )
    slopes: List[Tuple[Fraction, int]] = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        s = Fraction(y1 - y2, x2 - x1)  # root pi-valuation on this segment
        slopes.append((s / e, x2 - x1))
    slopes.reverse()  # ascending root valuation
    return slopes


def root_gap_valuation(F: DistPoly) -> Union[int, Fraction]:
    """ord_pi(beta - alpha) for a quadratic F = S^2 + aS + b: ord(a^2 - 4b)/2."""
    if F.degree != 2:
        raise PreconditionError("root_gap_valuation requires a quadratic")
    a, b = F.coeffs[1], F.coeffs[0]
    disc = a * a - b.scale(4)
    v = disc.valuation()
    if v is None:
        raise PrecisionError(
            "discriminant indistinguishable from zero: alpha != beta unverifiable"
        )
    return v // 2 if v % 2 == 0 else Fraction(v, 2)


def sqrt(x: DvrElem) -> DvrElem:
    """A square root of x in the declared ring (p odd), deterministic choice."""
    spec = x.spec
    v = x.valuation()
    if v is None:
        raise PrecisionError("square root of an element zero at precision")
    if v % 2:
        raise IrreducibleError("odd valuation: square root lies in a ramified extension")
    u = x.shift_down(v)
    root = None
    for coords in spec.residue_representatives():
        cand = spec.elem(coords, u.prec)
        d = cand * cand - u
        if d.is_exact_zero or (dv := d.valuation()) is None or dv >= 1:
            root = cand
            break
    if root is None:
        raise IrreducibleError("not a square in the declared ring")
    inv2 = spec.from_int(2, u.prec).unit_inverse()
    s = root
    for _ in range(u.prec.bit_length() + 2):
        s = (s + u.divide_exact(s)) * inv2
    check = s * s - u
    if check.valuation() is not None:
        raise PrecisionError("square-root iteration failed to converge")
    return s.shift_up(v // 2) if v else s


def quad_split(F: DistPoly, target_precision: Optional[int] = None
               ) -> Tuple[DvrElem, DvrElem]:
    """Split a quadratic F = (S - alpha)(S - beta) over the declared ring.

    Roots are ordered by (valuation, reduced coordinates) for determinism.
    Raises IrreducibleError when F does not split over the ring; the caller
    must enlarge the DvrSpec.
    """
    if F.degree != 2:
        raise PreconditionError("quad_split requires a quadratic")
    a, b = F.coeffs[1], F.coeffs[0]
    prec = min(a.prec, b.prec)
    if target_precision is not None and target_precision > prec:
        raise PrecisionError(
            f"target precision {target_precision} exceeds input precision {prec}"
        )
    disc = a * a - b.scale(4)
    if disc.valuation() is None:
        raise PrecisionError(
            "discriminant zero at precision: cannot certify distinct roots"
        )
    delta = sqrt(disc)  # raises IrreducibleError when F is irreducible over O
    inv2 = F.spec.from_int(2, prec).unit_inverse()
    r1 = (-a + delta) * inv2
    r2 = (-a - delta) * inv2
    def key(r: DvrElem):
        v = r.valuation()
        return (v if v is not None else r.prec + 1, r.reduced_coords())
    r1, r2 = sorted((r1, r2), key=key)
    for r in (r1, r2):
        v = r.valuation()
        if v == 0:
            raise PreconditionError("root is a unit: F was not distinguished")
    return r1, r2
