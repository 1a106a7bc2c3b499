"""Arithmetic in discrete valuation rings finite over Z_p with explicit precision.

Supported rings O: Z_p itself, a ramified quadratic extension Z_p[pi] with pi
a root of an Eisenstein polynomial x^2 + c1*x + c0, and an unramified
quadratic extension Z_p[theta] with theta a root of a polynomial irreducible
mod p.  Elements are stored as integer coordinates in the basis (1,) or
(1, pi) / (1, theta), together with an absolute precision N counted in
pi-units: the element is known modulo pi^N.

Valuations are counted in pi-units throughout.  An element all of whose
digits vanish is "zero at precision": its valuation is reported as None,
meaning ">= N".  Comparisons are three-valued (see eq_status).

Elements built from integer data carry an `exact` flag: their coordinates
are kept as exact integers (no reduction) and survive +, -, * unchanged, so
structural zeros stay recognizable.  Any inexact operation (division,
inversion over a general Eisenstein polynomial) clears the flag and reduces
coordinates modulo p^ceil(N/e).  Exactness can only strengthen answers:
an exact nonzero element reports its true valuation even beyond N.

Basis convention: when a quadratic polynomial is irreducible over the
declared ring the caller must enlarge the DvrSpec; the integral basis of the
enlarged ring is always (1, root-of-defining-polynomial).  This is a
documented convention, not canonical.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .errors import PreconditionError, PrecisionError

__all__ = [
    "DvrSpec",
    "DvrElem",
    "valuation",
    "eq_status",
]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _vp(n: int, p: int) -> Optional[int]:
    """p-adic valuation of an integer, None for 0."""
    if n == 0:
        return None
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class DvrSpec:
    """A discrete valuation ring O finite over Z_p, of degree e*f <= 2.

    defining_poly = (c0, c1) encodes x^2 + c1*x + c0; required exactly when
    e*f = 2.  For e = 2 it must be Eisenstein, for f = 2 irreducible mod p.
    """

    p: int
    e: int = 1
    f: int = 1
    defining_poly: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        if not _is_prime(self.p):
            raise PreconditionError(f"p = {self.p} is not prime")
        if self.p == 2:
            raise PreconditionError("p must be odd")
        if self.e * self.f not in (1, 2):
            raise PreconditionError("only degree e*f in {1, 2} over Z_p is supported")
        if self.degree == 1:
            if self.defining_poly is not None:
                raise PreconditionError("Z_p takes no defining polynomial")
            return
        if self.defining_poly is None:
            raise PreconditionError("quadratic ring requires a defining polynomial (c0, c1)")
        c0, c1 = self.defining_poly
        if self.e == 2:
            if _vp(c0, self.p) != 1 or (c1 != 0 and _vp(c1, self.p) == 0):
                raise PreconditionError(
                    "ramified quadratic defining polynomial must be Eisenstein"
                )
        else:
            # irreducible mod p <=> no root mod p
            p = self.p
            if any((r * r + c1 * r + c0) % p == 0 for r in range(p)):
                raise PreconditionError(
                    "unramified quadratic defining polynomial must be irreducible mod p"
                )

    @property
    def degree(self) -> int:
        return self.e * self.f

    @property
    def default_precision(self) -> int:
        return 12 * self.e

    def coord_modulus(self, prec: int) -> int:
        """Coordinates of a precision-prec element live modulo p^ceil(prec/e)."""
        return self.p ** (-(-prec // self.e))

    # --- constructors -----------------------------------------------------

    def elem(self, coords, prec: Optional[int] = None, exact: bool = True) -> "DvrElem":
        if prec is None:
            prec = self.default_precision
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.degree:
            raise PreconditionError(
                f"expected {self.degree} coordinates, got {len(coords)}"
            )
        return DvrElem(self, coords, prec, exact)

    def from_int(self, n: int, prec: Optional[int] = None) -> "DvrElem":
        coords = (n,) if self.degree == 1 else (n, 0)
        return self.elem(coords, prec)

    def zero(self, prec: Optional[int] = None) -> "DvrElem":
        return self.from_int(0, prec)

    def one(self, prec: Optional[int] = None) -> "DvrElem":
        return self.from_int(1, prec)

    def uniformizer(self, prec: Optional[int] = None) -> "DvrElem":
        if self.e == 2:
            return self.elem((0, 1), prec)
        return self.from_int(self.p, prec)

    def residue_representatives(self):
        """Iterate coordinate tuples representing the residue field kappa."""
        p = self.p
        if self.f == 2:
            for a in range(p):
                for b in range(p):
                    yield (a, b)
        elif self.degree == 2:
            for a in range(p):
                yield (a, 0)
        else:
            for a in range(p):
                yield (a,)

    def ring_name(self) -> str:
        if self.degree == 1:
            return f"Z_{self.p}"
        kind = "ramified" if self.e == 2 else "unramified"
        c0, c1 = self.defining_poly
        return f"Z_{self.p}[x]/(x^2 + {c1}*x + {c0}) ({kind})"


class DvrElem:
    """An element of a DvrSpec ring, known modulo pi^prec."""

    __slots__ = ("spec", "coords", "prec", "exact", "_val")

    def __init__(self, spec: DvrSpec, coords: Tuple[int, ...], prec: int, exact: bool):
        if prec < 1:
            raise PrecisionError("element precision exhausted (prec < 1)")
        if not exact:
            m = spec.coord_modulus(prec)
            coords = tuple(c % m for c in coords)
        self.spec = spec
        self.coords = coords
        self.prec = prec
        self.exact = exact
        self._val = -2  # unset marker

    # --- inspection -------------------------------------------------------

    def valuation(self) -> Optional[int]:
        """pi-adic valuation, or None meaning '>= prec' (zero at precision).

        Exact nonzero elements report their true valuation even when it
        meets or exceeds the claimed precision.
        """
        if self._val != -2:
            return self._val
        spec, p = self.spec, self.spec.p
        vs = [_vp(c, p) for c in self.coords]
        if all(v is None for v in vs):
            v = None
        elif spec.e == 2:
            cands = []
            if vs[0] is not None:
                cands.append(2 * vs[0])
            if vs[1] is not None:
                cands.append(2 * vs[1] + 1)
            v = min(cands)
        else:
            v = spec.e * min(x for x in vs if x is not None)
        if v is not None and v >= self.prec and not self.exact:
            v = None
        self._val = v
        return v

    @property
    def is_zero_at_precision(self) -> bool:
        return self.valuation() is None

    @property
    def is_exact_zero(self) -> bool:
        return self.exact and all(c == 0 for c in self.coords)

    def reduced_coords(self) -> Tuple[int, ...]:
        m = self.spec.coord_modulus(self.prec)
        return tuple(c % m for c in self.coords)

    def residue(self) -> Tuple[int, ...]:
        """Image in the residue field, as coordinates mod p."""
        p = self.spec.p
        if self.spec.f == 2:
            return (self.coords[0] % p, self.coords[1] % p)
        return (self.coords[0] % p,)

    # --- ring operations ---------------------------------------------------

    def _binary_prec(self, other: "DvrElem") -> int:
        return min(self.prec, other.prec)

    def _check_spec(self, other: "DvrElem"):
        if self.spec != other.spec:
            raise PreconditionError("mixed-ring arithmetic is not defined")

    def __add__(self, other: "DvrElem") -> "DvrElem":
        self._check_spec(other)
        coords = tuple(a + b for a, b in zip(self.coords, other.coords))
        return DvrElem(self.spec, coords, self._binary_prec(other), self.exact and other.exact)

    def __sub__(self, other: "DvrElem") -> "DvrElem":
        self._check_spec(other)
        coords = tuple(a - b for a, b in zip(self.coords, other.coords))
        return DvrElem(self.spec, coords, self._binary_prec(other), self.exact and other.exact)

    def __neg__(self) -> "DvrElem":
        return DvrElem(self.spec, tuple(-a for a in self.coords), self.prec, self.exact)

    def __mul__(self, other: "DvrElem") -> "DvrElem":
        self._check_spec(other)
        spec = self.spec
        if spec.degree == 1:
            coords = (self.coords[0] * other.coords[0],)
        else:
            a, b = self.coords
            c, d = other.coords
            c0, c1 = spec.defining_poly
            # (a + b t)(c + d t) with t^2 = -c1 t - c0
            coords = (a * c - b * d * c0, a * d + b * c - b * d * c1)
        # error bound: min(v(x) + N(y), v(y) + N(x)); unknown valuations
        # contribute their own precision, never more.
        vx = self.valuation()
        vy = other.valuation()
        vx = self.prec if vx is None else min(vx, self.prec)
        vy = other.prec if vy is None else min(vy, other.prec)
        prec = min(vx + other.prec, vy + self.prec)
        # x * 0 is exactly 0 whatever the precision of x
        exact = (self.exact and other.exact) or self.is_exact_zero or other.is_exact_zero
        return DvrElem(spec, coords, prec, exact)

    def scale(self, n: int) -> "DvrElem":
        return DvrElem(self.spec, tuple(n * c for c in self.coords), self.prec, self.exact)

    def __pow__(self, n: int) -> "DvrElem":
        if n < 0:
            raise PreconditionError("negative powers: use unit_inverse")
        result = self.spec.one(self.prec)
        for _ in range(n):
            result = result * self
        return result

    def unit_inverse(self) -> "DvrElem":
        """Inverse of a unit (valuation 0)."""
        v = self.valuation()
        if v != 0:
            raise PreconditionError("unit_inverse requires valuation 0")
        spec = self.spec
        m = spec.coord_modulus(self.prec)
        if spec.degree == 1:
            coords = (pow(self.coords[0], -1, m),)
        else:
            a, b = self.coords
            c0, c1 = spec.defining_poly
            # conj(a + b t) = a - b c1 - b t; norm = a^2 - a b c1 + b^2 c0
            norm = a * a - a * b * c1 + b * b * c0
            ninv = pow(norm, -1, m)
            coords = ((a - b * c1) * ninv, -b * ninv)
        return DvrElem(spec, coords, self.prec, False)

    def shift_down(self, k: int) -> "DvrElem":
        """Divide by pi^k.  Requires valuation >= k (or zero at precision)."""
        if k == 0:
            return self
        if k < 0:
            raise PreconditionError("shift_down takes k >= 0")
        v = self.valuation()
        if v is not None and v < k:
            raise PreconditionError(f"not divisible by pi^{k} (valuation {v})")
        if self.prec - k < 1:
            raise PrecisionError(f"dividing by pi^{k} exhausts precision {self.prec}")
        spec, p = self.spec, self.spec.p
        coords = self.coords
        exact = self.exact
        if spec.e == 1:
            q = p ** k
            if exact:
                if any(c % q for c in coords):
                    raise PreconditionError(f"not divisible by pi^{k}")
                coords = tuple(c // q for c in coords)
            else:
                # reduced coordinates: divisibility is guaranteed by v >= k
                m = spec.coord_modulus(self.prec)
                coords = tuple((c % m) // q for c in coords)
        else:
            c0, c1 = spec.defining_poly
            nice = c1 == 0 and abs(c0) == p  # pi^2 = -c0 keeps integrality
            m = spec.coord_modulus(self.prec)
            u0inv = None if nice else pow(c0 // p, -1, m)
            a, b = (coords if exact else (coords[0] % m, coords[1] % m))
            for _ in range(k):
                # solve (x + y pi) pi = a + b pi:  y = -a/c0, x = b + y c1
                if a % p:
                    raise PreconditionError("not divisible by pi")
                if nice:
                    y = -(a // c0)
                else:
                    y = (-(a // p) * u0inv) % m
                    exact = False
                a, b = b + y * c1, y
            coords = (a, b)
        return DvrElem(spec, coords, self.prec - k, exact)

    def shift_up(self, k: int) -> "DvrElem":
        """Multiply by pi^k."""
        if k == 0:
            return self
        return self * (self.spec.uniformizer(self.prec) ** k)

    def divide_exact(self, other: "DvrElem") -> "DvrElem":
        """self / other when the quotient lies in O."""
        self._check_spec(other)
        v = other.valuation()
        if v is None:
            raise PrecisionError("divisor indistinguishable from zero at precision")
        unit = other.shift_down(v)
        return self.shift_down(v) * unit.unit_inverse()

    # --- comparisons --------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, DvrElem):
            return NotImplemented
        return eq_status(self, other) is True

    def __hash__(self):
        raise TypeError("DvrElem is not hashable (precision-dependent equality)")

    def __repr__(self):
        c = self.reduced_coords()
        body = str(c[0]) if len(c) == 1 else f"{c[0]} + {c[1]}*t"
        return f"<{body} + O(pi^{self.prec})>"


def valuation(x: DvrElem) -> Optional[int]:
    """pi-adic valuation of x, or None meaning '>= precision'."""
    return x.valuation()


def eq_status(x: DvrElem, y: DvrElem) -> Optional[bool]:
    """Three-valued equality: True / False / None (undetermined at precision).

    True requires the difference to be exactly zero; a difference that merely
    vanishes at the shared precision is undetermined (None).
    """
    d = x - y
    if d.is_exact_zero:
        return True
    if d.valuation() is not None:
        return False
    return None
