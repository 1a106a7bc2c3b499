"""Modules over the two-variable algebra O[[S, T]], presented over O[[T]].

A TwoVarModule is free of rank r over truncated O[[T]] with an explicit
S-action matrix A; its characteristic polynomial det(S*I - A) is an SPoly:
a polynomial in S whose coefficients are truncated series in T.

Specializations at T = 0 are compared with one-variable data after
Weierstrass normalization (one sound convention for "equal up to units").
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from .dvr import DvrElem, DvrSpec, eq_status
from .errors import PreconditionError, PrecisionError
from .lambdamod import POrder
from .series import DistPoly, TruncSeries, weierstrass_prepare

__all__ = [
    "SPoly",
    "TwoVarModule",
    "char_det",
    "specialize_T",
    "evaluate_00",
    "series_agree_up_to_unit",
    "check_ann_char_consistency",
]


class SPoly:
    """Polynomial in S with TruncSeries-in-T coefficients."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: DvrSpec, coeffs: Sequence[TruncSeries]):
        if not coeffs:
            raise PreconditionError("empty S-polynomial")
        self.spec = spec
        self.coeffs = tuple(coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def t_order(self) -> int:
        return min(c.order for c in self.coeffs)

    def _zero_series(self, order: int) -> TruncSeries:
        return TruncSeries(self.spec, [0], order)

    def __add__(self, other: "SPoly") -> "SPoly":
        n = max(self.degree, other.degree) + 1
        t = min(self.t_order(), other.t_order())
        out = []
        for i in range(n):
            a = self.coeffs[i].truncate(t) if i <= self.degree else self._zero_series(t)
            b = other.coeffs[i].truncate(t) if i <= other.degree else self._zero_series(t)
            out.append(a + b)
        return SPoly(self.spec, out)

    def __neg__(self) -> "SPoly":
        return SPoly(self.spec, [-c for c in self.coeffs])

    def __sub__(self, other: "SPoly") -> "SPoly":
        return self + (-other)

    def __mul__(self, other: "SPoly") -> "SPoly":
        t = min(self.t_order(), other.t_order())
        out = [self._zero_series(t) for _ in range(self.degree + other.degree + 1)]
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + (a.truncate(t) * b.truncate(t))
        return SPoly(self.spec, out)

    def scale_series(self, c: TruncSeries) -> "SPoly":
        t = min(self.t_order(), c.order)
        return SPoly(self.spec, [a.truncate(t) * c.truncate(t) for a in self.coeffs])

    def is_zero_at_truncation(self) -> bool:
        return all(x.valuation() is None for c in self.coeffs for x in c.coeffs)

    def has_determined_nonzero(self) -> bool:
        return any(x.valuation() is not None for c in self.coeffs for x in c.coeffs)

    def divmod_monic(self, d: "SPoly") -> Tuple["SPoly", "SPoly"]:
        """Division by an SPoly whose leading coefficient is a unit series."""
        lead = d.coeffs[-1]
        if not lead.is_unit:
            raise PreconditionError("division requires a unit leading coefficient")
        linv = lead.inverse()
        t = min(self.t_order(), d.t_order())
        rem = [c.truncate(t) for c in self.coeffs]
        n = d.degree
        q = [self._zero_series(t) for _ in range(max(self.degree - n + 1, 1))]
        for i in range(self.degree, n - 1, -1):
            f = rem[i] * linv.truncate(t)
            q[i - n] = q[i - n] + f
            for j in range(n + 1):
                rem[i - n + j] = rem[i - n + j] - f * d.coeffs[j].truncate(t)
        return SPoly(self.spec, q), SPoly(self.spec, rem[:n] if n else [self._zero_series(t)])

    def __repr__(self):
        return f"SPoly(deg={self.degree})"

    @classmethod
    def constant(cls, spec: DvrSpec, series: TruncSeries) -> "SPoly":
        return cls(spec, [series])

    @classmethod
    def variable_S(cls, spec: DvrSpec, t_order: int) -> "SPoly":
        return cls(spec, [TruncSeries(spec, [0], t_order), TruncSeries(spec, [1], t_order)])


@dataclass(frozen=True)
class TwoVarModule:
    """Rank-r module over truncated O[[T]] with S acting by the matrix A."""

    spec: DvrSpec
    s_action: Tuple[Tuple[TruncSeries, ...], ...]

    def __post_init__(self):
        r = len(self.s_action)
        if r < 1 or any(len(row) != r for row in self.s_action):
            raise PreconditionError("S-action matrix must be square, rank >= 1")

    @property
    def rank(self) -> int:
        return len(self.s_action)


def _det_spoly(mat: List[List[SPoly]]) -> SPoly:
    n = len(mat)
    if n == 1:
        return mat[0][0]
    acc = None
    for j in range(n):
        minor = [[row[k] for k in range(n) if k != j] for row in mat[1:]]
        term = mat[0][j] * _det_spoly(minor)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc


def char_det(M: TwoVarModule) -> SPoly:
    """det(S*I - A), monic of degree r in S."""
    spec = M.spec
    r = M.rank
    t = min(ts.order for row in M.s_action for ts in row)
    S = SPoly.variable_S(spec, t)
    zero = SPoly.constant(spec, TruncSeries(spec, [0], t))
    mat = []
    for i in range(r):
        row = []
        for j in range(r):
            entry = (S if i == j else zero) - SPoly.constant(spec, M.s_action[i][j])
            row.append(entry)
        mat.append(row)
    return _det_spoly(mat)


def specialize_T(f: SPoly, value: int = 0) -> TruncSeries:
    """The one-variable polynomial f(S, 0) as a TruncSeries in S."""
    if value != 0:
        raise PreconditionError("only specialization at T = 0 is supported")
    consts = [c.coeffs[0] for c in f.coeffs]
    return TruncSeries(f.spec, consts, max(len(consts), 2))


def evaluate_00(f: SPoly) -> POrder:
    """#Z_p / f(0, 0); requires the base ring to be Z_p."""
    spec = f.spec
    if spec.degree != 1:
        raise PreconditionError("evaluate_00 is defined over Z_p")
    c = f.coeffs[0].coeffs[0]
    if c.is_exact_zero:
        raise PreconditionError("f(0,0) = 0: quotient is not finite")
    v = c.valuation()
    if v is None:
        raise PrecisionError("f(0,0) zero at precision: order undetermined")
    return POrder(spec.p, v)


def series_agree_up_to_unit(f1: TruncSeries, f2: TruncSeries) -> bool:
    """Compare after Weierstrass normalization pi^mu * (distinguished).

    Undetermined coefficient comparisons count as agreement at precision.
    """
    mu1, F1, _ = weierstrass_prepare(f1)
    mu2, F2, _ = weierstrass_prepare(f2)
    if mu1 != mu2 or F1.degree != F2.degree:
        return False
    for a, b in zip(F1.coeffs, F2.coeffs):
        if eq_status(a, b) is False:
            return False
    return True


# --- annihilator vs characteristic product checks ---------------------------


def _reduce_component(x: SPoly, base, n: int) -> SPoly:
    """Reduce x in Lambda_2/(base^n); base is 'pi' or a monic SPoly."""
    if base == "pi":
        return x
    dn = base
    for _ in range(n - 1):
        dn = dn * base
    _, r = x.divmod_monic(dn)
    return r


def _component_is_zero(x: SPoly, base, n: int) -> bool:
    """Is x = 0 in Lambda_2/(base^n), at truncation?

    For base = 'pi': all coefficient valuations >= n (pi-units).
    For polynomial base: the remainder mod base^n vanishes at truncation.
    """
    if base == "pi":
        for c in x.coeffs:
            for coef in c.coeffs:
                if coef.is_exact_zero:
                    continue
                v = coef.valuation()
                if v is not None and v < n:
                    return False
                if v is None and coef.prec < n:
                    raise PrecisionError("pi-power comparison undetermined")
        return True
    r = _reduce_component(x, base, n)
    return not r.has_determined_nonzero()


def check_ann_char_consistency(
        spec: DvrSpec,
        factors: Sequence[Tuple[Union[str, SPoly], int]],
        x_generators: Sequence[Sequence[SPoly]]) -> bool:
    """On E = (+) Lambda_2/(p_i^{n_i}), check Ann(X) = (prod p_i^{n_i}).

    factors: distinct height-one primes as 'pi' or monic SPoly (irreducible
    by caller assertion), with powers.  x_generators: elements of E, one
    SPoly per component.  Verifies the full product annihilates every
    generator and that lowering any single exponent by one fails to
    annihilate some generator.  A drop that cannot be certified nonzero at
    truncation conservatively returns False.
    """
    if any(len(x) != len(factors) for x in x_generators):
        raise PreconditionError("generator has wrong number of components")

    def annihilates(exps: List[int]) -> bool:
        for x in x_generators:
            for i, (base, n) in enumerate(factors):
                # multiply component i of x by prod_j base_j^exps[j]
                acc = x[i]
                for j, (bj, _) in enumerate(factors):
                    for _ in range(exps[j]):
                        if bj == "pi":
                            pi_s = SPoly.constant(
                                spec, TruncSeries(spec, [spec.uniformizer()],
                                                  acc.t_order()))
                            acc = acc * pi_s
                        else:
                            acc = acc * bj
                if not _component_is_zero(acc, base, n):
                    return False
        return True

    exps = [n for _, n in factors]
    if not annihilates(exps):
        return False
    for i in range(len(factors)):
        dropped = list(exps)
        dropped[i] -= 1
        if annihilates(dropped):
            return False
    return True
