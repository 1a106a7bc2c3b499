"""Torsion modules over the truncated Iwasawa algebra Lambda = O[[S]].

Elementary modules (+) Lambda/(f_j^{n_j}), square presentation matrices with
their characteristic series, Smith normal form over the DVR, coinvariant
orders, and the rank-two embedding data used by the cyclicity classifier:
an O-basis x_1, x_2 of a module sitting inside
Lambda/(S - alpha) (+) Lambda/(S - beta) via e_1 -> (1, 1), e_2 -> (0, pi^k).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from .dvr import DvrElem, DvrSpec
from .errors import (NotFiniteAtBoundError, PreconditionError, PrecisionError)
from .finabel import FinAbPGroup
from .localsnf import cokernel_exponents, span_order_exponent
from .series import DistPoly, TruncSeries, weierstrass_prepare

__all__ = [
    "POrder",
    "ElementaryModule",
    "LambdaPresentation",
    "KoikeEmbedding",
    "char_series",
    "first_nonvanishing_coeff",
    "elementary_coinvariant_order",
    "coinvariant_order_from_char",
    "snf_dvr",
    "ak_tensor_structure",
    "divisibility_conditions",
    "truncated_coinvariants",
    "pm_s_submodule_dim",
]


@dataclass(frozen=True)
class POrder:
    """An exact power of p, or a lower bound '>= p^exponent' when undetermined."""

    p: int
    exponent: int
    is_lower_bound: bool = False

    def __int__(self) -> int:
        if self.is_lower_bound:
            raise PrecisionError(f"order only bounded below: >= {self.p}^{self.exponent}")
        return self.p ** self.exponent

    def __repr__(self):
        mark = ">= " if self.is_lower_bound else ""
        return f"{mark}{self.p}^{self.exponent}"

    def __eq__(self, other):
        if isinstance(other, int):
            return not self.is_lower_bound and self.p ** self.exponent == other
        if isinstance(other, POrder):
            return (self.p, self.exponent, self.is_lower_bound) == \
                   (other.p, other.exponent, other.is_lower_bound)
        return NotImplemented


class ElementaryModule:
    """(+)_j Lambda/(f_j^{n_j}); factors are pi or distinguished polynomials."""

    def __init__(self, spec: DvrSpec,
                 factors: Sequence[Tuple[Union[str, DistPoly], int]]):
        self.spec = spec
        norm: List[Tuple[Union[str, DistPoly], int]] = []
        for base, n in factors:
            if n < 1:
                raise PreconditionError("factor powers must be >= 1")
            if isinstance(base, str):
                if base != "pi":
                    raise PreconditionError(f"unknown factor kind {base!r}")
            elif isinstance(base, DistPoly):
                if base.degree == 0:
                    raise PreconditionError("a unit is not a valid elementary factor")
            else:
                raise PreconditionError("factor must be 'pi' or a DistPoly")
            norm.append((base, n))
        self.factors = tuple(norm)

    def product_series(self, order: int, prec: Optional[int] = None) -> TruncSeries:
        """prod f_j^{n_j} as a truncated series (pi factors included)."""
        spec = self.spec
        acc = TruncSeries(spec, [spec.one(prec)], order)
        for base, n in self.factors:
            if base == "pi":
                piece = TruncSeries(spec, [spec.uniformizer(prec)], order)
            else:
                piece = base.to_series(order)
            for _ in range(n):
                acc = acc * piece
        return acc


@dataclass(frozen=True)
class LambdaPresentation:
    """Lambda^r / (columns of a square relation matrix of TruncSeries)."""

    spec: DvrSpec
    matrix: Tuple[Tuple[TruncSeries, ...], ...]

    def __post_init__(self):
        r = len(self.matrix)
        if any(len(row) != r for row in self.matrix):
            raise PreconditionError("presentation matrix must be square")

    @property
    def size(self) -> int:
        return len(self.matrix)


def _det_series(mat: Sequence[Sequence[TruncSeries]]) -> TruncSeries:
    n = len(mat)
    if n == 1:
        return mat[0][0]
    acc = None
    for j in range(n):
        minor = [[row[k] for k in range(n) if k != j] for row in mat[1:]]
        term = mat[0][j] * _det_series(minor)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc


def char_series(P: LambdaPresentation) -> Tuple[int, DistPoly]:
    """Characteristic series of coker(P) in Weierstrass form pi^mu * F(S).

    The unit is stripped deterministically (Weierstrass preparation).
    """
    det = _det_series(P.matrix)
    if all(c.is_exact_zero for c in det.coeffs):
        raise PreconditionError("determinant is zero: module is not torsion")
    mu, F, _unit = weierstrass_prepare(det)
    return mu, F


def first_nonvanishing_coeff(f: Union[DistPoly, TruncSeries], mu: int = 0
                             ) -> Tuple[int, DvrElem]:
    """(index, f*) for the first coefficient of pi^mu * f nonzero at precision.

    Coefficients that are exactly zero are skipped; one that merely vanishes
    at precision blocks the answer (PrecisionError).
    """
    coeffs = f.coeffs if isinstance(f, TruncSeries) else f.to_series().coeffs
    for i, c in enumerate(coeffs):
        if c.is_exact_zero:
            continue
        if c.valuation() is None:
            raise PrecisionError(
                f"coefficient of S^{i} indistinguishable from zero at precision"
            )
        if mu:
            c = c.shift_up(mu)
        return i, c
    raise PrecisionError("all inspected coefficients undetermined at precision")


def _s_adic_valuation(poly: DistPoly) -> int:
    for i, c in enumerate(poly.coeffs):
        if not c.is_exact_zero:
            if c.valuation() is None:
                raise PrecisionError(
                    f"coefficient of S^{i} indistinguishable from zero: cannot "
                    "certify S-divisibility"
                )
            return i
    raise PreconditionError("zero polynomial")


def elementary_coinvariant_order(E: ElementaryModule) -> POrder:
    """#(E / (E[S] + S*E)) for an elementary module with S^2 dividing no factor.

    Factors equal to S contribute 1; a factor f with f(0) != 0 contributes
    #O/f(0)^n = p^(f_res * n * ord f(0)).
    """
    spec = E.spec
    exponent = 0
    for base, n in E.factors:
        if base == "pi":
            exponent += spec.f * n
            continue
        sval = _s_adic_valuation(base)
        if sval * n >= 2:
            raise PreconditionError("S^2 divides a factor")
        if sval == 1:
            if base.degree != 1:
                raise PreconditionError(
                    "factor divisible by S but not equal to S: not an "
                    "irreducible distinguished polynomial"
                )
            continue  # the factor S contributes trivially
        # sval == 0, so the constant term has a determined valuation
        exponent += spec.f * n * base.coeffs[0].valuation()
    return POrder(spec.p, exponent)


def coinvariant_order_from_char(f: Union[DistPoly, TruncSeries], mu: int = 0
                                ) -> POrder:
    """#O/f* from the first nonvanishing coefficient of pi^mu * f.

    Valid when S^2 divides no elementary factor of the underlying module;
    that hypothesis is the caller's responsibility.
    """
    spec = f.spec
    _, fstar = first_nonvanishing_coeff(f, mu)
    v = fstar.valuation()
    if v is None:
        raise PrecisionError("f* indistinguishable from zero at precision")
    return POrder(spec.p, spec.f * v)


def snf_dvr(mat: Sequence[Sequence[DvrElem]], with_transforms: bool = False):
    """Smith normal form over the DVR by minimal-valuation pivoting.

    Returns diag (list of DvrElem, valuations ascending), or
    (diag, U, V) with U*mat*V = diag when with_transforms.  Entries exactly
    zero never block; an entry merely vanishing at precision blocks pivot
    selection only if no determined pivot remains (PrecisionError).
    """
    A = [list(row) for row in mat]
    n = len(A)
    c = len(A[0]) if n else 0
    spec = A[0][0].spec
    prec = min(x.prec for row in A for x in row)
    one, zero = spec.one(prec), spec.zero(prec)
    U = [[one if i == j else zero for j in range(n)] for i in range(n)] if with_transforms else None
    V = [[one if i == j else zero for j in range(c)] for i in range(c)] if with_transforms else None
    diag: List[DvrElem] = []
    for t in range(min(n, c)):
        best = None
        undetermined = False
        for i in range(t, n):
            for j in range(t, c):
                x = A[i][j]
                if x.is_exact_zero:
                    continue
                v = x.valuation()
                if v is None:
                    undetermined = True
                    continue
                if best is None or v < best[0]:
                    best = (v, i, j)
        if best is None:
            if undetermined:
                raise PrecisionError(
                    f"pivot selection blocked at step {t}: remaining entries "
                    "indistinguishable from zero at precision"
                )
            diag.extend([zero] * (min(n, c) - t))
            break
        _, bi, bj = best
        if bi != t:
            A[t], A[bi] = A[bi], A[t]
            if U is not None:
                U[t], U[bi] = U[bi], U[t]
        if bj != t:
            for row in A:
                row[t], row[bj] = row[bj], row[t]
            if V is not None:
                for row in V:
                    row[t], row[bj] = row[bj], row[t]
        piv = A[t][t]
        for i in range(t + 1, n):
            x = A[i][t]
            if x.is_exact_zero:
                continue
            f = x.divide_exact(piv)
            A[i] = [a - f * b for a, b in zip(A[i], A[t])]
            if U is not None:
                U[i] = [a - f * b for a, b in zip(U[i], U[t])]
        for j in range(t + 1, c):
            x = A[t][j]
            if x.is_exact_zero:
                continue
            f = x.divide_exact(piv)
            for row in A:
                row[j] = row[j] - f * row[t]
            if V is not None:
                for row in V:
                    row[j] = row[j] - f * row[t]
        diag.append(A[t][t])
    if with_transforms:
        return diag, U, V
    return diag


@dataclass(frozen=True)
class KoikeEmbedding:
    """An O-basis x_1, x_2 of a module inside Lambda/(S-alpha) (+) Lambda/(S-beta).

    The ambient O-basis is e_1 -> (1, 1), e_2 -> (0, pi^k); x_i = lam_i1 e_1 +
    lam_i2 e_2.  Invariants: 0 <= k <= ord(beta - alpha), the coordinate
    determinant is a unit.
    """

    spec: DvrSpec
    alpha: DvrElem
    beta: DvrElem
    k: int
    x1: Tuple[DvrElem, DvrElem]
    x2: Tuple[DvrElem, DvrElem]

    def __post_init__(self):
        if self.k < 0:
            raise PreconditionError("k must be >= 0")
        gap = self.beta - self.alpha
        gv = gap.valuation()
        if gv is None:
            raise PrecisionError(
                "beta - alpha indistinguishable from zero: alpha != beta "
                "unverifiable at this precision"
            )
        if self.k > gv:
            raise PreconditionError(f"k = {self.k} exceeds ord(beta - alpha) = {gv}")
        for r in (self.alpha, self.beta):
            v = r.valuation()
            if v == 0:
                raise PreconditionError("alpha, beta must be nonunits")
        det = self.x1[0] * self.x2[1] - self.x1[1] * self.x2[0]
        dv = det.valuation()
        if dv is None:
            raise PrecisionError("coordinate determinant undetermined at precision")
        if dv != 0:
            raise PreconditionError(
                "coordinate determinant is not a unit: x_1, x_2 do not form a basis"
            )

    @property
    def gamma(self) -> DvrElem:
        """(beta - alpha) / pi^k."""
        return (self.beta - self.alpha).shift_down(self.k)

    def component_images(self, xi: Tuple[DvrElem, DvrElem]) -> Tuple[DvrElem, DvrElem]:
        """Coordinates of x_i in the standard basis of the two components."""
        lam1, lam2 = xi
        pik = self.spec.uniformizer(self.beta.prec) ** self.k
        return lam1, lam1 + lam2 * pik

    @property
    def mu21(self) -> DvrElem:
        return self.component_images(self.x2)[0]

    @property
    def mu22(self) -> DvrElem:
        return self.component_images(self.x2)[1]


def ak_tensor_structure(emb: KoikeEmbedding) -> Tuple[int, int]:
    """Cyclic pi-power orders (N_1 <= N_2) of the module O^2 / S-action image.

    Computed as snf_dvr of the S-action matrix [[alpha, 0], [gamma, beta]] in
    the basis (e_1, e_2); equals (ord alpha, ord beta) sorted when
    ord(gamma) >= min, and (ord gamma, ord alpha + ord beta - ord gamma)
    otherwise.
    """
    spec = emb.spec
    prec = min(emb.alpha.prec, emb.beta.prec)
    zero = spec.zero(prec)
    diag = snf_dvr([[emb.alpha, zero], [emb.gamma, emb.beta]])
    out = []
    for d in diag:
        v = d.valuation()
        if v is None:
            raise PrecisionError("cyclic order undetermined at precision")
        out.append(v)
    return tuple(sorted(out))


def divisibility_conditions(emb: KoikeEmbedding, N1: int, N2: int) -> bool:
    """Validate the coordinate divisibility conditions for orders pi^N1, pi^N2.

    Checks, for each row (lam_i1, lam_i2) with its order N_i:
    lam_i1 * pi^N_i / alpha in O and pi^N_i (lam_i2 - lam_i1 gamma/alpha) / beta
    in O, i.e. ord(lam_i1) + N_i >= ord(alpha) and
    ord(lam_i2 alpha - lam_i1 gamma) + N_i >= ord(alpha) + ord(beta).
    """
    va = emb.alpha.valuation()
    vb = emb.beta.valuation()
    if va is None or vb is None:
        raise PrecisionError("ord(alpha) or ord(beta) undetermined")
    gamma = emb.gamma
    for (lam1, lam2), N in ((emb.x1, N1), (emb.x2, N2)):
        v1 = lam1.valuation()
        if v1 is None:
            if lam1.is_exact_zero:
                pass
            elif lam1.prec + N < va:
                raise PrecisionError("divisibility undetermined at precision")
        elif v1 + N < va:
            return False
        t = lam2 * emb.alpha - lam1 * gamma
        vt = t.valuation()
        if vt is None:
            if t.is_exact_zero:
                continue
            if t.prec + N < va + vb:
                raise PrecisionError("divisibility undetermined at precision")
        elif vt + N < va + vb:
            return False
    return True


# --- truncated coinvariants ------------------------------------------------


def _theta_times(spec: DvrSpec, x: DvrElem, power: int) -> DvrElem:
    t = spec.elem((0, 1), x.prec)
    for _ in range(power):
        x = x * t
    return x


def truncated_coinvariants(P: LambdaPresentation,
                           ideal: Sequence[Union[str, TruncSeries, DistPoly]],
                           s_order: int = 12,
                           p_exponent: Optional[int] = None) -> FinAbPGroup:
    """The finite abelian p-group coker(P) / (ideal), by Z_p-linear truncation.

    Ideal generators: "pi", "S", a TruncSeries, or a DistPoly.  The quotient
    must be finite; stability of the answer under raising the S-truncation is
    the certificate, otherwise NotFiniteAtBoundError reports the bound used.
    """
    spec = P.spec
    if p_exponent is None:
        p_exponent = max(2, min(ts_min_prec(P) // spec.e, 12))
    ideal_series = []
    for g in ideal:
        if isinstance(g, str):
            if g == "pi":
                ideal_series.append(("pi", None))
            elif g == "S":
                ideal_series.append(("series", TruncSeries(spec, [0, 1], s_order)))
            else:
                raise PreconditionError(f"unknown ideal generator {g!r}")
        elif isinstance(g, DistPoly):
            ideal_series.append(("series", g.to_series(max(s_order, g.degree + 1))))
        elif isinstance(g, TruncSeries):
            ideal_series.append(("series", g))
        else:
            ideal_series.append(("pi_power", int(g)))
    exps_lo = _coinvariant_exponents(P, ideal_series, s_order, p_exponent)
    exps_hi = _coinvariant_exponents(P, ideal_series, s_order + 2, p_exponent)
    if exps_lo != exps_hi or any(e >= p_exponent for e in exps_lo):
        raise NotFiniteAtBoundError(
            "quotient not finite (or not stabilized) at truncation bounds",
            p_exponent_bound=p_exponent, s_order_bound=s_order,
        )
    return FinAbPGroup(spec.p, tuple(exps_lo))


def ts_min_prec(P: LambdaPresentation) -> int:
    return min(c.prec for row in P.matrix for ts in row for c in ts.coeffs)


def _coinvariant_exponents(P: LambdaPresentation, ideal_series, s_order: int,
                           B: int) -> List[int]:
    """Cyclic exponents of the truncated quotient as a Z_p-module."""
    spec = P.spec
    r = P.size
    d = spec.degree
    M = s_order

    def flat(t: int, i: int, b: int) -> int:
        return (t * M + i) * d + b

    nrows = r * M * d
    columns: List[List[int]] = []

    def add_vector(vec_components: List[List[DvrElem]]):
        # vec_components[t] = list of S-coefficients (DvrElem) for generator t
        col = [0] * nrows
        for t in range(r):
            for i, c in enumerate(vec_components[t][:M]):
                coords = c.coords
                for b in range(d):
                    col[flat(t, i, b)] = coords[b] if b < len(coords) else 0
        columns.append(col)

    def padded(ts: TruncSeries) -> List[DvrElem]:
        out = list(ts.coeffs[:M])
        while len(out) < M:
            out.append(spec.zero(ts.coeffs[0].prec))
        return out

    # relation columns of P, shifted by S^i and multiplied through the O-basis
    for j in range(r):
        base = [padded(P.matrix[t][j]) for t in range(r)]
        for i in range(M):
            for b in range(d):
                comp = []
                for t in range(r):
                    shifted = [spec.zero(base[t][0].prec)] * i + base[t][: M - i]
                    comp.append([_theta_times(spec, x, b) if d == 2 and b else x
                                 for x in shifted])
                add_vector(comp)
    # ideal generators acting on each standard generator
    for kind, payload in ideal_series:
        for t in range(r):
            if kind == "pi":
                gen_series = TruncSeries(spec, [spec.uniformizer()], M)
            elif kind == "pi_power":
                gen_series = TruncSeries(spec, [spec.uniformizer() ** payload], M)
            else:
                gen_series = payload
            coeffs = padded(gen_series)
            for i in range(M):
                for b in range(d):
                    comp = [[spec.zero(coeffs[0].prec)] * M for _ in range(r)]
                    shifted = [spec.zero(coeffs[0].prec)] * i + coeffs[: M - i]
                    comp[t] = [_theta_times(spec, x, b) if d == 2 and b else x
                               for x in shifted]
                    add_vector(comp)
    # ambient truncation p^B
    pB = spec.p ** B
    for idx in range(nrows):
        col = [0] * nrows
        col[idx] = pB
        columns.append(col)
    mat = [[col[i] for col in columns] for i in range(nrows)]
    exps = cokernel_exponents(mat, spec.p, B)
    return sorted(exps)


def pm_s_submodule_dim(F: DistPoly, m: int) -> int:
    """dim_Fp of M/(p, S)M for M = (p^m, S) * Lambda/(F), Lambda over Z_p.

    The ambient Lambda/(F) is modeled as (Z/p^B)^deg(F) with S acting by the
    companion matrix of F; B is chosen large enough that the submodule orders
    are exact.
    """
    spec = F.spec
    if spec.degree != 1:
        raise PreconditionError("this computation is defined over Z_p")
    lam = F.degree
    if lam < 1:
        raise PreconditionError("F must be nonconstant")
    p = spec.p
    # p^B * ambient lies inside (p, S)M once B > m, so B = m + 2 is exact
    B = m + 2
    if any(c.prec // spec.e < B and not c.exact for c in F.coeffs):
        raise PrecisionError(f"coefficient precision below p^{B} truncation")
    mod = p ** B
    comp = [[0] * lam for _ in range(lam)]
    for i in range(lam - 1):
        comp[i + 1][i] = 1
    for i in range(lam):
        comp[i][lam - 1] = (-F.coeffs[i].coords[0]) % mod

    def apply(mat, vec):
        return [sum(mat[i][j] * vec[j] for j in range(lam)) % mod for i in range(lam)]

    e1 = [1] + [0] * (lam - 1)
    base = [[(p ** m) * x for x in e1], apply(comp, e1)]
    gens = []
    for v in base:
        w = v
        for _ in range(lam):
            gens.append(w)
            w = apply(comp, w)
    sub = list(gens)
    ps_sub = [[(p * x) % mod for x in v] for v in sub] + [apply(comp, v) for v in sub]
    ord_m = span_order_exponent(sub, p, B)
    ord_ps = span_order_exponent(ps_sub, p, B)
    return ord_m - ord_ps
