"""Decision procedures for coinvariant dimensions and rank-two cyclicity.

Two independent routes are kept deliberately separate:

* is_cyclic_lambda2 applies the valuation-profile case analysis directly;
* criterion_solvable decides, from concrete ring elements, whether the
  defining membership S*x_1 in (pi, S)*x_2*Lambda holds inside
  Lambda/(S - alpha) (+) Lambda/(S - beta).

The membership reduces to an O-linear feasibility problem: writing the sought
pair as pi*f(S)*x_2 + S*g(S)*x_2 = S*x_1 componentwise, only the evaluations
f(alpha), f(beta), g(alpha), g(beta) matter, and the evaluation pairs
(f(alpha), f(beta)) of f in Lambda range exactly over
{(a, b) : b = a mod (beta - alpha)O} (take f = a + c(S - alpha)).  With
b = a + (beta - alpha)s, d = c + (beta - alpha)t this is a 2x4 linear system
over O in (a, s, c, t), decided by Smith normal form over the DVR.

cross_validate enumerates valuation profiles, realizes each with concrete
integers, and reports any disagreement between the two routes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .dvr import DvrElem, DvrSpec
from .errors import PreconditionError, PrecisionError
from .lambdamod import KoikeEmbedding, snf_dvr

__all__ = [
    "NonSplitInput",
    "DimensionReport",
    "dim_coinvariants_nonsplit",
    "Lambda2Input",
    "Verdict",
    "is_cyclic_lambda2",
    "criterion_solvable",
    "realize_profile",
    "cross_validate",
    "CrossValidateReport",
]


# --- coinvariant-dimension classification -----------------------------------


@dataclass(frozen=True)
class NonSplitInput:
    """User-supplied invariants: g = dim A_K/p, the lambda invariant, m with
    p^m the order of the cyclic intermediate quotient, and the containment
    flag for the one-variable splitting field."""

    g: int
    lam: int
    m: int
    lk_in_ktilde: bool = False

    def __post_init__(self):
        if self.g < 1 or self.lam < 0 or self.m < 0:
            raise PreconditionError("require g >= 1, lambda >= 0, m >= 0")
        if self.m > 0 and self.lam < 1:
            raise PreconditionError(
                "m > 0 requires a nontrivial one-variable module (lambda >= 1)"
            )


@dataclass(frozen=True)
class DimensionReport:
    exact: Optional[int]
    bounds: Optional[Tuple[int, int]]
    case: str

    @property
    def undetermined(self) -> bool:
        return self.exact is None


def dim_coinvariants_nonsplit(inp: NonSplitInput) -> DimensionReport:
    """dim_Fp of the full coinvariant quotient, by case analysis.

    m = 0 -> g; m > 0, g = 1, lambda = 1 -> 1; m > 0, g = 1, lambda >= 2 ->
    1 if the containment flag holds else 2; m > 0, g >= 2 -> only the bounds
    [g - 1, g + 1] are known.
    """
    if inp.m == 0:
        if inp.lk_in_ktilde and inp.g > 0 and inp.lam == 0:
            raise PreconditionError(
                "inconsistent flags: containment asserted with m = 0 and a "
                "trivial one-variable module"
            )
        return DimensionReport(inp.g, None, "trivial intersection: dimension g")
    if inp.g == 1:
        if inp.lam == 1:
            return DimensionReport(1, None, "g=1, lambda=1")
        if inp.lk_in_ktilde:
            return DimensionReport(1, None, "g=1, lambda>=2, containment holds")
        return DimensionReport(2, None, "g=1, lambda>=2, containment fails")
    return DimensionReport(None, (inp.g - 1, inp.g + 1),
                           "g>=2 with m>0: bounds only")


# --- rank-two cyclicity -------------------------------------------------------


@dataclass(frozen=True)
class HypothesisFlags:
    """Caller-asserted side conditions, echoed into reports, never verified."""

    g_is_2: bool = True
    direct_summand: bool = True
    lambda_is_2: bool = True
    alpha_ne_beta: bool = True

    def violated(self) -> Optional[str]:
        if not self.g_is_2:
            return "g = 2 fails"
        if not self.direct_summand:
            return "direct-summand condition fails"
        if not self.lambda_is_2:
            return "lambda = 2 fails"
        if not self.alpha_ne_beta:
            return "alpha != beta fails"
        return None


@dataclass(frozen=True)
class Lambda2Input:
    """Valuation profile of a rank-two instance (all in pi-units).

    ord_mu21/ord_mu22 = None means the coordinate vanishes beyond precision
    (in particular its valuation is positive).
    """

    p: int
    e: int
    k: int
    ord_alpha: int
    ord_beta: int
    ord_gap: int
    ord_mu21: Optional[int]
    ord_mu22: Optional[int]
    n1: int
    n2: int
    hypotheses: HypothesisFlags = field(default_factory=HypothesisFlags)

    def __post_init__(self):
        if self.k < 0 or self.k > self.ord_gap:
            raise PreconditionError(f"require 0 <= k <= ord(beta-alpha) = {self.ord_gap}")
        if self.ord_alpha < 1 or self.ord_beta < 1:
            raise PreconditionError("alpha, beta must be nonunits (ord >= 1)")
        if self.ord_gap < min(self.ord_alpha, self.ord_beta):
            raise PreconditionError(
                "ord(beta-alpha) below min(ord alpha, ord beta) is impossible"
            )
        if self.ord_alpha != self.ord_beta and \
                self.ord_gap != min(self.ord_alpha, self.ord_beta):
            raise PreconditionError(
                "distinct ord(alpha) != ord(beta) force ord(beta-alpha) = min"
            )
        if self.n1 < 1 or self.n2 < 1:
            raise PreconditionError("n1, n2 >= 1 (both cyclic pieces nontrivial)")


@dataclass(frozen=True)
class Verdict:
    kind: str  # "cyclic" | "not_cyclic" | "out_of_scope" | "undetermined"
    matched_case: str = ""
    reason: str = ""
    bounds: Optional[Tuple[int, int]] = None

    @classmethod
    def cyclic(cls, case: str) -> "Verdict":
        return cls("cyclic", matched_case=case)

    @classmethod
    def not_cyclic(cls, case: str) -> "Verdict":
        return cls("not_cyclic", matched_case=case)

    @classmethod
    def out_of_scope(cls, reason: str) -> "Verdict":
        return cls("out_of_scope", reason=reason)


def is_cyclic_lambda2(inp: Lambda2Input) -> Verdict:
    """Cyclicity of the rank-two module from its valuation profile.

    Cases, with l = min(ord alpha, ord beta) and ord(gamma) = ord_gap - k:
    (i) k > 0 and ord(gamma) < l -> cyclic; (ii) k > 0 and ord(gamma) = l and
    ord_mu21 = 0 -> cyclic; (iii) k = 0, ord_gap = l, n1 < n2, ord_mu21 = 0 ->
    cyclic; (iv) k = 0, ord_gap = l, n1 >= n2, ord_mu21 = 0 and ord_mu22 =
    ord_beta - ord_alpha -> cyclic; ord(gamma) > l -> not cyclic; everything
    else -> not cyclic.
    """
    bad = inp.hypotheses.violated()
    if bad is not None:
        return Verdict.out_of_scope(bad)
    oa, ob = inp.ord_alpha, inp.ord_beta
    m21, m22 = inp.ord_mu21, inp.ord_mu22
    n1, n2 = inp.n1, inp.n2
    if inp.k == 0 and oa > ob:
        # the k = 0 standard basis is label-symmetric: normalize ord a <= ord b
        oa, ob = ob, oa
        m21, m22 = m22, m21
    l = min(oa, ob)
    ord_gamma = inp.ord_gap - inp.k
    if ord_gamma > l:
        return Verdict.not_cyclic("ord(gamma) > min(ord alpha, ord beta)")
    if inp.k > 0:
        if ord_gamma < l:
            return Verdict.cyclic("(i) k > 0 and ord(gamma) < min")
        if m21 == 0:
            return Verdict.cyclic("(ii) k > 0, ord(gamma) = min, mu21 a unit")
        return Verdict.not_cyclic("k > 0, ord(gamma) = min, mu21 not a unit")
    # k = 0, ord_gamma = ord_gap = l here
    if n1 < n2:
        if m21 == 0:
            return Verdict.cyclic("(iii) k = 0, ord(gap) = min, n1 < n2, mu21 a unit")
        return Verdict.not_cyclic("k = 0, n1 < n2, mu21 not a unit")
    if m21 == 0 and m22 is not None and m22 == ob - oa:
        return Verdict.cyclic(
            "(iv) k = 0, ord(gap) = min, n1 >= n2, mu21 a unit, "
            "ord(mu22) = ord(beta) - ord(alpha)"
        )
    return Verdict.not_cyclic("k = 0, n1 >= n2, coordinate conditions fail")


def criterion_solvable(emb: KoikeEmbedding, precision_slack: int = 4) -> bool:
    """Oracle: does S*x_1 lie in (pi*x_2, S*x_2)Lambda in the split components?

    Reduces to feasibility of a 2x4 O-linear system (module docstring).
    Raises PrecisionError when feasibility is undetermined at the working
    precision; precision must exceed every valuation in play by the slack.
    """
    spec = emb.spec
    alpha, beta = emb.alpha, emb.beta
    gap = beta - alpha
    pi = spec.uniformizer(min(alpha.prec, beta.prec))
    x1a, x1b = emb.component_images(emb.x1)
    x2a, x2b = emb.component_images(emb.x2)
    va, vb = alpha.valuation(), beta.valuation()
    if va is None or vb is None:
        raise PrecisionError("ord(alpha) or ord(beta) undetermined")
    prec = min(alpha.prec, beta.prec)
    if va + vb + precision_slack > prec:
        raise PrecisionError(
            f"precision {prec} too small for valuations {va}+{vb} plus slack"
        )
    zero = spec.zero(prec)
    A = [
        [x2a * pi, zero, x2a * alpha, zero],
        [x2b * pi, x2b * pi * gap, x2b * beta, x2b * beta * gap],
    ]
    rhs = [alpha * x1a, beta * x1b]
    diag, U, _ = snf_dvr(A, with_transforms=True)
    w = [U[0][0] * rhs[0] + U[0][1] * rhs[1],
         U[1][0] * rhs[0] + U[1][1] * rhs[1]]
    for d, wi in zip(diag, w):
        if d.is_exact_zero:
            dv = None
        else:
            dv = d.valuation()
            if dv is None:
                raise PrecisionError("elementary divisor undetermined at precision")
        if wi.is_exact_zero:
            continue
        wv = wi.valuation()
        if dv is None:
            # zero divisor row: need w_i = 0
            if wv is not None:
                return False
            raise PrecisionError("feasibility undetermined: rhs zero at precision")
        if wv is None:
            # w_i vanishes to at least its precision >= dv (slack-checked)
            if wi.prec >= dv:
                continue
            raise PrecisionError("feasibility undetermined at precision")
        if wv < dv:
            return False
    return True


# --- profile realization and cross-validation --------------------------------


@dataclass(frozen=True)
class RealizedInstance:
    """Concrete integer data realizing a valuation profile over Z_p."""

    p: int
    k: int
    alpha_int: int
    beta_int: int
    lam: Tuple[int, int, int, int]  # lam11, lam12, lam21, lam22
    profile: Lambda2Input

    def embedding(self, precision: int) -> KoikeEmbedding:
        spec = DvrSpec(self.p)
        l11, l12, l21, l22 = self.lam
        return KoikeEmbedding(
            spec,
            spec.from_int(self.alpha_int, precision),
            spec.from_int(self.beta_int, precision),
            self.k,
            (spec.from_int(l11, precision), spec.from_int(l12, precision)),
            (spec.from_int(l21, precision), spec.from_int(l22, precision)),
        )


def _vp(n: int, p: int) -> Optional[int]:
    if n == 0:
        return None
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _order_exponent(p: int, alpha: int, beta: int, gamma: int,
                    v1: int, v2: int) -> int:
    """pi-power order of v1*e1 + v2*e2 in O^2 / [[alpha,0],[gamma,beta]]."""
    oa, ob = _vp(alpha, p), _vp(beta, p)
    t1 = _vp(v1, p)
    o1 = (oa - t1) if t1 is not None else 0
    t2 = _vp(alpha * v2 - gamma * v1, p)
    o2 = (oa + ob - t2) if t2 is not None else 0
    return max(0, o1, o2)


def realize_profile(p: int, k: int, oa: int, ob: int, ogap: int,
                    lam_vals: Tuple[int, int, int, int], rng,
                    precision: int) -> Optional[RealizedInstance]:
    """Concrete integers hitting the valuation profile, or None if unrealizable.

    alpha = u*p^oa, beta = alpha + v*p^ogap with pseudo-random units u, v;
    coordinates lam_ij = w_ij * p^(lam_vals_ij) with unit determinant.
    Instances violating the direct-sum order identity N1 + N2 = oa + ob are
    unrealizable for the classifier and skipped.
    """
    if oa != ob and ogap != min(oa, ob):
        return None
    if k > ogap:
        return None
    if min(lam_vals[0] + lam_vals[3], lam_vals[1] + lam_vals[2]) != 0:
        return None  # determinant cannot be a unit
    for _ in range(40):
        u = rng.randrange(1, p) + p * rng.randrange(0, p)
        v = rng.randrange(1, p) + p * rng.randrange(0, p)
        alpha = u * p ** oa
        beta = alpha + v * p ** ogap
        if _vp(beta, p) != ob:
            continue
        ws = [rng.randrange(1, p) + p * rng.randrange(0, p) for _ in range(4)]
        lam = tuple(w * p ** lv for w, lv in zip(ws, lam_vals))
        det = lam[0] * lam[3] - lam[1] * lam[2]
        if det % p == 0:
            continue
        gamma = (beta - alpha) // p ** k
        mu21 = lam[2]
        mu22 = lam[2] + lam[3] * p ** k
        n1 = _order_exponent(p, alpha, beta, gamma, lam[0], lam[1])
        n2 = _order_exponent(p, alpha, beta, gamma, lam[2], lam[3])
        if n1 + n2 != oa + ob or n1 < 1 or n2 < 1:
            continue
        om21 = _vp(mu21, p)
        om22 = _vp(mu22, p)
        profile = Lambda2Input(
            p=p, e=1, k=k, ord_alpha=oa, ord_beta=ob, ord_gap=ogap,
            ord_mu21=om21, ord_mu22=om22, n1=n1, n2=n2,
        )
        return RealizedInstance(p, k, alpha, beta, lam, profile)
    return None


def _lam_val_tuples(max_val: int) -> List[Tuple[int, int, int, int]]:
    out = []
    for a in range(max_val + 1):
        for b in range(max_val + 1):
            for c in range(max_val + 1):
                for d in range(max_val + 1):
                    if min(a + d, b + c) == 0:
                        out.append((a, b, c, d))
    return out


@dataclass
class CrossValidateReport:
    profiles_examined: int = 0
    realized: int = 0
    skipped_unrealizable: int = 0
    agreements: int = 0
    disagreements: List[Dict] = field(default_factory=list)
    undetermined: List[Dict] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            "profiles_examined": self.profiles_examined,
            "realized": self.realized,
            "skipped_unrealizable": self.skipped_unrealizable,
            "agreements": self.agreements,
            "disagreements": self.disagreements,
            "undetermined": self.undetermined,
        }


def _profile_space(ord_max: int, k_max: int, coord_val_max: int):
    for oa in range(1, ord_max + 1):
        for ob in range(1, ord_max + 1):
            l = min(oa, ob)
            gaps = [l] if oa != ob else list(range(l, min(l + 3, ord_max + 2)))
            for ogap in gaps:
                for k in range(0, min(k_max, ogap) + 1):
                    for lam_vals in _lam_val_tuples(coord_val_max):
                        yield (oa, ob, ogap, k, lam_vals)


def _evaluate_instance(inst: RealizedInstance, precision: int) -> Tuple[str, bool]:
    """(verdict kind, oracle answer); retries once at doubled precision."""
    verdict = is_cyclic_lambda2(inst.profile)
    try:
        oracle = criterion_solvable(inst.embedding(precision))
    except PrecisionError:
        oracle = criterion_solvable(inst.embedding(2 * precision))
    return verdict.kind, oracle


def _run_chunk(args) -> CrossValidateReport:
    p, chunk, seed, precision = args
    import random
    report = CrossValidateReport()
    for oa, ob, ogap, k, lam_vals in chunk:
        report.profiles_examined += 1
        rng = random.Random((seed, p, oa, ob, ogap, k, lam_vals).__hash__())
        inst = realize_profile(p, k, oa, ob, ogap, lam_vals, rng, precision)
        if inst is None:
            report.skipped_unrealizable += 1
            continue
        report.realized += 1
        try:
            kind, oracle = _evaluate_instance(inst, precision)
        except PrecisionError:
            report.undetermined.append({
                "profile": _profile_dict(inst.profile), "note": "oracle undetermined",
            })
            continue
        agree = (kind == "cyclic") == oracle
        if agree:
            report.agreements += 1
        else:
            report.disagreements.append({
                "profile": _profile_dict(inst.profile),
                "verdict": kind,
                "oracle_solvable": oracle,
                "instance": {"alpha": inst.alpha_int, "beta": inst.beta_int,
                             "k": inst.k, "lam": list(inst.lam)},
            })
    return report


def _profile_dict(prof: Lambda2Input) -> Dict:
    return {
        "p": prof.p, "e": prof.e, "k": prof.k,
        "ord_alpha": prof.ord_alpha, "ord_beta": prof.ord_beta,
        "ord_gap": prof.ord_gap, "ord_mu21": prof.ord_mu21,
        "ord_mu22": prof.ord_mu22, "n1": prof.n1, "n2": prof.n2,
    }


def cross_validate(p_values: Sequence[int] = (3, 5), ord_max: int = 4,
                   k_max: int = 2, coord_val_max: int = 2, seed: int = 0,
                   precision: Optional[int] = None,
                   workers: int = 1) -> CrossValidateReport:
    """Run is_cyclic_lambda2 against criterion_solvable over a profile box.

    Deterministic given (ranges, seed, precision).  Independent profiles may
    be distributed across processes with workers > 1.
    """
    total = CrossValidateReport()
    jobs = []
    for p in p_values:
        prec = precision if precision is not None else 12
        space = list(_profile_space(ord_max, k_max, coord_val_max))
        if workers > 1:
            n = workers * 4
            chunks = [space[i::n] for i in range(n)]
            jobs.extend((p, chunk, seed, prec) for chunk in chunks if chunk)
        else:
            jobs.append((p, space, seed, prec))
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as ex:
            reports = list(ex.map(_run_chunk, jobs))
    else:
        reports = [_run_chunk(j) for j in jobs]
    for r in reports:
        total.profiles_examined += r.profiles_examined
        total.realized += r.realized
        total.skipped_unrealizable += r.skipped_unrealizable
        total.agreements += r.agreements
        total.disagreements.extend(r.disagreements)
        total.undetermined.extend(r.undetermined)
    total.disagreements.sort(key=lambda d: sorted(d["profile"].items(), key=str).__repr__())
    return total
