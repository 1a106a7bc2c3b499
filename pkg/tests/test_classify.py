"""Classification routines: coinvariant-dimension case analysis, rank-two
cyclicity, and the solvability oracle checked against an independent
integer-lattice membership computation."""

import random

import pytest

from iwacalc import (DvrSpec, KoikeEmbedding, Lambda2Input, NonSplitInput,
                     PreconditionError, PrecisionError, criterion_solvable,
                     cross_validate, dim_coinvariants_nonsplit,
                     is_cyclic_lambda2, realize_profile)
from iwacalc.classify import HypothesisFlags
from iwacalc.localsnf import snf_mod_ppower, solve_mod


def vp(n, p):
    if n == 0:
        return None
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class TestDimNonsplit:
    def test_m_zero_gives_g(self):
        for g in (1, 2, 3):
            rep = dim_coinvariants_nonsplit(NonSplitInput(g=g, lam=2, m=0))
            assert rep.exact == g and not rep.undetermined

    def test_g1_lambda1(self):
        rep = dim_coinvariants_nonsplit(NonSplitInput(g=1, lam=1, m=2))
        assert rep.exact == 1

    def test_g1_lambda2_containment(self):
        rep = dim_coinvariants_nonsplit(
            NonSplitInput(g=1, lam=3, m=1, lk_in_ktilde=True))
        assert rep.exact == 1

    def test_g1_lambda2_no_containment(self):
        rep = dim_coinvariants_nonsplit(NonSplitInput(g=1, lam=3, m=1))
        assert rep.exact == 2

    def test_g2_bounds_only(self):
        rep = dim_coinvariants_nonsplit(NonSplitInput(g=3, lam=2, m=1))
        assert rep.undetermined and rep.bounds == (2, 4)

    def test_inconsistent_flags(self):
        with pytest.raises(PreconditionError):
            dim_coinvariants_nonsplit(
                NonSplitInput(g=2, lam=0, m=0, lk_in_ktilde=True))

    def test_input_validation(self):
        with pytest.raises(PreconditionError):
            NonSplitInput(g=0, lam=1, m=0)
        with pytest.raises(PreconditionError):
            NonSplitInput(g=1, lam=0, m=1)


class TestLambda2InputValidation:
    def test_k_above_gap(self):
        with pytest.raises(PreconditionError):
            Lambda2Input(p=3, e=1, k=3, ord_alpha=2, ord_beta=2, ord_gap=2,
                         ord_mu21=0, ord_mu22=0, n1=1, n2=1)

    def test_units_rejected(self):
        with pytest.raises(PreconditionError):
            Lambda2Input(p=3, e=1, k=0, ord_alpha=0, ord_beta=2, ord_gap=0,
                         ord_mu21=0, ord_mu22=0, n1=1, n2=1)

    def test_gap_below_min(self):
        with pytest.raises(PreconditionError):
            Lambda2Input(p=3, e=1, k=0, ord_alpha=2, ord_beta=2, ord_gap=1,
                         ord_mu21=0, ord_mu22=0, n1=1, n2=1)

    def test_distinct_orders_force_gap(self):
        with pytest.raises(PreconditionError):
            Lambda2Input(p=3, e=1, k=0, ord_alpha=1, ord_beta=2, ord_gap=2,
                         ord_mu21=0, ord_mu22=0, n1=1, n2=1)

    def test_trivial_pieces_rejected(self):
        with pytest.raises(PreconditionError):
            Lambda2Input(p=3, e=1, k=0, ord_alpha=2, ord_beta=2, ord_gap=2,
                         ord_mu21=0, ord_mu22=0, n1=0, n2=4)


def profile(**kw):
    base = dict(p=3, e=1, ord_mu21=0, ord_mu22=0, n1=2, n2=2)
    base.update(kw)
    return Lambda2Input(**base)


class TestIsCyclicLambda2:
    def test_case_i(self):
        v = is_cyclic_lambda2(profile(k=1, ord_alpha=3, ord_beta=3, ord_gap=3,
                                      n1=3, n2=3))
        assert v.kind == "cyclic" and v.matched_case.startswith("(i)")

    def test_case_ii_and_failure(self):
        good = profile(k=1, ord_alpha=2, ord_beta=2, ord_gap=3, ord_mu21=0)
        v = is_cyclic_lambda2(good)
        assert v.kind == "cyclic" and v.matched_case.startswith("(ii)")
        bad = profile(k=1, ord_alpha=2, ord_beta=2, ord_gap=3, ord_mu21=1)
        assert is_cyclic_lambda2(bad).kind == "not_cyclic"

    def test_gamma_above_min_not_cyclic(self):
        v = is_cyclic_lambda2(profile(k=2, ord_alpha=2, ord_beta=2, ord_gap=5))
        assert v.kind == "not_cyclic"

    def test_case_iii(self):
        v = is_cyclic_lambda2(profile(k=0, ord_alpha=2, ord_beta=2, ord_gap=2,
                                      n1=1, n2=3, ord_mu21=0))
        assert v.kind == "cyclic" and v.matched_case.startswith("(iii)")

    def test_case_iv_and_failure(self):
        good = profile(k=0, ord_alpha=2, ord_beta=3, ord_gap=2,
                       n1=3, n2=2, ord_mu21=0, ord_mu22=1)
        v = is_cyclic_lambda2(good)
        assert v.kind == "cyclic" and v.matched_case.startswith("(iv)")
        bad = profile(k=0, ord_alpha=2, ord_beta=3, ord_gap=2,
                      n1=3, n2=2, ord_mu21=0, ord_mu22=0)
        assert is_cyclic_lambda2(bad).kind == "not_cyclic"

    def test_k0_label_swap_symmetry(self):
        # with k = 0 the two components play symmetric roles, so swapping
        # (ord_alpha, ord_beta) together with (mu21, mu22) preserves the verdict
        for m21, m22, n1, n2 in [(0, 1, 3, 2), (1, 0, 3, 2), (0, 0, 1, 4),
                                 (0, 1, 2, 3), (1, 1, 2, 3)]:
            a = profile(k=0, ord_alpha=2, ord_beta=3, ord_gap=2,
                        n1=n1, n2=n2, ord_mu21=m21, ord_mu22=m22)
            b = profile(k=0, ord_alpha=3, ord_beta=2, ord_gap=2,
                        n1=n1, n2=n2, ord_mu21=m22, ord_mu22=m21)
            assert is_cyclic_lambda2(a).kind == is_cyclic_lambda2(b).kind

    def test_out_of_scope(self):
        v = is_cyclic_lambda2(profile(k=1, ord_alpha=2, ord_beta=2, ord_gap=3,
                                      hypotheses=HypothesisFlags(lambda_is_2=False)))
        assert v.kind == "out_of_scope" and "lambda" in v.reason


# --- independent membership oracle -------------------------------------------


def span_membership_oracle(p, k, alpha, beta, lam):
    """Decide S*x1 in (pi*x2, S*x2)Lambda by integer lattice membership.

    The submodule is the Z_p-span of w_j = (p alpha^j X2a, p beta^j X2b),
    j >= 0, and u_j = (alpha^j X2a, beta^j X2b), j >= 1, inside Z_p^2; the
    target is (alpha X1a, beta X1b).  All data are exact integers, so the
    membership is decided by Smith normal form over Z/p^B with B past the
    largest elementary divisor of the span lattice.
    """
    l11, l12, l21, l22 = lam
    pk = p ** k
    X1a, X1b = l11, l11 + l12 * pk
    X2a, X2b = l21, l21 + l22 * pk
    ta, tb = alpha * X1a, beta * X1b
    if X2a == 0 or X2b == 0:
        # rank-one span: one coordinate is forced to vanish exactly, the
        # other lies in p^(vp(X2)+1) Z_p (alpha, beta are nonunits)
        if X2a == 0 and X2b == 0:
            return ta == 0 and tb == 0
        if X2a == 0:
            return ta == 0 and (tb == 0 or vp(tb, p) >= vp(X2b, p) + 1)
        return tb == 0 and (ta == 0 or vp(ta, p) >= vp(X2a, p) + 1)
    B = vp(p * X2a * X2b * (alpha - beta), p) + 4
    cols = []
    aj, bj = 1, 1
    for j in range(B + 1):
        cols.append((p * aj * X2a, p * bj * X2b))
        if j >= 1:
            cols.append((aj * X2a, bj * X2b))
        aj *= alpha
        bj *= beta
    mat = [[c[0] for c in cols], [c[1] for c in cols]]
    exps, _, _ = snf_mod_ppower(mat, p, B)
    assert max(exps) < B, "span lattice must have finite index below B"
    return solve_mod(mat, [ta, tb], p, B)


def embedding(p, k, alpha, beta, lam, precision):
    spec = DvrSpec(p)
    l11, l12, l21, l22 = lam
    return KoikeEmbedding(
        spec,
        spec.from_int(alpha, precision), spec.from_int(beta, precision), k,
        (spec.from_int(l11, precision), spec.from_int(l12, precision)),
        (spec.from_int(l21, precision), spec.from_int(l22, precision)),
    )


class TestCriterionSolvable:
    def test_orthogonal_second_generator_unsolvable(self):
        # x1 = e1 -> (1, 1), x2 = e2 -> (0, p^k): nothing in (pi, S)x2 has a
        # nonzero first component, so S*x1 = (alpha, beta) cannot be reached
        p, k = 3, 1
        alpha, beta = 3, 3 + 2 * 9
        lam = (1, 0, 0, 1)
        assert span_membership_oracle(p, k, alpha, beta, lam) is False
        assert criterion_solvable(embedding(p, k, alpha, beta, lam, 12)) is False

    def test_precision_guard(self):
        emb = embedding(3, 0, 27, 54, (1, 0, 0, 1), 8)
        with pytest.raises(PrecisionError):
            criterion_solvable(emb)

    @pytest.mark.parametrize("seed", range(60))
    def test_matches_lattice_oracle(self, seed):
        rng = random.Random(900 + seed)
        p = rng.choice([3, 5])
        va, vb = rng.randint(1, 4), rng.randint(1, 4)
        while True:
            alpha = (rng.randrange(1, p) + p * rng.randrange(0, p)) * p ** va
            beta = (rng.randrange(1, p) + p * rng.randrange(0, p)) * p ** vb
            if alpha != beta:
                break
        ogap = vp(beta - alpha, p)
        k = rng.randint(0, min(ogap, 3))
        while True:
            lam = tuple(rng.randrange(-p ** 2, p ** 2 + 1) for _ in range(4))
            det = lam[0] * lam[3] - lam[1] * lam[2]
            if det % p != 0:
                break
        expected = span_membership_oracle(p, k, alpha, beta, lam)
        prec = va + vb + 8
        try:
            got = criterion_solvable(embedding(p, k, alpha, beta, lam, prec))
        except PrecisionError:
            got = criterion_solvable(embedding(p, k, alpha, beta, lam, 2 * prec))
        assert got == expected

    def test_both_answers_occur(self):
        # guards against the comparison above degenerating to one-sided data
        answers = set()
        rng = random.Random(77)
        while len(answers) < 2:
            p = rng.choice([3, 5])
            va, vb = rng.randint(1, 3), rng.randint(1, 3)
            alpha = rng.randrange(1, p) * p ** va
            beta = rng.randrange(1, p) * p ** vb
            if alpha == beta:
                continue
            lam = tuple(rng.randrange(-8, 9) for _ in range(4))
            if (lam[0] * lam[3] - lam[1] * lam[2]) % p == 0:
                continue
            k = rng.randint(0, min(vp(beta - alpha, p), 2))
            answers.add(span_membership_oracle(p, k, alpha, beta, lam))
        assert answers == {True, False}


class TestRealizeProfile:
    @pytest.mark.parametrize("seed", range(20))
    def test_profile_is_accurate(self, seed):
        rng = random.Random(1000 + seed)
        p = rng.choice([3, 5])
        oa = rng.randint(1, 4)
        ob = rng.choice([oa, rng.randint(1, 4)])
        ogap = min(oa, ob) if oa != ob else rng.randint(oa, oa + 2)
        k = rng.randint(0, min(ogap, 2))
        lam_vals = tuple(rng.randint(0, 2) for _ in range(4))
        inst = realize_profile(p, k, oa, ob, ogap, lam_vals, rng, 12)
        if inst is None:
            return
        prof = inst.profile
        assert vp(inst.alpha_int, p) == prof.ord_alpha == oa
        assert vp(inst.beta_int, p) == prof.ord_beta == ob
        assert vp(inst.beta_int - inst.alpha_int, p) == prof.ord_gap == ogap
        assert prof.k == k
        assert vp(inst.lam[2], p) == prof.ord_mu21
        assert vp(inst.lam[2] + inst.lam[3] * p ** k, p) == prof.ord_mu22
        assert prof.n1 + prof.n2 == oa + ob

    def test_unit_determinant_required(self):
        rng = random.Random(0)
        assert realize_profile(3, 0, 2, 2, 2, (1, 1, 1, 1), rng, 12) is None

    def test_incompatible_gap_rejected(self):
        rng = random.Random(0)
        assert realize_profile(3, 0, 1, 2, 3, (0, 0, 0, 0), rng, 12) is None


class TestCrossValidate:
    def test_small_box_agrees(self):
        report = cross_validate(p_values=(3,), ord_max=3, k_max=1,
                                coord_val_max=1, seed=0)
        assert report.realized > 100
        assert report.disagreements == []
        assert report.undetermined == []
        assert report.agreements == report.realized
