"""Finite abelian p-groups: subgroup lattice, adapted generators, and the
kernel/image cardinality identities, checked against brute-force enumeration."""

import itertools
import random

import pytest

from iwacalc import (Endo, FinAbPGroup, PreconditionError, Subgroup,
                     adapted_generators, check_kerim_free_case,
                     check_kerim_identity, check_kerim_nilpotent, image,
                     intersect, kernel, quotient_structure, subgroup_sum)


def brute_span(G: FinAbPGroup, gens):
    """All elements of <gens> by closure (groups are small in these tests)."""
    seen = {G.zero()}
    frontier = [G.zero()]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = G.add(x, g)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return seen


def random_group(rng, max_rank=3, max_exp=3):
    p = rng.choice([3, 5])
    g = rng.randint(1, max_rank)
    exps = tuple(sorted(rng.randint(1, max_exp) for _ in range(g)))
    return FinAbPGroup(p, exps)


def random_subgroup(rng, G):
    n = rng.randint(0, G.g)
    gens = tuple(tuple(rng.randrange(o) for o in G.orders) for _ in range(n))
    return Subgroup(G, gens)


def random_endo(rng, G):
    p = G.p
    A = []
    for j, ej in enumerate(G.exponents):
        row = []
        for i, ei in enumerate(G.exponents):
            need = max(ej - ei, 0)
            row.append((p ** need) * rng.randrange(p ** (G.top_exponent - need)))
        A.append(tuple(row))
    return Endo(G, tuple(A))


class TestGroupBasics:
    def test_rejects_unsorted_exponents(self):
        with pytest.raises(PreconditionError):
            FinAbPGroup(3, (2, 1))

    def test_order(self):
        assert FinAbPGroup(3, (1, 2, 2)).order == 3 ** 5

    def test_element_order_exponent(self):
        G = FinAbPGroup(3, (1, 2))
        assert G.element_order_exponent((0, 0)) == 0
        assert G.element_order_exponent((1, 0)) == 1
        assert G.element_order_exponent((0, 3)) == 1
        assert G.element_order_exponent((1, 1)) == 2

    def test_embed_unembed_roundtrip(self):
        G = FinAbPGroup(5, (1, 3))
        for x in [(0, 0), (4, 124), (2, 30)]:
            assert G.unembed(G.embed(x)) == G.reduce(x)


class TestSubgroupLattice:
    @pytest.mark.parametrize("seed", range(15))
    def test_order_and_membership_vs_bruteforce(self, seed):
        rng = random.Random(seed)
        G = random_group(rng)
        H = random_subgroup(rng, G)
        span = brute_span(G, H.generators)
        assert H.order() == len(span)
        for _ in range(10):
            x = tuple(rng.randrange(o) for o in G.orders)
            assert H.contains(x) == (x in span)

    @pytest.mark.parametrize("seed", range(12))
    def test_sum_and_intersection_vs_bruteforce(self, seed):
        rng = random.Random(100 + seed)
        G = random_group(rng)
        A, B = random_subgroup(rng, G), random_subgroup(rng, G)
        sa, sb = brute_span(G, A.generators), brute_span(G, B.generators)
        assert subgroup_sum(A, B).order() == len(brute_span(G, A.generators + B.generators))
        assert intersect(A, B).order() == len(sa & sb)
        inter = intersect(A, B)
        for x in inter.generators:
            assert x in sa and x in sb

    @pytest.mark.parametrize("seed", range(12))
    def test_kernel_image_vs_bruteforce(self, seed):
        rng = random.Random(200 + seed)
        G = random_group(rng)
        phi = random_endo(rng, G)
        ker_brute = {x for x in G.elements() if phi.apply(x) == G.zero()}
        img_brute = {phi.apply(x) for x in G.elements()}
        assert kernel(phi).order() == len(ker_brute)
        assert image(phi).order() == len(img_brute)
        assert len(ker_brute) * len(img_brute) == G.order
        for x in kernel(phi).generators:
            assert phi.apply(x) == G.zero()

    @pytest.mark.parametrize("seed", range(10))
    def test_quotient_structure_order(self, seed):
        rng = random.Random(300 + seed)
        G = random_group(rng)
        H = random_subgroup(rng, G)
        Q = quotient_structure(G, H)
        assert Q.order * H.order() == G.order


class TestAdaptedGenerators:
    def test_degenerate_when_h_equals_g(self):
        G = FinAbPGroup(3, (1, 2))
        H = Subgroup(G, ((1, 0), (0, 1)))
        out = adapted_generators(G, H)
        assert out.degenerate and out.quotient_exponent == 0
        assert out.generators == G.standard_generators()

    def test_noncyclic_quotient_rejected(self):
        G = FinAbPGroup(3, (1, 1, 1))
        H = Subgroup(G, ((1, 0, 0),))
        with pytest.raises(PreconditionError):
            adapted_generators(G, H)

    @staticmethod
    def verify(G, H, out):
        """Both defining conditions, by brute force."""
        assert len(out.generators) == G.g
        assert brute_span(G, out.generators) == set(G.elements())
        span_h = brute_span(G, H.generators)
        mu = out.quotient_exponent
        for x in out.generators[1:]:
            assert x in span_h
        x1 = out.generators[0]
        # x1 + H generates G/H: p^(mu-1) x1 not in H (and p^mu x1 in H)
        assert G.smul(G.p ** mu, x1) in span_h
        if mu:
            assert G.smul(G.p ** (mu - 1), x1) not in span_h
        # minimal order among elements generating G/H
        best = min(G.element_order_exponent(y) for y in G.elements()
                   if G.smul(G.p ** (mu - 1), y) not in span_h) if mu else 0
        assert G.element_order_exponent(x1) == best

    def test_worked_example(self):
        G = FinAbPGroup(3, (1, 2, 2))
        H = Subgroup(G, ((1, 0, 0), (0, 3, 0), (0, 0, 1)))
        out = adapted_generators(G, H)
        assert not out.degenerate and out.quotient_exponent == 1
        self.verify(G, H, out)
        # the quotient map is projection to the second coordinate mod 3
        assert out.quotient_map == (0, 1, 0)

    @pytest.mark.parametrize("seed", range(20))
    def test_random_cyclic_quotients(self, seed):
        rng = random.Random(400 + seed)
        G = random_group(rng, max_rank=3, max_exp=2)
        # build H as the kernel of a random map onto a cyclic group
        mu = rng.randint(0, max(G.exponents))
        c = tuple(rng.randrange(G.p ** mu) for _ in range(G.g))
        span = [x for x in G.elements()
                if sum(ci * xi for ci, xi in zip(c, x)) % (G.p ** mu) == 0] \
            if mu else list(G.elements())
        H = Subgroup(G, tuple(span))
        out = adapted_generators(G, H)
        if out.degenerate:
            assert H.order() == G.order
            return
        self.verify(G, H, out)


class TestKerImIdentities:
    @pytest.mark.parametrize("seed", range(15))
    def test_identity_holds(self, seed):
        rng = random.Random(500 + seed)
        G = random_group(rng)
        beta, L = self._instance(rng, G)
        lhs, rhs = check_kerim_identity(G, beta, L)
        assert lhs == rhs

    @pytest.mark.parametrize("seed", range(10))
    def test_nilpotent_variant(self, seed):
        rng = random.Random(600 + seed)
        G = random_group(rng)
        p = G.p
        beta = random_endo(rng, G)
        n = rng.randint(2, 4)
        # force beta^n(M) <= L without requiring beta(M) <= L
        bn = beta.power(n)
        L = Subgroup(G, tuple(bn.apply(e) for e in G.standard_generators())
                     + tuple(random_subgroup(rng, G).generators))
        # close L under beta
        for _ in range(G.g * max(G.exponents)):
            extra = tuple(beta.apply(x) for x in L.generators
                          if not L.contains(beta.apply(x)))
            if not extra:
                break
            L = Subgroup(G, L.generators + extra)
        lhs, rhs = check_kerim_nilpotent(G, beta, L, n)
        assert lhs == rhs

    @pytest.mark.parametrize("seed", range(15))
    def test_free_case(self, seed):
        rng = random.Random(700 + seed)
        G = random_group(rng)
        beta, L = self._instance(rng, G)
        ker, img = kernel(beta), image(beta)
        try:
            lhs, rhs = check_kerim_free_case(G, beta, L)
        except PreconditionError:
            # ker(beta) <= beta(M) genuinely fails for this instance
            assert not all(img.contains(x) for x in ker.generators)
            return
        assert lhs == rhs

    def test_unstable_subgroup_rejected(self):
        G = FinAbPGroup(3, (2, 2))
        beta = Endo(G, ((0, 1), (0, 0)))
        L = Subgroup(G, ((0, 1),))  # beta(0,1) = (1,0) not in L
        with pytest.raises(PreconditionError):
            check_kerim_identity(G, beta, L)

    @staticmethod
    def _instance(rng, G):
        """A beta-stable L containing beta(M)."""
        beta = random_endo(rng, G)
        gens = tuple(beta.apply(e) for e in G.standard_generators())
        gens += tuple(random_subgroup(rng, G).generators)
        L = Subgroup(G, gens)
        for _ in range(G.g * max(G.exponents)):
            extra = tuple(beta.apply(x) for x in L.generators
                          if not L.contains(beta.apply(x)))
            if not extra:
                break
            L = Subgroup(G, L.generators + extra)
        return beta, L
