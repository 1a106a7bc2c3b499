"""Finite abelian p-groups with endomorphisms and subgroup-lattice arithmetic.

A group G = (+) Z/p^{e_i} (exponents ascending) carries elements as
coordinate tuples modulo the respective orders.  All lattice operations
reduce to Smith normal form over Z/p^E, E = e_g: membership and kernels via
row-scaled systems, orders via the scaling embedding x_i -> p^(E - e_i) x_i
into (Z/p^E)^g, intersections via the kernel of a block system.

Includes the adapted-generator construction: given H <= G with G/H cyclic,
produce a minimal generating system x_1, ..., x_g with x_2, ..., x_g in H
and x_1 of minimal order among elements whose image generates G/H.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .errors import PreconditionError
from .localsnf import (cokernel_exponents, kernel_mod, snf_mod_ppower,
                       solve_mod, span_order_exponent)

__all__ = [
    "FinAbPGroup",
    "Subgroup",
    "Endo",
    "quotient_structure",
    "kernel",
    "image",
    "subgroup_sum",
    "intersect",
    "adapted_generators",
    "AdaptedGenerators",
    "check_kerim_identity",
    "check_kerim_nilpotent",
    "check_kerim_free_case",
]

Element = Tuple[int, ...]


@dataclass(frozen=True)
class FinAbPGroup:
    """(+) Z/p^{e_i} with e_1 <= ... <= e_g, all e_i >= 1."""

    p: int
    exponents: Tuple[int, ...]

    def __post_init__(self):
        if list(self.exponents) != sorted(self.exponents):
            raise PreconditionError("cyclic exponents must be ascending")
        if any(e < 1 for e in self.exponents):
            raise PreconditionError("cyclic exponents must be >= 1")

    @property
    def g(self) -> int:
        return len(self.exponents)

    @property
    def orders(self) -> Tuple[int, ...]:
        return tuple(self.p ** e for e in self.exponents)

    @property
    def order(self) -> int:
        return self.p ** sum(self.exponents)

    @property
    def top_exponent(self) -> int:
        return max(self.exponents) if self.exponents else 1

    def reduce(self, x: Sequence[int]) -> Element:
        if len(x) != self.g:
            raise PreconditionError("element has wrong number of coordinates")
        return tuple(int(c) % o for c, o in zip(x, self.orders))

    def zero(self) -> Element:
        return (0,) * self.g

    def standard_generators(self) -> List[Element]:
        return [tuple(int(i == j) for j in range(self.g)) for i in range(self.g)]

    def add(self, x: Sequence[int], y: Sequence[int]) -> Element:
        return tuple((a + b) % o for a, b, o in zip(x, y, self.orders))

    def sub(self, x: Sequence[int], y: Sequence[int]) -> Element:
        return tuple((a - b) % o for a, b, o in zip(x, y, self.orders))

    def smul(self, n: int, x: Sequence[int]) -> Element:
        return tuple((n * a) % o for a, o in zip(x, self.orders))

    def element_order_exponent(self, x: Sequence[int]) -> int:
        """k with p^k the order of x."""
        x = self.reduce(x)
        best = 0
        for c, e in zip(x, self.exponents):
            if c == 0:
                continue
            v = 0
            while c % self.p == 0:
                c //= self.p
                v += 1
            best = max(best, e - v)
        return best

    def elements(self):
        """All elements, first coordinate slowest (lexicographic)."""
        for combo in itertools.product(*(range(o) for o in self.orders)):
            yield combo

    # --- embedded (uniform modulus) coordinates ---------------------------

    def embed(self, x: Sequence[int]) -> List[int]:
        """Injective hom into (Z/p^E)^g: x_i -> p^(E - e_i) x_i."""
        E = self.top_exponent
        return [(self.p ** (E - e)) * (c % (self.p ** e))
                for c, e in zip(x, self.exponents)]

    def unembed(self, y: Sequence[int]) -> Element:
        E = self.top_exponent
        out = []
        for c, e in zip(y, self.exponents):
            s = self.p ** (E - e)
            c = c % self.p ** E
            if c % s:
                raise PreconditionError("vector not in the embedded image")
            out.append((c // s) % (self.p ** e))
        return tuple(out)


@dataclass(frozen=True)
class Subgroup:
    parent: FinAbPGroup
    generators: Tuple[Element, ...]

    def __post_init__(self):
        object.__setattr__(self, "generators",
                           tuple(self.parent.reduce(x) for x in self.generators))

    def order(self) -> int:
        G = self.parent
        if not self.generators:
            return 1
        emb = [G.embed(x) for x in self.generators]
        return G.p ** span_order_exponent(emb, G.p, G.top_exponent)

    def contains(self, x: Sequence[int]) -> bool:
        G = self.parent
        x = G.reduce(x)
        if not self.generators:
            return x == G.zero()
        E = G.top_exponent
        mat = [[G.embed(gen)[i] for gen in self.generators] for i in range(G.g)]
        return solve_mod(mat, G.embed(x), G.p, E)

    def contains_subgroup(self, other: "Subgroup") -> bool:
        return all(self.contains(x) for x in other.generators)


@dataclass(frozen=True)
class Endo:
    """x -> A x on coordinates; A[j][i] must vanish mod p^(e_j - e_i) for e_j > e_i."""

    parent: FinAbPGroup
    matrix: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        G = self.parent
        A = tuple(tuple(int(v) for v in row) for row in self.matrix)
        if len(A) != G.g or any(len(r) != G.g for r in A):
            raise PreconditionError("endomorphism matrix has wrong shape")
        object.__setattr__(self, "matrix", A)
        for j, ej in enumerate(G.exponents):
            for i, ei in enumerate(G.exponents):
                need = max(ej - ei, 0)
                if A[j][i] % (G.p ** need):
                    raise PreconditionError(
                        f"ill-defined endomorphism: entry ({j},{i}) not divisible "
                        f"by p^{need}"
                    )

    def apply(self, x: Sequence[int]) -> Element:
        G = self.parent
        x = G.reduce(x)
        return G.reduce([sum(row[i] * x[i] for i in range(G.g)) for row in self.matrix])

    def compose(self, other: "Endo") -> "Endo":
        G = self.parent
        A, B = self.matrix, other.matrix
        C = [[sum(A[j][k] * B[k][i] for k in range(G.g)) for i in range(G.g)]
             for j in range(G.g)]
        return Endo(G, tuple(tuple(r) for r in C))

    def power(self, n: int) -> "Endo":
        G = self.parent
        out = Endo(G, tuple(tuple(int(i == j) for j in range(G.g)) for i in range(G.g)))
        for _ in range(n):
            out = out.compose(self)
        return out


def _scaled_condition_matrix(phi: Endo) -> List[List[int]]:
    """Rows scaled so that 'phi(x) = 0 in G' becomes a system over Z/p^E."""
    G = phi.parent
    E = G.top_exponent
    return [[(G.p ** (E - ej)) * phi.matrix[j][i] for i in range(G.g)]
            for j, ej in enumerate(G.exponents)]


def kernel(phi: Endo) -> Subgroup:
    G = phi.parent
    gens = kernel_mod(_scaled_condition_matrix(phi), G.p, G.top_exponent)
    return Subgroup(G, tuple(G.reduce(v) for v in gens))


def image(phi: Endo) -> Subgroup:
    G = phi.parent
    return Subgroup(G, tuple(phi.apply(e) for e in G.standard_generators()))


def subgroup_sum(A: Subgroup, B: Subgroup) -> Subgroup:
    if A.parent != B.parent:
        raise PreconditionError("subgroups of different groups")
    return Subgroup(A.parent, A.generators + B.generators)


def intersect(A: Subgroup, B: Subgroup) -> Subgroup:
    if A.parent != B.parent:
        raise PreconditionError("subgroups of different groups")
    G = A.parent
    if not A.generators or not B.generators:
        return Subgroup(G, ())
    E = G.top_exponent
    ea = [G.embed(x) for x in A.generators]
    eb = [G.embed(x) for x in B.generators]
    # solve M_A a - M_B b = 0; intersection elements are M_A a
    mat = [[ea[j][i] for j in range(len(ea))] + [-eb[j][i] for j in range(len(eb))]
           for i in range(G.g)]
    gens = []
    m = G.p ** E
    for sol in kernel_mod(mat, G.p, E):
        a = sol[: len(ea)]
        vec = [sum(ea[j][i] * a[j] for j in range(len(ea))) % m for i in range(G.g)]
        if any(vec):
            gens.append(G.unembed(vec))
    return Subgroup(G, tuple(gens))


def quotient_structure(G: FinAbPGroup, H: Subgroup) -> FinAbPGroup:
    """Cyclic decomposition of G/H."""
    if H.parent != G:
        raise PreconditionError("subgroup of a different group")
    E = G.top_exponent
    cols = [list(x) for x in H.generators]
    for i, e in enumerate(G.exponents):
        cols.append([(G.p ** e) if r == i else 0 for r in range(G.g)])
    mat = [[col[i] for col in cols] for i in range(G.g)]
    exps = cokernel_exponents(mat, G.p, E)
    return FinAbPGroup(G.p, tuple(sorted(exps)))


@dataclass
class AdaptedGenerators:
    generators: List[Element]
    degenerate: bool          # H = G: minimality clause is vacuous
    quotient_exponent: int    # G/H = Z/p^quotient_exponent
    quotient_map: Optional[Tuple[int, ...]]  # phi(x) = sum c_i x_i mod p^mu


def _cyclic_quotient_map(G: FinAbPGroup, H: Subgroup) -> Tuple[int, Tuple[int, ...]]:
    """(mu, c) with phi(x) = c . x mod p^mu a surjection G -> Z/p^mu, ker = H.

    Raises PreconditionError when G/H is not cyclic; mu = 0 when H = G.
    """
    E = G.top_exponent
    cols: List[List[int]] = [list(x) for x in H.generators]
    for i, e in enumerate(G.exponents):
        cols.append([(G.p ** e) if r == i else 0 for r in range(G.g)])
    mat = [[col[i] for col in cols] for i in range(G.g)]
    exps, U, _ = snf_mod_ppower(mat, G.p, E, with_transforms=True)
    full = list(exps) + [E] * (G.g - len(exps))
    nontrivial = [i for i, d in enumerate(full) if d > 0]
    if len(nontrivial) > 1:
        raise PreconditionError("G/H is not cyclic")
    if not nontrivial:
        return 0, tuple(0 for _ in range(G.g))
    i0 = nontrivial[0]
    mu = full[i0]
    c = tuple(U[i0][i] % (G.p ** mu) for i in range(G.g))
    return mu, c


def adapted_generators(G: FinAbPGroup, H: Subgroup,
                       minimize_x1: bool = True) -> AdaptedGenerators:
    """Minimal generating system adapted to a cyclic quotient G/H.

    Output x_1, ..., x_g: the images generate G/p (minimal system), the image
    of x_1 generates G/H with x_1 of minimal order among all such elements
    (lexicographically least coordinates as tie-break), and x_2, ..., x_g lie
    in H.  When H = G the minimality clause degenerates: the standard
    generators are returned with the degenerate flag set.
    """
    if H.parent != G:
        raise PreconditionError("subgroup of a different group")
    p = G.p
    mu, c = _cyclic_quotient_map(G, H)
    std = G.standard_generators()
    if mu == 0:
        return AdaptedGenerators(list(std), True, 0, None)

    def vp_mod(n: int, cap: int) -> int:
        n %= p ** cap
        if n == 0:
            return cap
        v = 0
        while n % p == 0:
            n //= p
            v += 1
        return v

    # order exponent of phi(e_i) in Z/p^mu
    mvals = [mu - vp_mod(ci, mu) for ci in c]
    idx = sorted(range(G.g), key=lambda i: (-mvals[i], G.exponents[i], i))
    # group by common image order, correct within groups, then across groups
    groups: List[List[int]] = []
    for i in idx:
        if groups and mvals[groups[-1][0]] == mvals[i]:
            groups[-1].append(i)
        else:
            groups.append([i])

    def unit_part(n: int, cap: int) -> int:
        v = vp_mod(n, cap)
        return (n % p ** cap) // p ** v if v < cap else 1

    result_slots: List[Element] = [None] * G.g
    pos = 0
    reps: List[int] = []
    corrections: List[Element] = []
    for grp in groups:
        rep = grp[0]
        reps.append(rep)
        m = mvals[rep]
        for j in grp[1:]:
            if m == 0:
                # phi(e_j) = 0 already: e_j lies in H, keep it
                corrections.append(std[j])
                continue
            u1 = unit_part(c[rep], mu)
            u2 = unit_part(c[j], mu)
            a = (u1 * pow(u2, -1, p ** m)) % (p ** m)
            corrections.append(G.sub(std[rep], G.smul(a, std[j])))
    # across groups: phi(x_rep_t) = a_t phi(x_rep_1), p | a_t
    x1_idx = reps[0]
    m1 = mvals[x1_idx]
    across: List[Element] = []
    for rep in reps[1:]:
        mt = mvals[rep]
        if mt == 0:
            a = 0
        else:
            u1 = unit_part(c[x1_idx], mu)
            ut = unit_part(c[rep], mu)
            a = (p ** (m1 - mt)) * ((ut * pow(u1, -1, p ** mt)) % (p ** mt))
        across.append(G.sub(std[rep], G.smul(a, std[x1_idx])))
    gens = [std[x1_idx]] + across + corrections

    if minimize_x1:
        gens[0] = _minimal_onto_element(G, mu, c)
    out = AdaptedGenerators(gens, False, mu, c)
    _verify_adapted(G, H, out)
    return out


def _minimal_onto_element(G: FinAbPGroup, mu: int, c: Tuple[int, ...]) -> Element:
    """Element of minimal order (then lex-least) whose phi-image generates Z/p^mu."""
    p = G.p
    try:
        import numpy as np
    except ImportError:  # pragma: no cover
        np = None
    if np is not None and G.order <= 2_000_000:
        grids = np.meshgrid(*(np.arange(o) for o in G.orders), indexing="ij")
        coords = np.stack([g.ravel() for g in grids], axis=1)
        phi = np.zeros(coords.shape[0], dtype=np.int64)
        for i, ci in enumerate(c):
            phi = (phi + ci * coords[:, i]) % (p ** mu)
        onto = (phi % p) != 0
        ordexp = np.zeros(coords.shape[0], dtype=np.int64)
        for i, e in enumerate(G.exponents):
            col = coords[:, i].copy()
            contrib = np.zeros(col.shape, dtype=np.int64)
            mask = col != 0
            vv = np.zeros(col.shape, dtype=np.int64)
            work = col.copy()
            for _ in range(e):
                divisible = mask & (work % p == 0) & (work != 0)
                vv[divisible] += 1
                work = np.where(divisible, work // p, work)
            contrib[mask] = e - vv[mask]
            ordexp = np.maximum(ordexp, contrib)
        big = np.iinfo(np.int64).max
        key = np.where(onto, ordexp, big)
        best_ord = key.min()
        cand = np.nonzero(key == best_ord)[0]
        return tuple(int(v) for v in coords[cand[0]])
    best = None
    for x in G.elements():
        phi = sum(ci * xi for ci, xi in zip(c, x)) % (p ** mu)
        if phi % p == 0:
            continue
        o = G.element_order_exponent(x)
        k = (o, x)
        if best is None or k < best:
            best = k
    return best[1]


def _verify_adapted(G: FinAbPGroup, H: Subgroup, out: AdaptedGenerators):
    """Internal sanity: minimal system, tail in H."""
    p = G.p
    # rank mod p of the generator images in G/pG
    rows = [[v % p for v in x] for x in out.generators]
    rank = 0
    for col in range(G.g):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        for r in range(len(rows)):
            if r != rank and rows[r][col] % p:
                f = (rows[r][col] * inv) % p
                rows[r] = [(a - f * b) % p for a, b in zip(rows[r], rows[rank])]
        rank += 1
    if rank != G.g:
        raise AssertionError("adapted generators do not form a minimal system")
    for x in out.generators[1:]:
        if not H.contains(x):
            raise AssertionError("adapted generator x_i (i >= 2) escapes H")


# --- kernel/image cardinality identities ----------------------------------


def _validate_stable(beta: Endo, L: Subgroup):
    for x in L.generators:
        if not L.contains(beta.apply(x)):
            raise PreconditionError("L is not beta-stable")


def _both_sides(M: FinAbPGroup, beta: Endo, L: Subgroup) -> Tuple[int, int]:
    ker = kernel(beta)
    img = image(beta)
    lhs = M.order // subgroup_sum(ker, img).order()
    lker = intersect(ker, L)
    limg = Subgroup(M, tuple(beta.apply(x) for x in L.generators))
    left = L.order() // subgroup_sum(lker, limg).order()
    right_num = intersect(ker, img).order()
    right_den = intersect(lker, limg).order()
    rhs = left * (right_num // right_den)
    return lhs, rhs


def check_kerim_identity(M: FinAbPGroup, beta: Endo, L: Subgroup) -> Tuple[int, int]:
    """Both sides of the kernel/image cardinality identity.

    Preconditions: L beta-stable and beta(M) <= L (the induced map on M/L
    vanishes).  Returns (lhs, rhs); equality is the tested property.
    """
    _validate_stable(beta, L)
    for e in M.standard_generators():
        if not L.contains(beta.apply(e)):
            raise PreconditionError("beta(M) is not contained in L")
    return _both_sides(M, beta, L)


def check_kerim_nilpotent(M: FinAbPGroup, beta: Endo, L: Subgroup, n: int
                          ) -> Tuple[int, int]:
    """Same identity under the weaker hypothesis beta^n(M) <= L."""
    _validate_stable(beta, L)
    bn = beta.power(n)
    for e in M.standard_generators():
        if not L.contains(bn.apply(e)):
            raise PreconditionError(f"beta^{n}(M) is not contained in L")
    return _both_sides(M, beta, L)


def check_kerim_free_case(M: FinAbPGroup, beta: Endo, L: Subgroup) -> Tuple[int, int]:
    """lhs = #M/(ker + im), rhs = #L/beta(L), under ker(beta) <= beta(M).

    The containment is the finite-group specialization of the torsion-free
    hypothesis; its failure is a hypothesis failure, not a bug.
    """
    _validate_stable(beta, L)
    for e in M.standard_generators():
        if not L.contains(beta.apply(e)):
            raise PreconditionError("beta(M) is not contained in L")
    ker = kernel(beta)
    img = image(beta)
    for x in ker.generators:
        if not img.contains(x):
            raise PreconditionError("hypothesis ker(beta) <= beta(M) fails")
    lhs = M.order // subgroup_sum(ker, img).order()
    limg = Subgroup(M, tuple(beta.apply(x) for x in L.generators))
    rhs = L.order() // limg.order()
    return lhs, rhs
