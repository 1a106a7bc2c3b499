"""Smith normal form and linear algebra over Z/p^B.

Z/p^B is a chain ring, so SNF needs only pivoting on the entry of minimal
p-valuation; the diagonal comes out as p^(d_0) | p^(d_1) | ... automatically.
Exponents are capped at B (an exponent of B means the zero residue).

These routines back the subgroup-lattice operations on finite abelian
p-groups and the truncated coinvariant computations.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

__all__ = [
    "snf_mod_ppower",
    "solve_mod",
    "kernel_mod",
    "cokernel_exponents",
    "span_order_exponent",
]

Matrix = List[List[int]]


def _vp_capped(n: int, p: int, B: int) -> int:
    n %= p ** B
    if n == 0:
        return B
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def snf_mod_ppower(mat: Sequence[Sequence[int]], p: int, B: int,
                   with_transforms: bool = False
                   ) -> Tuple[List[int], Optional[Matrix], Optional[Matrix]]:
    """SNF of an integer matrix over Z/p^B.

    Returns (exponents, U, V) with U*A*V = diag(p^exponents) mod p^B,
    exponents nondecreasing, len = min(rows, cols), each in [0, B].
    U, V are None unless with_transforms.
    """
    m = p ** B
    A = [[x % m for x in row] for row in mat]
    n = len(A)
    c = len(A[0]) if n else 0
    U = [[int(i == j) for j in range(n)] for i in range(n)] if with_transforms else None
    V = [[int(i == j) for j in range(c)] for i in range(c)] if with_transforms else None
    exps: List[int] = []
    for t in range(min(n, c)):
        best = (B + 1, -1, -1)
        for i in range(t, n):
            for j in range(t, c):
                v = _vp_capped(A[i][j], p, B)
                if v < best[0]:
                    best = (v, i, j)
        v, bi, bj = best
        if v >= B:
            exps.extend([B] * (min(n, c) - t))
            break
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
        unit = piv // (p ** v)
        uinv = pow(unit, -1, m)
        A[t] = [(x * uinv) % m for x in A[t]]
        if U is not None:
            U[t] = [(x * uinv) % m for x in U[t]]
        pv = p ** v
        for i in range(n):
            if i == t or A[i][t] % m == 0:
                continue
            f = (A[i][t] // pv) % m
            A[i] = [(x - f * y) % m for x, y in zip(A[i], A[t])]
            if U is not None:
                U[i] = [(x - f * y) % m for x, y in zip(U[i], U[t])]
        for j in range(c):
            if j == t or A[t][j] % m == 0:
                continue
            f = (A[t][j] // pv) % m
            for row in A:
                row[j] = (row[j] - f * row[t]) % m
            if V is not None:
                for row in V:
                    row[j] = (row[j] - f * row[t]) % m
        exps.append(v)
    while len(exps) < min(n, c):
        exps.append(B)
    return exps, U, V


def solve_mod(mat: Sequence[Sequence[int]], rhs: Sequence[int], p: int, B: int) -> bool:
    """Feasibility of mat * x = rhs over Z/p^B."""
    exps, U, _ = snf_mod_ppower(mat, p, B, with_transforms=True)
    n = len(mat)
    w = [sum(U[i][j] * rhs[j] for j in range(n)) % (p ** B) for i in range(n)]
    for i in range(n):
        d = exps[i] if i < len(exps) else B
        if _vp_capped(w[i], p, B) < d:
            return False
    return True


def kernel_mod(mat: Sequence[Sequence[int]], p: int, B: int) -> List[List[int]]:
    """Generators of {x : mat * x = 0 over Z/p^B} as column vectors."""
    exps, _, V = snf_mod_ppower(mat, p, B, with_transforms=True)
    c = len(mat[0]) if mat else 0
    m = p ** B
    gens: List[List[int]] = []
    for j in range(c):
        scale = p ** (B - exps[j]) if j < len(exps) else 1
        if j < len(exps) and exps[j] >= B:
            scale = 1
        gen = [(V[i][j] * scale) % m for i in range(c)]
        if any(gen):
            gens.append(gen)
    return gens


def cokernel_exponents(mat: Sequence[Sequence[int]], p: int, B: int) -> List[int]:
    """Exponents d with coker(mat) = (+) Z/p^d over Z/p^B, ascending, d >= 1.

    The caller must include ambient-order relations so the cokernel is a
    quotient of (Z/p^B)^rows with all true invariants dividing p^B.
    """
    exps, _, _ = snf_mod_ppower(mat, p, B)
    n = len(mat)
    full = list(exps) + [B] * (n - len(exps))
    return sorted(d for d in full if d > 0)


def span_order_exponent(gens: Sequence[Sequence[int]], p: int, B: int) -> int:
    """log_p of the order of the span of the given vectors in (Z/p^B)^n."""
    if not gens:
        return 0
    n = len(gens[0])
    mat = [[gens[j][i] for j in range(len(gens))] for i in range(n)]
    exps, _, _ = snf_mod_ppower(mat, p, B)
    total = sum(B - min(v, B) for v in exps)
    return total
