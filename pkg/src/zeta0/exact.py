"""Integer normal forms, finite abelian groups and small finite fields.

Everything here works on plain Python ints (and Fractions where a matrix
inverse is needed).  Matrices are lists of row lists.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    if not A:
        return []
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(cols)]
            for i in range(len(A))]


def det(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def inverse_unimodular(M: Sequence[Sequence[int]]) -> Matrix:
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for c in range(n):
        p = next(r for r in range(c, n) if A[r][c] != 0)
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    out = []
    for row in A:
        vals = row[n:]
        if any(v.denominator != 1 for v in vals):
            raise ValueError("matrix is not unimodular")
        out.append([int(v) for v in vals])
    return out


def hnf(M: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row Hermite normal form.  Returns (H, U) with H = U*M.

    Pivots are positive, entries above a pivot lie in [0, pivot), zero rows
    sit at the bottom.
    """
    H = [list(r) for r in M]
    m = len(H)
    ncols = len(H[0]) if m else 0
    U = identity(m)
    prow = 0
    for col in range(ncols):
        if prow >= m:
            break
        while True:
            nz = [r for r in range(prow, m) if H[r][col] != 0]
            if not nz:
                break
            best = min(nz, key=lambda r: abs(H[r][col]))
            H[prow], H[best] = H[best], H[prow]
            U[prow], U[best] = U[best], U[prow]
            done = True
            for r in range(prow + 1, m):
                if H[r][col]:
                    q = H[r][col] // H[prow][col]
                    H[r] = [a - q * b for a, b in zip(H[r], H[prow])]
                    U[r] = [a - q * b for a, b in zip(U[r], U[prow])]
                    if H[r][col]:
                        done = False
            if done:
                break
        if H[prow][col] == 0:
            continue
        if H[prow][col] < 0:
            H[prow] = [-a for a in H[prow]]
            U[prow] = [-a for a in U[prow]]
        piv = H[prow][col]
        for r in range(prow):
            q = H[r][col] // piv
            if q:
                H[r] = [a - q * b for a, b in zip(H[r], H[prow])]
                U[r] = [a - q * b for a, b in zip(U[r], U[prow])]
        prow += 1
    return H, U


def snf(M: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form D = L*M*R with d1 | d2 | ... and d_i >= 0."""
    D = [list(r) for r in M]
    m = len(D)
    n = len(D[0]) if m else 0
    L, R = identity(m), identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        L[i], L[j] = L[j], L[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in R:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row_dst += k*row_src
        D[dst] = [a + k * b for a, b in zip(D[dst], D[src])]
        L[dst] = [a + k * b for a, b in zip(L[dst], L[src])]

    def add_col(dst, src, k):
        for row in D:
            row[dst] += k * row[src]
        for row in R:
            row[dst] += k * row[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            swap_rows(t, i)
            swap_cols(t, j)
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // D[t][t]))
                    clean = clean and D[i][t] == 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // D[t][t]))
                    clean = clean and D[t][j] == 0
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % D[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if t < m and t < n and D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            L[t] = [-a for a in L[t]]
    return D, L, R


class AbelianGroup:
    """Finite abelian group Z^g / (row span of relations), in SNF coordinates.

    ``to_snf`` maps generator coordinates to SNF coordinates; ``generator(j)``
    gives the j-th SNF generator back in generator coordinates.
    """

    def __init__(self, relations: Sequence[Sequence[int]], ngens: int,
                 labels: Sequence[str] | None = None):
        self.ngens = ngens
        self.labels = list(labels) if labels is not None else [f"g{i}" for i in range(ngens)]
        self.relations = [list(r) for r in relations]
        if ngens == 0:
            self._R, self._Rinv, self._keep, self.invariants = [], [], [], []
            return
        rel = self.relations or [[0] * ngens]
        D, _, R = snf(rel)
        diag = [D[i][i] if i < len(D) else 0 for i in range(ngens)]
        if any(d == 0 for d in diag):
            raise ValueError("relations do not define a finite group")
        self._R = R
        self._Rinv = inverse_unimodular(R)
        self._keep = [i for i, d in enumerate(diag) if d != 1]
        self.invariants = [diag[i] for i in self._keep]

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariants:
            out *= d
        return out

    def to_snf(self, x: Sequence[int]) -> tuple[int, ...]:
        if len(x) != self.ngens:
            raise ValueError("wrong coordinate length")
        out = []
        for i, d in zip(self._keep, self.invariants):
            out.append(sum(x[k] * self._R[k][i] for k in range(self.ngens)) % d)
        return tuple(out)

    def generator(self, j: int) -> list[int]:
        return list(self._Rinv[self._keep[j]])

    def reduce(self, y: Sequence[int]) -> tuple[int, ...]:
        return tuple(a % d for a, d in zip(y, self.invariants))

    def add(self, y, z):
        return tuple((a + b) % d for a, b, d in zip(y, z, self.invariants))

    def neg(self, y):
        return tuple((-a) % d for a, d in zip(y, self.invariants))

    def zero(self):
        return tuple(0 for _ in self.invariants)

    def elements(self) -> Iterable[tuple[int, ...]]:
        return product(*(range(d) for d in self.invariants))

    def element_order(self, y) -> int:
        from math import gcd, lcm
        out = 1
        for a, d in zip(y, self.invariants):
            out = lcm(out, d // gcd(a, d))
        return out

    def p_rank(self, p: int) -> int:
        return sum(1 for d in self.invariants if d % p == 0)


def group_dlog(G: AbelianGroup, x: Sequence[int]) -> tuple[int, ...]:
    return G.to_snf(x)


def subgroup_order(G: AbelianGroup, gens: Iterable[Sequence[int]]) -> int:
    """Order of the subgroup of G spanned by SNF-coordinate vectors."""
    rels = [list(g) for g in gens]
    k = len(G.invariants)
    if k == 0:
        return 1
    rels += [[d if i == j else 0 for j in range(k)] for i, d in enumerate(G.invariants)]
    return G.order // AbelianGroup(rels, k).order


# ---------------------------------------------------------------- finite fields

class GF:
    """The field F_{p^k} = F_p[x]/(modulus).  Elements are tuples of length k."""

    def __init__(self, p: int, k: int = 1, modulus: Sequence[int] | None = None):
        self.p, self.k = p, k
        if k == 1:
            modulus = (0, 1)
        elif modulus is None:
            modulus = _find_irreducible(p, k)
        self.modulus = tuple(c % p for c in modulus)
        if len(self.modulus) != k + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree k")
        self.q = p ** k
        self.zero = (0,) * k
        self.one = (1,) + (0,) * (k - 1)

    def __repr__(self):
        return f"GF({self.p}^{self.k})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __call__(self, c) -> tuple:
        if isinstance(c, tuple):
            return tuple(x % self.p for x in c)
        return ((c % self.p),) + (0,) * (self.k - 1)

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        p, k = self.p, self.k
        if k == 1:
            return ((a[0] * b[0]) % p,)
        prod_ = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod_[i + j] += x * y
        mod = self.modulus
        for d in range(2 * k - 2, k - 1, -1):
            c = prod_[d] % p
            if c:
                for j in range(k):
                    prod_[d - k + j] -= c * mod[j]
            prod_[d] = 0
        return tuple(x % p for x in prod_[:k])

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        out = self.one
        while e:
            if e & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            e >>= 1
        return out

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("inverse of zero in finite field")
        if self.k == 1:
            return (pow(a[0], -1, self.p),)
        return self.pow(a, self.q - 2)

    def elements(self):
        return (tuple(t) for t in product(range(self.p), repeat=self.k))

    def is_square(self, a) -> bool:
        if a == self.zero:
            return True
        if self.p == 2:
            return True
        return self.pow(a, (self.q - 1) // 2) == self.one


def _is_irreducible(p: int, f: Sequence[int]) -> bool:
    # trial division by every monic polynomial of degree <= deg/2
    deg = len(f) - 1
    for d in range(1, deg // 2 + 1):
        for tail in product(range(p), repeat=d):
            if not any(_int_poly_rem(f, list(tail) + [1], p)):
                return False
    return True


def _int_poly_rem(f, g, p):
    r = [c % p for c in f]
    while len(r) >= len(g):
        c = r[-1]
        if c:
            shift = len(r) - len(g)
            for i, gc in enumerate(g):
                r[shift + i] = (r[shift + i] - c * gc) % p
        r.pop()
    return r


def _find_irreducible(p: int, k: int) -> tuple[int, ...]:
    for tail in product(range(p), repeat=k):
        f = list(tail) + [1]
        if f[0] and _is_irreducible(p, f):
            return tuple(f)
    raise ValueError("no irreducible polynomial found")


# polynomials over a GF: lists of field elements, low degree first

def poly_trim(F: GF, f):
    f = list(f)
    while f and f[-1] == F.zero:
        f.pop()
    return f


def poly_eval(F: GF, f, x):
    acc = F.zero
    for c in reversed(f):
        acc = F.add(F.mul(acc, x), c)
    return acc


def poly_divmod(F: GF, f, g):
    f, g = poly_trim(F, f), poly_trim(F, g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = F.inv(g[-1])
    q = [F.zero] * max(len(f) - len(g) + 1, 0)
    r = list(f)
    while len(r) >= len(g) and r:
        c = F.mul(r[-1], inv_lead)
        shift = len(r) - len(g)
        q[shift] = c
        for i, gc in enumerate(g):
            r[shift + i] = F.sub(r[shift + i], F.mul(c, gc))
        r = poly_trim(F, r[:-1])
    return poly_trim(F, q), r


def poly_mulmod(F: GF, a, b, m):
    out = [F.zero] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x == F.zero:
            continue
        for j, y in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(x, y))
    return poly_divmod(F, out, m)[1]


def poly_powmod(F: GF, base, e: int, m):
    out = [F.one]
    base = poly_divmod(F, base, m)[1]
    while e:
        if e & 1:
            out = poly_mulmod(F, out, base, m)
        base = poly_mulmod(F, base, base, m)
        e >>= 1
    return out


def poly_gcd(F: GF, a, b):
    a, b = poly_trim(F, a), poly_trim(F, b)
    while b:
        a, b = b, poly_divmod(F, a, b)[1]
    if a:
        inv = F.inv(a[-1])
        a = [F.mul(c, inv) for c in a]
    return a


def _split_roots(F: GF, g, rng: random.Random) -> list:
    """Distinct roots of a squarefree split polynomial g (odd q)."""
    g = poly_trim(F, g)
    if len(g) <= 1:
        return []
    if len(g) == 2:
        return [F.neg(F.mul(g[0], F.inv(g[1])))]
    while True:
        a = F(tuple(rng.randrange(F.p) for _ in range(F.k)))
        h = poly_powmod(F, [a, F.one], (F.q - 1) // 2, g)
        h = list(h) + [F.zero] * max(0, 1 - len(h))
        h[0] = F.sub(h[0], F.one)
        d = poly_gcd(F, g, h)
        if 1 < len(d) < len(g):
            return _split_roots(F, d, rng) + _split_roots(F, poly_divmod(F, g, d)[0], rng)


def fq_roots(F: GF, f, seed: int = 0) -> list[tuple[tuple, int]]:
    """Roots of f in F with multiplicities, as sorted (root, multiplicity) pairs.

    Small fields are scanned exhaustively; larger (odd) ones use gcd with
    x^q - x followed by Cantor-Zassenhaus splitting.
    """
    f = poly_trim(F, [F(c) if not isinstance(c, tuple) else c for c in f])
    if not f:
        raise ValueError("zero polynomial has no finite root set")
    if F.q <= 128 or F.p == 2:
        distinct = [x for x in F.elements() if poly_eval(F, f, x) == F.zero]
    else:
        xq = poly_powmod(F, [F.zero, F.one], F.q, f)
        xq = list(xq) + [F.zero] * max(0, 2 - len(xq))
        xq[1] = F.sub(xq[1], F.one)
        g = poly_gcd(F, f, xq)
        distinct = _split_roots(F, g, random.Random(seed))
    out = []
    for r in sorted(distinct):
        mult, h = 0, f
        while True:
            qt, rem = poly_divmod(F, h, [F.neg(r), F.one])
            if rem:
                break
            mult, h = mult + 1, qt
        out.append((r, mult))
    return out
