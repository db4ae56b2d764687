from fractions import Fraction
from itertools import product
from math import gcd

import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st
from sympy.matrices.normalforms import smith_normal_form

from zeta0.exact import (GF, AbelianGroup, det, fq_roots, hnf, inverse_unimodular, matmul,
                         poly_eval, snf, subgroup_order)


def square_matrices(n_max=3, lo=-6, hi=6):
    return st.integers(1, n_max).flatmap(
        lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n),
                           min_size=n, max_size=n))


def brute_force_orders(M):
    """Element orders of Z^n / rowspan(M) by walking the group.

    A coset x + L is identified by frac(x M^-1), computed with sympy rationals.
    """
    n = len(M)
    Minv = sympy.Matrix(M).inv()

    def key(x):
        v = sympy.Matrix([x]) * Minv
        return tuple(Fraction(int(a.p), int(a.q)) % 1 for a in v)

    start = key([0] * n)
    seen = {start}
    frontier = [start]
    unit = [key([int(i == j) for j in range(n)]) for i in range(n)]
    while frontier:
        new = []
        for k in frontier:
            for u in unit:
                s = tuple((a + b) % 1 for a, b in zip(k, u))
                if s not in seen:
                    seen.add(s)
                    new.append(s)
        frontier = new
    orders = []
    for k in seen:
        o = 1
        for a in k:
            o = o * a.denominator // gcd(o, a.denominator)
        orders.append(o)
    return sorted(orders)


def orders_from_invariants(inv):
    out = []
    for y in product(*(range(d) for d in inv)):
        o = 1
        for a, d in zip(y, inv):
            e = d // gcd(a, d)
            o = o * e // gcd(o, e)
        out.append(o)
    return sorted(out)


def test_snf_small_known():
    D, L, R = snf([[2, 0], [0, 3]])
    assert D == [[1, 0], [0, 6]]


@settings(max_examples=60, deadline=None)
@given(square_matrices())
def test_hnf_properties(M):
    H, U = hnf(M)
    assert matmul(U, M) == H
    assert abs(det(U)) == 1
    col = -1
    for row in H:
        nz = [j for j, a in enumerate(row) if a]
        if not nz:
            continue
        j = nz[0]
        assert j > col and row[j] > 0
        col = j


@settings(max_examples=60, deadline=None)
@given(square_matrices())
def test_snf_properties_and_sympy(M):
    D, L, R = snf(M)
    assert matmul(matmul(L, M), R) == D
    assert abs(det(L)) == 1 and abs(det(R)) == 1
    diag = [D[i][i] for i in range(len(D))]
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D)) if i != j)
    for a, b in zip(diag, diag[1:]):
        assert (a == 0 and b == 0) or (a != 0 and b % a == 0)
    ref = smith_normal_form(sympy.Matrix(M), domain=sympy.ZZ)
    assert sorted(abs(int(ref[i, i])) for i in range(len(M))) == sorted(diag)


@settings(max_examples=40, deadline=None)
@given(square_matrices(3, -5, 5))
def test_abelian_group_vs_enumeration(M):
    d = abs(det(M))
    assume(0 < d <= 1000)
    assert d == abs(int(sympy.Matrix(M).det()))
    G = AbelianGroup(M, len(M))
    assert G.order == d
    assert orders_from_invariants(G.invariants) == brute_force_orders(M)


@settings(max_examples=40, deadline=None)
@given(square_matrices(3, -5, 5), st.lists(st.integers(-20, 20), min_size=3, max_size=3))
def test_to_snf_kills_relations_and_generators_round_trip(M, x):
    assume(0 < abs(det(M)) <= 1000)
    n = len(M)
    G = AbelianGroup(M, n)
    for row in M:
        assert G.to_snf(row) == G.zero()
    x = x[:n]
    y = G.to_snf(x)
    back = [sum(y[j] * G.generator(j)[k] for j in range(len(y))) for k in range(n)]
    assert G.to_snf(back) == y


def test_inverse_unimodular():
    U = [[2, 3], [1, 2]]
    assert matmul(U, inverse_unimodular(U)) == [[1, 0], [0, 1]]


def test_subgroup_order():
    G = AbelianGroup([[6]], 1)
    assert subgroup_order(G, [[2]]) == 3
    assert subgroup_order(G, [[3]]) == 2


def test_gf_field_axioms():
    F = GF(3, 2)
    els = list(F.elements())
    assert len(els) == 9
    for a in els:
        if any(a):
            assert F.mul(a, F.inv(a)) == F(1)
        assert F.pow(a, 9) == a


@pytest.mark.parametrize("p,k", [(2, 1), (2, 3), (3, 2), (5, 2), (7, 1), (11, 2), (131, 1), (13, 2)])
def test_fq_roots_exhaustive(p, k):
    """Roots found against direct evaluation at every element (q <= 169)."""
    import random
    F = GF(p, k)
    rng = random.Random(p * 100 + k)
    els = list(F.elements())
    for trial in range(15):
        deg = rng.randint(1, 4)
        f = [rng.choice(els) for _ in range(deg)] + [F(1)]
        if trial % 3 == 0:  # force some roots
            r1, r2 = rng.choice(els), rng.choice(els)
            f = [F.mul(r1, r2), F.neg(F.add(r1, r2)), F(1)]
        expected = sorted(x for x in els if poly_eval(F, f, x) == F(0))
        got = fq_roots(F, f)
        assert sorted(r for r, _ in got) == expected
        assert sum(m for _, m in got) <= len(f) - 1


def test_fq_roots_cubic_over_f7():
    F = GF(7)
    roots = fq_roots(F, [F(-1), F(0), F(0), F(1)])
    assert sorted(r for r, _ in roots) == [F(1), F(2), F(4)]
