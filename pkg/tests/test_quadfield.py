from fractions import Fraction
from math import isqrt

import mpmath
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from zeta0.quadfield import (QFIdeal, class_group, crt_split, factor_prime, fundamental_unit,
                             is_squarefree, is_totally_positive, make_field,
                             parse_element, parse_poly, prime_ideals, residue_field)
from zeta0.shintani import narrow_group

SQUAREFREE = [n for n in range(2, 201) if is_squarefree(n)]


def disc(n):
    return n if n % 4 == 1 else 4 * n


# ---------------------------------------------------------------- forms oracle

def reduced_forms(D):
    """Reduced indefinite forms (a, b, c): 0 < b < sqrt D, sqrt D - b < 2|a| < sqrt D + b."""
    r = mpmath.sqrt(D)
    out = []
    for b in range(1, isqrt(D) + 1):
        if (b - D) % 2 or b * b >= D:
            continue
        m = (D - b * b) // 4
        for a in range(1, m + 1):
            if m % a == 0 and r - b < 2 * a < r + b:
                out += [(a, b, -m // a), (-a, b, m // a)]
    return out


def rho(form, D):
    a, b, c = form
    r = mpmath.sqrt(D)
    ac = abs(c)
    # b' = -b mod 2c with sqrt D - 2|c| < b' < sqrt D
    b1 = -b % (2 * ac)
    while b1 < r - 2 * ac:
        b1 += 2 * ac
    while b1 > r:
        b1 -= 2 * ac
    return (c, b1, (b1 * b1 - D) // (4 * c))


def form_cycles(D):
    forms = set(reduced_forms(D))
    cycles = []
    while forms:
        f = forms.pop()
        cyc = [f]
        g = rho(f, D)
        while g != f:
            forms.discard(g)
            cyc.append(g)
            g = rho(g, D)
        cycles.append(cyc)
    return cycles


def forms_oracle(n):
    """(narrow class number, norm of the fundamental unit) from form cycles."""
    D = disc(n)
    cycles = form_cycles(D)
    principal = next(c for c in cycles if any(f[0] == 1 for f in c))
    neg = any(f[0] == -1 for f in principal)
    return len(cycles), -1 if neg else 1


@pytest.mark.parametrize("n", SQUAREFREE)
def test_class_number_vs_form_cycles(n):
    K = make_field(n)
    hplus, N = forms_oracle(n)
    assert K.units.norm == N
    assert K.classes.h == (hplus if N == -1 else hplus // 2)
    assert class_group(K)[0].order == K.classes.h
    assert narrow_group(K).order == hplus


@pytest.mark.parametrize("n", [2, 3, 5, 10, 15, 29, 43, 79, 82, 94])
def test_class_number_formula(n):
    """h log eps = -1/2 sum chi(a) log sin(pi a / D), evaluated numerically."""
    mpmath.mp.dps = 40
    K = make_field(n)
    D = K.D
    s = mpmath.mpf(0)
    for a in range(1, D):
        k = _kronecker_symbol(D, a)
        if k:
            s += k * mpmath.log(mpmath.sin(mpmath.pi * a / D))
    eps = K.units.eps
    x, y = eps.s_form()
    logeps = mpmath.log(mpmath.mpf(x.numerator) / x.denominator
                        + mpmath.mpf(y.numerator) / y.denominator * mpmath.sqrt(n))
    h = -s / 2 / logeps
    assert abs(h - K.classes.h) < mpmath.mpf(10) ** -20


def _kronecker_symbol(D, a):
    return int(sympy.functions.combinatorial.numbers.kronecker_symbol(D, a))


# ---------------------------------------------------------------- units

def exhaustive_unit(n):
    """Smallest unit > 1 by increasing the sqrt(n) coefficient."""
    half = n % 4 == 1
    y = 1
    while True:
        for sgn in (-1, 1):
            if half:
                x2 = n * y * y + 4 * sgn
                if x2 > 0 and isqrt(x2) ** 2 == x2:
                    return Fraction(isqrt(x2), 2), Fraction(y, 2), sgn
            else:
                x2 = n * y * y + sgn
                if x2 > 0 and isqrt(x2) ** 2 == x2:
                    return Fraction(isqrt(x2)), Fraction(y), sgn
        y += 1


@pytest.mark.parametrize("n", [n for n in SQUAREFREE if n <= 50])
def test_fundamental_unit_exhaustive(n):
    K = make_field(n)
    U = fundamental_unit(K)
    x, y, sgn = exhaustive_unit(n)
    assert U.eps.s_form() == (x, y)
    assert U.norm == sgn
    assert U.eps * U.eps.conj() == K(U.norm)
    assert is_totally_positive(U.eps_plus)


def test_known_units():
    assert str(make_field(29).units.eps) == "(5 + s)/2"
    e = make_field(199).units.eps
    assert e.s_form() == (16266196520, 1153080099)
    assert make_field(2).units.eps.s_form() == (1, 1) and make_field(2).units.norm == -1


# ---------------------------------------------------------------- primes

@pytest.mark.parametrize("n", [2, 3, 5, 6, 7, 10, 13, 29, 43, 85, 93, 173, 183])
def test_factor_prime_vs_kronecker(n):
    K = make_field(n)
    for p in sympy.primerange(2, 120):
        sp = factor_prime(K, p)
        k = _kronecker_symbol(K.D, p)
        assert sp.kind == {1: "split", -1: "inert", 0: "ramified"}[k]
        prod = K.unit_ideal()
        for P in sp.primes:
            prod = prod * P
        assert prod == QFIdeal.principal(K(p))
        for P in sp.primes:
            assert residue_field(P).q == P.norm()


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([2, 5, 13, 29, 43, 173]), st.integers(-10**6, 10**6),
       st.integers(-10**6, 10**6))
def test_total_positivity_vs_high_precision(n, a, b):
    K = make_field(n)
    x = K(a, b)
    if not x:
        with pytest.raises(ValueError):
            is_totally_positive(x)
        return
    mpmath.mp.dps = 50
    xs, ys = x.s_form()
    r = mpmath.sqrt(n)
    e1 = mpmath.mpf(xs.numerator) / xs.denominator + mpmath.mpf(ys.numerator) / ys.denominator * r
    e2 = mpmath.mpf(xs.numerator) / xs.denominator - mpmath.mpf(ys.numerator) / ys.denominator * r
    assert is_totally_positive(x) == (e1 > 0 and e2 > 0)
    assert x.sign(0) == (1 if e1 > 0 else -1)
    assert x.sign(1) == (1 if e2 > 0 else -1)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([10, 29, 79, 82]), st.integers(0, 25), st.integers(0, 25),
       st.integers(0, 25), st.integers(0, 25))
def test_ideal_norm_multiplicative(n, i, j, k, l):
    K = make_field(n)
    ps = [P for _, P in prime_ideals(K, 60)]
    I = ps[i % len(ps)] * ps[j % len(ps)]
    J = ps[k % len(ps)] ** 2 * ps[l % len(ps)]
    assert (I * J).norm() == I.norm() * J.norm()
    assert I * I.inverse() == K.unit_ideal()
    assert I.divides(I * J)


@pytest.mark.parametrize("n", [29, 43, 82])
def test_crt_split(n):
    K = make_field(n)
    ps = [P for _, P in prime_ideals(K, 40)]
    I, J = ps[0] * ps[1], ps[2] ** 2
    x, y = crt_split(I, J)
    assert I.contains(x) and J.contains(y) and x + y == K(1)


def test_parse_element_and_poly():
    K = make_field(29)
    assert parse_element(K, "(5 + s)/2") == K.from_s(Fraction(5, 2), Fraction(1, 2))
    assert parse_element(K, "s^2") == K(29)
    coeffs = parse_poly(K, "2*x^3 - (13 + s)*x - 2")
    assert len(coeffs) == 4
