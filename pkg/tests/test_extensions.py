from functools import lru_cache

import pytest

from zeta0.extensions import (Cubic, ExtensionError, condition_iv, cubic_split_count, descend,
                              proper_divisors, quadratic_handle, roots_of_unity_count,
                              test_primes as fresh_primes, tower)
from zeta0.quadfield import make_field
from zeta0.rayclass import Modulus, RayClassGroup

ROWS = {29: "x^3 - 6*x - s", 43: "x^3 - 21*x - 2*s", 62: "x^3 - (27 + 3*s)*x - (65 + 8*s)",
        77: "2*x^3 - 24*x - (5 + 3*s)", 82: "x^3 - (11 + s)*x - 1",
        173: "2*x^3 - (45 + 3*s)*x - (56 + 4*s)", 183: "x^3 - 45*x - 6*s",
        199: "x^3 - (20 + s)*x - (33 + 2*s)"}


@lru_cache(maxsize=None)
def get_tower(n):
    return tower(make_field(n), ROWS[n])


@pytest.mark.parametrize("n", sorted(ROWS))
def test_handles_on_held_out_primes(n):
    """Frobenius behaviour on 100 primes never used for matching or validation."""
    T = get_tower(n)
    avoid = abs(int(T.cubic.disc().norm())) * T.cubic.scale
    primes = fresh_primes(T.K, 100, avoid=avoid, skip=200)
    assert len(primes) == 100
    for P in primes:
        in_K0 = int(P.norm()) % 3 == 1
        in_k1 = cubic_split_count(T.cubic, P) == 3
        assert (T.quad.chi(P) == 0) == in_K0
        assert (T.cub.chi(P) == 0) == in_k1
        assert (T.full.chi(P) == 0) == (in_K0 and in_k1)
        assert T.full.chi_f(P) == T.full.chi(P)


@pytest.mark.parametrize("n", sorted(ROWS))
def test_conductors_are_minimal(n):
    T = get_tower(n)
    for h in (T.quad, T.cub, T.full):
        assert h.chi_f.G.modulus == h.conductor
        for g in proper_divisors(h.conductor):
            assert descend(h.chi, g) is None, f"{h.name} factors through {g}"


@pytest.mark.parametrize("n", sorted(ROWS))
def test_roots_of_unity(n):
    T = get_tower(n)
    assert (T.w0, T.w1, T.r, T.q) == (6, 6, 1, 1)
    assert not T.cohomologically_trivial


def test_roots_of_unity_sqrt3():
    """k0(sqrt -3) = Q(sqrt 3, sqrt -3) contains i, so w0 = 12."""
    K = make_field(3)
    G = RayClassGroup(Modulus.three_power(K, 2))
    h = quadratic_handle(K, G)
    assert roots_of_unity_count(h.chi, K, 4, [3]) == 12


def nine_rank_oracle(K, k=5):
    """Condition (iv) holds iff Cl_{3^k oo oo} has at least two cyclic factors of order
    divisible by 9 (one of them is used up by the cyclotomic Z_3-extension)."""
    G = RayClassGroup(Modulus.three_power(K, k))
    return sum(1 for d in G.invariants if d % 9 == 0) >= 2


@pytest.mark.parametrize("n,expected", [(29, True), (43, False), (58, False), (67, True),
                                        (74, True), (82, False), (173, False), (183, True),
                                        (2, False), (10, False), (79, True)])
def test_condition_iv_vs_nine_rank(n, expected):
    K = make_field(n)
    assert condition_iv(K) == expected
    assert nine_rank_oracle(K) == expected


def test_reducible_cubic_rejected():
    K = make_field(29)
    with pytest.raises(ExtensionError):
        tower(K, "x^3 - 29*x")  # root x = 0


def test_non_galois_cubic_rejected():
    K = make_field(29)
    with pytest.raises(ExtensionError):
        tower(K, "x^3 - 2")


def test_cubic_rescaling():
    K = make_field(77)
    c = Cubic.parse(K, "2*x^3 - 24*x - (5 + 3*s)")
    assert c.scale == 1  # (5 + 3s)/2 is already integral when n = 1 mod 4
    assert all(a.is_integral() for a in c.coeffs) and c.coeffs[3] == K(1)
    assert c.is_irreducible() and c.disc_is_square()
    c = Cubic.parse(make_field(29), "4*x^3 - x - 1")
    assert c.scale == 2
    assert [a.s_form()[0] for a in c.coeffs] == [-2, -1, 0, 1]
