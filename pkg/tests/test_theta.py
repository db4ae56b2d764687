from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from zeta0.theta import (GroupRingElem, alpha_factor, even_projections, hayes_check, kp_infer,
                         match_up_to_relabel, parse_table_value, s_max, split_theta,
                         theta1_norm)

fracs = st.fractions(min_value=-50, max_value=50, max_denominator=9)
elems = st.lists(fracs, min_size=6, max_size=6).map(GroupRingElem)

ONE, S, T, NH = GroupRingElem.one(), GroupRingElem.sigma(), GroupRingElem.tau(), GroupRingElem.norm_H()


@settings(max_examples=100, deadline=None)
@given(elems, elems, elems)
def test_ring_axioms(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x
    assert x * (y + z) == x * y + x * z
    assert x * ONE == x
    assert (x * y).relabel() == x.relabel() * y.relabel()
    assert (x * y).inverse_map() == x.inverse_map() * y.inverse_map()


@settings(max_examples=100, deadline=None)
@given(elems, elems, st.integers(0, 1), st.integers(0, 2))
def test_characters_are_multiplicative(x, y, a, b):
    def mul(u, v):  # in Q(zeta), zeta^2 = -1 - zeta
        return (u[0] * v[0] - u[1] * v[1], u[0] * v[1] + u[1] * v[0] - u[1] * v[1])
    assert (x * y).character(a, b) == mul(x.character(a, b), y.character(a, b))


def test_group_relations():
    assert S * S * S == ONE and T * T == ONE
    assert NH * (ONE - S) == GroupRingElem()


def test_canonical_strings():
    x = parse_table_value("(18 - 6σ - 6σ²)(1 - τ)")
    assert x.canonical() == "(18 - 6*s - 6*s^2)*(1 - t)"
    assert parse_table_value(x.canonical()) == x
    assert GroupRingElem([1, 0, 0, 0, 0, Fraction(-1, 3)]).canonical() == \
        "1 + 0*s + 0*s^2 + 0*t + 0*s*t - 1/3*s^2*t"
    assert parse_table_value("(12 + 0σ + 0σ²)(1 - τ)") == GroupRingElem([12, 0, 0, -12, 0, 0])


def test_relabel_match():
    a = parse_table_value("(24 - 24σ + 12σ²)(1 - τ)")
    b = parse_table_value("(24 + 12σ - 24σ²)(1 - τ)")
    assert a != b and match_up_to_relabel(a, b)


def theta_29():
    return parse_table_value("(18 - 6σ - 6σ²)(1 - τ)") * Fraction(1, 6)


def test_split_and_norm_n29():
    th = theta_29()
    th0, th1 = split_theta(th)
    assert th0 == NH * (ONE - T) * Fraction(1, 3)
    assert th0 + th1 == th and (NH * th1).is_zero()
    assert theta1_norm(th1) == 64
    assert kp_infer(th1, 1) is True
    assert s_max(th * 6) == 1
    assert all(v == (0, 0) for v in even_projections(th))


@settings(max_examples=100, deadline=None)
@given(st.lists(fracs, min_size=3, max_size=3), elems)
def test_alpha_factor(c, omega):
    # an element supported on odd non-quadratic characters
    th1 = GroupRingElem([c[0], c[1], c[2], -c[0], -c[1], -c[2]])
    th1 = th1 - th1 * NH * Fraction(1, 3)
    a = alpha_factor(omega, th1)
    assert (ONE - S) * a * (ONE - T) == omega * th1
    assert all(a[(1, j)] == 0 for j in range(3)) and a[(0, 2)] == 0


def test_alpha_rejects_even_support():
    with pytest.raises(ValueError):
        alpha_factor(ONE, ONE)


def test_kp_infer_precondition():
    with pytest.raises(ValueError):
        kp_infer(GroupRingElem(), 3)


def test_hayes_check():
    w1t = theta_29() * 6
    # tau acts by -1, sigma trivially on mu_6
    N = {g: (-1 if g[0] else 1) % 6 for g in [(i, j) for i in range(2) for j in range(3)]}
    assert hayes_check(w1t, 6, N)[0]
    bad = w1t + GroupRingElem.basis(0, 1)
    assert not hayes_check(bad, 6, N)[0]
