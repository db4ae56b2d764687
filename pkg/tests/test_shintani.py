from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import pytest
from hypothesis import assume, given, settings, strategies as st

from zeta0.extensions import tower
from zeta0.pinning import pairing_transcript
from zeta0.quadfield import make_field
from zeta0.shintani import (PAIRING, ShintaniDomain, _det, cone_zeta_zero,
                            cone_zeta_zero_series, narrow_representatives, partial_zetas,
                            unimodular_cones)

GOLDEN = Path(__file__).resolve().parent.parent / "src" / "zeta0" / "data" / "pairing_pinning.txt"

ROWS = {29: "x^3 - 6*x - s", 43: "x^3 - 21*x - 2*s", 79: "x^3 - 21*x - (9 + 2*s)",
        82: "x^3 - (11 + s)*x - 1", 173: "2*x^3 - (45 + 3*s)*x - (56 + 4*s)"}


@lru_cache(maxsize=None)
def conductor_group(n):
    return tower(make_field(n), ROWS[n]).full.chi_f.G


@settings(max_examples=40, deadline=None)
@given(st.tuples(st.integers(-30, 30), st.integers(-30, 30)),
       st.tuples(st.integers(-30, 30), st.integers(-30, 30)))
def test_unimodular_cones(p, q):
    from math import gcd
    assume(_det(p, q) != 0 and gcd(*p) == 1 and gcd(*q) == 1)
    rays = unimodular_cones(p, q)
    assert rays[0] == tuple(p) and rays[-1] == tuple(q)
    s = 1 if _det(p, q) > 0 else -1
    for a, b in zip(rays, rays[1:]):
        assert s * _det(a, b) == 1
    for r in rays[1:-1]:
        assert s * _det(p, r) > 0 and s * _det(r, q) > 0


@settings(max_examples=5, deadline=None)
@given(st.sampled_from([29, 43, 82]), st.integers(1, 8), st.integers(1, 8),
       st.integers(0, 3))
def test_cone_formula_vs_series(n, a, b, i):
    """Closed form against constant-term extraction of the cone integrand."""
    K = make_field(n)
    dom = ShintaniDomain(narrow_representatives(K)[0], K.units.eps_plus)
    c = dom.cones[i % len(dom.cones)]
    q1, q2 = Fraction(a, 9), Fraction(b, 9)
    assert cone_zeta_zero(c.v, c.w, q1, q2) == cone_zeta_zero_series(c.v, c.w, q1, q2)


@pytest.mark.parametrize("n", sorted(ROWS))
def test_three_representative_choices_agree(n):
    G = conductor_group(n)
    runs = [partial_zetas(G, choice=k) for k in range(3)]
    assert runs[0] == runs[1] == runs[2]


@pytest.mark.parametrize("n", sorted(ROWS))
def test_class_sum_zero(n):
    assert sum(partial_zetas(conductor_group(n)).values()) == 0


@pytest.mark.parametrize("n", [29, 82])
def test_other_base_point_and_unit_power(n):
    G = conductor_group(n)
    ref = partial_zetas(G)
    assert partial_zetas(G, shift=1) == ref
    assert partial_zetas(G, unit_power=2) == ref


def test_audit_lines_sum_to_values():
    G = conductor_group(29)
    lines: list = []
    vals = partial_zetas(G, audit=lines)
    assert vals == partial_zetas(G)
    total = sum(Fraction(l.rsplit("value=", 1)[1]) for l in lines)
    assert total == sum(vals.values()) == 0
    assert all(l.startswith("class=") and " cone=" in l and " q1=" in l for l in lines)


def test_pairing_golden_transcript():
    assert PAIRING == "direct"
    text = pairing_transcript()
    assert text == GOLDEN.read_text()
    assert text.count("verdict: PASS") == 1
    assert "passing pairings: direct" in text
