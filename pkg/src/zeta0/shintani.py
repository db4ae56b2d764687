"""Values at s = 0 of partial zeta functions of ray classes of k0.

The totally positive quadrant modulo the totally positive units is cut into
unimodular cones for the lattice L = a * f.  Each cone (v, w) contributes

    B1(q1) B1(q2) + (B2(q1) Tr(v/w) + B2(q2) Tr(w/v)) / 4

for every coset point with coordinates (q1, q2) in (0,1]^2, plus -B1(q1) when
the coset meets the ray through v.  The pairing of the B2 terms with the two
traces is fixed by PAIRING below; ``zeta0.pinning`` records why.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Iterable, Sequence

from .quadfield import (QFElem, QFIdeal, QuadField, crt_split, is_totally_positive,
                        prime_ideals)
from .rayclass import Modulus, RayClassGroup

# "direct": B2(q1) goes with Tr(v/w); "swapped": with Tr(w/v)
PAIRING = "direct"


def B1(t: Fraction) -> Fraction:
    return t - Fraction(1, 2)


def B2(t: Fraction) -> Fraction:
    return t * t - t + Fraction(1, 6)


def frac01(x: Fraction) -> Fraction:
    """Representative of x mod 1 in (0, 1]."""
    r = x - floor(x)
    return r if r else Fraction(1)


def cone_zeta_zero(v: QFElem, w: QFElem, q1: Fraction, q2: Fraction,
                   pairing: str | None = None) -> Fraction:
    """Value at 0 of sum over m, n >= 0 of N((q1+m) v + (q2+n) w)^(-s)."""
    if not (is_totally_positive(v) and is_totally_positive(w)):
        raise ValueError("cone generators must be totally positive")
    if (v / w).b == 0:
        raise ValueError("degenerate cone: generators are proportional")
    R1, R2 = (v / w).trace(), (w / v).trace()
    if (pairing or PAIRING) == "swapped":
        R1, R2 = R2, R1
    return B1(q1) * B1(q2) + (B2(q1) * R1 + B2(q2) * R2) / 4


def ray_unit(K: QuadField, f: Modulus | QFIdeal) -> QFElem:
    """Least power of eps+ congruent to 1 mod the finite part of f."""
    M = f.finite if isinstance(f, Modulus) else f
    ep = K.units.eps_plus
    one = M.reduce(QFElem(K, 1))
    u, d = ep, 1
    while M.reduce(u) != one:
        u, d = u * ep, d + 1
    return u


def ray_unit_exponent(K: QuadField, f: Modulus) -> int:
    M = f.finite
    ep = K.units.eps_plus
    one = M.reduce(QFElem(K, 1))
    x, d = M.reduce(ep), 1
    while x != one:
        x, d = M.reduce(x * ep), d + 1
    return d


# ---------------------------------------------------------------- cones

def _det(x: Sequence, y: Sequence) -> int:
    return x[0] * y[1] - x[1] * y[0]


def _complete(p: Sequence[int], sign: int) -> tuple[int, int]:
    """u with sign*det(p, u) = 1 for a primitive integer vector p."""
    def egcd(a, b):
        if b == 0:
            return (a, 1, 0) if a >= 0 else (-a, -1, 0)
        g, x, y = egcd(b, a % b)
        return g, y, x - (a // b) * y
    g, x, y = egcd(p[0], p[1])
    if g != 1:
        raise ValueError("cone generator is not primitive in the lattice")
    # p0*x + p1*y = 1, det(p, (-y, x)) = p0*x + p1*y
    return (-y * sign, x * sign)


def unimodular_cones(p: Sequence[int], q: Sequence[int]) -> list[tuple[int, int]]:
    """Rays p = r_0, r_1, ..., r_k = q with each (r_i, r_i+1) a lattice basis
    and every r_i inside the cone spanned by p and q."""
    sign = 1 if _det(p, q) > 0 else -1
    rays = [tuple(p)]
    cur = tuple(p)
    u = _complete(cur, sign)
    for _ in range(100_000):
        b = sign * _det(cur, q)
        a = sign * _det(q, u)
        if b == 0:
            if cur != tuple(q):
                raise ValueError("endpoint is not primitive")
            return rays
        c = -((-a) // b)  # ceil(a/b)
        r = (c * cur[0] + u[0], c * cur[1] + u[1])
        u = (-cur[0], -cur[1])
        cur = r
        rays.append(cur)
    raise RuntimeError("cone subdivision did not terminate")


@dataclass
class ConeData:
    v: QFElem
    w: QFElem
    inv: tuple  # inverse of the basis matrix [[v], [w]] in lattice coordinates
    R1: Fraction
    R2: Fraction


class ShintaniDomain:
    """Unimodular cones for the lattice L between v0 and v0*u (u totally positive unit)."""

    def __init__(self, L: QFIdeal, unit: QFElem, v0: QFElem | None = None):
        K = L.K
        self.L = L
        self.unit = unit
        v0 = v0 if v0 is not None else QFElem(K, L.smallest_integer())
        if not L.contains(v0) or not is_totally_positive(v0):
            raise ValueError("base point must be a totally positive element of L")
        self.v0 = v0
        p = tuple(int(x) for x in L.coords_in_basis(v0))
        q = tuple(int(x) for x in L.coords_in_basis(v0 * unit))
        rays = unimodular_cones(p, q)
        a, bc = L.zbasis()
        elems = [x * a + y * bc for x, y in rays]
        self.rays = elems
        self.cones: list[ConeData] = []
        for (r, s), v, w in zip(zip(rays, rays[1:]), elems, elems[1:]):
            d = _det(r, s)  # +-1
            inv = ((s[1] * d, -r[1] * d), (-s[0] * d, r[0] * d))
            self.cones.append(ConeData(v, w, inv, (v / w).trace(), (w / v).trace()))

    def coset_terms(self, xi: QFElem, pairing: str | None = None):
        """Yield (cone index, q1, q2, on_ray, contribution) for the coset xi + L."""
        s, t = self.L.coords_in_basis(xi)
        swapped = (pairing or PAIRING) == "swapped"
        for i, c in enumerate(self.cones):
            x = s * c.inv[0][0] + t * c.inv[1][0]
            y = s * c.inv[0][1] + t * c.inv[1][1]
            q1, q2 = frac01(x), frac01(y)
            R1, R2 = (c.R2, c.R1) if swapped else (c.R1, c.R2)
            val = B1(q1) * B1(q2) + (B2(q1) * R1 + B2(q2) * R2) / 4
            on_ray = q2 == 1
            if on_ray:
                val -= B1(q1)
            yield i, q1, q2, on_ray, val

    def coset_value(self, xi: QFElem, pairing: str | None = None) -> Fraction:
        return sum((t[-1] for t in self.coset_terms(xi, pairing)), Fraction(0))


# ---------------------------------------------------------------- ray classes

def narrow_group(K: QuadField) -> RayClassGroup:
    return RayClassGroup(Modulus(K, (), (True, True)))


def candidate_ideals(K: QuadField, bound: int = 200) -> list[QFIdeal]:
    """Integral ideals prime to 3: (1), then primes and products of two primes."""
    ps = [P for _, P in prime_ideals(K, bound, 3)]
    out = [K.unit_ideal()] + ps
    for i, P in enumerate(ps[:30]):
        for Q in ps[i:30]:
            out.append(P * Q)
    return out


def narrow_representatives(K: QuadField, choice: int = 0) -> list[QFIdeal]:
    """One integral ideal prime to 3 per narrow class; ``choice`` picks the
    (choice+1)-th candidate met in each class, for independent recomputation."""
    Gn = narrow_group(K)
    seen: dict = {}
    for I in candidate_ideals(K):
        seen.setdefault(Gn.artin(I), []).append(I)
    if len(seen) != Gn.order:
        raise RuntimeError("narrow classes not all represented")
    out = []
    for cls in sorted(seen):
        lst = seen[cls]
        out.append(lst[min(choice, len(lst) - 1)])
    return out


def residues(M: QFIdeal, comps: Iterable[QFIdeal]) -> list[QFElem]:
    """Representatives of (O/M)^x."""
    K = M.K
    comps = list(comps)
    out = []
    for Y in range(M.c):
        for X in range(M.a):
            x = QFElem(K, X, Y)
            if all(not P.contains(x) for P in comps):
                out.append(x)
    return out


def partial_zetas(G: RayClassGroup, pairing: str | None = None, choice: int = 0,
                  unit_power: int = 1, shift: int = 0,
                  audit: list | None = None) -> dict[tuple, Fraction]:
    """zeta_f(0, c) for every class c of G = Cl_f (f = the modulus of G).

    unit_power = k > 1 uses a domain for (eps+)^k, which counts every ideal k
    times; the returned values are divided by k.  shift != 0 starts the cone
    at another totally positive primitive vector of L instead of its least
    positive integer.  ``choice`` selects other ideal representatives.  All
    of these must leave the values unchanged.
    """
    K = G.K
    f = G.modulus
    if f.flags != (True, True):
        raise ValueError("partial zetas need both infinite places in the modulus")
    ffin = f.finite
    comps = [P for P, _ in f.components]
    unit = K.units.eps_plus ** unit_power
    res = residues(ffin, comps)
    # coset points are taken totally positive, so only the residue part counts
    res_snf = {b: G.group.to_snf([0] * G.n_class + G.res.dlog(b) + [0] * G.n_sign)
               for b in res}
    out: dict[tuple, Fraction] = {c: Fraction(0) for c in G.group.elements()}
    for a in narrow_representatives(K, choice):
        L = a * ffin
        ell = L.smallest_integer()
        v0 = QFElem(K, ell)
        if shift:
            v0 = _shifted_base(L, shift)
        dom = ShintaniDomain(L, unit, v0)
        xi_one, _ = crt_split(a, ffin)  # in a, = 1 mod f
        ca = G.artin(a)
        for beta in res:
            b0 = beta * xi_one
            cls = G.group.add(res_snf[beta], G.group.neg(ca))
            if audit is None:
                val = dom.coset_value(b0, pairing)
            else:
                val = Fraction(0)
                for i, q1, q2, on_ray, contrib in dom.coset_terms(b0, pairing):
                    audit.append(f"class={list(cls)} ideal={a} beta={beta} cone={i} "
                                 f"q1={q1} q2={q2} ray={int(on_ray)} value={contrib}")
                    val += contrib
            out[cls] += val
    if unit_power != 1:
        out = {c: v / unit_power for c, v in out.items()}
    return out


def _shifted_base(L: QFIdeal, shift: int) -> QFElem:
    """A totally positive primitive vector of L other than its least integer."""
    a, bc = L.zbasis()
    k = 1
    while True:
        for x in range(1, 60 * k):
            cand = x * a + shift * bc
            s, t = L.coords_in_basis(cand)
            from math import gcd
            if is_totally_positive(cand) and gcd(int(s), int(t)) == 1:
                return cand
        k += 1


def ray_zeta_zero(G: RayClassGroup, cls: Sequence[int], **kw) -> Fraction:
    return partial_zetas(G, **kw)[tuple(cls)]


# ---------------------------------------------------------------- oracle

def cone_zeta_zero_series(v: QFElem, w: QFElem, q1: Fraction, q2: Fraction) -> Fraction:
    """Independent route: constant term in t of the averaged two-sector integrand

        prod_k exp((1 - q_k) x_k t) / (exp(x_k t) - 1),  x = (v, w) embedded,

    expanded as an exact power series with sympy."""
    import sympy as sp
    t = sp.Symbol("t")
    n = v.K.n
    total = sp.Integer(0)
    for place in (0, 1):
        xs = []
        for z in (v, w):
            x, y = z.s_form()
            y = -y if place else y
            xs.append(sp.Rational(x.numerator, x.denominator)
                      + sp.Rational(y.numerator, y.denominator) * sp.sqrt(n))
        expr = sp.Integer(1)
        for xk, qk in zip(xs, (q1, q2)):
            q = sp.Rational(qk.numerator, qk.denominator)
            expr *= sp.exp((1 - q) * xk * t) / (sp.exp(xk * t) - 1)
        ser = sp.series(expr * t ** 2, t, 0, 3).removeO()
        total += sp.expand(ser).coeff(t, 2)
    val = sp.nsimplify(sp.simplify(total / 2))
    val = sp.Rational(val)
    return Fraction(int(val.p), int(val.q))
