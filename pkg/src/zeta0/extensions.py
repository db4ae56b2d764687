"""Abelian extensions of k0 cut out of ray class groups.

An extension is handled through a character chi: Cl_m -> Z/N whose kernel is
the norm group.  Characters are pinned down by Frobenius matching against
test primes, then pushed down to their conductor.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, lcm
from typing import Callable, Sequence

import sympy

from .exact import fq_roots, hnf
from .quadfield import (QFElem, QFIdeal, QuadField, ResidueField, crt_split,
                        is_totally_positive, parse_poly, prime_ideals, primes_above)
from .rayclass import (Character, Modulus, RayClassGroup, characters_of_order)

log = logging.getLogger(__name__)


class ExtensionError(ValueError):
    pass


# ---------------------------------------------------------------- test primes

def test_primes(K: QuadField, count: int, bound: int = 3000, avoid: int = 1,
                skip: int = 0) -> list[QFIdeal]:
    """``count`` primes of k0 prime to 3*D*avoid, after skipping ``skip`` of them.

    The norm bound grows if it does not supply enough primes.
    """
    while True:
        ps = [P for _, P in prime_ideals(K, bound, 3 * K.D * avoid)]
        if len(ps) >= skip + count:
            return ps[skip:skip + count]
        bound *= 2


# ---------------------------------------------------------------- cubics

@dataclass
class Cubic:
    """A cubic over k0 rescaled to a monic polynomial with integral coefficients."""

    K: QuadField
    text: str
    coeffs: list  # monic integral, lowest degree first, length 4
    scale: int

    @classmethod
    def parse(cls, K: QuadField, text: str) -> "Cubic":
        raw = parse_poly(K, text)
        if len(raw) != 4 or not raw[3]:
            raise ExtensionError(f"not a cubic: {text!r}")
        lead = raw[3]
        mon = [c / lead for c in raw]
        # y = d*x turns x^3 + a2 x^2 + a1 x + a0 into y^3 + d a2 y^2 + d^2 a1 y + d^3 a0
        d = 1
        while True:
            cand = [mon[k] * d ** (3 - k) for k in range(4)]
            if all(c.is_integral() for c in cand):
                break
            d += 1
        return cls(K, text, cand, d)

    def disc(self) -> QFElem:
        r, q, p, _ = self.coeffs
        return (p * p * q * q - 4 * q ** 3 - 4 * p ** 3 * r - 27 * r * r + 18 * p * q * r)

    def evaluate(self, x: QFElem) -> QFElem:
        acc = QFElem(self.K)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def root_bound(self) -> tuple[int, int]:
        """Integer bounds on |root| under each real embedding (Cauchy bound)."""
        out = []
        for place in (0, 1):
            m = 0
            for c in self.coeffs[:3]:
                x, y = c.s_form()
                if place:
                    y = -y
                m = max(m, abs(x) + abs(y) * (isqrt(self.K.n) + 1))
            out.append(int(m) + 2)
        return out[0], out[1]

    def roots_in_field(self) -> list[QFElem]:
        """All roots in k0.  Roots of a monic integral cubic are integral, and the
        Cauchy bound gives a finite box for x + y*sqrt(n)."""
        K = self.K
        B0, B1 = self.root_bound()
        # |x + y sqrt n| <= B0, |x - y sqrt n| <= B1
        ymax = (B0 + B1) // 2 + 1
        xmax = (B0 + B1) // 2 + 1
        out = []
        sq = isqrt(K.n)
        for y2 in range(-2 * ymax, 2 * ymax + 1):
            # candidates x + y sqrt n with 2x, 2y integral
            y = Fraction(y2, 2)
            if abs(y) * sq > ymax + 1:
                continue
            for x2 in range(-2 * xmax, 2 * xmax + 1):
                z = K.from_s(Fraction(x2, 2), y)
                if not z.is_integral():
                    continue
                if not self.evaluate(z):
                    out.append(z)
        return out

    def is_irreducible(self) -> bool:
        return not self.roots_in_field()

    def disc_is_square(self) -> bool:
        return is_square(self.disc())

    def reduce(self, RF: ResidueField):
        return [RF.reduce(c) for c in self.coeffs]


def _frac_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    a, b = isqrt(x.numerator), isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


def is_square(z: QFElem) -> bool:
    """Is z a square in k0?"""
    if not z:
        return True
    x, y = z.s_form()
    n = z.K.n
    if y == 0:
        return _frac_sqrt(x) is not None or _frac_sqrt(x / n) is not None
    r = _frac_sqrt(x * x - n * y * y)
    if r is None:
        return False
    for u2 in ((x + r) / 2, (x - r) / 2):
        u = _frac_sqrt(u2)
        if u:
            v = y / (2 * u)
            if u * u + n * v * v == x:
                return True
    return False


def cubic_split_count(cubic: Cubic, P: QFIdeal) -> int | None:
    """Number of distinct roots mod P, or None when P divides the discriminant."""
    RF = ResidueField(P)
    if RF.reduce(cubic.disc()) == RF.F.zero:
        return None
    roots = fq_roots(RF.F, cubic.reduce(RF))
    return len(roots)


# ---------------------------------------------------------------- handles

@dataclass
class ExtensionHandle:
    """Abelian extension of k0 given by a character of a ray class group."""

    name: str
    chi: Character  # on the ambient group
    conductor: Modulus
    chi_f: Character  # descended to the conductor

    @property
    def G(self) -> RayClassGroup:
        return self.chi.G

    @property
    def degree(self) -> int:
        return self.chi.order()

    def in_subgroup(self, y: Sequence[int]) -> bool:
        return self.chi.on_snf(y) == 0

    def kernel_basis(self) -> list[list[int]]:
        """Generators of H = ker chi in SNF coordinates of the ambient group."""
        inv = self.G.invariants
        k = len(inv)
        rows = [[self.chi.values[j]] + [int(i == j) for i in range(k)] for j in range(k)]
        rows.append([self.chi.N] + [0] * k)
        H, _ = hnf(rows)
        out = [r[1:] for r in H if r[0] == 0 and any(r[1:])]
        return [[a % d for a, d in zip(r, inv)] for r in out]

    def index(self) -> int:
        return self.degree

    def frobenius(self, P: QFIdeal) -> str:
        """'ramified', 'split' (Frobenius trivial) or 'inert' (nontrivial)."""
        for Q, _ in self.conductor.components:
            if Q == P:
                return "ramified"
        return "split" if self.chi_f(P) == 0 else "inert"

    def summary(self) -> dict:
        return {"name": self.name, "degree": self.degree,
                "ambient": str(self.G.modulus), "ambient_invariants": list(self.G.invariants),
                "conductor": str(self.conductor),
                "conductor_invariants": list(self.chi_f.G.invariants)}


def match_characters(cands: list[Character], predicate: Callable[[QFIdeal], bool],
                     primes: list[QFIdeal]) -> list[Character]:
    """Characters whose kernel agrees with ``predicate`` (P in H) on every test prime."""
    alive = list(cands)
    for P in primes:
        if not alive:
            break
        truth = predicate(P)
        alive = [c for c in alive if (c(P) == 0) == truth]
    return alive


def conductor(chi: Character) -> Modulus:
    """Smallest modulus through which chi factors, read off the filtration levels."""
    G = chi.G
    vals = chi.on_generators
    comps = []
    off = G.n_class
    for comp in G.res.comps:
        levels = comp.levels
        top = -1
        for j, lev in enumerate(levels):
            if vals[off + j] % chi.N:
                top = max(top, lev)
        if top >= 0:
            comps.append((comp.P, top + 1))
        off += comp.ngens
    flags = [False, False]
    for k, place in enumerate(G.places):
        if vals[G.n_class + G.n_res + k] % chi.N:
            flags[place] = True
    return Modulus(G.K, tuple(comps), tuple(flags))


def factors_through(chi: Character, f: Modulus) -> bool:
    """Does chi kill the kernel of Cl_amb -> Cl_f?

    The kernel is generated by the residue generators of level >= e_f(P) at each
    ambient prime P and by the sign generators of places missing from f.
    """
    G = chi.G
    if not f.divides(G.modulus):
        return False
    vals = chi.on_generators
    off = G.n_class
    for comp in G.res.comps:
        e = f.exponent(comp.P)
        for j, lev in enumerate(comp.levels):
            if lev >= e and vals[off + j] % chi.N:
                return False
        off += comp.ngens
    for k, place in enumerate(G.places):
        if not f.flags[place] and vals[G.n_class + G.n_res + k] % chi.N:
            return False
    return True


def _make_positive(K: QuadField, x: QFElem, step: int) -> QFElem:
    """x + t*step for the least t >= 0 making the result totally positive."""
    t = 0
    while True:
        y = x + t * step
        if is_totally_positive(y):
            return y
        t = 2 * t + 1 if t else 1


def descend(chi: Character, f: Modulus, G_f: RayClassGroup | None = None) -> Character | None:
    """The character of Cl_f inducing chi, or None if chi does not factor through f.

    Each presentation generator of Cl_f is lifted to an ideal or totally
    positive element prime to the ambient modulus and evaluated there.
    """
    if not factors_through(chi, f):
        return None
    G = chi.G
    K = G.K
    G_f = G_f or RayClassGroup(f)
    amb = G.modulus
    vals: list[int] = []
    for P in G_f.cl.generators:
        vals.append(chi(P))
    # 3-primes outside f
    other = K.unit_ideal()
    for P, e in amb.components:
        if f.exponent(P) == 0:
            other = other * P
    ffin = f.finite
    x_f, y_f = crt_split(ffin, other)  # x_f = 0 mod f, = 1 mod other
    for rho in G_f.res.lifts:
        alpha = rho * y_f + x_f
        alpha = _make_positive(K, alpha, (ffin * other).smallest_integer())
        vals.append(chi.on_elem(alpha))
    M = amb.finite.smallest_integer()
    sq = K.sqrt_n
    for place in G_f.places:
        alpha = 1 - M * sq if place == 0 else 1 + M * sq
        vals.append(chi.on_elem(alpha))
    N = chi.N
    for row in G_f.presentation_relations:
        if sum(a * b for a, b in zip(row, vals)) % N:
            return None
    snf_vals = []
    for j in range(len(G_f.invariants)):
        g = G_f.group.generator(j)
        snf_vals.append(sum(a * b for a, b in zip(g, vals)) % N)
    return Character(G_f, tuple(snf_vals), N, chi.name)


def agrees_on(chi: Character, psi: Character, primes: list[QFIdeal]) -> bool:
    return all(chi(P) == psi(P) for P in primes)


def proper_divisors(f: Modulus) -> list[Modulus]:
    out = []
    for i, (P, e) in enumerate(f.components):
        comps = list(f.components)
        if e == 1:
            comps.pop(i)
        else:
            comps[i] = (P, e - 1)
        out.append(Modulus(f.K, tuple(comps), f.flags))
    for k, fl in enumerate(f.flags):
        if fl:
            flags = list(f.flags)
            flags[k] = False
            out.append(Modulus(f.K, f.components, tuple(flags)))
    return out


def make_handle(name: str, chi: Character) -> ExtensionHandle:
    f = conductor(chi)
    chi_f = descend(chi, f)
    if chi_f is None:
        raise ExtensionError(f"{name}: character does not descend to its conductor")
    return ExtensionHandle(name, chi, f, chi_f)


def ambient_group(K: QuadField, start: int = 2, cap: int = 8) -> RayClassGroup:
    """Cl_{3^k inf inf}, with k raised until the 3-rank is stable under k -> k+1."""
    k = start
    G = RayClassGroup(Modulus.three_power(K, k))
    while True:
        if k + 1 > cap:
            raise ExtensionError(f"ray class 3-rank did not stabilise by k={cap}")
        H = RayClassGroup(Modulus.three_power(K, k + 1))
        if H.p_rank(3) == G.p_rank(3):
            return G
        k, G = k + 1, H


def quadratic_handle(K: QuadField, G: RayClassGroup, count: int = 100,
                     bound: int = 3000) -> ExtensionHandle:
    """k0(sqrt -3): P splits iff N(P) = 1 mod 3."""
    primes = test_primes(K, count, bound)
    alive = match_characters(characters_of_order(G, 2),
                             lambda P: int(P.norm()) % 3 == 1, primes)
    if len(alive) != 1:
        raise ExtensionError(f"quadratic handle: {len(alive)} candidates survive")
    h = make_handle("K0", alive[0])
    fresh = test_primes(K, count, bound, skip=count)
    if any((h.chi(P) == 0) != (int(P.norm()) % 3 == 1) for P in fresh):
        raise ExtensionError("quadratic handle fails on held-out primes")
    return h


def cyclotomic_cubic_character(G: RayClassGroup, primes: list[QFIdeal]) -> Character | None:
    """The order-3 character cutting out k0 * Q(zeta_9)^+, if visible in G."""
    alive = match_characters(characters_of_order(G, 3),
                             lambda P: int(P.norm()) % 9 in (1, 8), primes)
    return alive[0] if len(alive) == 1 else None


def cubic_handle(K: QuadField, cubic: Cubic, G: RayClassGroup, count: int = 100,
                 bound: int = 3000) -> ExtensionHandle:
    if not cubic.is_irreducible():
        raise ExtensionError(f"cubic {cubic.text!r} is reducible over k0")
    if not cubic.disc_is_square():
        raise ExtensionError(f"cubic {cubic.text!r} is not cyclic over k0")
    avoid = abs(int(cubic.disc().norm())) * cubic.scale
    primes = test_primes(K, count, bound, avoid)

    def splits(P):
        c = cubic_split_count(cubic, P)
        if c == 1:
            raise ExtensionError(f"cubic has one root mod {P}: not Galois")
        return c == 3

    alive = match_characters(characters_of_order(G, 3), splits, primes)
    if not alive:
        raise ExtensionError("not abelian-unramified-away-from-3 (no character matches)")
    if len(alive) > 1:
        raise ExtensionError("insufficient test primes (several characters match)")
    h = make_handle("k1", alive[0])
    fresh = test_primes(K, count, bound, avoid, skip=count)
    if any((h.chi(P) == 0) != splits(P) for P in fresh):
        raise ExtensionError("cubic handle fails on held-out primes")
    return h


# ---------------------------------------------------------------- the tower

CYCLO_CANDIDATES = [m for m in range(1, 100) if 12 % sympy.totient(m) == 0]


def roots_of_unity_count(handle_chi: Character | None, K: QuadField, degree: int,
                         support: Sequence[int], count: int = 100,
                         bound: int = 3000) -> int:
    """Number of roots of unity in the extension cut out by the character.

    zeta_m lies in it iff every prime of m lies under the support (or divides D)
    and N(P) = 1 mod m for split-completely primes P.  With no character the
    field is k0 itself.
    """
    ps: list[QFIdeal] = []
    skip = 0
    while len(ps) < count:
        batch = test_primes(K, 4 * count, bound, skip=skip)
        skip += len(batch)
        for P in batch:
            if handle_chi is None or handle_chi(P) == 0:
                ps.append(P)
    ps = ps[:count]
    w = 1
    for m in CYCLO_CANDIDATES:
        if degree % sympy.totient(m):
            continue
        ram = [l for l in sympy.primefactors(m) if l != 2 or m % 4 == 0]
        if any((K.D % l and l not in support) for l in ram):
            continue
        if all(int(P.norm()) % m == 1 for P in ps if gcd(int(P.norm()), m) == 1):
            w = lcm(w, m)
    return w


@dataclass
class FieldTower:
    K: QuadField
    cubic: Cubic
    G: RayClassGroup  # ambient
    quad: ExtensionHandle  # K0 / k0
    cub: ExtensionHandle  # k1 / k0
    full: ExtensionHandle  # K1 / k0, character chi6 = 3*chi2 + 4*chi3 mod 6
    w0: int
    w1: int
    smin: list  # finite primes of S^min
    splitting: dict  # prime label -> {"K0": ..., "k1": ...}

    @property
    def r(self) -> int:
        return _v3(self.w1)

    @property
    def q(self) -> int:
        return self.w1 // self.w0

    @property
    def cohomologically_trivial(self) -> bool:
        return not (self.w0 % 3 == 0 and self.q % 3 != 0)

    def smin_labels(self) -> list[str]:
        return ["∞₁", "∞₂"] + [str(P) for P in self.smin]

    def summary(self) -> dict:
        return {"ambient": str(self.G.modulus), "ambient_invariants": list(self.G.invariants),
                "K0": self.quad.summary(), "k1": self.cub.summary(), "K1": self.full.summary(),
                "w0": self.w0, "w1": self.w1, "r": self.r, "q": self.q,
                "S_min": self.smin_labels(), "splitting": self.splitting}


def _v3(x: int) -> int:
    k = 0
    while x % 3 == 0:
        x //= 3
        k += 1
    return k


def tower(K: QuadField, cubic: Cubic | str, prime_count: int = 100, prime_bound: int = 3000,
          modulus_cap: int = 8) -> FieldTower:
    if isinstance(cubic, str):
        cubic = Cubic.parse(K, cubic)
    G = ambient_group(K, cap=modulus_cap)
    quad = quadratic_handle(K, G, prime_count, prime_bound)
    cyc = cyclotomic_cubic_character(G, test_primes(K, prime_count, prime_bound))
    cub = cubic_handle(K, cubic, G, prime_count, prime_bound)
    if cyc is not None and (cyc.values == cub.chi.values
                            or cyc.scaled(2).values == cub.chi.values):
        raise ExtensionError("degenerate: the cubic field is the cyclotomic cubic layer")
    chi6 = Character(G, tuple((3 * a + 4 * b) % 6 for a, b in
                              zip(quad.chi.values, cub.chi.values)), 6, "K1")
    full = make_handle("K1", chi6)
    smin = [P for P, _ in full.conductor.components]
    splitting = {}
    for P in smin:
        splitting[str(P)] = {"K0": quad.frobenius(P), "k1": cub.frobenius(P)}
    support = [3]
    w1 = roots_of_unity_count(full.chi, K, 12, support, prime_count, prime_bound)
    w0 = roots_of_unity_count(quad.chi, K, 4, support, prime_count, prime_bound)
    return FieldTower(K, cubic, G, quad, cub, full, w0, w1, smin, splitting)


def roots_of_unity(T: FieldTower) -> tuple[int, int, int]:
    return T.w0, T.w1, T.r


def is_TK(T: FieldTower, kp_trivial: bool) -> tuple[bool, list[str]]:
    reasons = []
    if T.cohomologically_trivial:
        reasons.append("roots of unity cohomologically trivial")
    for P, beh in T.splitting.items():
        if beh["K0"] == "split" and beh["k1"] == "ramified":
            reasons.append(f"{P} splits in K0 and ramifies in k1")
    if not kp_trivial:
        reasons.append("kernel K_3 nontrivial")
    return not reasons, reasons


def is_TKNS(T: FieldTower, kp_trivial: bool) -> tuple[bool, list[str]]:
    ok, reasons = is_TK(T, kp_trivial)
    for P in primes_above(T.K, 3):
        if T.quad.frobenius(P[0]) == "split":
            reasons.append(f"{P[0]} splits in K0")
    return not reasons, reasons


# ---------------------------------------------------------------- condition (iv)

def norm_log(u: int, r: int) -> int:
    """Image of u in (Z/3^(r+2))^x / {+-1} = Z/3^(r+1), as a power of 4."""
    mod = 3 ** (r + 2)
    u %= mod
    if u % 3 == 2:
        u = (-u) % mod
    if u % 3 != 1:
        raise ValueError("not a 3-adic unit")
    x, t = 1, 0
    while x != u:
        x = (x * 4) % mod
        t += 1
    return t


def cyclotomic_values(G: RayClassGroup, r: int) -> list[int]:
    """The character a -> log N(a) in Z/3^(r+1) on the SNF generators of G."""
    N = 3 ** (r + 1)
    pres = [norm_log(int(P.norm()), r) for P in G.cl.generators]
    for rho in G.res.lifts:
        pres.append(norm_log(int(rho.norm()), r))
    pres += [0] * G.n_sign
    for row in G.presentation_relations:
        if sum(a * b for a, b in zip(row, pres)) % N:
            raise ExtensionError("cyclotomic character does not factor through the ray class group")
    return [sum(a * b for a, b in zip(G.group.generator(j), pres)) % N
            for j in range(len(G.invariants))]


def condition_iv_at(K: QuadField, k: int, r: int = 1) -> bool:
    G = RayClassGroup(Modulus.three_power(K, k))
    N = 3 ** (r + 1)
    c = cyclotomic_values(G, r)
    if all(x % 3 == 0 for x in c):
        raise ExtensionError("cyclotomic character not surjective at this modulus")
    # V = G/NG has coordinates y_i in Z/gcd(d_i, N); c kills NG so it is
    # well defined on V with the same values c_i on the generators
    return _kernel_order_search(G.invariants, c, N)


def _kernel_order_search(inv: Sequence[int], c: Sequence[int], N: int) -> bool:
    from itertools import product
    g = [gcd(d, N) for d in inv]
    idx = [i for i, x in enumerate(g) if x > 1]
    for y in product(*(range(g[i]) for i in idx)):
        if sum(y[k] * c[i] for k, i in enumerate(idx)) % N:
            continue
        order = 1
        for k, i in enumerate(idx):
            order = lcm(order, g[i] // gcd(y[k], g[i]))
        if order == N:
            return True
    return False


def condition_iv(K: QuadField, r: int = 1, start: int = 3, cap: int = 8) -> bool:
    """Is there a cyclic degree 3^(r+1) extension of k0, unramified away from 3,
    linearly disjoint from the cyclotomic Z_3-extension?"""
    k = max(start, r + 2)
    prev = condition_iv_at(K, k, r)
    while True:
        k += 1
        if k > cap:
            raise ExtensionError(f"condition (iv) did not stabilise by k={cap}")
        cur = condition_iv_at(K, k, r)
        if cur == prev:
            return cur
        prev = cur
