"""Ray class groups of k0 for moduli supported above 3 and the infinite places.

Presentation: generators are the class-group primes, generators of
(O/m)^x and one sign generator per flagged real place.  Relations come from
the exact sequence  U -> (O/m)^x x {+-1}^r -> Cl_m -> Cl -> 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Sequence

from .exact import AbelianGroup
from .quadfield import (QFElem, QFIdeal, QuadField, ResidueField, crt_split,
                        primes_above)


def v_p(x: int, p: int) -> int:
    if x == 0:
        raise ValueError("valuation of zero")
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k


@dataclass(frozen=True)
class Modulus:
    """Finite part prod P^e (primes above 3) times a subset of the real places."""

    K: QuadField
    components: tuple  # ((P, e), ...) with e >= 1
    flags: tuple = (True, True)

    @classmethod
    def three_power(cls, K: QuadField, k: int, flags=(True, True)) -> "Modulus":
        comps = tuple((P, k * e) for P, e in primes_above(K, 3)) if k > 0 else ()
        return cls(K, comps, tuple(flags))

    @cached_property
    def finite(self) -> QFIdeal:
        out = self.K.unit_ideal()
        for P, e in self.components:
            out = out * P ** e
        return out

    def exponent(self, P: QFIdeal) -> int:
        for Q, e in self.components:
            if Q == P:
                return e
        return 0

    def divides(self, other: "Modulus") -> bool:
        return (all(e <= other.exponent(P) for P, e in self.components)
                and all(b <= c for b, c in zip(self.flags, other.flags)))

    def label(self) -> str:
        parts = [f"P{P.a},{P.b},{P.c}^{e}" for P, e in self.components] or ["1"]
        inf = "".join(f"inf{i + 1}" for i, f in enumerate(self.flags) if f)
        return "*".join(parts) + (f"*{inf}" if inf else "")

    def __str__(self):
        fin = " ".join(f"{P}^{e}" for P, e in self.components) or "(1)"
        inf = "".join("∞" + "₁₂"[i] for i, f in enumerate(self.flags) if f)
        return f"{fin} {inf}".strip()


class _Component:
    """(O/P^e)^x for one prime P above p: torsion generator plus 1 + P^i layers."""

    def __init__(self, P: QFIdeal, e: int):
        K = P.K
        self.K, self.P, self.e = K, P, e
        self.RF = RF = ResidueField(P)
        F, q, p = RF.F, RF.q, RF.p
        self.p, self.q = p, q
        self.powers = [K.unit_ideal()]
        for _ in range(e):
            self.powers.append(self.powers[-1] * P)
        self.Pe = self.powers[-1]
        self.order = (q - 1) * q ** (e - 1)
        # torsion generator
        ell = [l for l in range(2, q) if (q - 1) % l == 0 and all(l % m for m in range(2, l))]
        self.g0 = None
        for X in range(0, 4 * p):
            for Y in range(0, 2 * p):
                x = QFElem(K, X, Y)
                r = RF.reduce(x)
                if r == F.zero:
                    continue
                if all(F.pow(r, (q - 1) // l) != F.one for l in ell):
                    self.g0 = x
                    break
            if self.g0 is not None:
                break
        self._fq_log = {}
        r, gimg = F.one, RF.reduce(self.g0)
        for k in range(q - 1):
            self._fq_log[r] = k
            r = F.mul(r, gimg)
        self.g0_inv = self.pow(self.g0, self.order - 1)
        # layer generators 1 + beta, beta running over a basis of P^i / P^(i+1)
        self.layers: list[list[QFElem]] = []
        f = 2 if q == p * p else 1
        for i in range(1, e):
            Pi, Pn = self.powers[i], self.powers[i + 1]
            cand = list(Pi.zbasis())
            if f == 2:
                basis = cand
            else:
                basis = [next(b for b in cand if not Pn.contains(b))]
            self.layers.append(basis)
        self.labels = [f"t[{P.a},{P.b},{P.c}]"]
        self.levels = [0]
        self.lifts_local = [self.g0]
        self._layer_inv = []
        for i, basis in enumerate(self.layers, start=1):
            invs = []
            for j, b in enumerate(basis):
                self.labels.append(f"u{i}.{j}[{P.a},{P.b},{P.c}]")
                self.levels.append(i)
                self.lifts_local.append(1 + b)
                invs.append(self.pow(1 + b, self.order - 1))
            self._layer_inv.append(invs)
        self.ngens = len(self.levels)
        rels = []
        v = self.dlog(self.pow(self.g0, q - 1))
        rels.append([q - 1 - v[0]] + [-x for x in v[1:]])
        k = 1
        for basis in self.layers:
            for b in basis:
                v = self.dlog(self.pow(1 + b, p))
                row = [-x for x in v]
                row[k] += p
                rels.append(row)
                k += 1
        self.relations = rels

    def mul(self, x: QFElem, y: QFElem) -> QFElem:
        return self.Pe.reduce(x * y)

    def pow(self, x: QFElem, k: int) -> QFElem:
        out, base = self.Pe.reduce(QFElem(self.K, 1)), self.Pe.reduce(x)
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def dlog(self, x: QFElem) -> list[int]:
        """Coordinates of an integral x prime to P (not reduced by relations)."""
        F = self.RF.F
        r = self.RF.reduce(x)
        if r == F.zero:
            raise ValueError(f"{x} is not prime to {self.P}")
        k = self._fq_log[r]
        z = self.mul(x, self.pow(self.g0_inv, k))
        out = [k]
        one = QFElem(self.K, 1)
        for i, basis in enumerate(self.layers, start=1):
            y = z - one
            Pn = self.powers[i + 1]
            digits = None
            for combo in _digit_combos(self.p, len(basis)):
                t = y - sum((c * b for c, b in zip(combo, basis)), QFElem(self.K))
                if Pn.contains(t):
                    digits = combo
                    break
            if digits is None:
                raise RuntimeError("filtration digit search failed")
            for c, inv in zip(digits, self._layer_inv[i - 1]):
                if c:
                    z = self.mul(z, self.pow(inv, c))
            out += list(digits)
        if z != self.Pe.reduce(one):
            raise RuntimeError("residue discrete log did not terminate at 1")
        return out


def _digit_combos(p: int, f: int):
    if f == 1:
        return [(c,) for c in range(p)]
    return [(a, b) for a in range(p) for b in range(p)]


class ResidueUnits:
    """The group (O/m)^x for m supported above 3, with discrete logarithm."""

    def __init__(self, K: QuadField, components: Sequence[tuple[QFIdeal, int]]):
        self.K = K
        self.comps = [_Component(P, e) for P, e in components]
        self.ngens = sum(c.ngens for c in self.comps)
        self.labels = [l for c in self.comps for l in c.labels]
        self.relations = []
        off = 0
        for c in self.comps:
            for r in c.relations:
                self.relations.append([0] * off + r + [0] * (self.ngens - off - c.ngens))
            off += c.ngens
        self.order = 1
        for c in self.comps:
            self.order *= c.order
        self.group = AbelianGroup(self.relations, self.ngens, self.labels)
        # CRT lifts: generator of one component, 1 at the others
        self.modulus_ideal = K.unit_ideal()
        for c in self.comps:
            self.modulus_ideal = self.modulus_ideal * c.Pe
        self.lifts: list[QFElem] = []
        for i, c in enumerate(self.comps):
            rest = K.unit_ideal()
            for j, d in enumerate(self.comps):
                if j != i:
                    rest = rest * d.Pe
            x, y = crt_split(c.Pe, rest)  # x = 0 mod P^e, x = 1 mod rest
            for g in c.lifts_local:
                self.lifts.append(self.modulus_ideal.reduce(g * y + x))

    def dlog_integral(self, x: QFElem) -> list[int]:
        out = []
        for c in self.comps:
            out += c.dlog(x)
        return out

    def dlog(self, x: QFElem) -> list[int]:
        """Coordinates of any element of k0 that is a unit at every prime above 3."""
        d = x.denominator()
        beta = x * d
        t = v_p(d, 3)
        if t:
            X, Y = beta.coords()
            if X % 3 ** t or Y % 3 ** t:
                raise ValueError(f"{x} is not a unit above 3")
            beta = QFElem(self.K, X // 3 ** t, Y // 3 ** t)
            d //= 3 ** t
        out = self.dlog_integral(beta)
        if d != 1:
            out = [a - b for a, b in zip(out, self.dlog_integral(QFElem(self.K, d)))]
        return out

    def snf(self, x: QFElem) -> tuple[int, ...]:
        return self.group.to_snf(self.dlog(x))


def residue_units(K: QuadField, m_fin: Modulus | Sequence[tuple[QFIdeal, int]]) -> ResidueUnits:
    comps = m_fin.components if isinstance(m_fin, Modulus) else m_fin
    return ResidueUnits(K, comps)


class RayClassGroup:
    def __init__(self, mod: Modulus):
        K = mod.K
        self.K, self.modulus = K, mod
        self.cl = K.classes
        self.res = ResidueUnits(K, mod.components)
        self.places = [i for i, f in enumerate(mod.flags) if f]
        cg = self.cl.generators
        ng, nr, ns = len(cg), self.res.ngens, len(self.places)
        self.n_class, self.n_res, self.n_sign = ng, nr, ns
        self.ngens = ng + nr + ns
        rels = []
        for row, gamma in zip(self.cl.relations, self.cl.relation_gens):
            rels.append(row + [-x for x in self.res.dlog(gamma)] + [-x for x in self.signs(gamma)])
        for r in self.res.relations:
            rels.append([0] * ng + r + [0] * ns)
        for i in range(ns):
            rels.append([0] * (ng + nr) + [2 if j == i else 0 for j in range(ns)])
        units = K.units
        for u in (QFElem(K, -1), units.eps):
            rels.append([0] * ng + self.res.dlog(u) + self.signs(u))
        labels = [f"cl{i}" for i in range(ng)] + self.res.labels + [f"sgn{i + 1}" for i in self.places]
        self.presentation_relations = rels
        self.group = AbelianGroup(rels, self.ngens, labels)
        self.invariants = self.group.invariants
        self._cache: dict = {}

    def __repr__(self):
        return f"RayClassGroup(n={self.K.n}, m={self.modulus}, invariants={self.invariants})"

    @property
    def order(self) -> int:
        return self.group.order

    def signs(self, x: QFElem) -> list[int]:
        return [0 if x.sign(i) > 0 else 1 for i in self.places]

    def _check_coprime(self, I: QFIdeal):
        if I.is_integral():
            for P, _ in self.modulus.components:
                if P.divides(I):
                    raise ValueError(f"ideal {I} is not coprime to the modulus")

    def presentation_vector(self, I: QFIdeal) -> list[int]:
        self._check_coprime(I)
        e, gamma = self.cl.dlog(I)
        try:
            r = self.res.dlog(gamma)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"ideal {I} is not coprime to the modulus") from exc
        return list(e) + r + self.signs(gamma)

    def artin(self, I: QFIdeal) -> tuple[int, ...]:
        key = I.key()
        hit = self._cache.get(key)
        if hit is None:
            hit = self.group.to_snf(self.presentation_vector(I))
            self._cache[key] = hit  # idempotent write
        return hit

    def element_vector(self, x: QFElem) -> list[int]:
        return [0] * self.n_class + self.res.dlog(x) + self.signs(x)

    def artin_elem(self, x: QFElem) -> tuple[int, ...]:
        """Class of the principal ideal (x)."""
        return self.group.to_snf(self.element_vector(x))

    def generator_images(self, values: Sequence[int], N: int) -> list[int]:
        """Character values on presentation generators from values on SNF generators."""
        return [sum(self.group._R[k][i] * v for i, v in zip(self.group._keep, values)) % N
                for k in range(self.ngens)]

    def p_rank(self, p: int) -> int:
        return self.group.p_rank(p)


def ray_class_group(K: QuadField, mod: Modulus) -> RayClassGroup:
    return RayClassGroup(mod)


def artin(G: RayClassGroup, I: QFIdeal) -> tuple[int, ...]:
    return G.artin(I)


def cyclotomic_character(G: RayClassGroup, m: int, P: QFIdeal) -> int:
    """N(P) mod m; requires the primes of m to lie under the modulus (or 2)."""
    for p in _prime_factors(m):
        if p != 2 and not any(Q.a % p == 0 or Q.c % p == 0 for Q, _ in G.modulus.components):
            raise ValueError(f"cyclotomic character mod {m} does not factor through {G.modulus}")
    N = P.norm()
    if gcd(int(N), m) != 1:
        raise ValueError("prime not coprime to m")
    return int(N) % m


def _prime_factors(m: int) -> list[int]:
    out, d = [], 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


# ---------------------------------------------------------------- independent checks

def unit_index(K: QuadField, mod: Modulus) -> int:
    """[U : U_{m,1}] as the size of the image of U in (O/m)^x x signs.

    Computed by direct powering of the fundamental unit, no discrete logs.
    """
    eps = K.units.eps
    M = mod.finite
    places = [i for i, f in enumerate(mod.flags) if f]

    def image(x: QFElem, sg: tuple) -> tuple:
        return M.reduce(x).coords(), sg

    e_red = M.reduce(eps)
    e_sg = tuple(int(eps.sign(i) < 0) for i in places)
    one = image(QFElem(K, 1), (0,) * len(places))
    minus = image(QFElem(K, -1), (1,) * len(places))
    seen = [one]
    x, sg = e_red, e_sg
    while image(x, sg) != one:
        seen.append(image(x, sg))
        x = M.reduce(x * eps)
        sg = tuple(a ^ b for a, b in zip(sg, e_sg))
        if len(seen) > 100_000:
            raise RuntimeError("unit order search failed")
    return len(seen) * (1 if minus in seen else 2)


def index_formula_order(K: QuadField, mod: Modulus) -> Fraction:
    h = K.classes.h
    res_order = 1
    for P, e in mod.components:
        q = int(P.norm())
        res_order *= (q - 1) * q ** (e - 1)
    nflags = sum(mod.flags)
    return Fraction(h * 2 ** nflags * res_order, unit_index(K, mod))


@dataclass
class Character:
    """A homomorphism G -> Z/N given by its values on the SNF generators of G."""

    G: RayClassGroup
    values: tuple
    N: int
    name: str = ""

    def on_snf(self, y: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(y, self.values)) % self.N

    def __call__(self, I: QFIdeal) -> int:
        return self.on_snf(self.G.artin(I))

    def on_elem(self, x: QFElem) -> int:
        return self.on_snf(self.G.artin_elem(x))

    @cached_property
    def on_generators(self) -> list[int]:
        return self.G.generator_images(self.values, self.N)

    def on_presentation(self, v: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(v, self.on_generators)) % self.N

    def order(self) -> int:
        from math import lcm
        o = 1
        for v, d in zip(self.values, self.G.invariants):
            o = lcm(o, self.N // gcd(self.N, v))
        return o

    def scaled(self, k: int, N: int | None = None) -> "Character":
        N = N or self.N
        return Character(self.G, tuple((k * v) % N for v in self.values), N, self.name)


def characters_of_order(G: RayClassGroup, ell: int) -> list[Character]:
    """Characters of exact prime order ell, up to scaling by (Z/ell)^x."""
    free = [i for i, d in enumerate(G.invariants) if d % ell == 0]
    out = []
    from itertools import product
    for vals in product(range(ell), repeat=len(free)):
        nz = [v for v in vals if v]
        if not nz or nz[0] != 1:
            continue
        # a character of Z/d with values in Z/ell: generator -> v (mod ell)
        full = [0] * len(G.invariants)
        for i, v in zip(free, vals):
            full[i] = v
        out.append(Character(G, tuple(full), ell))
    return out
