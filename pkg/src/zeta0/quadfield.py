"""Arithmetic in a real quadratic field Q(sqrt n).

Elements are a + b*w with rational a, b, where w = (1 + sqrt n)/2 when
n = 1 mod 4 and w = sqrt n otherwise.  Ideals are Z-lattices in Hermite
normal form with respect to (w, 1), so ideal equality is tuple equality.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd, isqrt, lcm
from typing import Iterable, NamedTuple, Sequence

import sympy

from .exact import GF, AbelianGroup, fq_roots, hnf


def is_squarefree(n: int) -> bool:
    return n > 1 and all(e == 1 for e in sympy.factorint(n).values())


def real_sign(x: Fraction, y: Fraction, n: int) -> int:
    """Sign of x + y*sqrt(n), decided with rational arithmetic only."""
    sx = (x > 0) - (x < 0)
    sy = (y > 0) - (y < 0)
    if sx == sy or sy == 0:
        return sx
    if sx == 0:
        return sy
    return sx if x * x > n * y * y else sy


class QuadField:
    """The field k0 = Q(sqrt n) for squarefree n > 1."""

    def __init__(self, n: int):
        if not isinstance(n, int) or not is_squarefree(n):
            raise ValueError(f"n must be a squarefree integer > 1, got {n!r}")
        self.n = n
        if n % 4 == 1:
            self.D, self.delta, self.t, self.s0 = n, 1, 1, (n - 1) // 4
        else:
            self.D, self.delta, self.t, self.s0 = 4 * n, 0, 0, n
        # w^2 = t*w + s0
        self.isqrtD = isqrt(self.D)

    def __repr__(self):
        return f"QuadField({self.n})"

    def __eq__(self, other):
        return isinstance(other, QuadField) and other.n == self.n

    def __hash__(self):
        return hash(("QuadField", self.n))

    def __reduce__(self):
        return (make_field, (self.n,))

    def __call__(self, a=0, b=0) -> "QFElem":
        return QFElem(self, a, b)

    @property
    def omega(self) -> "QFElem":
        return QFElem(self, 0, 1)

    @property
    def sqrt_n(self) -> "QFElem":
        # sqrt n = 2w - 1 or w
        return QFElem(self, -1, 2) if self.delta else QFElem(self, 0, 1)

    def from_s(self, x, y) -> "QFElem":
        """The element x + y*sqrt(n)."""
        x, y = Fraction(x), Fraction(y)
        if self.delta:
            return QFElem(self, x - y, 2 * y)
        return QFElem(self, x, y)

    def unit_ideal(self) -> "QFIdeal":
        return QFIdeal(self, 1, 0, 1)

    @cached_property
    def units(self) -> "UnitData":
        return fundamental_unit(self)

    @cached_property
    def classes(self) -> "ClassGroup":
        return ClassGroup(self)


@lru_cache(maxsize=None)
def make_field(n: int) -> QuadField:
    return QuadField(n)


class QFElem:
    __slots__ = ("K", "a", "b")

    def __init__(self, K: QuadField, a=0, b=0):
        self.K = K
        self.a = a if type(a) is Fraction else Fraction(a)
        self.b = b if type(b) is Fraction else Fraction(b)

    def _coerce(self, other) -> "QFElem":
        if isinstance(other, QFElem):
            return other
        if isinstance(other, (int, Fraction)):
            return QFElem(self.K, other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QFElem(self.K, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QFElem(self.K, -self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QFElem(self.K, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        K = self.K
        bb = self.b * o.b
        return QFElem(K, self.a * o.a + bb * K.s0, self.a * o.b + self.b * o.a + bb * K.t)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out, base = QFElem(self.K, 1, 0), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a or self.b)

    def conj(self) -> "QFElem":
        return QFElem(self.K, self.a + self.b * self.K.t, -self.b)

    def norm(self) -> Fraction:
        K = self.K
        return self.a * self.a + self.a * self.b * K.t - self.b * self.b * K.s0

    def trace(self) -> Fraction:
        return 2 * self.a + self.b * self.K.t

    def inverse(self) -> "QFElem":
        N = self.norm()
        if N == 0:
            raise ZeroDivisionError("inverse of zero")
        c = self.conj()
        return QFElem(self.K, c.a / N, c.b / N)

    def s_form(self) -> tuple[Fraction, Fraction]:
        """(x, y) with self = x + y*sqrt(n)."""
        if self.K.delta:
            return self.a + self.b / 2, self.b / 2
        return self.a, self.b

    def sign(self, place: int = 0) -> int:
        """Sign under the embedding sqrt n -> +sqrt n (place 0) or -sqrt n (place 1)."""
        x, y = self.s_form()
        return real_sign(x, -y if place else y, self.K.n)

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def coords(self) -> tuple[int, int]:
        if not self.is_integral():
            raise ValueError(f"{self} is not integral")
        return int(self.a), int(self.b)

    def denominator(self) -> int:
        return lcm(self.a.denominator, self.b.denominator)

    def __repr__(self):
        return f"QFElem({self.K.n}: {self})"

    def __str__(self):
        x, y = self.s_form()
        d = lcm(x.denominator, y.denominator)
        X, Y = int(x * d), int(y * d)
        if Y == 0:
            body = str(X)
        else:
            ys = "s" if abs(Y) == 1 else f"{abs(Y)}*s"
            if X == 0:
                body = ys if Y > 0 else "-" + ys
            else:
                body = f"{X} {'+' if Y > 0 else '-'} {ys}"
        if d == 1:
            return body
        if Y == 0 or X == 0:
            return f"{body}/{d}"
        return f"({body})/{d}"


def is_totally_positive(x: QFElem) -> bool:
    if not x:
        raise ValueError("zero is neither positive nor negative")
    return x.sign(0) > 0 and x.sign(1) > 0


# ---------------------------------------------------------------- ideals

class QFIdeal:
    """Fractional ideal (Z*a + Z*(b + c*w)) / den with c | a, c | b, 0 <= b < a."""

    __slots__ = ("K", "a", "b", "c", "den")

    def __init__(self, K: QuadField, a: int, b: int, c: int, den: int = 1):
        g = gcd(c, den)
        self.K, self.a, self.b, self.c, self.den = K, a // g, b // g, c // g, den // g

    @classmethod
    def from_zgens(cls, K: QuadField, gens: Iterable[QFElem]) -> "QFIdeal":
        gens = [g for g in gens if g]
        if not gens:
            raise ValueError("the zero ideal is not supported")
        den = lcm(*(g.denominator() for g in gens))
        rows = [[int(g.b * den), int(g.a * den)] for g in gens]
        H, _ = hnf(rows)
        c, b = H[0]
        a = H[1][1]
        if c == 0 or a == 0:
            raise ValueError("generators do not span a full lattice")
        return cls(K, a, b, c, den)

    @classmethod
    def generated_by(cls, K: QuadField, gens: Iterable[QFElem]) -> "QFIdeal":
        """The O-module generated by the given elements."""
        w = K.omega
        z = []
        for g in gens:
            z += [g, g * w]
        return cls.from_zgens(K, z)

    @classmethod
    def principal(cls, x: QFElem) -> "QFIdeal":
        return cls.generated_by(x.K, [x])

    def zbasis(self) -> tuple[QFElem, QFElem]:
        K = self.K
        return (QFElem(K, Fraction(self.a, self.den)),
                QFElem(K, Fraction(self.b, self.den), Fraction(self.c, self.den)))

    def key(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.den)

    def __eq__(self, other):
        return isinstance(other, QFIdeal) and self.K == other.K and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"QFIdeal(n={self.K.n}, a={self.a}, b={self.b}, c={self.c}, den={self.den})"

    def __str__(self):
        b0, b1 = self.zbasis()
        return f"[{b0}, {b1}]"

    def __mul__(self, other):
        if isinstance(other, QFElem):
            return QFIdeal.from_zgens(self.K, [g * other for g in self.zbasis()])
        if not isinstance(other, QFIdeal):
            return NotImplemented
        x, y = self.zbasis()
        u, v = other.zbasis()
        return QFIdeal.from_zgens(self.K, [x * u, x * v, y * u, y * v])

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "QFIdeal":
        if e < 0:
            return self.inverse() ** (-e)
        out, base = self.K.unit_ideal(), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __truediv__(self, other):
        return self * other.inverse()

    def norm(self) -> Fraction:
        return Fraction(self.a * self.c, self.den * self.den)

    def conj(self) -> "QFIdeal":
        return QFIdeal.from_zgens(self.K, [g.conj() for g in self.zbasis()])

    def inverse(self) -> "QFIdeal":
        N = self.norm()
        return QFIdeal.from_zgens(self.K, [g / N for g in self.conj().zbasis()])

    def is_integral(self) -> bool:
        return self.den == 1

    def contains(self, x: QFElem) -> bool:
        y = x.b * self.den
        if y.denominator != 1 or int(y) % self.c:
            return False
        k = int(y) // self.c
        r = x.a * self.den - k * self.b
        return r.denominator == 1 and int(r) % self.a == 0

    def __contains__(self, x):
        return self.contains(x)

    def divides(self, other: "QFIdeal") -> bool:
        """self | other, i.e. other is contained in self."""
        return all(self.contains(g) for g in other.zbasis())

    def reduce(self, x: QFElem) -> QFElem:
        """Canonical representative of an integral x modulo this integral ideal."""
        X, Y = x.coords()
        k = Y // self.c
        Y -= k * self.c
        X = (X - k * self.b) % self.a
        return QFElem(self.K, X, Y)

    def smallest_integer(self) -> int:
        if not self.is_integral():
            raise ValueError("fractional ideal")
        return self.a

    def coords_in_basis(self, x: QFElem) -> tuple[Fraction, Fraction]:
        """Rational (s, t) with x = s*a + t*(b + c*w) (basis scaled by 1/den)."""
        t = x.b * self.den / self.c
        s = (x.a * self.den - t * self.b) / self.a
        return s, t


def ideal_mul(a: QFIdeal, b: QFIdeal) -> QFIdeal:
    return a * b


def ideal_norm(a: QFIdeal) -> Fraction:
    return a.norm()


def ideal_eq(a: QFIdeal, b: QFIdeal) -> bool:
    return a == b


def crt_split(I: QFIdeal, J: QFIdeal) -> tuple[QFElem, QFElem]:
    """Elements x in I, y in J with x + y = 1 for coprime integral I, J."""
    K = I.K
    gens = list(I.zbasis()) + list(J.zbasis())
    rows = [[int(g.b), int(g.a)] for g in gens]
    H, U = hnf(rows)
    if H[0] != [1, 0] or H[1] != [0, 1]:
        raise ValueError("ideals are not coprime")
    u = U[1]
    x = sum((u[k] * gens[k] for k in range(2)), QFElem(K))
    y = sum((u[k] * gens[k] for k in range(2, 4)), QFElem(K))
    return x, y


# ---------------------------------------------------------------- primes

class Splitting(NamedTuple):
    kind: str  # "split", "inert" or "ramified"
    primes: list  # with multiplicity, product = (p)


def kronecker(D: int, p: int) -> int:
    return int(sympy.jacobi_symbol(D % p, p)) if p != 2 else _kron2(D)


def _kron2(D: int) -> int:
    if D % 2 == 0:
        return 0
    return 1 if D % 8 in (1, 7) else -1


@lru_cache(maxsize=None)
def _factor_prime_cached(n: int, p: int) -> Splitting:
    K = make_field(n)
    F = GF(p)
    minpoly = [F(-K.s0), F(-K.t), F(1)]
    roots = fq_roots(F, minpoly)
    w = K.omega
    if len(roots) == 2:
        primes = [QFIdeal.generated_by(K, [K(p), w - r[0][0]]) for r in roots]
        return Splitting("split", primes)
    if len(roots) == 1:
        P = QFIdeal.generated_by(K, [K(p), w - roots[0][0][0]])
        return Splitting("ramified", [P, P])
    return Splitting("inert", [QFIdeal(K, p, 0, p)])


def factor_prime(K: QuadField, p: int) -> Splitting:
    if not sympy.isprime(p):
        raise ValueError(f"{p} is not prime")
    return _factor_prime_cached(K.n, p)


def primes_above(K: QuadField, p: int) -> list[tuple[QFIdeal, int]]:
    """Distinct primes above p with ramification exponent."""
    sp = factor_prime(K, p)
    if sp.kind == "ramified":
        return [(sp.primes[0], 2)]
    return [(P, 1) for P in sp.primes]


def prime_ideals(K: QuadField, bound: int, avoid: int = 1) -> list[tuple[int, QFIdeal]]:
    """(norm, prime) for all primes of norm <= bound not dividing avoid, sorted by norm."""
    out = []
    for p in sympy.primerange(2, bound + 1):
        if avoid % p == 0:
            continue
        sp = factor_prime(K, p)
        if sp.kind == "inert":
            if p * p <= bound:
                out.append((p * p, sp.primes[0]))
        elif sp.kind == "split":
            out += [(p, P) for P in sp.primes]
        else:
            out.append((p, sp.primes[0]))
    out.sort(key=lambda t: (t[0], t[1].key()))
    return out


class ResidueField:
    """O/P for a prime ideal P, with reduction of P-integral elements."""

    def __init__(self, P: QFIdeal):
        K = P.K
        self.P, self.K = P, K
        if not P.is_integral():
            raise ValueError("prime must be integral")
        p = P.a if P.c == 1 else P.c
        self.p = p
        if P.c == 1:
            self.F = GF(p)
            # w = -b mod P
            self.w_image = self.F(-P.b)
            self.q = p
        else:
            self.F = GF(p, 2, (-K.s0, -K.t, 1))
            self.w_image = (0, 1)
            self.q = p * p
        self.kind = factor_prime(K, p).kind
        self._helper = None

    def _integral(self, X: int, Y: int):
        F = self.F
        return F.add(F(X), F.mul(F(Y), self.w_image))

    def reduce(self, x: QFElem):
        F, p = self.F, self.p
        d = x.denominator()
        X, Y = int(x.a * d), int(x.b * d)
        t = 0
        while d % p == 0:
            d //= p
            t += 1
        if t == 0:
            return F.mul(self._integral(X, Y), F.inv(F(d)))
        if self.kind != "split":
            pt = p ** t
            if X % pt or Y % pt:
                raise ValueError(f"{x} is not integral at {self.P}")
            return F.mul(self._integral(X // pt, Y // pt), F.inv(F(d)))
        # split: multiply by gamma in Q^t with gamma = 1 mod P, Q the conjugate prime
        Q = self.P.conj()
        gamma_ideal = Q ** t
        _, gamma = crt_split(self.P, gamma_ideal)
        num = QFElem(self.K, X, Y) * gamma
        pt = p ** t
        nX, nY = num.coords()
        if nX % pt or nY % pt:
            raise ValueError(f"{x} is not integral at {self.P}")
        return F.mul(self._integral(nX // pt, nY // pt), F.inv(F(d)))

    def lift(self, e) -> QFElem:
        """Some integral element reducing to e."""
        for X in range(self.p):
            for Y in range(self.p if self.q > self.p else 1):
                if self._integral(X, Y) == e:
                    return QFElem(self.K, X, Y)
        raise ValueError("no lift found")


def residue_field(P: QFIdeal) -> ResidueField:
    return ResidueField(P)


# ---------------------------------------------------------------- reduction theory
#
# A primitive integral ideal is A*[1, theta], theta = (b + sqrt D)/(2A), and is
# encoded by the pair (A, b).  One continued-fraction step replaces theta by
# 1/(theta - floor theta); reduced ideals (theta > 1, -1 < theta' < 0) fall
# into cycles, one per wide ideal class.

def _primitive(I: QFIdeal) -> tuple[Fraction, int, int]:
    """I = scale * ideal(A, b) with (A, b) primitive."""
    K = I.K
    A = I.a // I.c
    B = I.b // I.c
    return Fraction(I.c, I.den), A, 2 * B + K.delta


def form_ideal(K: QuadField, A: int, b: int) -> QFIdeal:
    B = (b - K.delta) // 2
    return QFIdeal(K, A, B % A, 1)


def _is_reduced(K: QuadField, A: int, b: int) -> bool:
    s = K.isqrtD
    return 0 < b <= s and s < 2 * A + b and 2 * A - b <= s


def _rho(K: QuadField, A: int, b: int) -> tuple[int, int, QFElem]:
    """One step: ideal(A, b) = (lam) * ideal(A', b')."""
    m = (b + K.isqrtD) // (2 * A)
    b1 = 2 * A * m - b
    Astar = (K.D - b1 * b1) // (4 * A)
    A1 = abs(Astar)
    lam = QFElem(K, Fraction(-b1 - K.delta, 2 * A1), Fraction(1, A1))
    return A1, b1, lam


def reduce_ideal(I: QFIdeal) -> tuple[tuple[int, int], QFElem]:
    """Return ((A, b), gamma) with I = (gamma) * form_ideal(A, b), (A, b) reduced."""
    K = I.K
    scale, A, b = _primitive(I)
    gamma = QFElem(K, scale)
    for _ in range(10_000):
        if _is_reduced(K, A, b):
            return (A, b), gamma
        A, b, lam = _rho(K, A, b)
        gamma = gamma * lam
    raise RuntimeError("reduction did not terminate")


def reduced_forms(K: QuadField) -> list[tuple[int, int]]:
    out = []
    D, s = K.D, K.isqrtD
    for b in range(1, s + 1):
        if (b - D) % 2:
            continue
        N = (D - b * b) // 4
        for A in sympy.divisors(N):
            if _is_reduced(K, A, b):
                out.append((A, b))
    return out


class UnitData(NamedTuple):
    eps: QFElem
    norm: int
    eps_plus: QFElem


class ClassGroup:
    """Wide ideal class group via cycles of reduced ideals.

    Every reduced ideal r is stored with mu such that r = (mu) * base(cycle).
    """

    def __init__(self, K: QuadField):
        self.K = K
        forms = reduced_forms(K)
        self._where: dict[tuple[int, int], tuple[int, QFElem]] = {}
        self.cycles: list[list[tuple[int, int]]] = []
        self.cycle_units: list[QFElem] = []
        for f in forms:
            if f in self._where:
                continue
            cid = len(self.cycles)
            cyc, mu, cur = [], QFElem(K, 1), f
            while True:
                self._where[cur] = (cid, mu)
                cyc.append(cur)
                A1, b1, lam = _rho(K, *cur)
                mu = mu / lam
                cur = (A1, b1)
                if cur == f:
                    break
                if cur in self._where:
                    raise RuntimeError("reduced cycle structure broken")
            self.cycles.append(cyc)
            self.cycle_units.append(mu)
        self.h = len(self.cycles)
        key, gam = reduce_ideal(K.unit_ideal())
        cid, mu = self._where[key]
        self.principal = cid
        # O = (gam*mu) * base(principal)
        self._principal_gen = gam * mu
        self._gens: list[QFIdeal] | None = None

    def base(self, cid: int) -> QFIdeal:
        return form_ideal(self.K, *self.cycles[cid][0])

    def locate(self, I: QFIdeal) -> tuple[int, QFElem]:
        """(cycle id, gamma) with I = (gamma) * base(cycle id)."""
        key, gam = reduce_ideal(I)
        cid, mu = self._where[key]
        return cid, gam * mu

    def class_of(self, I: QFIdeal) -> int:
        return self.locate(I)[0]

    def relate(self, I: QFIdeal, J: QFIdeal) -> QFElem | None:
        """gamma with I = (gamma) * J, or None if I and J are not equivalent."""
        ci, gi = self.locate(I)
        cj, gj = self.locate(J)
        if ci != cj:
            return None
        return gi / gj

    def principal_generator(self, I: QFIdeal) -> QFElem | None:
        cid, g = self.locate(I)
        if cid != self.principal:
            return None
        return g / self._principal_gen

    def is_principal(self, I: QFIdeal) -> bool:
        return self.class_of(I) == self.principal

    def _mul_classes(self, c1: int, c2: int) -> int:
        return self.class_of(self.base(c1) * self.base(c2))

    # -- presentation by small prime generators --

    def _build(self):
        K = self.K
        avoid = 3 * K.D
        reached = {self.principal: ()}
        gens, orders, rels = [], [], []
        bound = 50
        while len(reached) < self.h:
            for _, P in prime_ideals(K, bound, avoid):
                if len(reached) == self.h:
                    break
                cid = self.class_of(P)
                if cid in reached:
                    continue
                pc = self.class_of(P)
                cur, o = pc, 1
                while cur not in reached:
                    cur = self._mul_classes(cur, pc)
                    o += 1
                v = reached[cur]
                new = {}
                for c, vec in reached.items():
                    x = c
                    for j in range(o):
                        new[x] = vec + (j,)
                        x = self._mul_classes(x, pc)
                reached = new
                gens.append(P)
                orders.append(o)
                rels.append((o, v))
            bound *= 2
        g = len(gens)
        self._gens = gens
        self._exps = {c: vec + (0,) * (g - len(vec)) for c, vec in reached.items()}
        self.relations = []
        self.relation_gens = []
        for i, (o, v) in enumerate(rels):
            row = [-x for x in v] + [o] + [0] * (g - i - 1)
            J = self.power_product([x for x in v] + [0] * (g - len(v)))
            gamma = self.relate(gens[i] ** o, J)
            self.relations.append(row)
            self.relation_gens.append(gamma)
        self.group = AbelianGroup(self.relations, g, [str(P) for P in gens])

    @property
    def generators(self) -> list[QFIdeal]:
        if self._gens is None:
            self._build()
        return self._gens

    def power_product(self, e: Sequence[int]) -> QFIdeal:
        out = self.K.unit_ideal()
        for P, k in zip(self.generators, e):
            if k:
                out = out * P ** k
        return out

    def dlog(self, I: QFIdeal) -> tuple[tuple[int, ...], QFElem]:
        """(e, gamma) with I = (gamma) * prod g_i^e_i."""
        e = self._exps[self.class_of(I)]
        gamma = self.relate(I, self.power_product(e))
        return e, gamma


def class_group(K: QuadField) -> tuple[AbelianGroup, list[QFIdeal]]:
    C = K.classes
    gens = C.generators
    return C.group, gens


def fundamental_unit(K: QuadField) -> UnitData:
    C = K.classes
    eta = C.cycle_units[C.principal]
    cands = [eta, -eta, eta.inverse(), -eta.inverse()]
    eps = next(u for u in cands if (u - 1).sign(0) > 0)
    N = int(eps.norm())
    eps_plus = eps if is_totally_positive(eps) else eps * eps
    return UnitData(eps, N, eps_plus)


# ---------------------------------------------------------------- parsing

_X = sympy.Symbol("x")
_S = sympy.Symbol("s")


def _sympify(text: str):
    from sympy.parsing.sympy_parser import (implicit_multiplication_application,
                                            parse_expr, standard_transformations)
    tr = standard_transformations + (implicit_multiplication_application,)
    return parse_expr(text.replace("^", "**").replace("√", "s"),
                      local_dict={"x": _X, "s": _S}, transformations=tr)


def _to_elem(K: QuadField, expr) -> QFElem:
    poly = sympy.Poly(sympy.expand(expr), _S)
    x = Fraction(0)
    y = Fraction(0)
    for (k,), c in poly.terms():
        c = Fraction(int(sympy.numer(c)), int(sympy.denom(c)))
        if k % 2 == 0:
            x += c * K.n ** (k // 2)
        else:
            y += c * K.n ** (k // 2)
    return K.from_s(x, y)


def parse_element(K: QuadField, text: str) -> QFElem:
    expr = _sympify(text)
    if expr.free_symbols - {_S}:
        raise ValueError(f"unexpected symbols in {text!r}")
    return _to_elem(K, expr)


def parse_poly(K: QuadField, text: str) -> list[QFElem]:
    """Coefficients (lowest degree first) of a polynomial in x over k0."""
    expr = sympy.expand(_sympify(text))
    if expr.free_symbols - {_S, _X}:
        raise ValueError(f"unexpected symbols in {text!r}")
    poly = sympy.Poly(expr, _X)
    coeffs = [_to_elem(K, c) for c in reversed(poly.all_coeffs())]
    return coeffs
