"""The group ring Q[G], G = <tau> x <sigma> = Z/2 x Z/3, and the theta element.

Group elements are pairs (i, j) standing for tau^i sigma^j.  Inside Z/6 the
element x corresponds to (x mod 2, x mod 3), so tau = 3 and sigma = 4.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Mapping, Sequence

from .extensions import FieldTower, test_primes

ORDER = [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]  # 1, s, s^2, t, st, s^2t
NAMES = ["1", "s", "s^2", "t", "s*t", "s^2*t"]


def from_z6(x: int) -> tuple[int, int]:
    return (x % 2, x % 3)


def _v3(x: Fraction) -> int | float:
    if x == 0:
        return float("inf")
    v, num, den = 0, x.numerator, x.denominator
    while num % 3 == 0:
        num //= 3
        v += 1
    while den % 3 == 0:
        den //= 3
        v -= 1
    return v


class GroupRingElem:
    """Element of Q[Z/2 x Z/3] with exact rational coefficients."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Mapping | Sequence | None = None):
        self.c = {g: Fraction(0) for g in ORDER}
        if coeffs is None:
            return
        if isinstance(coeffs, Mapping):
            for g, v in coeffs.items():
                self.c[(g[0] % 2, g[1] % 3)] += Fraction(v)
        else:
            for g, v in zip(ORDER, coeffs):
                self.c[g] = Fraction(v)

    @classmethod
    def basis(cls, i: int, j: int) -> "GroupRingElem":
        return cls({(i, j): 1})

    @classmethod
    def one(cls):
        return cls.basis(0, 0)

    @classmethod
    def tau(cls):
        return cls.basis(1, 0)

    @classmethod
    def sigma(cls):
        return cls.basis(0, 1)

    @classmethod
    def norm_H(cls):
        return cls({(0, 0): 1, (0, 1): 1, (0, 2): 1})

    def coeffs(self) -> list[Fraction]:
        return [self.c[g] for g in ORDER]

    def __getitem__(self, g):
        return self.c[(g[0] % 2, g[1] % 3)]

    def __add__(self, o):
        return GroupRingElem({g: self.c[g] + o.c[g] for g in ORDER})

    def __sub__(self, o):
        return GroupRingElem({g: self.c[g] - o.c[g] for g in ORDER})

    def __neg__(self):
        return GroupRingElem({g: -v for g, v in self.c.items()})

    def __mul__(self, o):
        if isinstance(o, (int, Fraction)):
            return GroupRingElem({g: v * o for g, v in self.c.items()})
        out = {g: Fraction(0) for g in ORDER}
        for (a, b), x in self.c.items():
            if not x:
                continue
            for (d, e), y in o.c.items():
                if y:
                    out[((a + d) % 2, (b + e) % 3)] += x * y
        return GroupRingElem(out)

    def __rmul__(self, o):
        return self * o

    def __truediv__(self, k):
        return self * (1 / Fraction(k))

    def __eq__(self, o):
        return isinstance(o, GroupRingElem) and self.c == o.c

    def __hash__(self):
        return hash(tuple(self.coeffs()))

    def is_zero(self) -> bool:
        return not any(self.c.values())

    def inverse_map(self) -> "GroupRingElem":
        """The involution g -> g^-1."""
        return GroupRingElem({(-a % 2, -b % 3): v for (a, b), v in self.c.items()})

    def relabel(self) -> "GroupRingElem":
        """Swap sigma and sigma^2."""
        return GroupRingElem({(a, -b % 3): v for (a, b), v in self.c.items()})

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.c.values())

    def is_p_integral(self, p: int = 3) -> bool:
        return all(v.denominator % p for v in self.c.values())

    def denominator(self) -> int:
        from math import lcm
        return lcm(*(v.denominator for v in self.c.values()))

    def support(self) -> list[tuple[int, int]]:
        return [g for g in ORDER if self.c[g]]

    def tau_antisymmetric(self) -> bool:
        return all(self.c[(1, j)] == -self.c[(0, j)] for j in range(3))

    def character(self, a: int, b: int) -> tuple[Fraction, Fraction]:
        """chi(self) in Q(zeta_3) as (x, y) = x + y*zeta, for chi(tau) = (-1)^a,
        chi(sigma) = zeta^b."""
        # zeta^0 = (1, 0), zeta = (0, 1), zeta^2 = (-1, -1)
        powers = [(1, 0), (0, 1), (-1, -1)]
        x = y = Fraction(0)
        for (i, j), v in self.c.items():
            s = -1 if (a * i) % 2 else 1
            px, py = powers[(b * j) % 3]
            x += s * v * px
            y += s * v * py
        return x, y

    def canonical(self) -> str:
        if self.tau_antisymmetric():
            a, b, c = (self.c[(0, j)] for j in range(3))
            return f"({_fmt(a)} {_sgn(b)} {_fmt(abs(b))}*s {_sgn(c)} {_fmt(abs(c))}*s^2)*(1 - t)"
        parts = []
        for g, name in zip(ORDER, NAMES):
            v = self.c[g]
            term = _fmt(abs(v)) if name == "1" else f"{_fmt(abs(v))}*{name}"
            if not parts:
                parts.append(("-" if v < 0 else "") + term)
            else:
                parts.append(f"{_sgn(v)} {term}")
        return " ".join(parts)

    def __str__(self):
        return self.canonical()

    def __repr__(self):
        return f"GroupRingElem({self.canonical()})"


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _sgn(x: Fraction) -> str:
    return "-" if x < 0 else "+"


def match_up_to_relabel(x: GroupRingElem, y: GroupRingElem) -> bool:
    return x == y or x.relabel() == y


def parse_table_value(text: str) -> GroupRingElem:
    """Parse '(a + b*s + c*s^2)*(1 - t)' or '(a+bσ+cσ²)(1-τ)' forms."""
    import re
    t = text.replace("σ²", "s^2").replace("σ", "s").replace("τ", "t").replace(" ", "")
    m = re.fullmatch(r"\(([-+]?\d+(?:/\d+)?)\*?([-+]\d+(?:/\d+)?)\*?s([-+]\d+(?:/\d+)?)\*?s\^2\)\*?\(1-t\)", t)
    if not m:
        raise ValueError(f"cannot parse group ring value {text!r}")
    a, b, c = (Fraction(g) for g in m.groups())
    return GroupRingElem([a, b, c, -a, -b, -c])


# ---------------------------------------------------------------- theta

def assemble_theta(T: FieldTower, zetas: Mapping[tuple, Fraction]) -> GroupRingElem:
    """theta(0) = sum over ray classes c of zeta_f(0, c) * (image of c)^-1."""
    chi = T.full.chi_f
    if set(zetas) != set(chi.G.group.elements()):
        raise ValueError("partial zeta values do not match the ray classes of the conductor")
    out = {}
    for cls, v in zetas.items():
        i, j = from_z6(-chi.on_snf(cls))
        out[(i, j)] = out.get((i, j), Fraction(0)) + v
    return GroupRingElem(out)


def split_theta(theta: GroupRingElem) -> tuple[GroupRingElem, GroupRingElem]:
    th0 = theta * GroupRingElem.norm_H() * Fraction(1, 3)
    th1 = theta - th0
    assert (th0 + th1) == theta
    assert (GroupRingElem.norm_H() * th1).is_zero()
    return th0, th1


def theta1_norm(th1: GroupRingElem) -> Fraction:
    """N_{Q(zeta3)/Q}(chi(theta1)) for the odd character chi(tau) = -1, chi(sigma) = zeta."""
    x, y = th1.character(1, 1)
    return x * x - x * y + y * y


def kp_infer(th1: GroupRingElem, q: int) -> bool:
    """True iff the kernel K_3 is trivial, read off the 3-integrality of theta1."""
    if q % 3 == 0:
        raise ValueError("precondition violated: 3 divides q")
    if not (th1 * 3).is_p_integral(3):
        raise AssertionError("3*theta1 is not 3-integral")
    return not th1.is_p_integral(3)


def alpha_factor(omega: GroupRingElem, th1: GroupRingElem) -> GroupRingElem:
    """alpha in Q[H] with omega*theta1 = (1 - sigma) * alpha * (1 - tau)."""
    x = omega * th1
    if not (x * (GroupRingElem.one() + GroupRingElem.tau())).is_zero() or \
            not (GroupRingElem.norm_H() * x).is_zero():
        raise ValueError("omega*theta1 is not supported on odd non-quadratic characters")
    y = [x[(0, j)] for j in range(3)]
    acc, alpha = Fraction(0), {}
    for i in range(2):
        acc += y[i]
        alpha[(0, i)] = acc
    a = GroupRingElem(alpha)
    one, s, t = GroupRingElem.one(), GroupRingElem.sigma(), GroupRingElem.tau()
    assert (one - s) * a * (one - t) == x
    return a


def even_projections(theta: GroupRingElem) -> list[tuple[Fraction, Fraction]]:
    """chi(theta) for the three characters trivial on tau."""
    return [theta.character(0, b) for b in range(3)]


def s_max(w1theta: GroupRingElem) -> int | float:
    """Largest s with w1*theta in 3^s Z[G]."""
    return min(_v3(v) for v in w1theta.coeffs())


# ---------------------------------------------------------------- Hayes congruence

def norm_action(T: FieldTower, count: int = 12) -> dict[tuple[int, int], int]:
    """For each g in G, the exponent N(g) mod w1 with g(zeta) = zeta^N(g), read from
    the norms of primes with Frobenius g; several primes per g must agree."""
    chi = T.full.chi
    seen: dict[tuple[int, int], set] = {g: set() for g in ORDER}
    skip = 0
    while any(len(v) == 0 for v in seen.values()) or skip < count * 6:
        for P in test_primes(T.K, 50, skip=skip):
            if gcd(int(P.norm()), T.w1) != 1:
                continue
            g = from_z6(chi(P))
            seen[g].add(int(P.norm()) % T.w1)
        skip += 50
        if skip > 5000:
            break
    out = {}
    for g, vals in seen.items():
        if len(vals) != 1:
            raise AssertionError(f"Frobenius {g} acts inconsistently on roots of unity: {vals}")
        out[g] = vals.pop()
    return out


def hayes_check(w1theta: GroupRingElem, w1: int, Nact: Mapping) -> tuple[bool, str]:
    """a_{gh} = N(h) a_g mod w1 where a_g = coefficient of g^-1; all gcd(a_g, w1) equal."""
    a = {g: w1theta[(-g[0], -g[1])] for g in ORDER}
    if any(v.denominator != 1 for v in a.values()):
        return False, "w1*theta is not integral"
    for g in ORDER:
        for h in ORDER:
            gh = ((g[0] + h[0]) % 2, (g[1] + h[1]) % 3)
            if (a[gh] - Nact[h] * a[g]) % w1:
                return False, f"congruence fails for g={g}, h={h}"
    gs = {gcd(int(v), w1) for v in a.values()}
    if len(gs) != 1:
        return False, f"gcd(a_g, w1) not constant: {sorted(gs)}"
    return True, "ok"


# ---------------------------------------------------------------- reports

@dataclass
class ThetaReport:
    theta: GroupRingElem
    theta0: GroupRingElem
    theta1: GroupRingElem
    w1theta: GroupRingElem
    b0: Fraction
    b1: Fraction
    alpha: GroupRingElem
    norm_value: Fraction
    kp_trivial: bool
    s_max: int | float
    checks: dict = field(default_factory=dict)


def theta_report(T: FieldTower, theta: GroupRingElem, Nact: Mapping | None = None) -> ThetaReport:
    th0, th1 = split_theta(theta)
    w1 = T.w1
    w1theta = theta * w1
    one, s = GroupRingElem.one(), GroupRingElem.sigma()
    alpha = alpha_factor(one - s, th1)
    nv = theta1_norm(th1)
    kp = kp_infer(th1, T.q)
    checks = {}
    checks["theta = theta0 + theta1"] = (th0 + th1) == theta
    checks["N_H theta1 = 0"] = (GroupRingElem.norm_H() * th1).is_zero()
    checks["p q theta1 integral"] = (th1 * (3 * T.q)).is_integral()
    checks["w1 theta integral"] = w1theta.is_integral()
    checks["even projections vanish"] = all(x == 0 and y == 0 for x, y in even_projections(theta))
    qn = nv * T.q
    den = qn.denominator
    while den % 3 == 0:
        den //= 3
    checks["q N(chi theta1) positive, 3-power denominator <= 9"] = (
        qn > 0 and den == 1 and qn.denominator <= 9)
    if Nact is not None:
        ok, why = hayes_check(w1theta, w1, Nact)
        checks["Hayes congruence"] = ok
        if not ok:
            checks["Hayes witness"] = why
    return ThetaReport(theta, th0, th1, w1theta, th0[(0, 0)], th1[(0, 0)], alpha, nv, kp,
                       s_max(w1theta), checks)


@dataclass
class ClassificationReport:
    case: str
    tk: bool
    tkns: bool
    reasons: list
    s_max: int | float
    condition_iv: bool | None
    equivalence: bool | None
    derived_c0: Fraction | None
    leopoldt_notice: str | None


def derived_c0(T: FieldTower, rep: ThetaReport) -> Fraction:
    """|c0| = 3 w0 b0 / 2^(|S^min| - 2), from the quadratic part of theta."""
    S = 2 + len(T.smin)
    return rep.b0 * 3 * T.w0 / Fraction(2) ** (S - 2)


def leopoldt_flag(T: FieldTower, rep: ThetaReport, tkns: bool) -> str | None:
    if not tkns:
        return None
    c0 = derived_c0(T, rep)
    v = _v3(c0)
    if v != T.r:
        return (f"Leopoldt sufficient condition met: derived |c0| = {c0} has 3-valuation "
                f"{v} != r = {T.r}")
    return None


def classify(T: FieldTower, rep: ThetaReport, civ: bool | None) -> ClassificationReport:
    from .extensions import is_TK, is_TKNS
    tk, reasons = is_TK(T, rep.kp_trivial)
    tkns, ns_reasons = is_TKNS(T, rep.kp_trivial)
    split_ram = any(b["K0"] == "split" and b["k1"] == "ramified" for b in T.splitting.values())
    equivalence = None
    if T.cohomologically_trivial:
        case = "cohomologically trivial"
    elif not rep.kp_trivial:
        case = "non-TK-simple"
    elif split_ram:
        case = "non-TK-exceptional"
        if rep.s_max != T.r - 1:
            raise AssertionError(f"exceptional case needs s_max = r - 1, got {rep.s_max}")
    elif tkns:
        case = "TKNS"
        if civ is not None:
            equivalence = (rep.s_max >= T.r) == civ
    else:
        case = "TK"
    c0 = derived_c0(T, rep) if not rep.theta0.is_zero() else None
    return ClassificationReport(case, tk, tkns, ns_reasons, rep.s_max, civ, equivalence, c0,
                                leopoldt_flag(T, rep, tkns))
