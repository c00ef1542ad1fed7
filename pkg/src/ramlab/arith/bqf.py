"""Class groups of quadratic fields from binary quadratic forms.

Forms (a, b, c) stand for a x^2 + b x y + c y^2 of discriminant
D = b^2 - 4 a c.  For D < 0 the proper equivalence classes of positive
definite forms give Cl(Q(sqrt D)); for D > 0 the classes of indefinite forms
give the narrow class group, each class being a cycle of reduced forms under
the rho operator.  The ordinary class group of a real field is the narrow
group modulo the class of (-1, b0, (D - b0^2)/4), which is trivial exactly
when the fundamental unit has norm -1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from ..errors import NotFundamental, InvalidArgs
from .primes import factorize, is_squarefree

BQF_LIMIT = 10 ** 7


def is_fundamental(D):
    if D in (0, 1):
        return False
    if D % 4 == 1:
        return is_squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def _egcd(a, b):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def compose(f, g, D):
    """Dirichlet composition of two forms with positive leading coefficient."""
    (a1, b1, c1), (a2, b2, c2) = f, g
    if a1 > a2:
        (a1, b1, c1), (a2, b2, c2) = (a2, b2, c2), (a1, b1, c1)
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = _egcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, y2 = _egcd(s, d)
        y2 = -y2
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (b3 * b3 - D) // (4 * a3)
    return a3, b3, c3


# --- definite forms ------------------------------------------------------------

def reduce_definite(f, D):
    a, b, c = f
    while True:
        r = (a - b) // (2 * a)
        b += 2 * r * a
        c = (b * b - D) // (4 * a)
        if a > c or (a == c and b < 0):
            a, b, c = c, -b, a
            continue
        return a, b, c


def reduced_definite_forms(D):
    out = []
    amax = math.isqrt(-D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            out.append((a, b, c))
    return out


# --- indefinite forms ----------------------------------------------------------

def _r(b, c, s):
    m = 2 * abs(c)
    if abs(c) > s:
        r = b % m
        return r - m if r > abs(c) else r
    return s - ((s - b) % m)


def rho(f, D, s):
    a, b, c = f
    r = _r(-b, c, s)
    return c, r, (r * r - D) // (4 * c)


def is_reduced_indefinite(f, s):
    a, b, _ = f
    a2 = 2 * abs(a)
    return 0 < b <= s and a2 + b > s and a2 - b <= s


def reduce_indefinite(f, D, s):
    steps = 0
    while not is_reduced_indefinite(f, s):
        f = rho(f, D, s)
        steps += 1
        if steps > 10 ** 6:
            raise ArithmeticError("indefinite reduction did not terminate")
    return f


def reduced_indefinite_forms(D):
    s = math.isqrt(D)
    out = []
    for b in range(1, s + 1):
        if (b - D) % 2:
            continue
        m = (D - b * b) // 4
        lo = (s - b) // 2 + 1
        hi = (s + b) // 2
        for a in range(max(1, lo), hi + 1):
            if m % a:
                continue
            if not (2 * a + b > s and 2 * a - b <= s):
                continue
            out.append((a, b, -m // a))
            out.append((-a, b, m // a))
    return out


# --- group structure -------------------------------------------------------------

def _primary_parts(order, power_of):
    """Invariant factors from counts |G[l^k]| computed with ``power_of``."""
    parts = []
    for l, e in factorize(order).items() if order > 1 else []:
        counts = [1]
        k = 1
        while counts[-1] < l ** e:
            counts.append(power_of(l ** k))
            k += 1
        ranks = [round(math.log(c, l)) for c in counts]
        cyc = []
        for k in range(1, len(ranks)):
            cyc += [l ** k] * ((ranks[k] - ranks[k - 1]) - (ranks[k + 1] - ranks[k] if k + 1 < len(ranks) else 0))
        parts.append(sorted(cyc, reverse=True))
    inv = []
    width = max((len(p) for p in parts), default=0)
    for i in range(width):
        v = 1
        for p in parts:
            if i < len(p):
                v *= p[i]
        inv.append(v)
    return tuple(sorted(inv))


def _p_rank(invariants, p):
    return sum(1 for n in invariants if n % p == 0)


@dataclass(frozen=True)
class ClassGroupResult:
    D: int
    narrow_order: int
    narrow_invariants: tuple
    ordinary_order: int
    ordinary_invariants: tuple
    unit: tuple = None            # (X, Y, norm) with unit (X + Y sqrt D)/2
    forms: tuple = field(default=(), repr=False)

    def narrow_rank(self, p=2):
        return _p_rank(self.narrow_invariants, p)

    def ordinary_rank(self, p=2):
        return _p_rank(self.ordinary_invariants, p)

    def as_dict(self):
        return {
            "D": self.D,
            "narrow": {"order": self.narrow_order, "invariants": list(self.narrow_invariants)},
            "ordinary": {"order": self.ordinary_order, "invariants": list(self.ordinary_invariants)},
            "unit": None if self.unit is None else
            {"X": str(self.unit[0]), "Y": str(self.unit[1]), "norm": self.unit[2]},
        }


class _FormGroup:
    """Finite abelian group of form classes indexed 0..h-1 (0 = principal)."""

    def __init__(self, D):
        self.D = D
        if D < 0:
            forms = reduced_definite_forms(D)
            self.reps = forms
            self.index = {f: i for i, f in enumerate(forms)}
            self._reduce = lambda f: reduce_definite(f, D)
            self._lookup = lambda f: self.index[f]
            principal = reduce_definite((1, D % 2, (D % 2 - D) // 4), D)
        else:
            s = math.isqrt(D)
            self.s = s
            forms = set(reduced_indefinite_forms(D))
            cycles, where = [], {}
            for f in sorted(forms):
                if f in where:
                    continue
                cyc, g = [], f
                while g not in where:
                    where[g] = len(cycles)
                    cyc.append(g)
                    g = rho(g, D, s)
                cycles.append(cyc)
            self.reps = [min(c for c in cyc if c[0] > 0) for cyc in cycles]
            self.where = where
            self._reduce = lambda f: reduce_indefinite(f, D, s)
            self._lookup = lambda f: self.where[f]
            b0 = D % 2
            principal = reduce_indefinite((1, b0, (b0 - D) // 4), D, s)
        # reorder so that the principal class has index 0
        p = self._lookup(principal)
        order = [p] + [i for i in range(len(self.reps)) if i != p]
        self.reps = [self.reps[i] for i in order]
        remap = {old: new for new, old in enumerate(order)}
        if D < 0:
            self.index = {f: i for i, f in enumerate(self.reps)}
        else:
            self.where = {f: remap[i] for f, i in self.where.items()}
        self.h = len(self.reps)
        self._mul = {}

    def class_of(self, f):
        return self._lookup(self._reduce(f))

    def mul(self, i, j):
        key = (i, j) if i <= j else (j, i)
        out = self._mul.get(key)
        if out is None:
            out = self.class_of(compose(self.reps[i], self.reps[j], self.D))
            self._mul[key] = out
        return out

    def power(self, i, k):
        out, base = 0, i
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def count_killed(self, k, sub=frozenset({0})):
        return sum(1 for i in range(self.h) if self.power(i, k) in sub)


def fundamental_unit(D):
    """Fundamental unit (X + Y sqrt D)/2 of the real quadratic order of discriminant D.

    The continued fraction of the ring generator omega is expanded exactly
    with integer quadratic irrationals (P + sqrt R)/Q; the first convergent
    h/k with h - k omega of norm +-1 gives the unit.
    """
    if D <= 0 or not is_fundamental(D):
        raise NotFundamental(f"{D} is not a positive fundamental discriminant")
    if D % 4 == 1:
        R, P, Q = D, 1, 2            # omega = (1 + sqrt D)/2
        t, nrm = 1, (1 - D) // 4     # omega + omega' = 1, omega * omega' = (1-D)/4
    else:
        R, P, Q = D // 4, 0, 1       # omega = sqrt(D/4)
        t, nrm = 0, -(D // 4)
    s = math.isqrt(R)
    h_prev, h = 1, None
    k_prev, k = 0, None
    first = True
    for _ in range(10 ** 7):
        a = (P + s) // Q
        if first:
            h, k = a, 1
            first = False
        else:
            h, h_prev = a * h + h_prev, h
            k, k_prev = a * k + k_prev, k
        # norm of h - k omega
        N = h * h - t * h * k + nrm * k * k
        if N in (1, -1):
            # the large conjugate h - k omega' = (X + Y sqrt D)/2
            if D % 4 == 1:
                X, Y = 2 * h - k, k
            else:
                X, Y = 2 * h, k
            assert X * X - D * Y * Y == 4 * N
            return X, Y, N
        P = a * Q - P
        Q = (R - P * P) // Q
    raise ArithmeticError("continued fraction did not reach a unit")


@lru_cache(maxsize=512)
def bqf_narrow_class_group(D, limit=BQF_LIMIT):
    """Narrow and ordinary class groups of Q(sqrt D) for fundamental D."""
    if not is_fundamental(D):
        raise NotFundamental(f"{D} is not a fundamental discriminant")
    if abs(D) > limit:
        raise InvalidArgs(f"|D| = {abs(D)} exceeds the limit {limit}")
    G = _FormGroup(D)
    h = G.h
    inv = _primary_parts(h, lambda k: G.count_killed(k))
    if D < 0:
        return ClassGroupResult(D, h, inv, h, inv, None, tuple(G.reps))
    b0 = D % 2
    J = G.class_of((-1, b0, (D - b0 * b0) // 4))
    unit = fundamental_unit(D)
    assert (J == 0) == (unit[2] == -1), "unit norm disagrees with the form class of -1"
    if J == 0:
        return ClassGroupResult(D, h, inv, h, inv, unit, tuple(G.reps))
    sub = frozenset({0, J})
    h_ord = h // 2
    inv_ord = _primary_parts(h_ord, lambda k: G.count_killed(k, sub) // 2)
    return ClassGroupResult(D, h, inv, h_ord, inv_ord, unit, tuple(G.reps))


def class_number(D):
    return bqf_narrow_class_group(D).ordinary_order
