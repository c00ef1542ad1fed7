"""Primes of F_q(t): monic irreducible polynomials over F_q, q a prime power <= 64.

Elements of F_q are ints 0..q-1 read as base-r digit vectors (r the
characteristic) of polynomials over F_r modulo a fixed irreducible of
degree k = log_r q, namely the smallest one in that encoding.
Polynomials over F_q are tuples of coefficients, constant term first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from ..errors import InvalidArgs, NotIrreducible, CharConflict
from .primes import factorize

FQ_LIMIT = 64


class GF:
    def __init__(self, q):
        f = factorize(q) if q > 1 else {}
        if len(f) != 1 or q > FQ_LIMIT:
            raise InvalidArgs(f"q = {q} must be a prime power <= {FQ_LIMIT}")
        (r, k), = f.items()
        self.q, self.char, self.k = q, r, k
        self.modulus = _smallest_irreducible_prime_field(r, k) if k > 1 else None
        self.mul_table = [[self._mul(a, b) for b in range(q)] for a in range(q)]
        self.add_table = [[self._add(a, b) for b in range(q)] for a in range(q)]
        self.neg = [self._neg(a) for a in range(q)]
        self.inv = [None] + [next(b for b in range(1, q) if self.mul_table[a][b] == 1)
                             for a in range(1, q)]

    def _digits(self, a):
        out = []
        for _ in range(self.k):
            out.append(a % self.char)
            a //= self.char
        return out

    def _from_digits(self, ds):
        v = 0
        for x in reversed(ds):
            v = v * self.char + x % self.char
        return v

    def _add(self, a, b):
        return self._from_digits([x + y for x, y in zip(self._digits(a), self._digits(b))])

    def _neg(self, a):
        return self._from_digits([-x for x in self._digits(a)])

    def _mul(self, a, b):
        if self.k == 1:
            return a * b % self.char
        r = self.char
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(self._digits(a)):
            for j, y in enumerate(self._digits(b)):
                prod[i + j] = (prod[i + j] + x * y) % r
        m = self.modulus
        for deg in range(len(prod) - 1, self.k - 1, -1):
            c = prod[deg]
            if c:
                for i in range(self.k + 1):
                    prod[deg - self.k + i] = (prod[deg - self.k + i] - c * m[i]) % r
        return self._from_digits(prod[:self.k])

    def add(self, a, b):
        return self.add_table[a][b]

    def mul(self, a, b):
        return self.mul_table[a][b]

    def sub(self, a, b):
        return self.add_table[a][self.neg[b]]


@lru_cache(maxsize=None)
def field(q):
    return GF(q)


def _smallest_irreducible_prime_field(r, k):
    F = GF(r)
    for tail in itertools.product(range(r), repeat=k):
        f = tuple(tail) + (1,)
        if f[0] and is_irreducible(F, f):
            return f
    raise AssertionError("no irreducible polynomial found")


# --- polynomials over GF ------------------------------------------------------------

def trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return tuple(f)


def poly_sub(F, f, g):
    n = max(len(f), len(g))
    f = list(f) + [0] * (n - len(f))
    g = list(g) + [0] * (n - len(g))
    return trim(F.sub(a, b) for a, b in zip(f, g))


def poly_mod(F, f, m):
    f = list(trim(f))
    m = trim(m)
    dm = len(m) - 1
    lead_inv = F.inv[m[-1]]
    while len(f) - 1 >= dm and f:
        c = F.mul(f[-1], lead_inv)
        shift = len(f) - 1 - dm
        for i, x in enumerate(m):
            f[shift + i] = F.sub(f[shift + i], F.mul(c, x))
        f = list(trim(f))
    return tuple(f)


def poly_mulmod(F, f, g, m):
    if not f or not g:
        return ()
    prod = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                prod[i + j] = F.add(prod[i + j], F.mul(a, b))
    return poly_mod(F, prod, m)


def poly_powmod(F, f, e, m):
    out, base = (1,), poly_mod(F, f, m)
    while e:
        if e & 1:
            out = poly_mulmod(F, out, base, m)
        base = poly_mulmod(F, base, base, m)
        e >>= 1
    return out


def poly_gcd(F, f, g):
    f, g = trim(f), trim(g)
    while g:
        f, g = g, poly_mod(F, f, g)
    return f


def is_irreducible(F, f):
    """Rabin's test: x^(q^n) = x mod f and gcd(x^(q^(n/r)) - x, f) = 1."""
    f = trim(f)
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = (0, 1)

    def frob_power(k):
        h = x
        for _ in range(k):
            h = poly_powmod(F, h, F.q, f)
        return h
    if poly_sub(F, frob_power(n), x) != ():
        return False
    for r in factorize(n):
        g = poly_gcd(F, poly_sub(F, frob_power(n // r), x), f)
        if len(g) > 1:
            return False
    return True


@dataclass(frozen=True)
class FqtPrime:
    """A finite prime of F_q(t); ``poly`` is monic, constant term first."""

    q: int
    poly: tuple

    def __post_init__(self):
        F = field(self.q)
        poly = trim(int(c) for c in self.poly)
        object.__setattr__(self, "poly", poly)
        if any(not 0 <= c < self.q for c in poly):
            raise InvalidArgs("coefficients must lie in 0..q-1")
        if len(poly) < 2 or poly[-1] != 1:
            raise InvalidArgs("the polynomial must be monic of positive degree")
        if not is_irreducible(F, poly):
            raise NotIrreducible(f"{poly} is reducible over F_{self.q}")

    @property
    def degree(self):
        return len(self.poly) - 1

    @property
    def norm(self):
        return self.q ** self.degree


def fqt_delta(prime, p):
    """1 iff mu_p lies in the completion, i.e. q^deg = 1 mod p."""
    if prime.q % p == 0:
        raise CharConflict(f"p = {p} is the characteristic of F_{prime.q}")
    return 1 if (prime.norm - 1) % p == 0 else 0
