"""Primality, factoring and primitive roots for machine-size integers."""

from __future__ import annotations

import math
from functools import lru_cache

from ..errors import BadModulus

# The first thirteen primes are a deterministic witness set below 3.3 * 10^24;
# twelve only suffice below 318665857834031151167461.
_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
DETERMINISTIC_LIMIT = 3317044064679887385961981
_SMALL = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_prime(n):
    """Deterministic Miller-Rabin for n < 3.3e24 (covers all 64-bit input)."""
    if n < 2:
        return False
    for q in _SMALL:
        if n % q == 0:
            return n == q
    if n >= DETERMINISTIC_LIMIT:
        raise OverflowError("primality is only certified below 3.3e24")
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(limit):
    """Sieve of Eratosthenes; primes p <= limit in increasing order."""
    if limit < 2:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytes(len(range(i * i, limit + 1, i)))
    return [i for i in range(limit + 1) if sieve[i]]


def next_prime(n):
    n = max(n + 1, 2)
    while not is_prime(n):
        n += 1
    return n


def _rho(n):
    # Brent's variant with a fixed sequence of constants, so runs are reproducible
    if n % 2 == 0:
        return 2
    for c in range(1, 200):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"no factor found for {n}")


def factorize(n):
    """Prime factorization of |n| as a sorted dict {prime: exponent}."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out = {}
    for q in range(2, 1000):
        if q * q > n:
            break
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        f = _rho(m)
        stack += [f, m // f]
    return dict(sorted(out.items()))


def squarefree_part(n):
    """Signed squarefree integer in the square class of n."""
    if n == 0:
        raise ValueError("0 has no square class")
    s = -1 if n < 0 else 1
    for q, e in factorize(n).items():
        if e % 2:
            s *= q
    return s


def is_squarefree(n):
    return n != 0 and all(e == 1 for e in factorize(n).values())


@lru_cache(maxsize=4096)
def primitive_root(p):
    """Smallest primitive root modulo the odd prime p (1 for p = 2)."""
    if p == 2:
        return 1
    if p < 2 or not is_prime(p):
        raise BadModulus(f"{p} is not prime")
    qs = list(factorize(p - 1))
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise AssertionError("unreachable")
