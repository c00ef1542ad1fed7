"""Residue symbols and Frobenius classes in the cyclic fields E_{p^m}(l).

For a prime l = 1 mod p^m, E_{p^m}(l) is the unique C_{p^m}-extension of Q
ramified only at l (inside Q(zeta_l)).  Its Galois group is identified with
(Z/l)^x / (p^m-th powers) and generated by the class of the smallest
primitive root, so a Frobenius element is an integer mod p^m.
"""

from __future__ import annotations

from math import gcd

from ..errors import BadModulus
from .primes import is_prime, primitive_root


def legendre(a, p):
    if p < 3 or not is_prime(p):
        raise BadModulus(f"Legendre symbol needs an odd prime, got {p}")
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def jacobi(a, n):
    if n < 1 or n % 2 == 0:
        raise BadModulus(f"Jacobi symbol needs an odd positive modulus, got {n}")
    a %= n
    s = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                s = -s
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            s = -s
        a %= n
    return s if n == 1 else 0


def kronecker(d, n):
    """Kronecker symbol (d/n) for n > 0, used for splitting in Q(sqrt d)."""
    if n < 1:
        raise BadModulus("Kronecker symbol needs n > 0")
    s = 1
    while n % 2 == 0:
        n //= 2
        if d % 2 == 0:
            return 0
        if d % 8 in (3, 5):
            s = -s
    return s * jacobi(d, n) if n > 1 else s


def is_power_residue(a, l, k):
    """Whether a is a k-th power modulo the prime l (a prime to l)."""
    if a % l == 0:
        raise BadModulus(f"{a} is not a unit mod {l}")
    return pow(a, (l - 1) // gcd(k, l - 1), l) == 1


def discrete_log_class(a, l, pm):
    """Index of a in (Z/l)^x / (pm-th powers), base the smallest primitive root."""
    if l < 3 or not is_prime(l):
        raise BadModulus(f"{l} is not an odd prime")
    if (l - 1) % pm:
        raise BadModulus(f"{l} is not 1 mod {pm}")
    if a % l == 0:
        raise BadModulus(f"{a} is divisible by {l}")
    e = (l - 1) // pm
    h = pow(primitive_root(l), e, l)
    target = pow(a % l, e, l)
    x = 1
    for k in range(pm):
        if x == target:
            return k
        x = x * h % l
    raise AssertionError("h does not generate the pm-torsion")


def power_residue_index(q, l, pm):
    """Frobenius of q in Gal(E_pm(l)/Q) as an exponent of the fixed generator."""
    if q == l:
        raise BadModulus("q must differ from l")
    if q < 2 or not is_prime(q):
        raise BadModulus(f"{q} is not prime")
    return discrete_log_class(q, l, pm)


def splits_in_E(q, l, pm):
    return power_residue_index(q, l, pm) == 0


def E_is_real(l, m, p=2):
    """E_{p^m}(l) is real iff complex conjugation (the class of -1) is trivial."""
    if p != 2:
        return True
    return (l - 1) % (2 ** (m + 1)) == 0


def frobenius_of_minus_one(l, pm):
    """Image of complex conjugation in Gal(E_pm(l)/Q)."""
    return discrete_log_class(-1, l, pm)


def two_adic_valuation(n):
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    return v
