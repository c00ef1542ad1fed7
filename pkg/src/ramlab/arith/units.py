"""Splitting predicate for the wreath-product extensions of a base field k."""

from __future__ import annotations

from ..errors import UnitUnavailable, InvalidArgs
from .bqf import bqf_narrow_class_group, fundamental_unit, is_fundamental
from .primes import is_prime
from .residues import kronecker, is_power_residue


def sqrt_mod(a, l):
    """Square root of a modulo the odd prime l (Tonelli-Shanks)."""
    a %= l
    if a == 0:
        return 0
    if pow(a, (l - 1) // 2, l) != 1:
        raise ValueError(f"{a} is not a square mod {l}")
    q, s = l - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (l - 1) // 2, l) != l - 1:
        z += 1
    m, c, t, r = s, pow(z, q, l), pow(a, q, l), pow(a, (q + 1) // 2, l)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % l
            i += 1
        b = pow(c, 1 << (m - i - 1), l)
        m, c, t, r = i, b * b % l, t * b * b % l, r * b % l
    return r


def quadratic_unit_images(D, l):
    """Residues of the unit basis of Q(sqrt D) at both primes above a split l.

    The basis is -1 together with the fundamental unit when D > 0, and the
    roots of unity when D < 0 (only -1 is used there).
    """
    r = sqrt_mod(D, l)
    inv2 = pow(2, -1, l)
    out = []
    for root in (r, (-r) % l):
        units = [l - 1]
        if D > 0:
            X, Y, _ = fundamental_unit(D)
            units.append((X + Y * root) * inv2 % l)
        out.append(units)
    return out


def for_wreath_predicate(k, l, p, unit_images=None, check_class_group=True):
    """Whether l splits completely in k(mu_p, p-th roots of all units of k).

    ``k`` is a fundamental discriminant of a quadratic field, or any other
    label together with ``unit_images``: for each prime of k above l (all
    of degree one) the residues of a unit basis modulo that prime.
    """
    if not is_prime(l):
        raise InvalidArgs(f"{l} is not prime")
    if (l - 1) % p or l == p:
        return False
    if unit_images is None:
        if not (isinstance(k, int) and is_fundamental(k)):
            raise UnitUnavailable("unit data is computed only for quadratic fields")
        if check_class_group and bqf_narrow_class_group(k).ordinary_rank(p) != 0:
            raise InvalidArgs(f"Cl(Q(sqrt {k}))[{p}] is not trivial")
        if kronecker(k, l) != 1:
            return False
        unit_images = quadratic_unit_images(k, l)
    for units in unit_images:
        for u in units:
            if u % l == 0 or not is_power_residue(u, l, p):
                return False
    return True
