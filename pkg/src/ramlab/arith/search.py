"""Prime tuples realizing the cyclic lower bound with equality.

Primes l_1, ..., l_n are chosen smallest-first.  l_1 = 1 mod |I_1|, and each
later l_{i+1} must satisfy

  (a) l_{i+1} = 1 mod |I_{i+1}| and every earlier l_j is a p-th power mod
      l_{i+1} (complete splitting in Q(mu_|I_{i+1}|, p-th roots of l_j));
  (b) l_{i+1} splits completely in E_p(l_j) for 2 <= j <= i;
  (c) l_{i+1} is inert in E_p(l_1).

For p = 2 the cases add congruences on the exact power of 2 in l_i - 1:
"II.1" (imaginary) wants it exact for i = 1 and not exact for i >= 2,
"II.2" (real) wants it exact for i = 1 and i = n and not exact otherwise.
``relaxed=True`` leaves l_1 out of the p-th power part of (a).
"""

from __future__ import annotations

import json
import os

from ..errors import InvalidArgs, SearchExhausted
from .primes import primes_up_to
from .residues import is_power_residue, discrete_log_class

CASES = ("OddP", "II.1", "II.2")
DEFAULT_CAP = 10 ** 6


def _vp(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def exact_power(l, order, p):
    """order || l - 1."""
    return _vp(l - 1, p) == _vp(order, p)


def condition_a(l, earlier, order, p, relaxed=False):
    if (l - 1) % order or l in earlier:
        return False
    pool = earlier[1:] if relaxed else earlier
    return all(is_power_residue(q, l, p) for q in pool)


def condition_b(l, earlier, p):
    return all(discrete_log_class(l, q, p) == 0 for q in earlier[1:])


def condition_c(l, earlier, p):
    return not earlier or discrete_log_class(l, earlier[0], p) != 0


def case_condition(case, i, n, l, order, p):
    """Extra congruence for index i (1-based)."""
    if case == "OddP":
        return True
    exact = exact_power(l, order, p)
    if case == "II.1":
        return exact if i == 1 else not exact
    if case == "II.2":
        return exact if i in (1, n) else not exact
    raise InvalidArgs(f"unknown case {case!r}")


def check_tuple(primes, p, orders, case, relaxed=False):
    """Re-check every condition for a finished tuple; returns failing labels."""
    n = len(primes)
    bad = []
    for i, l in enumerate(primes):
        earlier = list(primes[:i])
        if (l - 1) % orders[i]:
            bad.append(f"congruence[{i + 1}]")
        if not case_condition(case, i + 1, n, l, orders[i], p):
            bad.append(f"case[{i + 1}]")
        if i:
            if not condition_a(l, earlier, orders[i], p, relaxed):
                bad.append(f"a[{i + 1}]")
            if not condition_b(l, earlier, p):
                bad.append(f"b[{i + 1}]")
            if not condition_c(l, earlier, p):
                bad.append(f"c[{i + 1}]")
    return bad


def _validate(p, d, n, case, orders):
    if case not in CASES:
        raise InvalidArgs(f"case must be one of {CASES}")
    if (case == "OddP") != (p != 2):
        raise InvalidArgs(f"case {case} does not match p = {p}")
    if n < 1:
        raise InvalidArgs("n >= 1")
    orders = list(orders) if orders is not None else [p ** d] * n
    if len(orders) != n:
        raise InvalidArgs("one inertia order per prime")
    if orders[0] != p ** d:
        raise InvalidArgs("the first inertia group must be all of Gamma")
    for o in orders:
        if o < p or p ** d % o:
            raise InvalidArgs(f"inertia order {o} does not divide {p ** d}")
    if any(a < b for a, b in zip(orders, orders[1:])):
        raise InvalidArgs("inertia orders must be nonincreasing")
    return orders


class PrimeSearchCache:
    """Append-only JSON-lines cache of search results."""

    def __init__(self, path):
        self.path = path
        self._data = {}
        if path and os.path.exists(path):
            with open(path) as fh:
                for line in fh:
                    line = line.strip()
                    if line:
                        rec = json.loads(line)
                        self._data[rec["key"]] = rec["primes"]

    @staticmethod
    def key(**kw):
        return json.dumps(kw, sort_keys=True)

    def get(self, key):
        return self._data.get(key, "missing")

    def put(self, key, primes):
        self._data[key] = primes
        if self.path:
            os.makedirs(os.path.dirname(os.path.abspath(self.path)), exist_ok=True)
            with open(self.path, "a") as fh:
                fh.write(json.dumps({"key": key, "primes": primes}) + "\n")


_SIEVE = {}


def _primes(cap):
    if cap not in _SIEVE:
        _SIEVE.clear()
        _SIEVE[cap] = primes_up_to(cap)
    return _SIEVE[cap]


def find_primes_lb_cyclic(p, d, n, case, orders=None, cap=DEFAULT_CAP, relaxed=False,
                          cache=None):
    """Smallest-first prime tuple for the lower-bound construction."""
    orders = _validate(p, d, n, case, orders)
    key = PrimeSearchCache.key(p=p, d=d, n=n, case=case, cap=cap, orders=orders,
                               relaxed=relaxed)
    if cache is not None:
        hit = cache.get(key)
        if hit != "missing":
            if hit is None:
                raise SearchExhausted(f"cached: no tuple below {cap}")
            return list(hit)
    pool = _primes(cap)
    chosen = []
    try:
        for i in range(n):
            order = orders[i]
            found = None
            for l in pool:
                if l == p or (l - 1) % order:
                    continue
                if not case_condition(case, i + 1, n, l, order, p):
                    continue
                if i and not (condition_a(l, chosen, order, p, relaxed)
                              and condition_b(l, chosen, p) and condition_c(l, chosen, p)):
                    continue
                found = l
                break
            if found is None:
                raise SearchExhausted(
                    f"no prime <= {cap} satisfies the conditions for index {i + 1} "
                    f"after {chosen}")
            chosen.append(found)
    except SearchExhausted:
        if cache is not None:
            cache.put(key, None)
        raise
    assert not check_tuple(chosen, p, orders, case, relaxed)
    if cache is not None:
        cache.put(key, chosen)
    return chosen

