"""Dimension of the group V_{S \\ T}^{S u T}(Q) of global p-th power classes.

An element of Q^x / Q^{x p} that is a local unit times a p-th power outside
S u T is represented by a sign and the exponents mod p at the finite primes
of S u T.  Being a local p-th power at a place of S \\ T is a system of
F_p-linear conditions on these coordinates; the dimension is the size of
the solution space.
"""

from __future__ import annotations

from ..errors import InvalidArgs
from ..fplinalg import FpMatrix, rank
from .primes import is_prime
from .residues import discrete_log_class

INF = "inf"


def _place(x):
    if isinstance(x, str):
        if x.lower() in ("inf", "infinity", "oo"):
            return INF
        x = int(x)
    if not (isinstance(x, int) and is_prime(x)):
        raise InvalidArgs(f"not a place of Q: {x!r}")
    return x


def _unit_characters(q, p, value):
    """F_p-coordinates of a unit of Z_q modulo p-th powers."""
    if q != p:
        if (q - 1) % p:
            return []
        return [discrete_log_class(value, q, p)]
    if p == 2:
        u = value % 8
        return [((u - 1) // 2) % 2, ((u * u - 1) // 8) % 2]
    # odd p: 1 + pZ_p modulo p-th powers is detected by (u^(p-1) - 1)/p mod p
    return [((pow(value, p - 1, p * p) - 1) // p) % p]


def vst_conditions(S, T, p):
    """Variables and the matrix of local conditions, as (labels, rows)."""
    if not is_prime(p):
        raise InvalidArgs(f"p = {p} is not prime")
    S = {_place(x) for x in S}
    T = {_place(x) for x in T}
    finite = sorted(x for x in S | T if x != INF)
    labels = (["sign"] if p == 2 else []) + finite
    nvar = len(labels)

    def images(q):
        """Unit-character columns of each basis element at the place q."""
        cols = []
        if p == 2:
            cols.append(_unit_characters(q, p, -1))
        for r in finite:
            cols.append(None if r == q else _unit_characters(q, p, r))
        return cols

    rows = []
    for q in sorted((x for x in S - T), key=str):
        if q == INF:
            if p == 2:
                rows.append([1] + [0] * (nvar - 1))
            continue
        # the valuation at q must vanish mod p
        rows.append([1 if lab == q else 0 for lab in labels])
        cols = images(q)
        width = len(_unit_characters(q, p, 1))
        for k in range(width):
            rows.append([0 if c is None else c[k] % p for c in cols])
    return labels, rows


def vst_dimension(S, T, p):
    labels, rows = vst_conditions(S, T, p)
    if not labels:
        return 0
    if not rows:
        return len(labels)
    return len(labels) - rank(FpMatrix.from_rows(rows, p, len(labels)))
