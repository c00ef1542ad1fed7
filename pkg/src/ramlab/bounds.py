"""Closed-form rank bounds and generator-rank formulas.

All bounds take a ``RamificationType``.  Counts refer to p-ranks of class
groups: ``upper_bound_Q`` bounds the narrow class group when p = 2, the
lower bounds refer to the ordinary class group.
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict
from math import comb

from .errors import InvalidType, InvalidArgs, CharDividesDegree, OverlapSets
from .arith.primes import is_prime
from .fplinalg import Echelon, vec_sub
from .presentation import validate_type

INF = "inf"


def _order_terms(t, overrides=None):
    validate_type(t)
    order = t.gamma.order
    sizes = list(t.inertia_orders)
    for i, s in (overrides or {}).items():
        if not 0 <= i < t.n:
            raise InvalidArgs(f"no ramified prime with index {i}")
        if s < 1 or order % s:
            raise InvalidArgs(f"|T°| = {s} does not divide |Gamma| = {order}")
        sizes[i] = s
    return order, sizes


def kurosh_rank(t):
    """Free rank of ker(free product of the I_i -> Gamma)."""
    order, sizes = _order_terms(t)
    return sum(order - order // s for s in sizes) - order + 1


def upper_bound_Q(t, wild_terms=None):
    """Upper bound for the narrow p-rank over Q.

    ``wild_terms`` maps an inertia index to the caller's choice of |T°_p|
    for a wildly ramified prime; wild primes are never guessed.
    """
    order, sizes = _order_terms(t, wild_terms)
    return (t.n - 1) * order - sum(order // s for s in sizes) + 1


def upper_bound_Fqt(t, q):
    """Upper bound over F_q(t) for fields split completely at infinity."""
    if q % t.p == 0:
        raise CharDividesDegree(f"p = {t.p} divides q = {q}")
    order, sizes = _order_terms(t)
    return (t.n - 1) * order - sum(order // s for s in sizes) + 1


def lower_bound_cyclic(t):
    validate_type(t)
    if not t.is_cyclic:
        raise InvalidType("cyclic bound needs cyclic Gamma")
    n = t.n
    if t.p == 2 and n >= 2 and t.arch is None and 2 in t.inertia_orders:
        return max(0, n - 2)
    return max(0, n - 1)


def _c(a, b):
    return comb(a, b) if a >= 0 and 0 <= b <= a else 0


def multiquad_terms(d, n, alpha_inf):
    """The per-degree summands i = 2..d-1 before clamping at zero."""
    if not all(isinstance(x, int) for x in (d, n, alpha_inf)):
        raise InvalidArgs("d, n and alpha_inf must be integers")
    if d < 1 or n < d:
        raise InvalidArgs(f"need n >= d >= 1, got d={d}, n={n}")
    if alpha_inf not in (1, 2):
        raise InvalidArgs("alpha_inf is 1 or 2")
    return {i: (i - 1) * _c(d, i) + (n - d) * _c(d - 1, i - 1) - n * _c(d - 1, i - 2)
            - _c(d, i - alpha_inf) for i in range(2, d)}


def lower_bound_multiquad(d, n, alpha_inf):
    terms = multiquad_terms(d, n, alpha_inf)
    return n - d + sum(max(0, v) for v in terms.values())


def lower_genus(t):
    """Genus-theory bound n - rank(Gamma), one less for real fields at p = 2."""
    validate_type(t)
    real_loss = 1 if t.p == 2 and t.arch is None else 0
    return max(0, t.n - t.gamma.rank - real_loss)


def ub_cyclic_secondary(t):
    """Rank reached by infinitely many cyclic fields of the given type."""
    validate_type(t)
    if not t.is_cyclic:
        raise InvalidType("needs cyclic Gamma")
    order = t.gamma.order
    return sum(order // s for s in t.inertia_orders) - 1


# --- nu and the central-extension lower bound ------------------------------

def relator_place_count(t):
    """Places carrying a local relator: every ramified prime, and the real
    place when p = 2."""
    return t.n + (1 if t.p == 2 else 0)


def central_quotient_dim(model):
    """dim N/M: coinvariants of the part of N inside the Frattini subgroup."""
    sub = model.frattini_kernel()
    if sub.dim == 0:
        return 0
    e = Echelon(model.p, model.N_dim)
    gens = model.type.gamma.generators()
    for v in sub.rows:
        for g in gens:
            e.add(vec_sub(model.act(g, v), v, model.p))
    return sub.dim - len(e)


def nu(model, relator_places=None):
    """min(0, dim N/M - number of relator places)."""
    t = getattr(model, "arch_type", None) or model.type
    count = relator_place_count(t) if relator_places is None else relator_places
    return min(0, central_quotient_dim(model) - count)


def prop_lower(model, relator_places=None):
    t = model.type
    return t.n - t.gamma.rank + nu(model, relator_places)


# --- generator rank of G_S^T -------------------------------------------------

@dataclass(frozen=True)
class FqtBase:
    q: int


def _is_inf(x):
    return isinstance(x, str) and x.lower() in ("inf", "infinity", "oo")


def _q_norm(x):
    if _is_inf(x):
        return None
    if not isinstance(x, int) or x < 2:
        raise InvalidArgs(f"not a prime of Q: {x!r}")
    if not is_prime(x):
        raise InvalidArgs(f"{x} is not prime")
    return x


def _fqt_norm(x, q):
    if _is_inf(x):
        return q
    norm = getattr(x, "norm", None)
    if norm is None:
        raise InvalidArgs(f"not a prime of F_q(t): {x!r}")
    if getattr(x, "q", q) != q:
        raise InvalidArgs("prime over a different constant field")
    return norm


def _key(x):
    return INF if _is_inf(x) else x


def generator_rank_ST(ctx, S, T, p):
    """Generator rank d of the maximal pro-p quotient of G_S^T.

    ``ctx`` is ``"Q"`` or an ``FqtBase``.  Primes of Q are ints or "inf";
    primes of F_q(t) are ``FqtPrime`` objects or "inf" (degree one).
    The vanishing hypothesis on B is the caller's responsibility.
    """
    S = {_key(x) for x in S}
    T = {_key(x) for x in T}
    if S & T:
        raise OverlapSets(f"S and T share {sorted(map(str, S & T))}")
    if ctx == "Q":
        delta = 1 if p == 2 else 0
        total = 1 - delta
        for x in S - T:
            if x == INF:
                total += 1 if p == 2 else 0
                continue
            norm = _q_norm(x)
            if norm == p:
                total += (1 if p == 2 else 0) + 1
            else:
                total += 1 if (norm - 1) % p == 0 else 0
        for x in T:
            _q_norm(x)
        return total - len(T | {INF})
    if isinstance(ctx, FqtBase):
        q = ctx.q
        if q % p == 0:
            raise CharDividesDegree(f"p = {p} divides q = {q}")
        delta = 1 if (q - 1) % p == 0 else 0
        total = 1 - delta
        for x in S - T:
            total += 1 if (_fqt_norm(x, q) - 1) % p == 0 else 0
        for x in T:
            _fqt_norm(x, q)
        return total - len(T)
    raise InvalidArgs(f"unknown base field {ctx!r}")


# --- report ------------------------------------------------------------------

@dataclass
class BoundsReport:
    kurosh: int
    upper: int
    lower_genus: int
    lower_special: int = None
    nu: int = None
    prop_lower: int = None
    secondary: int = None
    rank_interval: tuple = None
    notes: list = field(default_factory=list)

    def check(self):
        if self.lower_special is not None:
            assert self.lower_special <= self.upper
            assert self.lower_genus <= self.lower_special
        return True

    def as_dict(self):
        out = asdict(self)
        if self.rank_interval is not None:
            out["rank_interval"] = list(self.rank_interval)
        return out


def bounds_report(t, model=None):
    """Every bound that applies to ``t``; ``model`` enables nu."""
    validate_type(t)
    rep = BoundsReport(kurosh=kurosh_rank(t), upper=upper_bound_Q(t), lower_genus=lower_genus(t))
    rep.notes.append("upper bounds the narrow p-rank; lower bounds the ordinary p-rank")
    if t.is_cyclic:
        rep.lower_special = lower_bound_cyclic(t)
        rep.secondary = ub_cyclic_secondary(t)
        rep.notes.append("lower_special: cyclic genus-field bound")
    elif t.is_multiquad:
        rep.lower_special = lower_bound_multiquad(t.gamma.d, t.n, t.alpha_inf)
        rep.notes.append("lower_special: graded multiquadratic bound")
        if t.arch is None and t.n > t.gamma.d:
            rep.notes.append("real type with n > d: the degree-one part can be cut by x_inf")
    if model is not None:
        rep.nu = nu(model)
        rep.prop_lower = prop_lower(model)
    return rep
