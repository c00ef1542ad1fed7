"""
Finite abelian p-groups Gamma, F_p[Gamma]-modules, semidirect and wreath products.

Elements of an elementary abelian group are exponent tuples; elements of a
cyclic group are residues.  Group elements are listed in lexicographic
exponent order and that order indexes the regular module, so every matrix
built here is reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd

from . import fplinalg as fl
from .fplinalg import FpMatrix
from .errors import NotASubgroup, MixedGroups, InvalidType


@dataclass(frozen=True)
class GammaGroup:
    kind: str  # "elementary" or "cyclic"
    p: int
    d: int

    def __post_init__(self):
        if self.kind not in ("elementary", "cyclic"):
            raise InvalidType(f"unknown group kind {self.kind!r}")
        if self.d < 0:
            raise InvalidType("negative rank")

    @classmethod
    def elementary(cls, p, d):
        return cls("elementary", p, d)

    @classmethod
    def cyclic(cls, p, d):
        return cls("cyclic", p, d)

    @property
    def order(self):
        return self.p ** self.d

    @property
    def rank(self):
        """Minimal number of generators."""
        if self.d == 0:
            return 0
        return self.d if self.kind == "elementary" else 1

    @property
    def exponent(self):
        return self.p if self.kind == "elementary" else self.p ** self.d

    def zero(self):
        return (0,) * self.d if self.kind == "elementary" else 0

    def elements(self):
        if self.kind == "elementary":
            return list(itertools.product(range(self.p), repeat=self.d))
        return list(range(self.order))

    def index(self, g):
        if self.kind == "elementary":
            i = 0
            for e in g:
                i = i * self.p + e
            return i
        return g

    def element(self, i):
        if self.kind == "elementary":
            out = []
            for _ in range(self.d):
                out.append(i % self.p)
                i //= self.p
            return tuple(reversed(out))
        return i % self.order

    def normalize(self, g):
        if self.kind == "elementary":
            g = tuple(int(e) % self.p for e in g)
            if len(g) != self.d:
                raise InvalidType(f"element of length {len(g)} in rank-{self.d} group")
            return g
        return int(g) % self.order

    def add(self, a, b):
        if self.kind == "elementary":
            return tuple((x + y) % self.p for x, y in zip(a, b))
        return (a + b) % self.order

    def neg(self, a):
        if self.kind == "elementary":
            return tuple((-x) % self.p for x in a)
        return (-a) % self.order

    def mul(self, a, k):
        if self.kind == "elementary":
            return tuple((k * x) % self.p for x in a)
        return (k * a) % self.order

    def element_order(self, g):
        if self.kind == "elementary":
            return 1 if not any(g) else self.p
        if g == 0:
            return 1
        return self.order // gcd(g, self.order)

    def generators(self):
        if self.kind == "elementary":
            return [tuple(int(i == j) for j in range(self.d)) for i in range(self.d)]
        return [1] if self.d else []

    def generator_orders(self):
        return [self.exponent] * len(self.generators())

    def is_generator(self, g):
        return self.kind == "cyclic" and self.element_order(g) == self.order

    def subgroup(self, gens):
        return Subgroup.generated(self, gens)

    def whole(self):
        return self.subgroup(self.generators())

    def describe(self):
        if self.kind == "cyclic":
            return f"C{self.order}"
        return f"(C{self.p})^{self.d}"


@dataclass(frozen=True)
class Subgroup:
    """A subgroup normalized to a canonical generating set."""

    gamma: GammaGroup
    gens: tuple
    elements: frozenset = field(compare=False, repr=False)

    @classmethod
    def generated(cls, gamma, gens):
        gens = [gamma.normalize(g) for g in gens]
        if gamma.kind == "elementary":
            s = fl.span(gens, gamma.d, gamma.p) if gamma.d else None
            rows = tuple(tuple(fl.vector_entries(r, gamma.p, gamma.d)) if gamma.p == 2 else r
                         for r in (s.rows if s else ()))
            canon = rows
        else:
            g = gamma.order
            for h in gens:
                g = gcd(g, h)
            canon = () if g == gamma.order else (g,)
        elems = {gamma.zero()}
        frontier = list(elems)
        while frontier:
            new = []
            for a in frontier:
                for h in canon:
                    b = gamma.add(a, h)
                    if b not in elems:
                        elems.add(b)
                        new.append(b)
            frontier = new
        return cls(gamma, canon, frozenset(elems))

    @property
    def order(self):
        return len(self.elements)

    def is_cyclic(self):
        return any(self.gamma.element_order(g) == self.order for g in self.elements)

    def cyclic_generator(self):
        """Canonical generator of a cyclic subgroup (first in listing order)."""
        if self.gamma.kind == "cyclic":
            return self.gens[0] if self.gens else 0
        for g in sorted(self.elements):
            if self.gamma.element_order(g) == self.order:
                return g
        raise NotASubgroup("subgroup is not cyclic")

    def __contains__(self, g):
        return self.gamma.normalize(g) in self.elements

    def is_trivial(self):
        return self.order == 1

    def join(self, other):
        return Subgroup.generated(self.gamma, list(self.gens) + list(other.gens))


def closure(gens, mul, identity, cap=None):
    """All elements of the group generated by gens, by breadth-first search."""
    seen = {identity}
    frontier = [identity]
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                b = mul(a, g)
                if b not in seen:
                    seen.add(b)
                    new.append(b)
                    if cap is not None and len(seen) > cap:
                        raise RuntimeError("closure exceeded cap")
        frontier = new
    return seen


@dataclass(frozen=True)
class GammaModule:
    """A finite-dimensional F_p[Gamma]-module with explicit action matrices.

    ``action`` holds one matrix per generator of Gamma (same order as
    ``gamma.generators()``); ``generator`` is a distinguished vector, when
    the module is cyclic.
    """

    gamma: GammaGroup
    dim: int
    action: tuple
    tag: str = "Explicit"
    generator: object = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def p(self):
        return self.gamma.p

    def matrix(self, g):
        """Matrix of an arbitrary group element."""
        g = self.gamma.normalize(g)
        if g in self._cache:
            return self._cache[g]
        m = FpMatrix.identity(self.dim, self.p)
        if self.gamma.kind == "elementary":
            for e, a in zip(g, self.action):
                for _ in range(e):
                    m = a @ m
        else:
            for _ in range(g):
                m = self.action[0] @ m
        self._cache[g] = m
        return m

    def act(self, g, v):
        return self.matrix(g).apply(v)

    def check_relations(self):
        """Generator matrices commute and have the right orders."""
        n, p = self.dim, self.p
        ident = FpMatrix.identity(n, p)
        for a, order in zip(self.action, self.gamma.generator_orders()):
            m = ident
            for _ in range(order):
                m = a @ m
            if m != ident:
                return False
        for a, b in itertools.combinations(self.action, 2):
            if a @ b != b @ a:
                return False
        return True

    def zero(self):
        return fl.zero_vector(self.p, self.dim)


def regular_module(gamma):
    elems = gamma.elements()
    n = len(elems)
    mats = []
    for s in gamma.generators():
        rows = [[0] * n for _ in range(n)]
        for j, h in enumerate(elems):
            rows[gamma.index(gamma.add(s, h))][j] = 1
        mats.append(FpMatrix.from_rows(rows, gamma.p, n))
    return GammaModule(gamma, n, tuple(mats), "Regular", fl.unit_vector(0, gamma.p, n))


def build_trace_quotient(gamma, inertia):
    """F_p[Gamma]/(sum of the elements of the subgroup ``inertia``)."""
    if not isinstance(inertia, Subgroup):
        inertia = gamma.subgroup(inertia)
    if inertia.gamma != gamma:
        raise NotASubgroup("subgroup of a different group")
    if not inertia.is_cyclic():
        raise NotASubgroup("inertia must be a cyclic subgroup")
    reg = regular_module(gamma)
    p, n = gamma.p, reg.dim
    trace = [0] * n
    for h in inertia.elements:
        trace[gamma.index(h)] = 1
    trace = fl.as_vector(trace, p, n)
    ideal = fl.span([reg.act(g, trace) for g in gamma.elements()], n, p)
    ech = ideal.echelon()
    keep = ideal.complement_pivots()

    def project(v):
        r = ech.reduce(v)
        ent = fl.vector_entries(r, p, n)
        return fl.as_vector([ent[j] for j in keep], p, len(keep))

    mats = []
    for a in reg.action:
        cols = [fl.vector_entries(project(a.apply(fl.unit_vector(j, p, n))), p, len(keep))
                for j in keep]
        mats.append(FpMatrix.from_rows([[c[i] for c in cols] for i in range(len(keep))],
                                       p, len(keep)))
    gen = project(fl.unit_vector(0, p, n))
    return GammaModule(gamma, len(keep), tuple(mats), "QuotientByTrace", gen)


def trivial_module(gamma, k):
    return GammaModule(gamma, k, tuple(FpMatrix.identity(k, gamma.p) for _ in gamma.generators()),
                       "Explicit")


def augmentation_span(mats, sub, p):
    """Span of (g - 1) w over generator matrices g and basis vectors w of sub."""
    e = fl.Echelon(p, sub.ambient_dim)
    for a in mats:
        for w in sub.rows:
            e.add(fl.vec_sub(a.apply(w), w, p))
    return e.freeze()


def coinvariants_dim(m, sub=None):
    """dim of M/(augmentation ideal)M, or of a Gamma-stable subspace ``sub``."""
    if sub is None:
        sub = fl.full_space(m.dim, m.p)
    return sub.dim - augmentation_span(m.action, sub, m.p).dim


def gamma_span(vectors, mats, dim, p):
    """Smallest subspace containing ``vectors`` and stable under ``mats``."""
    e = fl.Echelon(p, dim)
    todo = []
    for v in vectors:
        if e.add(v):
            todo.append(v)
    while todo:
        v = todo.pop()
        for a in mats:
            w = a.apply(v)
            if e.add(w):
                todo.append(w)
    return e.freeze()


# --- semidirect products M x| Gamma --------------------------------------

@dataclass(frozen=True)
class SemidirectElement:
    module_part: object
    gamma_part: object
    group: "SemidirectProduct" = field(compare=False, repr=False, hash=False)


class SemidirectProduct:
    """M x| Gamma with (m1, g1)(m2, g2) = (m1 + g1.m2, g1 g2)."""

    def __init__(self, module):
        self.module = module
        self.gamma = module.gamma

    def element(self, m, g):
        m = fl.as_vector(m, self.module.p, self.module.dim)
        return SemidirectElement(m, self.gamma.normalize(g), self)

    def identity(self):
        return SemidirectElement(self.module.zero(), self.gamma.zero(), self)

    def _own(self, *xs):
        for x in xs:
            if x.group is not self:
                raise MixedGroups("element of a different semidirect product")

    def mul(self, a, b):
        self._own(a, b)
        p = self.module.p
        m = fl.vec_add(a.module_part, self.module.act(a.gamma_part, b.module_part), p)
        return SemidirectElement(m, self.gamma.add(a.gamma_part, b.gamma_part), self)

    def inv(self, a):
        self._own(a)
        g = self.gamma.neg(a.gamma_part)
        m = self.module.act(g, a.module_part)
        return SemidirectElement(fl.vec_scale(m, self.module.p - 1, self.module.p), g, self)

    def commutator(self, a, b):
        return self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))

    @property
    def order(self):
        return self.module.p ** self.module.dim * self.gamma.order


def semidirect_mul(a, b):
    if a.group is not b.group:
        raise MixedGroups("elements of different semidirect products")
    return a.group.mul(a, b)


def semidirect_inv(a):
    return a.group.inv(a)


# --- wreath products C_p wr (C_p)^u --------------------------------------

@dataclass(frozen=True)
class WreathElement:
    base: tuple
    top: tuple
    group: "WreathGroup" = field(compare=False, repr=False, hash=False)


class WreathGroup:
    """C_p wr (C_p)^u = F_p[(C_p)^u] x| (C_p)^u with the regular translation action.

    The base vector is indexed by elements of (C_p)^u in lexicographic order.
    """

    def __init__(self, p, u):
        self.p = p
        self.u = u
        self.top_group = GammaGroup.elementary(p, u)
        self._elems = self.top_group.elements()
        self._index = {h: i for i, h in enumerate(self._elems)}
        self.base_dim = len(self._elems)

    def element(self, base, top):
        base = tuple(int(b) % self.p for b in base)
        if len(base) != self.base_dim:
            raise MixedGroups("base vector has the wrong length")
        return WreathElement(base, self.top_group.normalize(top), self)

    def identity(self):
        return WreathElement((0,) * self.base_dim, self.top_group.zero(), self)

    def a(self):
        """Indicator of the identity in the base."""
        return self.element([1] + [0] * (self.base_dim - 1), self.top_group.zero())

    def g(self, q):
        """q-th unit vector of the top group."""
        return self.element([0] * self.base_dim, tuple(int(i == q) for i in range(self.u)))

    def translate(self, t, base):
        out = [0] * self.base_dim
        for i, h in enumerate(self._elems):
            out[self._index[self.top_group.add(t, h)]] = base[i]
        return tuple(out)

    def _own(self, *xs):
        for x in xs:
            if x.group is not self:
                raise MixedGroups("element of a different wreath product")

    def mul(self, x, y):
        self._own(x, y)
        shifted = self.translate(x.top, y.base)
        base = tuple((a + b) % self.p for a, b in zip(x.base, shifted))
        return WreathElement(base, self.top_group.add(x.top, y.top), self)

    def inv(self, x):
        self._own(x)
        t = self.top_group.neg(x.top)
        shifted = self.translate(t, x.base)
        return WreathElement(tuple((-b) % self.p for b in shifted), t, self)

    def commutator(self, x, y):
        return self.mul(self.mul(x, y), self.mul(self.inv(x), self.inv(y)))

    @property
    def order(self):
        return self.p ** self.base_dim * self.p ** self.u


def wreath_mul(x, y):
    if x.group is not y.group:
        raise MixedGroups("elements of different wreath products")
    return x.group.mul(x, y)


def wreath_inv(x):
    return x.group.inv(x)
