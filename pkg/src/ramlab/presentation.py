"""
Finite models of F = (free product of the inertia groups) / Phi(ker pi).

Three models share one interface:

* ``MultiquadModel``: Gamma = (C_2)^n with x_i -> e_i.  F is embedded in
  the product of the wreath products C_2 wr (C_2)^{#U} over pairs (U, p)
  with U a proper subset of the indices and p not in U; elements are
  multiplied componentwise.
* ``GeneralMultiquadModel``: Gamma = (C_2)^d with n > d.  F is the
  quotient of the n = n model by Phi(H), H the kernel of the map onto Gamma.
* ``CyclicModel``: Gamma cyclic of order p^d, realized as a semidirect
  product of trace quotients of F_p[Gamma] by Gamma.

Generator indices are 0-based throughout the code.  An element of the
relation module N is handled as a coordinate vector (an int bitset for
p = 2, a tuple otherwise) with respect to a fixed basis of N.
"""

from __future__ import annotations

import copy
import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from . import fplinalg as fl
from .fplinalg import BitMap, Echelon, FpMatrix
from .groups import GammaGroup, Subgroup, build_trace_quotient
from .errors import (InvalidType, InertiaDoesNotGenerate, ArchTooLarge,
                     NonCyclicInertia, NoFullInertia, SizeCapExceeded,
                     ComponentMismatch, WildPrimeUnsupported, IncompleteAssignment,
                     RequiresSquareCase)

MULTIQUAD_CAP = 4
GENERAL_CAP = 6
CYCLIC_ORDER_CAP = 27
CYCLIC_N_CAP = 4


# --- ramification types ---------------------------------------------------

def _bits_to_tuple(g, d):
    return tuple((g >> k) & 1 for k in range(d))


def _tuple_to_bits(t):
    out = 0
    for k, e in enumerate(t):
        if e % 2:
            out |= 1 << k
    return out


@dataclass(frozen=True)
class RamificationType:
    """Gamma, the inertia generators of the n ramified primes, and I_infinity.

    ``images[i]`` generates the inertia group I_i; ``arch`` generates
    I_infinity or is None when I_infinity is trivial.
    """

    gamma: GammaGroup
    images: tuple
    arch: object = None

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.gamma.normalize(g) for g in self.images))
        if self.arch is not None:
            a = self.gamma.normalize(self.arch)
            object.__setattr__(self, "arch", None if a == self.gamma.zero() else a)

    @classmethod
    def multiquad(cls, d, vectors, arch=None):
        gamma = GammaGroup.elementary(2, d)
        conv = [(_bits_to_tuple(v, d) if isinstance(v, int) else tuple(v)) for v in vectors]
        if isinstance(arch, int):
            arch = _bits_to_tuple(arch, d)
        return cls(gamma, tuple(conv), arch)

    @classmethod
    def standard_multiquad(cls, n, arch=None):
        return cls.multiquad(n, [1 << i for i in range(n)], arch)

    @classmethod
    def cyclic(cls, p, d, orders, imaginary=False):
        gamma = GammaGroup.cyclic(p, d)
        N = gamma.order
        images = []
        for o in orders:
            if o <= 1 or N % o:
                raise InvalidType(f"inertia order {o} does not divide {N}")
            images.append(N // o)
        arch = None
        if imaginary:
            if p != 2:
                raise ArchTooLarge("odd-order Gamma has trivial archimedean inertia")
            arch = N // 2
        return cls(gamma, tuple(images), arch)

    @classmethod
    def from_subgroups(cls, gamma, subgroups, arch=None):
        """Each entry is a list of generators of I_i; it must be cyclic."""
        images = []
        for gens in subgroups:
            sub = Subgroup.generated(gamma, gens)
            if not sub.is_cyclic():
                raise NonCyclicInertia(f"inertia generated by {gens} is not cyclic")
            images.append(sub.cyclic_generator())
        if arch is not None and not isinstance(arch, (int, tuple)):
            sub = Subgroup.generated(gamma, arch)
            if sub.order > 2:
                raise ArchTooLarge("archimedean inertia has order > 2")
            arch = sub.cyclic_generator() if sub.order == 2 else None
        return cls(gamma, tuple(images), arch)

    @property
    def n(self):
        return len(self.images)

    @property
    def p(self):
        return self.gamma.p

    @property
    def inertia(self):
        return tuple(Subgroup.generated(self.gamma, [g]) for g in self.images)

    @property
    def inertia_orders(self):
        return tuple(self.gamma.element_order(g) for g in self.images)

    @property
    def alpha_inf(self):
        return 1 if self.arch is None else 2

    @property
    def is_multiquad(self):
        return self.gamma.kind == "elementary" and self.gamma.p == 2

    @property
    def is_cyclic(self):
        return self.gamma.kind == "cyclic"

    def with_arch(self, arch):
        return RamificationType(self.gamma, self.images, arch)

    def as_dict(self):
        return {
            "gamma": {"kind": self.gamma.kind, "p": self.p, "d": self.gamma.d},
            "n": self.n,
            "inertia": [list(g) if isinstance(g, tuple) else g for g in self.images],
            "inertia_orders": list(self.inertia_orders),
            "arch": (list(self.arch) if isinstance(self.arch, tuple) else self.arch),
        }


def validate_type(t):
    """Raise on an invalid ramification type, else return True."""
    g = t.gamma
    if t.n == 0:
        if g.order != 1:
            raise InertiaDoesNotGenerate("no ramified primes but Gamma is nontrivial")
    for im in t.images:
        if im == g.zero():
            raise InvalidType("inertia subgroups must be nontrivial")
    joined = Subgroup.generated(g, list(t.images))
    if joined.order != g.order:
        raise InertiaDoesNotGenerate("inertia subgroups do not generate Gamma")
    if t.arch is not None:
        if g.p != 2:
            raise ArchTooLarge("odd-order Gamma must have trivial archimedean inertia")
        if g.element_order(t.arch) > 2:
            raise ArchTooLarge("archimedean inertia has order > 2")
    return True


# --- elements and assignments --------------------------------------------

@dataclass(frozen=True)
class FElement:
    """Element of a finite model; ``top`` is the internal Gamma-shadow."""

    top: object
    body: object
    model: object = field(compare=False, hash=False, repr=False)


@dataclass(frozen=True)
class Coset:
    representative: object
    direction: fl.Subspace

    def __contains__(self, v):
        return fl.contains(self.direction, fl.vec_sub(v, self.representative, self.direction.p))

    def elements(self):
        p = self.direction.p
        rows = self.direction.rows
        for coeffs in itertools.product(range(p), repeat=len(rows)):
            v = self.representative
            for c, r in zip(coeffs, rows):
                if c:
                    v = fl.vec_add(v, fl.vec_scale(r, c, p), p)
            yield v

    @property
    def size(self):
        return self.direction.p ** self.direction.dim


@dataclass(frozen=True)
class FrobeniusAssignment:
    """Frobenius lifts y_i and the archimedean lift x_inf.

    ``sigmas`` optionally records the prescribed Gamma-images; they are
    checked against the lifts.
    """

    lifts: tuple
    arch_lift: object = None
    sigmas: tuple = None


def _root(model):
    return getattr(model, "base", model)


# --- shared model machinery ----------------------------------------------

class _Model:
    p = 2
    type: RamificationType
    n: int
    N_dim: int

    # subclasses provide: identity, gen, mul, inv, gamma_image, n_vector,
    # from_n_vector, lift, frattini_coords, _gamma_maps (dict elem -> callable)

    def _own(self, *xs):
        for x in xs:
            if not isinstance(x, FElement) or _root(x.model) is not _root(self):
                raise ComponentMismatch("element belongs to a different model")

    def commutator(self, a, b):
        return self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))

    def power(self, a, k):
        out = self.identity()
        base = a
        if k < 0:
            base, k = self.inv(a), -k
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def word(self, letters):
        """Product of generators; letters are indices or (index, exponent)."""
        out = self.identity()
        for l in letters:
            i, e = (l, 1) if isinstance(l, int) else l
            out = self.mul(out, self.power(self.gen(i), e))
        return out

    def iterated(self, indices, last=None):
        """[x_{s1}, [x_{s2}, ..., [x_{s_{m-1}}, x_{s_m}]]]; ``last`` replaces x_{s_m}."""
        idx = list(indices)
        cur = last if last is not None else self.gen(idx.pop())
        for i in reversed(idx):
            cur = self.commutator(self.gen(i), cur)
        return cur

    def is_identity(self, a):
        return a == self.identity()

    def act(self, g, v):
        return self._gamma_maps[self.type.gamma.normalize(g)](v)

    def act_gen(self, i, v):
        """Action of x_i on an N-vector (conjugation)."""
        return self.act(self.type.images[i], v)

    def gamma_span(self, vectors):
        gens = [self._gamma_maps[g] for g in self.type.gamma.generators()]
        e = Echelon(self.p, self.N_dim)
        todo = []
        for v in vectors:
            if e.add(v):
                todo.append(v)
        while todo:
            v = todo.pop()
            for f in gens:
                w = f(v)
                if e.add(w):
                    todo.append(w)
        return e.freeze()

    def gamma_matrices(self):
        out = []
        for g in self.type.gamma.generators():
            cols = [fl.vector_entries(self.act(g, fl.unit_vector(j, self.p, self.N_dim)),
                                      self.p, self.N_dim) for j in range(self.N_dim)]
            out.append(FpMatrix.from_rows([[c[i] for c in cols] for i in range(self.N_dim)],
                                          self.p, self.N_dim))
        return out

    def N_space(self):
        return fl.full_space(self.N_dim, self.p)

    def elements(self):
        """Every element of F (small models only)."""
        vecs = list(_all_vectors(self.p, self.N_dim))
        for g in self.type.gamma.elements():
            w = self.lift(g)
            for v in vecs:
                yield self.mul(w, self.from_n_vector(v))

    @property
    def order(self):
        return self.type.gamma.order * self.p ** self.N_dim

    def relator_value_space(self, i):
        """Direction (sigma_{x_i} - 1) N of every relator coset at index i."""
        e = Echelon(self.p, self.N_dim)
        for j in range(self.N_dim):
            u = fl.unit_vector(j, self.p, self.N_dim)
            e.add(fl.vec_sub(self.act_gen(i, u), u, self.p))
        return e.freeze()

    def frattini_kernel(self):
        """N intersected with Phi(F), as a subspace of N-coordinates."""
        cols = [self.frattini_coords(self.from_n_vector(fl.unit_vector(j, self.p, self.N_dim)))
                for j in range(self.N_dim)]
        m = FpMatrix.from_rows([[c[i] for c in cols] for i in range(self.n)], self.p, self.N_dim)
        return fl.kernel(m)

    def _schreier_dim(self):
        return self.N_dim

    def _schreier_vec(self, a):
        return self.n_vector(a)

    def schreier_order(self):
        """Order of the subgroup generated by the x_i, via Schreier generators."""
        gamma = self.type.gamma
        reps = {gamma.zero(): self.identity()}
        frontier = [gamma.zero()]
        e = Echelon(self.p, self._schreier_dim())
        while frontier:
            new = []
            for g in frontier:
                t = reps[g]
                for i in range(self.n):
                    h = gamma.add(g, self.type.images[i])
                    prod = self.mul(t, self.gen(i))
                    if h not in reps:
                        reps[h] = prod
                        new.append(h)
                    else:
                        e.add(self._schreier_vec(self.mul(prod, self.inv(reps[h]))))
            frontier = new
        # closing the frontier leaves Schreier generators for the spanning tree edges
        for g, t in reps.items():
            for i in range(self.n):
                h = gamma.add(g, self.type.images[i])
                e.add(self._schreier_vec(self.mul(self.mul(t, self.gen(i)), self.inv(reps[h]))))
        return len(reps) * self.p ** len(e)


def _all_vectors(p, dim):
    if p == 2:
        return range(1 << dim)
    return itertools.product(range(p), repeat=dim)


# --- multiquadratic, n = d -----------------------------------------------

class MultiquadModel(_Model):
    """Faithful model of F for Gamma = (C_2)^n, n ramified primes, x_i -> e_i."""

    def __init__(self, n, cap=MULTIQUAD_CAP):
        if n < 1:
            raise InvalidType("need at least one generator")
        if n > cap:
            raise SizeCapExceeded(f"n = {n} exceeds the multiquadratic cap {cap}")
        self.n = n
        self.p = 2
        self.type = RamificationType.standard_multiquad(n)
        comps = []
        for k in range(n):
            for U in itertools.combinations(range(n), k):
                for q in range(n):
                    if q not in U:
                        comps.append((U, q))
        self.components = comps
        offsets, o = [], 0
        for U, _ in comps:
            offsets.append(o)
            o += 1 << len(U)
        self.offsets = offsets
        self.ambient_dim = o
        # local top of each global Gamma-element in each component
        self.local_top = []
        for U, _ in comps:
            row = []
            for g in range(1 << n):
                t = 0
                for j, q in enumerate(U):
                    if (g >> q) & 1:
                        t |= 1 << j
                row.append(t)
            self.local_top.append(row)
        self._trans = []
        for g in range(1 << n):
            imgs = []
            for c, (U, _) in enumerate(comps):
                t = self.local_top[c][g]
                for h in range(1 << len(U)):
                    imgs.append(1 << (offsets[c] + (h ^ t)))
            self._trans.append(BitMap(imgs, o))
        self._gens = []
        for i in range(n):
            b = 0
            for c, (U, q) in enumerate(comps):
                if q == i:
                    b |= 1 << offsets[c]
            self._gens.append(FElement(1 << i, b, self))
        # relation module: Gamma-span of the [x_i, x_j]
        e = Echelon(2, o)
        todo = []
        for i, j in itertools.combinations(range(n), 2):
            v = self.commutator(self._gens[i], self._gens[j]).body
            if e.add(v):
                todo.append(v)
        while todo:
            v = todo.pop()
            for k in range(n):
                w = self._trans[1 << k](v)
                if e.add(w):
                    todo.append(w)
        self.N_basis = e.freeze()
        self.N_dim = self.N_basis.dim
        self._pivots = self.N_basis.pivots
        self._gamma_maps = {}
        for g in range(1 << n):
            imgs = [self._coords(self._trans[g](r)) for r in self.N_basis.rows]
            self._gamma_maps[_bits_to_tuple(g, n)] = BitMap(imgs, self.N_dim)
        expected = (n - 2) * 2 ** (n - 1) + 1
        if self.N_dim != expected:
            raise AssertionError(f"dim N = {self.N_dim}, expected {expected}")
        self.graded = _lower_central(self)
        self.faithful_order = self.schreier_order()
        if self.faithful_order != 2 ** (n + expected):
            raise AssertionError("generator images are not jointly faithful")

    def _schreier_dim(self):
        return self.ambient_dim

    def _schreier_vec(self, a):
        if a.top:
            raise AssertionError("Schreier generator with nontrivial Gamma-image")
        return a.body

    # element arithmetic
    def identity(self):
        return FElement(0, 0, self)

    def gen(self, i):
        return self._gens[i]

    def mul(self, a, b):
        return FElement(a.top ^ b.top, a.body ^ self._trans[a.top](b.body), self)

    def inv(self, a):
        return FElement(a.top, self._trans[a.top](a.body), self)

    def gamma_image(self, a):
        return _bits_to_tuple(a.top, self.n)

    def _coords(self, b):
        v = 0
        for k, piv in enumerate(self._pivots):
            if (b >> piv) & 1:
                v |= 1 << k
        return v

    def n_vector(self, a):
        self._own(a)
        if a.top:
            raise InvalidType("element has nontrivial Gamma-image")
        v = self._coords(a.body)
        if self.N_basis.from_coordinates(fl.vector_entries(v, 2, self.N_dim)) != a.body:
            raise AssertionError("element outside the relation module")
        return v

    def from_n_vector(self, v):
        return FElement(0, self.N_basis.from_coordinates(fl.vector_entries(v, 2, self.N_dim)), self)

    def lift(self, sigma):
        g = _tuple_to_bits(self.type.gamma.normalize(sigma))
        return self.word([i for i in range(self.n) if (g >> i) & 1])

    def frattini_coords(self, a):
        out = [0] * self.n
        for c, (U, q) in enumerate(self.components):
            if not U:
                out[q] = (a.body >> self.offsets[c]) & 1
        return out

    def component(self, a, c):
        """(base bits, local top) of a in component c."""
        U, _ = self.components[c]
        size = 1 << len(U)
        return (a.body >> self.offsets[c]) & ((1 << size) - 1), self.local_top[c][a.top]

    def in_kernel(self, a, c):
        base, top = self.component(a, c)
        return base == 0 and top == 0


@lru_cache(maxsize=None)
def build_multiquad(n, cap=MULTIQUAD_CAP):
    return MultiquadModel(n, cap)


# --- multiquadratic, n > d -----------------------------------------------

class GeneralMultiquadModel(_Model):
    """F_{n,d} realized as F_{n,n} / Phi(H), H = ker(F_{n,n} -> Gamma)."""

    def __init__(self, t, cap=GENERAL_CAP):
        validate_type(t)
        if not t.is_multiquad:
            raise InvalidType("Gamma must be elementary abelian of exponent 2")
        n, d = t.n, t.gamma.d
        if n <= d:
            raise InvalidType("use build_multiquad for n = d")
        if n > cap:
            raise SizeCapExceeded(f"n = {n} exceeds the cap {cap}")
        self.type = t.with_arch(None)
        self.arch_type = t
        self.n, self.d, self.p = n, d, 2
        parent = build_multiquad(n, max(n, MULTIQUAD_CAP))
        self.parent = parent
        self.v = [_tuple_to_bits(g) for g in t.images]
        # minimal-weight preimage in (C_2)^n of each Gamma-element
        pre = {}
        for g in sorted(range(1 << n), key=lambda x: (bin(x).count("1"), x)):
            pre.setdefault(self._beta(g), g)
        self._preimage = pre
        # kernel K of (C_2)^n -> Gamma with its RREF basis
        kmat = FpMatrix.from_rows([[(self.v[i] >> k) & 1 for i in range(n)] for k in range(d)],
                                  2, n)
        self.K = fl.kernel(kmat)
        self.k_dim = self.K.dim
        self._k_pivots = self.K.pivots
        self._h = [parent.word([i for i in range(n) if (k >> i) & 1]) for k in self.K.rows]
        # Phi(H) inside N_{n,n}: squares and commutators of the h_j, and (1 + sigma_h) N
        gens = []
        for j, h in enumerate(self._h):
            gens.append(parent.mul(h, h).body)
            for k in range(j + 1, len(self._h)):
                gens.append(parent.commutator(h, self._h[k]).body)
            for r in parent.N_basis.rows:
                gens.append(r ^ parent._trans[h.top](r))
        e = Echelon(2, parent.ambient_dim)
        todo = []
        for w in gens:
            if e.add(w):
                todo.append(w)
        while todo:
            w = todo.pop()
            for k in self.K.rows:
                x = parent._trans[k](w)
                if e.add(x):
                    todo.append(x)
        phi = e.freeze()
        for w in phi.rows:
            for k in range(n):
                if not fl.contains(phi, parent._trans[1 << k](w)):
                    raise AssertionError("Phi(H) is not normal")
        self.phi_packed = phi
        self._phi_ech = phi.echelon()
        self.phi_N = fl.span([parent._coords(w) for w in phi.rows], parent.N_dim, 2)
        self._phiN_ech = self.phi_N.echelon()
        self._q_cols = self.phi_N.complement_pivots()
        self.N_dim = self.k_dim + len(self._q_cols)
        expected = (n - 2) * 2 ** (d - 1) + 1
        if self.N_dim != expected:
            raise AssertionError(f"dim N = {self.N_dim}, expected {expected}")
        self._gens = [self._reduce(parent.gen(i)) for i in range(n)]
        self._gamma_maps = {}
        for g in t.gamma.elements():
            lift = self.lift(g)
            imgs = []
            for j in range(self.N_dim):
                x = self.from_n_vector(1 << j)
                imgs.append(self.n_vector(self.mul(self.mul(lift, x), self.inv(lift))))
            self._gamma_maps[g] = BitMap(imgs, self.N_dim)
        self.graded = _lower_central(self)
        self.basis_choice = _basis_choice(self)

    def _beta(self, g):
        out = 0
        for i in range(self.n):
            if (g >> i) & 1:
                out ^= self.v[i]
        return _bits_to_tuple(out, self.d)

    def _reduce(self, a):
        return FElement(a.top, self._phi_ech.reduce(a.body), self)

    def _up(self, a):
        return FElement(a.top, a.body, self.parent)

    def identity(self):
        return FElement(0, 0, self)

    def gen(self, i):
        return self._gens[i]

    def mul(self, a, b):
        pa = self.parent
        return FElement(a.top ^ b.top,
                        self._phi_ech.reduce(a.body ^ pa._trans[a.top](b.body)), self)

    def inv(self, a):
        return FElement(a.top, self._phi_ech.reduce(self.parent._trans[a.top](a.body)), self)

    def gamma_image(self, a):
        return self._beta(a.top)

    def _section(self, kappa):
        pa = self.parent
        out = pa.identity()
        for j, h in enumerate(self._h):
            if (kappa >> j) & 1:
                out = pa.mul(out, h)
        return out

    def n_vector(self, a):
        self._own(a)
        if any(self._beta(a.top)):
            raise InvalidType("element has nontrivial Gamma-image")
        kappa = 0
        for j, piv in enumerate(self._k_pivots):
            if (a.top >> piv) & 1:
                kappa |= 1 << j
        pa = self.parent
        nu = pa.mul(pa.inv(self._section(kappa)), self._up(a))
        if nu.top:
            raise AssertionError("section does not match the kernel coordinates")
        c = self._phiN_ech.reduce(pa._coords(nu.body))
        q = 0
        for j, col in enumerate(self._q_cols):
            if (c >> col) & 1:
                q |= 1 << j
        return kappa | (q << self.k_dim)

    def from_n_vector(self, v):
        pa = self.parent
        kappa = v & ((1 << self.k_dim) - 1)
        q = v >> self.k_dim
        c = 0
        for j, col in enumerate(self._q_cols):
            if (q >> j) & 1:
                c |= 1 << col
        nu = pa.from_n_vector(c)
        return self._reduce(pa.mul(self._section(kappa), nu))

    def lift(self, sigma):
        g = self._preimage[self.type.gamma.normalize(sigma)]
        return self.word([i for i in range(self.n) if (g >> i) & 1])

    def frattini_coords(self, a):
        return self.parent.frattini_coords(a)


def build_general_multiquad(t, cap=GENERAL_CAP):
    return GeneralMultiquadModel(t, cap)


def _basis_choice(model):
    """e_j for each j >= d: smallest index that can be swapped out for x_j."""
    d, n = model.d, model.n
    first = fl.span(model.v[:d], d, 2)
    if first.dim != d:
        return None
    out = {}
    for j in range(d, n):
        for e in range(d):
            vecs = [model.v[k] for k in range(d) if k != e] + [model.v[j]]
            if fl.span(vecs, d, 2).dim == d:
                out[j] = e
                break
    return out


# --- lower central series --------------------------------------------------

def _lower_central(model):
    """Subspaces F_(i) of N for i >= 2 (index 0 holds F_(2)), ending with 0."""
    pairs = [model.n_vector(model.commutator(model.gen(i), model.gen(j)))
             for i, j in itertools.combinations(range(model.n), 2)]
    cur = model.gamma_span(pairs)
    out = [cur]
    while cur.dim:
        e = Echelon(model.p, model.N_dim)
        for i in range(model.n):
            for w in cur.rows:
                e.add(fl.vec_sub(model.act_gen(i, w), w, model.p))
        cur = e.freeze()
        out.append(cur)
    return out


def graded_dims(model):
    """(dim gr_1, dim gr_2, ...) for a multiquadratic model; gr_1 = F/F_(2)."""
    if not isinstance(model, (MultiquadModel, GeneralMultiquadModel)):
        raise InvalidType("graded dimensions are computed for multiquadratic models")
    dims = [model.n]
    for a, b in zip(model.graded, model.graded[1:]):
        dims.append(a.dim - b.dim)
    while len(dims) > 1 and dims[-1] == 0:
        dims.pop()
    return tuple(dims)


def degree_one_dim(model):
    """dim of N/(N meet F_(2)): the part of N not reached by commutators."""
    return model.N_dim - model.graded[0].dim


def graded_degree(model, v):
    """Largest k with v in F_(k) (v in N); 1 if v lies outside F_(2)."""
    if fl.is_zero(v):
        return None
    k = 1
    for sub in model.graded:
        if not fl.contains(sub, v):
            return k
        k += 1
    return k


def basis_elements(model, i):
    """Type I (and for n > d Type II) elements listed for gr_i, as N-vectors."""
    if isinstance(model, MultiquadModel):
        d, n, choice = model.n, model.n, {}
    else:
        d, n, choice = model.d, model.n, model.basis_choice
        if choice is None:
            raise InvalidType("the first d inertia generators must form a basis")
    out = []
    for s in itertools.combinations(range(d), i):
        for r in range(i - 1):
            rot = s[r:] + s[:r]
            out.append(model.n_vector(model.iterated(rot)))
    for j in range(d, n):
        pool = [k for k in range(d) if k != choice[j]]
        for s in itertools.combinations(pool, i - 1):
            out.append(model.n_vector(model.iterated(list(s) + [j])))
    return out


def check_basis_elements(model):
    """True iff the listed elements give a basis of every gr_i, i >= 2."""
    dims = graded_dims(model)
    for i in range(2, len(dims) + 1):
        elems = basis_elements(model, i)
        if len(elems) != dims[i - 1]:
            return False
        lower = model.graded[i - 1]  # F_(i+1)
        e = lower.echelon()
        for v in elems:
            if not fl.contains(model.graded[i - 2], v):
                return False
            if not e.add(v):
                return False
    return True


# --- cyclic Gamma ----------------------------------------------------------

class CyclicModel(_Model):
    """(sum over i >= 2 of F_p[Gamma]/(trace of I_i)) x| Gamma for Gamma cyclic."""

    def __init__(self, t, order_cap=CYCLIC_ORDER_CAP, n_cap=CYCLIC_N_CAP):
        validate_type(t)
        if not t.is_cyclic:
            raise InvalidType("Gamma must be cyclic")
        gamma = t.gamma
        if gamma.order > order_cap or t.n > n_cap:
            raise SizeCapExceeded("cyclic model exceeds the size cap")
        full = [i for i, g in enumerate(t.images) if gamma.is_generator(g)]
        if not full:
            raise NoFullInertia("some inertia group must be all of Gamma")
        first = full[0]
        self.original_index = [first] + [i for i in range(t.n) if i != first]
        t = RamificationType(gamma, tuple(t.images[i] for i in self.original_index), t.arch)
        self.arch_type = t
        self.type = t.with_arch(None)
        self.p, self.n = gamma.p, t.n
        p = self.p
        self.blocks = [build_trace_quotient(gamma, t.inertia[i]) for i in range(1, self.n)]
        offs, o = [], 0
        for b in self.blocks:
            offs.append(o)
            o += b.dim
        self.block_offsets = offs
        self.N_dim = o
        mats = {}
        for g in gamma.elements():
            rows = [[0] * o for _ in range(o)]
            for b, off in zip(self.blocks, offs):
                m = b.matrix(g)
                for r in range(b.dim):
                    for c in range(b.dim):
                        rows[off + r][off + c] = m.entry(r, c)
            mats[g] = fl.compile_matrix(FpMatrix.from_rows(rows, p, o)) if o else (lambda v: v)
        self._gamma_maps = mats
        zero = fl.zero_vector(p, o)
        self._zero = zero
        gens = [FElement(t.images[0], zero, self)]
        for i in range(1, self.n):
            b, off = self.blocks[i - 1], offs[i - 1]
            ent = [0] * o
            for k, e in enumerate(fl.vector_entries(b.generator, p, b.dim)):
                ent[off + k] = e
            gens.append(FElement(t.images[i], fl.as_vector(ent, p, o), self))
        self._gens = gens
        self._x1_inv = pow(t.images[0], -1, gamma.order)
        expected = sum(gamma.order - gamma.order // k for k in t.inertia_orders[1:])
        if self.N_dim != expected:
            raise AssertionError("relation module dimension mismatch")
        for i, k in enumerate(t.inertia_orders):
            if not self.is_identity(self.power(gens[i], k)):
                raise AssertionError(f"x_{i} does not have order {k}")
        self.codomain_order = gamma.order * p ** o
        if self.schreier_order() != self.codomain_order:
            raise AssertionError("generator images do not generate the codomain")

    def identity(self):
        return FElement(0, self._zero, self)

    def gen(self, i):
        return self._gens[i]

    def mul(self, a, b):
        g = self.type.gamma
        return FElement(g.add(a.top, b.top),
                        fl.vec_add(a.body, self._gamma_maps[a.top](b.body), self.p), self)

    def inv(self, a):
        g = self.type.gamma.neg(a.top)
        m = self._gamma_maps[g](a.body)
        return FElement(g, fl.vec_scale(m, self.p - 1, self.p), self)

    def gamma_image(self, a):
        return a.top

    def n_vector(self, a):
        self._own(a)
        if a.top:
            raise InvalidType("element has nontrivial Gamma-image")
        return a.body

    def from_n_vector(self, v):
        return FElement(0, v, self)

    def lift(self, sigma):
        k = (self.type.gamma.normalize(sigma) * self._x1_inv) % self.type.gamma.order
        return self.power(self.gen(0), k)

    def augmentations(self, a):
        """Augmentation of each block of the module part (indices 1..n-1)."""
        p = self.p
        ent = fl.vector_entries(a.body, p, self.N_dim)
        out = []
        for b, off in zip(self.blocks, self.block_offsets):
            # quotient coordinates hold a genuine representative in F_p[Gamma]
            out.append(sum(ent[off:off + b.dim]) % p)
        return out

    def frattini_coords(self, a):
        """Coordinates of the image in F/Phi(F) w.r.t. the images of x_1..x_n."""
        p = self.p
        aug = self.augmentations(a)
        imgs = self.type.images
        g = a.top % p
        c1 = (g - sum(c * (imgs[i + 1] % p) for i, c in enumerate(aug))) * pow(imgs[0] % p, -1, p)
        return [c1 % p] + aug

    def commutator_subgroup(self):
        """[F, F] as a subspace of N: the augmentation-zero part of every block."""
        return self.frattini_kernel()


def build_cyclic(t, **caps):
    return CyclicModel(t, **caps)


def build_model(t):
    """Dispatch on the kind of Gamma."""
    if t.is_cyclic:
        m = build_cyclic(t)
    elif t.is_multiquad and t.n == t.gamma.d:
        std = RamificationType.standard_multiquad(t.n)
        if t.images != std.images:
            raise InvalidType("for n = d list the inertia generators as the standard basis")
        m = build_multiquad(t.n)
    else:
        m = build_general_multiquad(t)
    return m if t.arch is None else with_arch(m, t.arch)


def with_arch(model, arch):
    """Shallow copy of ``model`` whose type carries the archimedean datum."""
    new = copy.copy(model)
    new.base = getattr(model, "base", model)
    new.arch_type = model.type.with_arch(arch)
    return new


def arch_of(model):
    t = getattr(model, "arch_type", None)
    return None if t is None else t.arch


# --- relators and conditional ranks ---------------------------------------

def relator_image(model, i, y, norm=None):
    """N-vector of the local relator [x_i, y] (tame: x_i^Nm = x_i in F)."""
    model._own(y)
    if norm is not None:
        order = model.type.inertia_orders[i]
        if norm % model.p == 0:
            raise WildPrimeUnsupported("wild relators are not modelled")
        if (norm - 1) % order:
            raise InvalidType(f"norm {norm} is not 1 mod |I_i| = {order}")
    return model.n_vector(model.commutator(model.gen(i), y))


def relator_coset(model, i, sigma):
    """All values of [x_i, y] as y ranges over lifts with Gamma-image sigma."""
    w = model.lift(sigma)
    return Coset(relator_image(model, i, w), model.relator_value_space(i))


def arch_square_coset(model, sigma):
    """Values of x_inf^2 over lifts x_inf with Gamma-image sigma."""
    w = model.lift(sigma)
    e = Echelon(model.p, model.N_dim)
    for j in range(model.N_dim):
        u = fl.unit_vector(j, model.p, model.N_dim)
        e.add(fl.vec_add(model.act(sigma, u), u, model.p))
    return Coset(model.n_vector(model.mul(w, w)), e.freeze())


def _arch_vector(model, fa, narrow):
    arch = arch_of(model)
    x = fa.arch_lift
    p = model.p
    if p != 2:
        return None
    if arch is not None:
        if x is None:
            raise IncompleteAssignment("imaginary type needs an archimedean lift")
        model._own(x)
        if model.gamma_image(x) != arch:
            raise InvalidType("archimedean lift has the wrong Gamma-image")
        return model.n_vector(model.mul(x, x))
    if narrow:
        return None
    if x is None:
        raise IncompleteAssignment("ordinary rank of a real field needs x_inf")
    model._own(x)
    return model.n_vector(x)


def relator_module(model, fa, narrow):
    if len(fa.lifts) != model.n:
        raise IncompleteAssignment(f"{len(fa.lifts)} lifts for {model.n} primes")
    if fa.sigmas is not None:
        for y, s in zip(fa.lifts, fa.sigmas):
            if s is not None and model.gamma_image(y) != model.type.gamma.normalize(s):
                raise InvalidType("lift does not have the prescribed Gamma-image")
    vecs = [relator_image(model, i, y) for i, y in enumerate(fa.lifts)]
    a = _arch_vector(model, fa, narrow)
    if a is not None:
        vecs.append(a)
    return model.gamma_span(vecs)


def conditional_class_rank(model, fa, narrow):
    """dim N minus the dimension of the submodule generated by the relators."""
    return model.N_dim - relator_module(model, fa, narrow).dim


def kp_condition(model, fa):
    """Whether every y_q lies in ker pi_{U,p} for all U, p with q, p outside U, p != q."""
    if not isinstance(model, MultiquadModel):
        raise RequiresSquareCase("the kernel condition is defined for n = d")
    if len(fa.lifts) != model.n:
        raise IncompleteAssignment("need one lift per prime")
    for q, y in enumerate(fa.lifts):
        model._own(y)
        for c, (U, p) in enumerate(model.components):
            if q in U or p == q:
                continue
            if not model.in_kernel(y, c):
                return False
    return True


def trivial_assignment(model, arch_lift=None):
    return FrobeniusAssignment(tuple(model.identity() for _ in range(model.n)), arch_lift)


# --- serialization ----------------------------------------------------------

def _vec_json(v, p, dim):
    return fl.vector_entries(v, p, dim)


def model_dump(model):
    """JSON-ready description with a stable key order."""
    out = {
        "schema": "ramlab.model/1",
        "kind": type(model).__name__,
        "type": arch_type_dict(model),
        "N_dim": model.N_dim,
        "graded_dims": list(graded_dims(model)) if not isinstance(model, CyclicModel) else None,
        "generators": [],
        "action": [m.row_list() for m in model.gamma_matrices()],
    }
    if isinstance(model, MultiquadModel):
        out["components"] = [{"U": [u + 1 for u in U], "p": q + 1} for U, q in model.components]
        for i in range(model.n):
            x = model.gen(i)
            out["generators"].append({
                "gamma": list(model.gamma_image(x)),
                "components": [list(model.component(x, c)) for c in range(len(model.components))],
            })
        out["N_basis"] = [_vec_json(r, 2, model.ambient_dim) for r in model.N_basis.rows]
    elif isinstance(model, GeneralMultiquadModel):
        out["parent_n"] = model.n
        out["phi_H_dim"] = model.phi_N.dim
        out["kernel_basis"] = [_vec_json(k, 2, model.n) for k in model.K.rows]
        out["basis_choice"] = ({str(j + 1): e + 1 for j, e in model.basis_choice.items()}
                               if model.basis_choice is not None else None)
        for i in range(model.n):
            out["generators"].append({"gamma": list(model.gamma_image(model.gen(i)))})
    else:
        out["inertia_order"] = [model.original_index[i] + 1 for i in range(model.n)]
        out["blocks"] = [{"dim": b.dim, "offset": o} for b, o in
                         zip(model.blocks, model.block_offsets)]
        for i in range(model.n):
            x = model.gen(i)
            out["generators"].append({"gamma": x.top,
                                      "module": _vec_json(x.body, model.p, model.N_dim)})
    return out


def arch_type_dict(model):
    t = getattr(model, "arch_type", None) or model.type
    return t.as_dict()
