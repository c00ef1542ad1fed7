"""Multiquadratic and cyclic fields over Q: ramification types and Frobenius data.

A multiquadratic field Q(sqrt m_1, ..., sqrt m_d) is stored through a
canonical basis of its square-class group.  Gamma = (C_2)^d is identified
with the dual group: coordinate k of a Gamma-element is 1 iff it changes
the sign of sqrt m_k.

A cyclic field is given by primes l_i with exponents m_i; it is the
subfield of the compositum of the E_{p^{m_i}}(l_i) cut out by the map
prod I_i -> Gamma = C_{p^d} sending the fixed generator of I_i to
p^{d - m_i}.
"""

from __future__ import annotations

from dataclasses import dataclass

from .. import fplinalg as fl
from ..errors import WildPrime, NotIndependent, InvalidArgs, BadModulus
from ..groups import GammaGroup
from ..presentation import RamificationType, validate_type
from .primes import is_prime, factorize
from .residues import legendre, discrete_log_class

INF = "inf"


@dataclass(frozen=True)
class PrimeQ:
    """A place of Q: a rational prime or the archimedean place."""

    value: object

    def __post_init__(self):
        if self.value != INF and not (isinstance(self.value, int) and is_prime(self.value)):
            raise InvalidArgs(f"not a place of Q: {self.value!r}")

    @property
    def is_finite(self):
        return self.value != INF

    @property
    def norm(self):
        return self.value if self.is_finite else None

    def delta(self, p):
        """1 iff mu_p lies in the completion."""
        if not self.is_finite:
            return 1 if p == 2 else 0
        if self.value == p:
            return 1 if p == 2 else 0
        return 1 if (self.value - 1) % p == 0 else 0


def star(l):
    """The signed prime +-l that is 1 mod 4 (l odd)."""
    return l if l % 4 == 1 else -l


# --- multiquadratic fields ------------------------------------------------------

@dataclass(frozen=True)
class MultiquadFieldSpec:
    """Canonical generators of a multiquadratic field.

    ``primes`` lists the primes dividing some generator; bit 0 of a square
    class vector is the sign, bit j >= 1 the parity of the exponent of
    primes[j - 1].
    """

    generators: tuple
    primes: tuple

    @classmethod
    def from_generators(cls, ms):
        ms = [int(m) for m in ms]
        if not ms:
            raise InvalidArgs("need at least one generator")
        facts = []
        primes = set()
        for m in ms:
            if m == 0:
                raise InvalidArgs("0 is not a square class")
            f = {q: e % 2 for q, e in factorize(m).items()} if abs(m) > 1 else {}
            facts.append((m < 0, f))
            primes.update(q for q, e in f.items() if e)
        primes = tuple(sorted(primes))
        col = {q: j + 1 for j, q in enumerate(primes)}
        vecs = []
        for neg, f in facts:
            v = 1 if neg else 0
            for q, e in f.items():
                if e:
                    v |= 1 << col[q]
            vecs.append(v)
        sp = fl.span(vecs, len(primes) + 1)
        if sp.dim < len(ms):
            raise NotIndependent(f"{ms} are dependent modulo squares")
        gens = tuple(_class_to_int(r, primes) for r in sp.rows)
        return cls(gens, primes)

    @property
    def d(self):
        return len(self.generators)

    @property
    def degree(self):
        return 2 ** self.d

    @property
    def is_real(self):
        return all(m > 0 for m in self.generators)

    @property
    def is_tame(self):
        return all(m % 4 == 1 for m in self.generators)

    @property
    def ramified(self):
        """Finite primes ramified in K (2 included when it ramifies)."""
        out = set(q for q in self.primes if q != 2)
        if not self.is_tame:
            out.add(2)
        return tuple(sorted(out))

    def vector(self, m):
        """Coordinates of the square class of m in the generator basis."""
        target = _int_to_class(m, self.primes)
        basis = [_int_to_class(g, self.primes) for g in self.generators]
        for c in range(2 ** self.d):
            v = 0
            for k in range(self.d):
                if c >> k & 1:
                    v ^= basis[k]
            if v == target:
                return c
        raise InvalidArgs(f"{m} is not in the square-class group")

    def element(self, c):
        """Squarefree representative of the class with coordinates c."""
        v = 0
        for k in range(self.d):
            if c >> k & 1:
                v ^= _int_to_class(self.generators[k], self.primes)
        return _class_to_int(v, self.primes)

    def discriminant_support(self):
        return self.ramified

    def as_dict(self):
        return {"generators": list(self.generators), "ramified": list(self.ramified),
                "real": self.is_real, "tame": self.is_tame}


def _class_to_int(v, primes):
    m = -1 if v & 1 else 1
    for j, q in enumerate(primes):
        if v >> (j + 1) & 1:
            m *= q
    return m


def _int_to_class(m, primes):
    v = 1 if m < 0 else 0
    f = factorize(m) if abs(m) > 1 else {}
    for j, q in enumerate(primes):
        if f.get(q, 0) % 2:
            v |= 1 << (j + 1)
    extra = [q for q, e in f.items() if e % 2 and q not in primes]
    if extra:
        raise InvalidArgs(f"{m} involves primes outside the field")
    return v


def _bits(c, d):
    return tuple((c >> k) & 1 for k in range(d))


@dataclass(frozen=True)
class MultiquadAnalysis:
    spec: MultiquadFieldSpec
    primes: tuple           # ramified primes, ascending; index i <-> x_i
    type: RamificationType  # in generator coordinates
    frobenius: tuple        # Gamma-element representatives, one per prime
    arch: tuple

    @property
    def n(self):
        return len(self.primes)

    @property
    def d(self):
        return self.spec.d

    def frobenius_coset(self, i):
        g = self.frobenius[i]
        e = self.type.images[i]
        return (g, tuple((a + b) % 2 for a, b in zip(g, e)))

    def standard(self):
        """Type and Frobenius data in coordinates where x_i -> e_i (n = d only)."""
        if self.n != self.d:
            raise InvalidArgs("standard coordinates need n = d")
        d = self.d
        images = [sum(b << k for k, b in enumerate(v)) for v in self.type.images]
        # coordinates of a canonical vector in the inertia basis
        back = {}
        for c in range(2 ** d):
            v = 0
            for k in range(d):
                if c >> k & 1:
                    v ^= images[k]
            back[v] = c

        def conv(g):
            return _bits(back[sum(b << k for k, b in enumerate(g))], d)
        arch = None if self.type.arch is None else conv(self.type.arch)
        t = RamificationType.standard_multiquad(d, arch)
        return t, tuple(conv(g) for g in self.frobenius)

    def quadratic_discriminant(self):
        if self.d != 1:
            raise InvalidArgs("not a quadratic field")
        m = self.spec.generators[0]
        return m if m % 4 == 1 else 4 * m

    def arch_prediction(self):
        """Abelianized value of x_inf: component i is 1 iff l_i = 3 mod 4."""
        return tuple(1 if l % 4 == 3 else 0 for l in self.primes)

    def table(self):
        rows = []
        for i, l in enumerate(self.primes):
            rows.append({"prime": l, "inertia": list(self.type.images[i]),
                         "frobenius": list(self.frobenius[i]),
                         "frobenius_alt": list(self.frobenius_coset(i)[1])})
        return rows


def analyze_multiquad(spec):
    """Ramification type and Gamma-level Frobenius classes of a tame field."""
    if not isinstance(spec, MultiquadFieldSpec):
        spec = MultiquadFieldSpec.from_generators(spec)
    if not spec.is_tame:
        raise WildPrime("2 ramifies; only tame multiquadratic fields are supported")
    d = spec.d
    primes = spec.ramified
    g_vecs = [_int_to_class(m, spec.primes) for m in spec.generators]
    col = {q: j + 1 for j, q in enumerate(spec.primes)}
    inertia = []
    for l in primes:
        inertia.append(tuple((v >> col[l]) & 1 for v in g_vecs))
    arch = tuple(1 if m < 0 else 0 for m in spec.generators)
    frob = []
    for l, e in zip(primes, inertia):
        # classes c with c . e = 0 are the square classes prime to l
        w = [c for c in range(2 ** d) if sum((c >> k & 1) * e[k] for k in range(d)) % 2 == 0]
        chi = {c: legendre(spec.element(c), l) == -1 for c in w}
        sols = [s for s in range(2 ** d)
                if all((bin(s & c).count("1") % 2 == 1) == chi[c] for c in w)]
        assert len(sols) == 2
        frob.append(_bits(min(sols), d))
    t = RamificationType.multiquad(d, inertia, None if not any(arch) else arch)
    validate_type(t)
    return MultiquadAnalysis(spec, primes, t, tuple(frob), arch)


def quadratic_type(n, imaginary):
    """The quadratic ramification type on the C_2 cyclic model."""
    return RamificationType.cyclic(2, 1, [2] * n, imaginary=imaginary)


# --- cyclic fields -----------------------------------------------------------------

@dataclass(frozen=True)
class CyclicFieldSpec:
    p: int
    d: int
    components: tuple       # ((l_i, m_i), ...)

    def __post_init__(self):
        comps = tuple((int(l), int(m)) for l, m in self.components)
        object.__setattr__(self, "components", comps)
        if not is_prime(self.p):
            raise InvalidArgs(f"p = {self.p} is not prime")
        seen = set()
        for l, m in comps:
            if not 1 <= m <= self.d:
                raise InvalidArgs(f"exponent {m} outside 1..{self.d}")
            if l == self.p or not is_prime(l):
                raise InvalidArgs(f"{l} is not a tame prime")
            if (l - 1) % self.p ** m:
                raise BadModulus(f"{l} is not 1 mod {self.p}^{m}")
            if l in seen:
                raise InvalidArgs(f"{l} listed twice")
            seen.add(l)

    @property
    def primes(self):
        return tuple(l for l, _ in self.components)

    @property
    def order(self):
        return self.p ** self.d

    def as_dict(self):
        return {"p": self.p, "d": self.d, "components": [list(c) for c in self.components]}


@dataclass(frozen=True)
class CyclicAnalysis:
    spec: CyclicFieldSpec
    type: RamificationType
    frobenius: tuple        # residues mod p^d, smallest in their I_i-coset
    is_real: bool

    @property
    def n(self):
        return len(self.spec.components)

    def quadratic_discriminant(self):
        if self.spec.order != 2:
            raise InvalidArgs("not a quadratic field")
        D = 1
        for l in self.spec.primes:
            D *= star(l)
        return D

    def table(self):
        order = self.spec.order
        rows = []
        for i, (l, m) in enumerate(self.spec.components):
            step = self.type.images[i]
            rows.append({"prime": l, "inertia_order": order // step,
                         "frobenius": self.frobenius[i], "modulo": step})
        return rows


def analyze_cyclic(spec):
    p, d = spec.p, spec.d
    N = p ** d
    comps = spec.components
    images = [p ** (d - m) for _, m in comps]
    frob = []
    for i, (l, m) in enumerate(comps):
        s = 0
        for j, (lj, mj) in enumerate(comps):
            if j != i:
                s += discrete_log_class(l, lj, p ** mj) * p ** (d - mj)
        s %= N
        frob.append(s % images[i])
    conj = 0
    if p == 2:
        for l, m in comps:
            conj += discrete_log_class(-1, l, 2 ** m) * 2 ** (d - m)
        conj %= N
    t = RamificationType(GammaGroup.cyclic(p, d), tuple(images), conj or None)
    validate_type(t)
    return CyclicAnalysis(spec, t, tuple(frob), conj == 0)
