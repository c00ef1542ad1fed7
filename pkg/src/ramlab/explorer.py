"""Verification harness over Frobenius assignments.

Assignment domains factor through relator cosets: the relator [x_i, y]
depends only on the Gamma-image of y and on y modulo the kernel of
(sigma_{x_i} - 1), and the conditional rank depends only on the
Gamma-span of the relator vectors.  Exhaustive runs therefore walk the
product of cosets prime by prime, merging partial assignments that
generate the same submodule; counts are carried along so histograms
stay exact.

Every result is reported over the full group-theoretic domain; which
assignments are arithmetically realizable is not decided here.
"""

from __future__ import annotations

import itertools
import random
import time
from collections import Counter
from dataclasses import dataclass

from . import fplinalg as fl
from .fplinalg import FpMatrix
from .errors import DomainTooLarge, InvalidArgs, SizeCapExceeded, InvalidType
from .presentation import (
    RamificationType, FrobeniusAssignment, MultiquadModel, GeneralMultiquadModel,
    build_model, arch_of, relator_coset, arch_square_coset,
    conditional_class_rank, kp_condition, graded_degree, relator_image,
)
from .bounds import lower_bound_multiquad, kurosh_rank

EXHAUSTIVE_CAP = 2 ** 24
DOMAINS = ("full", "reps", "sample")


@dataclass
class SearchTask:
    """What to enumerate.

    ``sigmas[i]`` fixes the Gamma-image of y_i (None ranges over Gamma).
    ``domain`` is "full" (whole relator cosets), "reps" (the base lift of
    each Gamma-image only) or "sample" (``samples`` uniform draws).
    """

    model: object
    domain: str = "full"
    sigmas: tuple = None
    narrow: bool = False
    seed: int = 0
    samples: int = 10000
    cap: int = EXHAUSTIVE_CAP
    allow_sampling: bool = False
    name: str = "min-max"

    def describe(self):
        t = getattr(self.model, "arch_type", None) or self.model.type
        return {"name": self.name, "type": t.as_dict(), "domain": self.domain,
                "narrow": self.narrow,
                "sigmas": None if self.sigmas is None else [_jsonable(s) for s in self.sigmas]}


def _jsonable(x):
    if isinstance(x, tuple):
        return list(x)
    return x


def _vec(model, v):
    return fl.vector_entries(v, model.p, model.N_dim)


# --- domains -------------------------------------------------------------------

def _sigma_choices(task, i):
    gamma = task.model.type.gamma
    if task.sigmas is not None and task.sigmas[i] is not None:
        return [gamma.normalize(task.sigmas[i])]
    return list(gamma.elements())


def _prime_values(task, i):
    """Counter of relator vectors at prime i, with a Gamma-image witnessing each."""
    m = task.model
    counts, where = Counter(), {}
    for s in _sigma_choices(task, i):
        c = relator_coset(m, i, s)
        vals = [c.representative] if task.domain == "reps" else c.elements()
        for v in vals:
            counts[v] += 1
            where.setdefault(v, s)
    return counts, where


def _arch_values(task):
    """Counter of archimedean relator vectors, or None if there is none."""
    m = task.model
    if m.p != 2:
        return None
    arch = arch_of(m)
    if arch is not None:
        c = arch_square_coset(m, arch)
        vals = [c.representative] if task.domain == "reps" else list(c.elements())
        return Counter(vals)
    if task.narrow:
        return None
    if task.domain == "reps":
        return Counter([fl.zero_vector(m.p, m.N_dim)])
    return Counter(_all_vectors(m.p, m.N_dim))


def _all_vectors(p, dim):
    if p == 2:
        return range(1 << dim)
    return (tuple(v) for v in itertools.product(range(p), repeat=dim))


def domain_size(task):
    m = task.model
    total = 1
    for i in range(m.n):
        ch = _sigma_choices(task, i)
        per = 1 if task.domain == "reps" else m.p ** m.relator_value_space(i).dim
        total *= len(ch) * per
    arch = arch_of(m) if m.p == 2 else None
    if m.p == 2 and task.domain != "reps":
        if arch is not None:
            total *= arch_square_coset(m, arch).size
        elif not task.narrow:
            total *= m.p ** m.N_dim
    return total


# --- exhaustive walk -------------------------------------------------------------

class _State:
    __slots__ = ("space", "count", "witness")

    def __init__(self, space, count, witness):
        self.space, self.count, self.witness = space, count, witness


def _extend(model, space, v):
    if fl.contains(space, v):
        return space
    return model.gamma_span(list(space.rows) + [v])


def _walk(task, levels):
    """levels: list of (Counter of vectors, label fn); returns final states."""
    m = task.model
    start = fl.zero_space(m.N_dim, m.p)
    states = {(): _State(start, 1, [])}
    for counts, label in levels:
        new = {}
        for st in states.values():
            cache = {}
            for v, c in counts.items():
                sp = cache.get(v)
                if sp is None:
                    sp = cache[v] = _extend(m, st.space, v)
                key = sp.rows
                if key in new:
                    new[key].count += st.count * c
                else:
                    new[key] = _State(sp, st.count * c, st.witness + [label(v)])
        states = new
    return states


def min_max_conditional_rank(task):
    """Extrema of the conditional rank over the task's domain, with witnesses."""
    if task.domain not in DOMAINS:
        raise InvalidArgs(f"domain must be one of {DOMAINS}")
    m = task.model
    t0 = time.perf_counter()
    size = domain_size(task)
    if task.domain == "sample" or size > task.cap:
        if task.domain != "sample" and not task.allow_sampling:
            raise DomainTooLarge(f"domain of size {size} exceeds {task.cap}")
        return _sampled(task, size, t0)
    levels = []
    for i in range(m.n):
        counts, where = _prime_values(task, i)
        levels.append((counts, (lambda v, w=where: ("y", w[v], v))))
    av = _arch_values(task)
    if av is not None:
        levels.append((av, lambda v: ("x_inf", None, v)))
    states = _walk(task, levels)
    hist = Counter()
    best = {}
    for st in states.values():
        r = m.N_dim - st.space.dim
        hist[r] += st.count
        if r not in best:
            best[r] = st.witness
    lo, hi = min(hist), max(hist)
    return _report(task, size, True, hist, {"min": _witness(m, best[lo]),
                                            "max": _witness(m, best[hi])}, t0)


def _witness(model, items):
    out = {"sigmas": [], "relators": [], "arch": None}
    for kind, s, v in items:
        if kind == "y":
            out["sigmas"].append(_jsonable(s))
            out["relators"].append(_vec(model, v))
        else:
            out["arch"] = _vec(model, v)
    return out


def _report(task, size, exhaustive, hist, witnesses, t0):
    ranks = sorted(hist)
    return {
        "task": task.describe(),
        "domain_size": size,
        "exhaustive": exhaustive,
        "sampled": not exhaustive,
        "extrema": {"min": ranks[0], "max": ranks[-1]},
        "histogram": {str(r): hist[r] for r in ranks},
        "witnesses": witnesses,
        "seed": None if exhaustive else task.seed,
        "runtime": round(time.perf_counter() - t0, 4),
    }


# --- sampling ------------------------------------------------------------------

def random_element(model, rng, sigma=None):
    gamma = model.type.gamma
    if sigma is None:
        sigma = rng.choice(gamma.elements())
    return model.mul(model.lift(sigma), model.from_n_vector(random_vector(model, rng)))


def random_vector(model, rng, dim=None):
    dim = model.N_dim if dim is None else dim
    if model.p == 2:
        return rng.getrandbits(dim) if dim else 0
    return tuple(rng.randrange(model.p) for _ in range(dim))


def random_assignment(task, rng):
    m = task.model
    lifts = []
    for i in range(m.n):
        s = None if task.sigmas is None else task.sigmas[i]
        lifts.append(random_element(m, rng, s))
    x = None
    if m.p == 2:
        arch = arch_of(m)
        if arch is not None:
            x = random_element(m, rng, arch)
        elif not task.narrow:
            x = m.from_n_vector(random_vector(m, rng))
    return FrobeniusAssignment(tuple(lifts), x)


def _sampled(task, size, t0):
    m = task.model
    rng = random.Random(task.seed)
    hist = Counter()
    best = {}
    for _ in range(task.samples):
        fa = random_assignment(task, rng)
        r = conditional_class_rank(m, fa, task.narrow)
        hist[r] += 1
        if r not in best:
            best[r] = assignment_witness(m, fa)
    lo, hi = min(hist), max(hist)
    return _report(task, size, False, hist, {"min": best[lo], "max": best[hi]}, t0)


def assignment_witness(model, fa):
    out = {"sigmas": [_jsonable(model.gamma_image(y)) for y in fa.lifts],
           "relators": [_vec(model, relator_image(model, i, y)) for i, y in enumerate(fa.lifts)],
           "arch": None}
    if fa.arch_lift is not None:
        x = fa.arch_lift
        v = model.n_vector(model.mul(x, x)) if arch_of(model) is not None else model.n_vector(x)
        out["arch"] = _vec(model, v)
    return out


def sample_rank_distribution(task):
    """Histogram of conditional ranks under uniform sampling, reproducible by seed."""
    t0 = time.perf_counter()
    rep = _sampled(task, domain_size(task), t0)
    return rep


# --- witness realization -----------------------------------------------------------

def solve_affine(p, n_in, f, n_out, target):
    """Some u in F_p^n_in with f(u) = target, or None; f is additive."""
    cols = [fl.vector_entries(f(fl.unit_vector(j, p, n_in)), p, n_out) for j in range(n_in)]
    t = fl.vector_entries(target, p, n_out)
    rows = [[cols[j][i] for j in range(n_in)] + [(-t[i]) % p] for i in range(n_out)]
    ker = fl.kernel(FpMatrix.from_rows(rows, p, n_in + 1))
    for r in ker.rows:
        ent = fl.vector_entries(r, p, n_in + 1)
        if ent[n_in]:
            c = pow(ent[n_in], -1, p)
            return fl.as_vector([e * c % p for e in ent[:n_in]], p, n_in)
    return None


def solve_linear(model, f, target):
    """Some u with f(u) = target for an additive map f on N, or None."""
    return solve_affine(model.p, model.N_dim, f, model.N_dim, target)


def realize_witness(model, w):
    """A FrobeniusAssignment whose relator vectors are those of witness ``w``."""
    p, n = model.p, model.N_dim
    lifts = []
    for i, (s, rel) in enumerate(zip(w["sigmas"], w["relators"])):
        s = model.type.gamma.normalize(tuple(s) if isinstance(s, list) else s)
        base = model.lift(s)
        target = fl.vec_sub(fl.as_vector(rel, p, n), relator_image(model, i, base), p)
        # [x_i, w u] = [x_i, w] + sigma_w (sigma_{x_i} - 1) u
        def f(u, s=s, i=i):
            return model.act(s, fl.vec_sub(model.act_gen(i, u), u, p))
        u = solve_linear(model, f, target)
        if u is None:
            raise AssertionError("relator vector outside its coset")
        lifts.append(model.mul(base, model.from_n_vector(u)))
    x = None
    if w.get("arch") is not None:
        v = fl.as_vector(w["arch"], p, n)
        arch = arch_of(model)
        if arch is None:
            x = model.from_n_vector(v)
        else:
            base = model.lift(arch)
            target = fl.vec_sub(v, model.n_vector(model.mul(base, base)), p)
            u = solve_linear(model, lambda u: fl.vec_add(model.act(arch, u), u, p), target)
            if u is None:
                raise AssertionError("archimedean vector outside its coset")
            x = model.mul(base, model.from_n_vector(u))
    return FrobeniusAssignment(tuple(lifts), x)


# --- lower bound for multiquadratic types ---------------------------------------------

def multiquad_types(d, n, alpha):
    """Every type (up to the listed normalization) with Gamma = (C_2)^d.

    The first d inertia generators are the standard basis, the remaining
    ones range over all nonzero vectors, and for alpha = 2 the
    archimedean generator ranges over all nonzero vectors.
    """
    if n < d:
        raise InvalidArgs("need n >= d")
    nonzero = list(range(1, 1 << d))
    archs = [None] if alpha == 1 else nonzero
    out = []
    for extra in itertools.product(nonzero, repeat=n - d):
        if n > d and list(extra) != sorted(extra):
            continue  # the order of the extra primes does not matter
        for a in archs:
            out.append(RamificationType.multiquad(d, [1 << k for k in range(d)] + list(extra), a))
    return out


def check_lb_multiquad(d, n, alpha, domain="full"):
    """Exhaustive minimum of the ordinary conditional rank against the bound."""
    bound = lower_bound_multiquad(d, n, alpha)
    t0 = time.perf_counter()
    rows = []
    worst = None
    for t in multiquad_types(d, n, alpha):
        model = build_model(t)
        rep = min_max_conditional_rank(SearchTask(model, domain=domain, narrow=False))
        lo = rep["extrema"]["min"]
        rows.append({"type": t.as_dict(), "min": lo, "max": rep["extrema"]["max"],
                     "domain_size": rep["domain_size"], "witness": rep["witnesses"]["min"]})
        if worst is None or lo < worst["min"]:
            worst = rows[-1]
    return {"task": "lb-multiquad", "d": d, "n": n, "alpha": alpha, "bound": bound,
            "min": worst["min"], "pass": worst["min"] >= bound, "types": rows,
            "witness": worst["witness"], "worst_type": worst["type"],
            "runtime": round(time.perf_counter() - t0, 4)}


def check_upper_equality(model):
    """The relator-trivializing assignment attains the Kurosh bound (narrow rank)."""
    t = model.type
    # identity lifts give trivial local relators; the archimedean relator is left out
    r = model.N_dim - model.gamma_span([relator_image(model, i, model.identity())
                                        for i in range(model.n)]).dim
    return {"task": "upper-equality", "type": t.as_dict(), "rank": r,
            "kurosh": kurosh_rank(t), "pass": r == kurosh_rank(t)}


# --- cyclic lower bound ----------------------------------------------------------------

def psi_condition(model, y):
    """<psi(y)> = <psi(x_1)> in F/Phi(F)."""
    c = model.frattini_coords(y)
    return bool(c[0] % model.p) and not any(x % model.p for x in c[1:])


def commutator_subgroup(model):
    """Normal closure of the [x_i, x_j], as a subspace of N."""
    vecs = [model.n_vector(model.commutator(model.gen(i), model.gen(j)))
            for i, j in itertools.combinations(range(model.n), 2)]
    return model.gamma_span(vecs)


def _psi_n(model):
    """psi restricted to N, as a map to F_p^n, and its kernel."""
    p, dim, n = model.p, model.N_dim, model.n
    f = lambda u: fl.as_vector(model.frattini_coords(model.from_n_vector(u)), p, n)
    cols = [fl.vector_entries(f(fl.unit_vector(j, p, dim)), p, n) for j in range(dim)]
    ker = fl.kernel(FpMatrix.from_rows([[c[i] for c in cols] for i in range(n)], p, dim))
    return f, ker


def _image_elements(model, f, sub):
    """Distinct values of f on the subspace sub, with the fiber size."""
    p = model.p
    img = fl.span([f(r) for r in sub.rows], model.N_dim, p)
    return list(_span_elements(img)), p ** (sub.dim - img.dim)


def _span_elements(sub):
    p = sub.p
    for coeffs in itertools.product(range(p), repeat=sub.dim):
        v = fl.zero_vector(p, sub.ambient_dim)
        for c, r in zip(coeffs, sub.rows):
            if c:
                v = fl.vec_add(v, fl.vec_scale(r, c, p), p)
        yield v


def _lb_cyclic_values(model, i, admissible_only):
    """Counter of relator vectors [x_i, y]; for i >= 2 only psi-admissible y."""
    p, dim = model.p, model.N_dim
    gamma = model.type.gamma
    psi, K = _psi_n(model)
    full = fl.full_space(dim, p)
    counts = Counter()
    for s in gamma.elements():
        w = model.lift(s)
        base = relator_image(model, i, w)
        L = lambda u, s=s: model.act(s, fl.vec_sub(model.act_gen(i, u), u, p))
        if i == 0 or not admissible_only:
            pieces = [fl.zero_vector(p, dim)]
            sub = full
        else:
            pw = fl.as_vector(model.frattini_coords(w), p, model.n)
            pieces = []
            for c in range(1, p):
                target = fl.vec_sub(fl.vec_scale(fl.unit_vector(0, p, model.n), c, p), pw, p)
                u0 = solve_affine(p, dim, psi, model.n, target)
                if u0 is not None:
                    pieces.append(u0)
            sub = K
        vals, mult = _image_elements(model, L, sub)
        for u0 in pieces:
            b0 = fl.vec_add(base, L(u0), p)
            for v in vals:
                counts[fl.vec_add(b0, v, p)] += mult
    return counts


def verify_lb_cyclic(p, d, n, inertia=None, imaginary=False, seed=0, tries=2000):
    """Every psi-admissible assignment has narrow rank n - 1 and its relators
    generate [F, F].  A seeded search over assignments violating the premise
    records one whose rank exceeds n - 1, if found."""
    orders = list(inertia) if inertia is not None else [p ** d] * n
    t = RamificationType.cyclic(p, d, orders, imaginary)
    model = build_model(t)
    t0 = time.perf_counter()
    comm = commutator_subgroup(model)
    levels = [(_lb_cyclic_values(model, i, True), lambda v: ("y", None, v))
              for i in range(model.n)]
    states = _walk(SearchTask(model, narrow=True), levels)
    admissible = 0
    failures = []
    for st in states.values():
        admissible += st.count
        r = model.N_dim - st.space.dim
        if r != n - 1 or st.space.rows != comm.rows:
            failures.append({"relators": [_vec(model, v) for _, _, v in st.witness], "rank": r})
    # premise violations
    rng = random.Random(seed)
    above = None
    for _ in range(tries if n > 1 else 0):
        lifts = [random_element(model, rng) for _ in range(model.n)]
        if all(psi_condition(model, y) for y in lifts[1:]):
            continue
        fa = FrobeniusAssignment(tuple(lifts))
        r = conditional_class_rank(model, fa, True)
        if r > n - 1:
            above = dict(assignment_witness(model, fa), rank=r)
            break
    return {"task": "lb-cyclic", "gamma": f"C{p ** d}", "n": n, "inertia_orders": orders,
            "N_dim": model.N_dim, "commutator_dim": comm.dim,
            "admissible_assignments": admissible, "failures": failures,
            "pass": not failures and admissible > 0,
            "premise_violation_above": above, "seed": seed,
            "runtime": round(time.perf_counter() - t0, 4)}


# --- kernel condition equivalence ----------------------------------------------------

def verify_kp(n=3, perturbations=10 ** 4, seed=0, kernel_test=None):
    """kp_condition(fa) <=> narrow rank = dim N over coset representatives and
    seeded random N-part perturbations.  ``kernel_test`` replaces the kernel
    predicate (used to plant a violation)."""
    test = kernel_test or kp_condition
    model = build_model(RamificationType.standard_multiquad(n))
    t0 = time.perf_counter()
    gamma = model.type.gamma
    full = model.N_dim
    checked = positives = 0

    def run(fa):
        nonlocal checked, positives
        lhs = bool(test(model, fa))
        rhs = conditional_class_rank(model, fa, True) == full
        checked += 1
        positives += lhs
        if lhs != rhs:
            return {"sigmas": [list(model.gamma_image(y)) for y in fa.lifts],
                    "relators": [_vec(model, relator_image(model, i, y))
                                 for i, y in enumerate(fa.lifts)],
                    "kernel_condition": lhs, "full_rank": rhs}
        return None

    # generators times N-parts that keep y_q inside the kernels give positives
    for sig in itertools.product(gamma.elements(), repeat=n):
        fa = FrobeniusAssignment(tuple(model.lift(s) for s in sig))
        bad = run(fa)
        if bad:
            return _kp_report(n, checked, positives, bad, seed, t0)
    rng = random.Random(seed)
    for _ in range(perturbations):
        lifts = []
        for q in range(n):
            s = rng.choice(gamma.elements())
            if rng.random() < 0.5:
                # powers of x_q stay in every admissible kernel
                s = tuple(int(k == q) * rng.randrange(2) for k in range(n))
            lifts.append(model.mul(model.lift(s), model.from_n_vector(random_vector(model, rng))))
        bad = run(FrobeniusAssignment(tuple(lifts)))
        if bad:
            return _kp_report(n, checked, positives, bad, seed, t0)
    return _kp_report(n, checked, positives, None, seed, t0)


def _kp_report(n, checked, positives, bad, seed, t0):
    return {"task": "kp-equivalence", "n": n, "checked": checked,
            "kernel_condition_true": positives, "counterexample": bad,
            "pass": bad is None, "seed": seed, "runtime": round(time.perf_counter() - t0, 4)}


# --- the module count in the cyclic upper bound ----------------------------------------

FIBER_CAP = 2 ** 16


def ker_varpi(p, d, orders, cap=FIBER_CAP):
    """Elements, multiplication and identity of ker(varpi) in the fiber product
    ((+)_{i>=2} F_p[Gamma/I_i]) x| Gamma  x_{I_1 x C_p^{n-1}}  prod I_i."""
    N = p ** d
    if N > 27:
        raise SizeCapExceeded("|Gamma| must be at most 27")
    orders = list(orders)
    if not orders or orders[0] != N:
        raise InvalidArgs("I_1 must be all of Gamma")
    for o in orders:
        if o < p or N % o:
            raise InvalidArgs(f"inertia order {o} does not divide {N}")
    n = len(orders)
    quo = [N // o for o in orders]  # |Gamma/I_i|
    expected = sum(quo[1:])
    # elements of ker(varpi): module parts m_i with augmentation a_i mod p,
    # a in prod Z/|I_i| mapping to 0 in Gamma; the Gamma-coordinate equals a_1
    a_list = [a for a in itertools.product(*[range(o) for o in orders])
              if sum(a[i] * (N // orders[i]) for i in range(n)) % N == 0]
    mods_by_aug = []
    for i in range(1, n):
        by = {}
        for m in itertools.product(range(p), repeat=quo[i]):
            by.setdefault(sum(m) % p, []).append(m)
        mods_by_aug.append(by)
    size = sum(_prod(len(mods_by_aug[i - 1][a[i] % p]) for i in range(1, n)) for a in a_list)
    if size > cap:
        raise SizeCapExceeded(f"ker varpi has {size} elements (cap {cap})")

    def act(g, m, q):
        return tuple(m[(k - g) % q] for k in range(q))

    def mul(x, y):
        (ma, aa), (mb, ab) = x, y
        g = aa[0]
        m = tuple(tuple((u + v) % p for u, v in zip(ma[i], act(g, mb[i], quo[i + 1])))
                  for i in range(n - 1))
        return m, tuple((u + v) % o for u, v, o in zip(aa, ab, orders))

    elems = []
    for a in a_list:
        for ms in itertools.product(*[mods_by_aug[i - 1][a[i] % p] for i in range(1, n)]):
            elems.append((tuple(ms), a))
    ident = (tuple((0,) * q for q in quo[1:]), (0,) * n)
    return elems, mul, ident, expected


def verify_ub_cyclic_module_count(p, d, orders, cap=FIBER_CAP):
    """Frattini-quotient dimension of ker(varpi) against sum_{i>=2} |Gamma|/|I_i|."""
    t0 = time.perf_counter()
    orders = list(orders)
    elems, mul, ident, expected = ker_varpi(p, d, orders, cap)
    N = p ** d
    # greedy generating set
    gens, sub = [], {ident}
    for x in elems:
        if x not in sub:
            gens.append(x)
            sub = _closure(gens, mul, ident)
    if len(sub) != len(elems):
        raise AssertionError("ker varpi is not closed")
    abelian = all(mul(x, y) == mul(y, x) for x, y in itertools.combinations(gens, 2))

    def power(x, k):
        out = ident
        for _ in range(k):
            out = mul(out, x)
        return out
    # Phi = <x^p for generators x> times the normal closure of [gens, gens]
    comms = [mul(mul(x, y), _inverse(mul(y, x), mul, ident))
             for x, y in itertools.combinations(gens, 2)]
    normal = _closure([c for c in comms if c != ident], mul, ident)
    while True:
        conj = {mul(mul(g, c), _inverse(g, mul, ident)) for g in gens for c in normal}
        if conj <= normal:
            break
        normal = _closure(list(conj | normal), mul, ident)
    frat = _closure([power(x, p) for x in gens] + list(normal), mul, ident)
    ratio = len(elems) // len(frat)
    dim = 0
    while ratio > 1:
        ratio //= p
        dim += 1
    return {"task": "ub-cyclic-module-count", "gamma": f"C{N}", "inertia_orders": orders,
            "order": len(elems), "abelian": abelian, "frattini_dim": dim,
            "expected": expected, "pass": abelian and dim == expected,
            "runtime": round(time.perf_counter() - t0, 4)}


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


def _closure(gens, mul, ident):
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def _inverse(x, mul, ident):
    y = x
    prev = ident
    while y != ident:
        prev, y = y, mul(y, x)
    return prev


# --- commutator identities and filtrations -----------------------------------------------

def _filtration(model, k):
    """F_(k) as a subspace of N for k >= 2 (zero past the end)."""
    if k - 2 < len(model.graded):
        return model.graded[k - 2]
    return fl.zero_space(model.N_dim, model.p)


def _random_in_filtration(model, rng, k):
    if k <= 1:
        return random_element(model, rng)
    sub = _filtration(model, k)
    v = fl.zero_vector(2, model.N_dim)
    for r in sub.rows:
        if rng.getrandbits(1):
            v ^= r
    return model.from_n_vector(v)


def check_gr_identities(model, trials=50, seed=0):
    """Commutator identities (1)-(5) on random elements of a multiquadratic model."""
    if not isinstance(model, (MultiquadModel, GeneralMultiquadModel)):
        raise InvalidType("needs a multiquadratic model")
    rng = random.Random(seed)
    C = model.commutator
    ok = {"symmetric": True, "bilinear": True, "N_abelian": True, "exchange": True,
          "cyclic_3": True, "cyclic_4": True}
    depth = len(model.graded) + 1
    for _ in range(trials):
        x, y = random_element(model, rng), random_element(model, rng)
        ok["symmetric"] &= C(x, y) == C(y, x)
        i, j, k = (rng.randint(1, depth) for _ in range(3))
        a, b, c = (_random_in_filtration(model, rng, e) for e in (i, j, k))
        diff = fl.vec_sub(model.n_vector(C(model.mul(a, b), c)),
                          model.n_vector(model.mul(C(a, c), C(b, c))), 2)
        ok["bilinear"] &= fl.contains(_filtration(model, i + j + k), diff)
        u = model.from_n_vector(random_vector(model, rng))
        w = model.from_n_vector(random_vector(model, rng))
        ok["N_abelian"] &= model.is_identity(C(u, w))
        ok["exchange"] &= C(x, C(y, u)) == C(y, C(x, u))
        for m, key in ((3, "cyclic_3"), (4, "cyclic_4")):
            xs = [random_element(model, rng) for _ in range(m)]
            prod = model.identity()
            for r in range(m):
                rot = xs[r:] + xs[:r]
                cur = rot[-1]
                for z in reversed(rot[:-1]):
                    cur = C(z, cur)
                prod = model.mul(prod, cur)
            ok[key] &= model.is_identity(prod)
    ok["pass"] = all(ok.values())
    return ok


def check_repeat(model, max_len=4):
    """Iterated commutators of generators with a repeated index are trivial."""
    n = model.n
    for m in range(2, max_len + 1):
        for seq in itertools.product(range(n), repeat=m):
            if len(set(seq)) < m and not model.is_identity(model.iterated(seq)):
                return {"pass": False, "witness": [s + 1 for s in seq]}
    return {"pass": True, "witness": None}


def check_1gen_filtration(model, samples=20, seed=0):
    """For x in N of degree k and M its Gamma-span, M meet F_(i) is spanned
    mod M meet F_(i+1) by [x_s1, [..., [x_s(i-k), x]]] with s increasing."""
    if not isinstance(model, (MultiquadModel, GeneralMultiquadModel)):
        raise InvalidType("needs a multiquadratic model")
    d = model.n if isinstance(model, MultiquadModel) else model.d
    rng = random.Random(seed)
    top = len(model.graded) + 1
    for _ in range(samples):
        v = random_vector(model, rng)
        if fl.is_zero(v):
            continue
        k = graded_degree(model, v)
        M = model.gamma_span([v])
        x = model.from_n_vector(v)
        for i in range(k + 1, top + 1):
            lower = fl.intersect(M, _filtration(model, i + 1))
            e = lower.echelon()
            for s in itertools.combinations(range(d), i - k):
                e.add(model.n_vector(model.iterated(list(s), last=x)))
            if e.freeze().rows != fl.intersect(M, _filtration(model, i)).rows:
                return {"pass": False, "witness": {"vector": _vec(model, v), "degree": k,
                                                   "i": i}}
    return {"pass": True, "witness": None}
