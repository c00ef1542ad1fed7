import itertools

import pytest

from ramlab import fplinalg as fl
from ramlab.errors import DomainTooLarge
from ramlab.presentation import (
    RamificationType, FrobeniusAssignment, build_model, build_multiquad, graded_degree,
    conditional_class_rank, kp_condition,
)
from ramlab.bounds import lower_bound_multiquad
from ramlab.explorer import (
    SearchTask, min_max_conditional_rank, sample_rank_distribution, realize_witness,
    check_lb_multiquad, check_upper_equality, verify_lb_cyclic, verify_kp,
    verify_ub_cyclic_module_count, ker_varpi, check_gr_identities, check_repeat,
    check_1gen_filtration, multiquad_types, _closure, _filtration,
)


def test_minmax_n2_imaginary():
    m = build_model(RamificationType.standard_multiquad(2, (1, 0)))
    r = min_max_conditional_rank(SearchTask(m))
    assert r["exhaustive"] and r["domain_size"] == 16
    assert r["extrema"] == {"min": 0, "max": 1}
    assert r["histogram"] == {"0": 12, "1": 4}


def test_minmax_n2_arch_11_is_constant():
    m = build_model(RamificationType.standard_multiquad(2, (1, 1)))
    r = min_max_conditional_rank(SearchTask(m))
    assert r["extrema"] == {"min": 0, "max": 0}


def test_minmax_matches_brute_force():
    """Histogram over relator cosets equals a direct loop over all lifts."""
    m = build_model(RamificationType.standard_multiquad(2, (1, 0)))
    elems = list(m.elements())
    arch_lifts = [x for x in elems if m.gamma_image(x) == (1, 0)]
    # ranks over all lift tuples, grouped by the relator values they produce
    seen = {}
    for y1, y2, x in itertools.product(elems, elems, arch_lifts):
        fa = FrobeniusAssignment((y1, y2), x)
        key = (m.gamma_image(y1), m.gamma_image(y2),
               m.n_vector(m.commutator(m.gen(0), y1)), m.n_vector(m.commutator(m.gen(1), y2)),
               m.n_vector(m.mul(x, x)))
        seen[key] = conditional_class_rank(m, fa, False)
    hist = {}
    for r in seen.values():
        hist[str(r)] = hist.get(str(r), 0) + 1
    assert hist == min_max_conditional_rank(SearchTask(m))["histogram"]


def test_trivial_domain_max_is_dim():
    for t in [RamificationType.standard_multiquad(3), RamificationType.cyclic(3, 2, [9, 3])]:
        r = check_upper_equality(build_model(t))
        assert r["pass"] and r["rank"] == build_model(t).N_dim


def test_witness_realizes():
    m = build_model(RamificationType.standard_multiquad(2, (1, 0)))
    r = min_max_conditional_rank(SearchTask(m))
    for which in ("min", "max"):
        fa = realize_witness(m, r["witnesses"][which])
        assert conditional_class_rank(m, fa, False) == r["extrema"][which]


def test_domain_too_large():
    with pytest.raises(DomainTooLarge):
        min_max_conditional_rank(SearchTask(build_multiquad(4)))


def test_reps_domain_n4():
    r = min_max_conditional_rank(SearchTask(build_multiquad(4), domain="reps", narrow=True))
    assert r["domain_size"] == 65536 and r["extrema"]["max"] == 17


def test_sampling():
    t = RamificationType.cyclic(2, 1, [2, 2, 2])
    r = sample_rank_distribution(SearchTask(build_model(t), narrow=True, seed=3, samples=300))
    assert r["histogram"] == {"2": 300}
    m = build_model(RamificationType.standard_multiquad(2, (1, 0)))
    a = sample_rank_distribution(SearchTask(m, seed=5, samples=500))
    b = sample_rank_distribution(SearchTask(m, seed=5, samples=500))
    assert a["histogram"] == b["histogram"] and set(a["histogram"]) == {"0", "1"}


@pytest.mark.parametrize("d,n,alpha", [(2, 2, 1), (2, 2, 2), (2, 3, 2), (3, 3, 1), (3, 3, 2)])
def test_lb_multiquad_holds(d, n, alpha):
    r = check_lb_multiquad(d, n, alpha)
    assert r["pass"] and r["min"] >= lower_bound_multiquad(d, n, alpha)


def test_lb_multiquad_231_counterexample():
    """Exhaustive minimum 0 below the bound 1; the witness is re-evaluated from scratch."""
    r = check_lb_multiquad(2, 3, 1)
    assert r["bound"] == 1 and r["min"] == 0 and not r["pass"]
    t = RamificationType.multiquad(2, [tuple(v) for v in r["worst_type"]["inertia"]])
    m = build_model(t)
    fa = realize_witness(m, r["witness"])
    assert conditional_class_rank(m, fa, False) == 0


def test_multiquad_types_normalized():
    ts = multiquad_types(2, 3, 1)
    assert all(t.images[:2] == ((1, 0), (0, 1)) for t in ts)
    assert len(multiquad_types(2, 3, 2)) == 3 * len(ts)


@pytest.mark.parametrize("p,d,orders", [
    (2, 1, [2, 2]), (2, 1, [2, 2, 2]), (2, 2, [4, 4]), (2, 2, [4, 2]),
    (2, 2, [4, 2, 2]), (3, 1, [3, 3]), (3, 2, [9, 3]),
])
def test_lb_cyclic(p, d, orders):
    r = verify_lb_cyclic(p, d, len(orders), orders)
    assert r["pass"] and r["admissible_assignments"] > 0


def test_lb_cyclic_premise_violation():
    r = verify_lb_cyclic(2, 2, 2, [4, 4])
    assert r["premise_violation_above"]["rank"] > 1


def test_kp():
    r = verify_kp(3, perturbations=2000, seed=1)
    assert r["pass"] and r["checked"] >= 2 ** 9 and r["kernel_condition_true"] > 0


def test_kp_planted_violation():
    def broken(model, fa):
        return kp_condition(model, FrobeniusAssignment((model.identity(),) + fa.lifts[1:]))
    assert not verify_kp(3, perturbations=500, seed=0, kernel_test=broken)["pass"]


def _min_generators(elems, mul, ident):
    """Smallest k with a generating k-subset; equals the Frattini dimension of a p-group."""
    target = len(elems)
    nontrivial = [x for x in elems if x != ident]
    for k in range(1, 6):
        for gens in itertools.combinations(nontrivial, k):
            if len(_closure(list(gens), mul, ident)) == target:
                return k
    raise AssertionError("no small generating set")


@pytest.mark.parametrize("p,d,orders,dim", [
    (2, 1, [2, 2], 1), (2, 2, [4, 2], 2), (3, 1, [3, 3, 3], 2), (2, 2, [4, 4, 2], 2),
])
def test_ub_cyclic_frattini_by_generators(p, d, orders, dim):
    elems, mul, ident, _ = ker_varpi(p, d, orders)
    assert _min_generators(elems, mul, ident) == dim
    assert verify_ub_cyclic_module_count(p, d, orders)["frattini_dim"] == dim


@pytest.mark.parametrize("p,d,orders", [(2, 2, [4, 2, 2]), (3, 2, [9, 3]), (3, 2, [9, 9])])
def test_ub_cyclic_count_uniform(p, d, orders):
    assert verify_ub_cyclic_module_count(p, d, orders)["pass"]


@pytest.mark.parametrize("p,d,orders", [(2, 2, [4, 4, 2]), (3, 2, [9, 9, 3])])
def test_ub_cyclic_count_mixed_fails(p, d, orders):
    """Some I_j with 1 < |I_j| < |Gamma| next to another full inertia group: ker is nonabelian."""
    r = verify_ub_cyclic_module_count(p, d, orders)
    assert not r["abelian"] and r["frattini_dim"] < r["expected"]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_gr_identities_and_repeat(n):
    m = build_multiquad(n)
    assert check_gr_identities(m)["pass"]
    assert check_repeat(m)["pass"]


def test_gr_identities_general():
    for t in multiquad_types(2, 3, 1):
        assert check_gr_identities(build_model(t))["pass"]


@pytest.mark.parametrize("n", [2, 3])
def test_1gen_filtration_small(n):
    assert check_1gen_filtration(build_multiquad(n))["pass"]


def test_1gen_filtration_counterexample_n4():
    m = build_multiquad(4)
    bits = [1, 0, 1, 0, 1, 0, 1, 0, 1, 1, 1, 0, 1, 0, 1, 1, 0]
    v = fl.as_vector(bits, 2, m.N_dim)
    assert graded_degree(m, v) == 2
    M = m.gamma_span([v])
    x = m.from_n_vector(v)
    target = fl.intersect(M, _filtration(m, 4))
    lower = fl.intersect(M, _filtration(m, 5))
    # even every ordered index sequence, repeats allowed, falls short
    e = lower.echelon()
    for s in itertools.product(range(4), repeat=2):
        e.add(m.n_vector(m.iterated(list(s), last=x)))
    assert target.dim == 3 and len(e) == 2
    assert not check_1gen_filtration(m)["pass"]
