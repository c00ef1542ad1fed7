import itertools
import random

import pytest

from ramlab.groups import (
    GammaGroup, Subgroup, WreathGroup, SemidirectProduct, closure, regular_module,
    build_trace_quotient, trivial_module, coinvariants_dim, wreath_mul, wreath_inv,
)
from ramlab.errors import MixedGroups, NotASubgroup
from ramlab.presentation import build_multiquad


def test_trace_quotient_dims():
    c4 = GammaGroup.cyclic(2, 2)
    assert build_trace_quotient(c4, c4.whole()).dim == 3
    c2 = GammaGroup.cyclic(2, 1)
    assert build_trace_quotient(c2, c2.whole()).dim == 1
    e = GammaGroup.elementary(2, 2)
    assert build_trace_quotient(e, e.subgroup([(1, 0)])).dim == 2


def test_noncyclic_inertia_rejected():
    e = GammaGroup.elementary(2, 2)
    with pytest.raises(NotASubgroup):
        build_trace_quotient(e, e.whole())


def test_coinvariants():
    e = GammaGroup.elementary(2, 2)
    assert coinvariants_dim(regular_module(e)) == 1
    assert coinvariants_dim(trivial_module(e, 3)) == 3
    c2 = GammaGroup.cyclic(2, 1)
    assert coinvariants_dim(build_trace_quotient(c2, c2.whole())) == 1


@pytest.mark.parametrize("gamma", [GammaGroup.cyclic(3, 2), GammaGroup.elementary(2, 3)])
def test_module_relations(gamma):
    for h in gamma.elements():
        m = build_trace_quotient(gamma, gamma.subgroup([h])) if h != gamma.zero() else None
        if m is not None:
            assert m.check_relations()


def test_subgroup_cyclic_generator():
    c9 = GammaGroup.cyclic(3, 2)
    s = Subgroup.generated(c9, [3, 6])
    assert s.order == 3 and s.is_cyclic()
    assert c9.element_order(s.cyclic_generator()) == 3


def test_wreath_examples():
    W = WreathGroup(2, 2)
    a = W.a()
    assert W.mul(a, a) == W.identity()
    g = W.g(1)
    conj = W.mul(W.mul(g, a), W.inv(g))
    assert conj == W.element(W.translate(g.top, a.base), W.top_group.zero())
    # [(0,g),(v,0)] = ((1 + g) v, 0) for p = 2
    v = W.element([1, 0, 1, 0], W.top_group.zero())
    c = W.commutator(g, v)
    shifted = W.translate(g.top, v.base)
    assert c.top == W.top_group.zero()
    assert c.base == tuple((x + y) % 2 for x, y in zip(v.base, shifted))


def test_wreath_group_axioms():
    W = WreathGroup(3, 1)
    elems = [W.element(b, (t,)) for b in itertools.product(range(3), repeat=3) for t in range(3)]
    rng = random.Random(0)
    for _ in range(200):
        x, y, z = rng.sample(elems, 3)
        assert wreath_mul(wreath_mul(x, y), z) == wreath_mul(x, wreath_mul(y, z))
        assert wreath_mul(x, wreath_inv(x)) == W.identity()
    assert len(closure([W.a(), W.g(0)], W.mul, W.identity())) == W.order == 81


def test_mixed_wreath_rejected():
    with pytest.raises(MixedGroups):
        wreath_mul(WreathGroup(2, 1).a(), WreathGroup(2, 1).a())


def test_semidirect_inverse_and_order():
    c4 = GammaGroup.cyclic(2, 2)
    S = SemidirectProduct(build_trace_quotient(c4, c4.whole()))
    elems = closure([S.element((1, 0, 0), 0), S.element((0, 0, 0), 1)], S.mul, S.identity())
    assert len(elems) == S.order == 8 * 4
    for x in list(elems)[:40]:
        assert S.mul(x, S.inv(x)) == S.identity()


def _wreath_image(model, comp, word):
    """Image of a word in x_1..x_n in C_2 wr (C_2)^U, computed in WreathGroup."""
    U, q = model.components[comp]
    W = WreathGroup(2, len(U))
    out = W.identity()
    for i in word:
        if i == q:
            x = W.a()
        elif i in U:
            x = W.g(U.index(i))
        else:
            x = W.identity()
        out = W.mul(out, x)
    return W, out


@pytest.mark.parametrize("n", [2, 3, 4])
def test_packed_model_matches_wreath(n):
    model = build_multiquad(n)
    rng = random.Random(n)
    for _ in range(30):
        word = [rng.randrange(n) for _ in range(rng.randrange(1, 12))]
        a = model.word(word)
        for c in range(len(model.components)):
            W, w = _wreath_image(model, c, word)
            base, top = model.component(a, c)
            u = len(model.components[c][0])
            packed = [0] * W.base_dim
            for h in range(1 << u):
                coords = tuple((h >> j) & 1 for j in range(u))
                packed[W._index[coords]] = (base >> h) & 1
            assert tuple(packed) == w.base
            assert tuple((top >> j) & 1 for j in range(u)) == w.top
