import random

import pytest
from hypothesis import given, settings, strategies as st

from ramlab import fplinalg as fl
from ramlab.errors import DimensionMismatch


def naive_rank(rows, p):
    """Plain Gaussian elimination over lists, kept independent of fplinalg."""
    m = [list(r) for r in rows]
    r = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(r, len(m)) if m[i][c] % p), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] % p:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        r += 1
    return r


def test_rank_examples():
    assert fl.rank(fl.FpMatrix.identity(3, 2)) == 3
    assert fl.rank(fl.FpMatrix.zero(2, 5, 3)) == 0
    assert fl.rank(fl.FpMatrix.from_rows([[1, 1, 0], [0, 1, 1], [1, 0, 1]], 2)) == 2


def test_quotient_dim_examples():
    assert fl.quotient_dim(fl.full_space(5), fl.zero_space(5)) == 5
    amb = fl.span([0b001, 0b010], 3)
    assert fl.quotient_dim(amb, fl.span([0b011], 3)) == 1
    assert fl.quotient_dim(amb, amb) == 0


def test_quotient_requires_containment():
    with pytest.raises(Exception):
        fl.quotient_dim(fl.span([0b001], 3), fl.span([0b100], 3))


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        fl.as_vector([1, 0], 2, 3)
    with pytest.raises(DimensionMismatch):
        fl.as_vector(0b1000, 2, 3)


matrices = st.integers(1, 6).flatmap(lambda r: st.integers(1, 7).flatmap(
    lambda c: st.sampled_from([2, 3, 5]).flatmap(
        lambda p: st.tuples(st.just(p), st.lists(
            st.lists(st.integers(0, p - 1), min_size=c, max_size=c), min_size=r, max_size=r)))))


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_rank_matches_naive(data):
    p, rows = data
    assert fl.rank(fl.FpMatrix.from_rows(rows, p)) == naive_rank(rows, p)


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_rank_nullity(data):
    p, rows = data
    m = fl.FpMatrix.from_rows(rows, p)
    k = fl.kernel(m)
    assert fl.rank(m) + k.dim == m.cols
    for v in k.rows:
        assert fl.is_zero(m.apply(v))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 32), st.integers(1, 8))
def test_intersection_dimension_formula(seed, dim):
    rng = random.Random(seed)
    a = fl.span([rng.randrange(1 << dim) for _ in range(rng.randrange(dim + 1))], dim)
    b = fl.span([rng.randrange(1 << dim) for _ in range(rng.randrange(dim + 1))], dim)
    s = fl.sum_spaces(a, b)
    i = fl.intersect(a, b)
    assert s.dim + i.dim == a.dim + b.dim
    assert fl.is_subspace(i, a) and fl.is_subspace(i, b)
    for v in range(1 << dim):
        assert fl.contains(i, v) == (fl.contains(a, v) and fl.contains(b, v))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_coordinates_roundtrip_odd(seed):
    rng = random.Random(seed)
    p, dim = 3, 4
    vecs = [tuple(rng.randrange(p) for _ in range(dim)) for _ in range(3)]
    s = fl.span(vecs, dim, p)
    for v in vecs:
        assert fl.contains(s, v)
        assert s.from_coordinates(s.coordinates(v)) == v


def test_compiled_matrix_matches_apply():
    rng = random.Random(1)
    rows = [[rng.randrange(2) for _ in range(6)] for _ in range(5)]
    m = fl.FpMatrix.from_rows(rows, 2)
    f = fl.compile_matrix(m)
    for v in range(64):
        assert f(v) == m.apply(v)
