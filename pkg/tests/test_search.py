import pytest

from ramlab.arith.search import (
    find_primes_lb_cyclic, check_tuple, PrimeSearchCache, condition_a, exact_power,
)
from ramlab.arith.primes import is_prime
from ramlab.errors import SearchExhausted, InvalidArgs


def _is_pth_power(a, l, p):
    return pow(a % l, (l - 1) // p, l) == 1


def independent_check(primes, p, orders, case):
    """The construction conditions, restated with Euler's criterion only."""
    n = len(primes)
    for i, l in enumerate(primes):
        assert is_prime(l) and (l - 1) % orders[i] == 0
        if p == 2:
            v = 0
            while (l - 1) % 2 ** (v + 1) == 0:
                v += 1
            exact = 2 ** v == orders[i]
            if case == "II.1":
                assert exact == (i == 0)
            else:
                assert exact == (i in (0, n - 1))
        if i == 0:
            continue
        # (a) every earlier prime is a p-th power mod l
        assert all(_is_pth_power(q, l, p) for q in primes[:i])
        # (b) l splits in the degree-p subfield of Q(zeta_q) for the later earlier primes
        assert all(_is_pth_power(l, q, p) for q in primes[1:i])
        # (c) l is inert there for the first prime
        assert not _is_pth_power(l, primes[0], p)


@pytest.mark.parametrize("p,d,n,case,want", [
    (2, 1, 2, "II.2", [3, 11]),
    (3, 1, 2, "OddP", [7, 19]),
    (3, 1, 3, "OddP", [7, 19, 373]),
    (3, 2, 2, "OddP", [19, 109]),
])
def test_known_tuples(p, d, n, case, want):
    got = find_primes_lb_cyclic(p, d, n, case)
    assert got == want
    assert check_tuple(got, p, [p ** d] * n, case) == []
    independent_check(got, p, [p ** d] * n, case)


def test_smallest_first():
    got = find_primes_lb_cyclic(3, 1, 2, "OddP")
    for l in range(8, got[1]):
        if is_prime(l) and (l - 1) % 3 == 0:
            assert check_tuple([got[0], l], 3, [3, 3], "OddP")


def test_exhausted_cases():
    with pytest.raises(SearchExhausted):
        find_primes_lb_cyclic(2, 1, 3, "II.2", cap=10 ** 5)
    with pytest.raises(SearchExhausted):
        find_primes_lb_cyclic(2, 2, 2, "II.1", cap=10 ** 5)


def test_ii2_obstruction():
    """For n = 3 the middle prime must be 1 mod 4 but (a), (c) and reciprocity force 3 mod 4."""
    l1 = 3
    for l2 in range(5, 2000):
        if not is_prime(l2) or l2 % 4 != 1:
            continue
        assert not (_is_pth_power(l1, l2, 2) and not _is_pth_power(l2, l1, 2))


def test_relaxed_tuple():
    got = find_primes_lb_cyclic(2, 1, 3, "II.2", relaxed=True)
    assert got == [3, 5, 11]
    assert check_tuple(got, 2, [2, 2, 2], "II.2", relaxed=True) == []
    assert check_tuple(got, 2, [2, 2, 2], "II.2") != []


def test_condition_a_first_index():
    assert condition_a(7, [], 3, 3)
    assert not condition_a(5, [], 3, 3)
    assert exact_power(7, 2, 2) and not exact_power(5, 2, 2)


def test_validation():
    with pytest.raises(InvalidArgs):
        find_primes_lb_cyclic(3, 1, 2, "II.2")
    with pytest.raises(InvalidArgs):
        find_primes_lb_cyclic(3, 2, 2, "OddP", orders=[3, 9])


def test_cache_roundtrip(tmp_path):
    path = tmp_path / "search.jsonl"
    cache = PrimeSearchCache(str(path))
    assert find_primes_lb_cyclic(3, 1, 2, "OddP", cache=cache) == [7, 19]
    with pytest.raises(SearchExhausted):
        find_primes_lb_cyclic(2, 1, 3, "II.2", cap=10 ** 4, cache=cache)
    again = PrimeSearchCache(str(path))
    key = PrimeSearchCache.key(p=3, d=1, n=2, case="OddP", cap=10 ** 6, orders=[3, 3],
                               relaxed=False)
    assert again.get(key) == [7, 19]
    with pytest.raises(SearchExhausted, match="cached"):
        find_primes_lb_cyclic(2, 1, 3, "II.2", cap=10 ** 4, cache=again)
