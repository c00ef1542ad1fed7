import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from ramlab.arith import (
    is_prime, primes_up_to, factorize, primitive_root, squarefree_part, legendre, jacobi,
    kronecker, power_residue_index, bqf_narrow_class_group, fundamental_unit, is_fundamental,
    class_number, MultiquadFieldSpec, analyze_multiquad, CyclicFieldSpec, analyze_cyclic,
    vst_dimension, for_wreath_predicate, FqtPrime, fqt_delta,
)
from ramlab.arith.fqt import field, is_irreducible
from ramlab.errors import NotFundamental, BadModulus, CharConflict, NotIrreducible, WildPrime


# --- primes ---------------------------------------------------------------------------

def test_sieve_matches_primality():
    sieve = set(primes_up_to(20000))
    assert all(is_prime(n) == (n in sieve) for n in range(20001))


def test_large_primes_and_pseudoprimes():
    assert is_prime(2 ** 61 - 1) and is_prime(2 ** 31 - 1)
    # Carmichael numbers and strong pseudoprimes to small bases
    for n in (561, 41041, 3215031751, 3825123056546413051, 318665857834031151167461):
        assert not is_prime(n)
    big = 3317044064679887385961981
    while any(big % q == 0 for q in primes_up_to(50)):
        big += 1
    with pytest.raises(OverflowError):
        is_prime(big)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 10 ** 12))
def test_factorize_roundtrip(n):
    f = factorize(n)
    assert math.prod(p ** e for p, e in f.items()) == n
    assert all(is_prime(p) for p in f)


def test_primitive_root_order():
    for p in primes_up_to(300)[1:]:
        g = primitive_root(p)
        assert len({pow(g, k, p) for k in range(p - 1)}) == p - 1


def test_squarefree_part():
    assert squarefree_part(72) == 2 and squarefree_part(-75) == -3


# --- residues -------------------------------------------------------------------------

def test_legendre_examples():
    assert legendre(1, 7) == 1
    assert legendre(3, 13) == 1
    assert legendre(13, 5) == -1


def test_jacobi_matches_legendre_product():
    for n in range(3, 400, 2):
        for a in range(-20, 40):
            want = 1
            for p, e in factorize(n).items():
                want *= legendre(a, p) ** e
            assert jacobi(a, n) == want


def test_legendre_is_euler():
    for p in primes_up_to(200)[1:]:
        for a in range(1, p):
            r = pow(a, (p - 1) // 2, p)
            assert legendre(a, p) == (1 if r == 1 else -1)


def test_kronecker_at_two():
    for d in (-7, 5, 13, -3, 17, 21):
        want = 1 if d % 8 in (1, 7) else -1
        assert kronecker(d, 2) == want


def test_power_residue_index():
    assert power_residue_index(13, 7, 3) == 0
    assert power_residue_index(2, 7, 3) != 0
    with pytest.raises(BadModulus):
        power_residue_index(2, 11, 3)


# --- binary quadratic forms -------------------------------------------------------------

def naive_definite_count(D):
    """Reduced positive definite forms of discriminant D < 0, by brute force."""
    count = 0
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, b), c) == 1:
                count += 1
        a += 1
    return count


def test_known_class_numbers():
    for D, h in {-3: 1, -4: 1, -23: 3, -47: 5, -71: 7, -84: 4, -163: 1, 21: 1, 33: 1,
                 77: 1, 229: 3, 316: 3, 40: 2}.items():
        assert class_number(D) == h, D


def test_example_field():
    cg = bqf_narrow_class_group(-23)
    assert cg.narrow_invariants == (3,)


def test_narrow_vs_ordinary():
    # 21 and 34: fundamental unit of norm +1 doubles the narrow group
    cg = bqf_narrow_class_group(21)
    assert cg.narrow_invariants == (2,) and cg.ordinary_invariants == ()
    cg = bqf_narrow_class_group(136)
    assert cg.narrow_order == 4 and cg.ordinary_order == 2
    assert fundamental_unit(136)[2] == 1
    assert fundamental_unit(5) == (1, 1, -1)
    assert bqf_narrow_class_group(105).narrow_rank(2) == 2


def test_definite_class_number_matches_naive_count():
    rng = random.Random(5)
    seen = 0
    while seen < 60:
        D = -rng.randrange(3, 20000)
        if not is_fundamental(D):
            continue
        seen += 1
        assert class_number(D) == naive_definite_count(D), D


def test_genus_law():
    rng = random.Random(7)
    checked = 0
    while checked < 200:
        D = rng.choice([-1, 1]) * rng.randrange(3, 200000)
        if not is_fundamental(D):
            continue
        checked += 1
        t = len(factorize(abs(D)))
        cg = bqf_narrow_class_group(D)
        assert cg.narrow_rank(2) == t - 1, D
        assert cg.ordinary_rank(2) in (t - 1, t - 2)


def test_not_fundamental():
    for D in (48, -8 * 9, 1, 0, 45, 3):
        with pytest.raises(NotFundamental):
            bqf_narrow_class_group(D)


def test_unit_norm_equation():
    for D in (5, 8, 12, 13, 21, 28, 33, 40, 61, 94 * 4, 109):
        if not is_fundamental(D):
            continue
        X, Y, N = fundamental_unit(D)
        assert X * X - D * Y * Y == 4 * N and N in (1, -1)


# --- fields -------------------------------------------------------------------------------

def test_analyze_5_13():
    a = analyze_multiquad([5, 13])
    assert a.primes == (5, 13)
    assert a.type.images == ((1, 0), (0, 1)) and a.type.arch is None
    # Frobenius at 13 acts nontrivially on sqrt 5 since (5/13) = -1
    assert legendre(5, 13) == -1
    assert a.frobenius[1] == (1, 0)


def test_analyze_quadratic_dedup():
    a = analyze_multiquad([21])
    assert a.primes == (3, 7) and a.type.arch is None
    assert MultiquadFieldSpec.from_generators([-3, -7]).generators == \
        MultiquadFieldSpec.from_generators([-7, 21]).generators


def test_wild_rejected():
    with pytest.raises(WildPrime):
        analyze_multiquad([3])   # Q(sqrt 3) has discriminant 12


def test_analyze_cyclic():
    a = analyze_cyclic(CyclicFieldSpec(3, 2, ((19, 2), (7, 1))))
    assert a.type.images == (1, 3) and a.is_real
    with pytest.raises(BadModulus):
        CyclicFieldSpec(3, 2, ((7, 2), (13, 1)))


def test_cyclic_quadratic_discriminant():
    a = analyze_cyclic(CyclicFieldSpec(2, 1, ((3, 1), (7, 1))))
    assert a.quadratic_discriminant() == 21 and a.is_real


# --- V_S^T ---------------------------------------------------------------------------------

def test_vst_examples():
    assert vst_dimension([], [], 3) == 0
    assert vst_dimension([], [], 5) == 0
    assert vst_dimension(["inf"], [], 2) == 0
    assert vst_dimension([], [], 2) == 1


def test_vst_monotone():
    rng = random.Random(3)
    pool = ["inf", 2, 3, 5, 7, 11, 13, 17, 19]
    for _ in range(50):
        p = rng.choice([2, 3, 5])
        S = {x for x in pool if rng.random() < 0.3}
        T = {x for x in pool if rng.random() < 0.3}
        S2 = S | {rng.choice(pool)}
        T2 = T | {rng.choice(pool)}
        assert vst_dimension(S2, T, p) <= vst_dimension(S, T, p) <= vst_dimension(S, T2, p)


def test_vst_brute_force_p2():
    """Square classes of +-prod(T) numbers that are squares at S \\ T, counted directly."""
    import itertools
    rng = random.Random(11)
    pool = ["inf", 3, 5, 7, 13, 17]
    for _ in range(30):
        S = {x for x in pool if rng.random() < 0.4}
        T = {x for x in pool if rng.random() < 0.4}
        fin = sorted(x for x in S | T if x != "inf")
        count = 0
        for sign in (1, -1):
            for k in range(len(fin) + 1):
                for sub in itertools.combinations(fin, k):
                    a = sign * math.prod(sub)
                    ok = True
                    for q in S - T:
                        if q == "inf":
                            ok = ok and a > 0
                        else:
                            ok = ok and a % q != 0 and legendre(a, q) == 1
                    count += ok
        assert 1 << vst_dimension(S, T, 2) == count, (S, T)


# --- splitting predicate and F_q(t) ------------------------------------------------------

def test_for_wreath_predicate():
    # inert in Q(sqrt 5): l = 2, 3 mod 5
    assert not for_wreath_predicate(5, 13, 2)
    assert not for_wreath_predicate(5, 7, 3)   # 7 = 1 mod 3 but inert
    assert not for_wreath_predicate(5, 59, 3)  # 59 != 1 mod 3
    for l in (29, 89, 101, 181, 229, 349, 401, 461):
        assert for_wreath_predicate(5, l, 2)


def test_fqt():
    assert fqt_delta(FqtPrime(3, (1, 1)), 2) == 1
    assert fqt_delta(FqtPrime(3, (1, 1)), 13) == 0
    with pytest.raises(CharConflict):
        fqt_delta(FqtPrime(3, (1, 1)), 3)
    with pytest.raises(NotIrreducible):
        FqtPrime(3, (1, 0, 1, 0, 1))   # x^4 + x^2 + 1 = (x^2 + x + 2)(x^2 + 2x + 2) mod 3


def test_irreducible_count_gf4():
    # monic irreducibles of degree 2 over F_4: (16 - 4) / 2 = 6
    F = field(4)
    count = sum(is_irreducible(F, (a, b, 1)) for a in range(4) for b in range(4))
    assert count == 6
