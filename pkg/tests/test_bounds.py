import itertools
import random
from math import comb

import pytest

from ramlab.bounds import (
    kurosh_rank, upper_bound_Q, upper_bound_Fqt, lower_bound_cyclic, lower_bound_multiquad,
    lower_genus, ub_cyclic_secondary, nu, prop_lower, generator_rank_ST, FqtBase,
    bounds_report,
)
from ramlab.errors import OverlapSets, CharDividesDegree, InvalidArgs
from ramlab.presentation import RamificationType, build_model, build_multiquad
from ramlab.arith.fqt import FqtPrime
from ramlab.arith.primes import factorize
from ramlab.arith.residues import kronecker
from ramlab.arith.vst import vst_dimension

C = RamificationType.cyclic
MQ = RamificationType.standard_multiquad


def test_kurosh():
    assert kurosh_rank(C(3, 1, [3])) == 0
    assert kurosh_rank(MQ(3)) == 5
    assert kurosh_rank(C(3, 2, [9, 3])) == 6


def test_kurosh_equals_model_dim():
    for t in [MQ(2), MQ(3), MQ(4), C(2, 2, [4, 2, 2]), C(3, 2, [9, 3, 3]),
              RamificationType.multiquad(2, [(1, 0), (0, 1), (1, 1)])]:
        assert kurosh_rank(t) == build_model(t).N_dim


def test_upper_Q():
    assert upper_bound_Q(C(2, 1, [2, 2])) == 1
    assert upper_bound_Q(C(3, 2, [9, 3])) == 6
    assert upper_bound_Q(MQ(2)) == 1


def test_upper_Fqt():
    assert upper_bound_Fqt(C(2, 1, [2, 2]), 3) == 1
    assert upper_bound_Fqt(C(3, 1, [3]), 7) == 0
    assert upper_bound_Fqt(RamificationType.multiquad(2, [(1, 0), (0, 1), (1, 1)]), 5) == 3
    with pytest.raises(CharDividesDegree):
        upper_bound_Fqt(C(3, 1, [3, 3]), 9)


def test_lower_cyclic():
    assert lower_bound_cyclic(C(3, 1, [3] * 4)) == 3
    assert lower_bound_cyclic(C(2, 2, [4, 2, 2])) == 1
    assert lower_bound_cyclic(C(3, 2, [9])) == 0


def multiquad_oracle(d, n, a):
    total = n - d
    for i in range(2, d):
        v = (i - 1) * comb(d, i) + (n - d) * comb(d - 1, i - 1) - n * comb(d - 1, i - 2)
        v -= comb(d, i - a) if i - a >= 0 else 0
        total += max(0, v)
    return total


def test_lower_multiquad_values():
    assert lower_bound_multiquad(2, 3, 1) == 1
    assert lower_bound_multiquad(3, 8, 1) == 7
    for d in (1, 2, 3):
        assert lower_bound_multiquad(d, d, 2) == 0


def test_lower_multiquad_closed_form():
    for d in range(1, 7):
        for n in range(d, d + 6):
            for a in (1, 2):
                assert lower_bound_multiquad(d, n, a) == multiquad_oracle(d, n, a)
    with pytest.raises(InvalidArgs):
        lower_bound_multiquad(3, 2, 1)


def test_lower_multiquad_below_upper_and_monotone():
    for d in range(1, 5):
        for a in (1, 2):
            prev = None
            for n in range(d, 11):
                lb = lower_bound_multiquad(d, n, a)
                assert lb <= (n - 1) * 2 ** d - n * 2 ** (d - 1) + 1
                assert prev is None or lb >= prev
                prev = lb


def test_secondary():
    assert ub_cyclic_secondary(C(3, 2, [9, 3])) == 3
    assert ub_cyclic_secondary(C(3, 1, [3, 3, 3])) == 2
    assert ub_cyclic_secondary(C(2, 2, [4, 2, 2])) == 4


def test_nu():
    # relator places: every ramified prime and, for p = 2, the real place
    quad = build_model(C(2, 1, [2, 2]))
    assert nu(quad) == -3 and prop_lower(quad) == -2
    assert nu(build_multiquad(2)) == -2
    assert nu(build_multiquad(2), relator_places=2) == -1
    assert nu(build_multiquad(3), relator_places=0) == 0


def test_bounds_report_order():
    for t in [MQ(3), C(3, 2, [9, 3, 3]), C(2, 2, [4, 2], imaginary=True)]:
        rep = bounds_report(t, build_model(t))
        assert rep.check()
        assert rep.lower_genus <= rep.upper <= rep.kurosh


def test_generator_rank_examples():
    assert generator_rank_ST("Q", [7, "inf"], [], 3) == 1
    # 17 = 1 mod 4: Q(sqrt 17) is the only quadratic field unramified outside {17, inf}
    assert generator_rank_ST("Q", [17, "inf"], [], 2) == 1
    assert generator_rank_ST(FqtBase(3), [FqtPrime(3, (1, 1))], ["inf"], 2) == 0
    with pytest.raises(OverlapSets):
        generator_rank_ST("Q", [5], [5], 2)


def quadratic_rank(S, T):
    """F_2-dimension of quadratic fields unramified outside S and split at T."""
    fin = [x for x in S if x != "inf"]
    count = 1
    for sign in (1, -1):
        for k in range(len(fin) + 1):
            for sub in itertools.combinations(fin, k):
                D = sign
                for l in sub:
                    D *= l
                if D == 1:
                    continue
                disc = D if D % 4 == 1 else 4 * D
                ram = set(factorize(abs(disc))) | ({"inf"} if D < 0 else set())
                if not ram <= set(S):
                    continue
                ok = True
                for t in T:
                    if t == "inf":
                        ok = ok and D > 0
                    elif t == 2:
                        ok = ok and D % 8 == 1
                    else:
                        ok = ok and kronecker(disc, t) == 1
                count += ok
    r = count.bit_length() - 1
    assert 1 << r == count
    return r


def test_generator_rank_matches_quadratic_count():
    rng = random.Random(1)
    pool = ["inf", 2, 3, 5, 7, 11, 13, 17, 29]
    checked = 0
    for _ in range(800):
        S = {x for x in pool if rng.random() < 0.4}
        T = {x for x in pool if x not in S and rng.random() < 0.2}
        if vst_dimension(S, T, 2):
            continue
        checked += 1
        assert generator_rank_ST("Q", S, T, 2) == quadratic_rank(S, T), (S, T)
    assert checked > 300


def test_lower_genus():
    assert lower_genus(C(2, 1, [2, 2, 2])) == 1
    assert lower_genus(C(2, 1, [2, 2, 2], imaginary=True)) == 2
    assert lower_genus(C(3, 1, [3, 3])) == 1
