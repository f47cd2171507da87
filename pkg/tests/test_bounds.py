import math

import mpmath
import pytest

from orbitbound import bounds
from orbitbound.bounds import PrimePair, bound_C, choose_primes


@pytest.mark.parametrize("N, want", [(1, (2, 3)), (6, (5, 7)), (10, (3, 7)), (35, (2, 3))])
def test_choose_primes(N, want):
    pair = choose_primes(N)
    assert (pair.p, pair.q) == want
    assert N % pair.p and N % pair.q


def test_prime_pair_validation():
    with pytest.raises(bounds.BoundError):
        PrimePair(3, 2)
    with pytest.raises(bounds.BoundError):
        PrimePair(2, 4)


def exact_log2(x: int):
    with mpmath.workprec(200):
        return bounds.log2_int(x)


def test_p2_term_n1_against_exact_product():
    # M = (1+2)*2 = 6; prod_m (2^m)^(2^6) * (2^m)!
    exact = 1
    for m in range(1, 7):
        exact *= (2**m) ** 64 * math.factorial(2**m)
    with mpmath.workprec(200):
        closed = 64 * 21 + sum(exact_log2(math.factorial(2**m)) for m in range(1, 7))
    got = bounds.per_prime_term_log2(1, 2)
    assert abs(got - exact_log2(exact)) < mpmath.mpf(10) ** -20
    assert abs(got - closed) < mpmath.mpf(10) ** -20


def test_p3_exponent_part():
    exponent, _ = bounds.per_prime_parts_log2(1, 3)
    with mpmath.workprec(200):
        want = 3**9 * 45 * mpmath.log(3, 2)
    assert abs(exponent - want) / want < mpmath.mpf(10) ** -30


def test_log_gamma_factorial_path():
    assert abs(bounds.log2_factorial(64) - exact_log2(math.factorial(64))) < 1e-20
    big = math.factorial(19683)
    assert abs(bounds.log2_factorial(19683) - exact_log2(big)) / exact_log2(big) < 1e-9


def test_exponent_factor_is_two_to_1344():
    assert bounds.exponent_factor_exact(1, 2) == 2**1344
    assert 64 * sum(range(1, 7)) == 1344


def test_exact_C1_matches_analytic():
    b = bound_C(1, PrimePair(2, 3), want_exact=True)
    assert b.exact_value is not None
    assert b.label == "C(n)"
    rel = abs(exact_log2(b.exact_value) - b.log2_value) / b.log2_value
    assert rel <= 1e-6
    assert b.exact_value.bit_length() == 1760896


def test_n2_exact_infeasible():
    b = bound_C(2, PrimePair(2, 3), want_exact=True)
    assert b.exact_value is None
    assert "infeasible" in b.note
    assert b.log2_value is not None


def test_derived_label_for_other_pairs():
    assert bound_C(1, PrimePair(5, 7)).label == "derived bound"


def test_monotone_in_n_and_primes():
    vals = [bound_C(n).log2_value for n in (1, 2, 3)]
    assert vals[0] < vals[1] < vals[2]
    assert bound_C(1, PrimePair(2, 5)).log2_value > bound_C(1, PrimePair(2, 3)).log2_value
    assert bound_C(1, PrimePair(3, 5)).log2_value > bound_C(1, PrimePair(2, 5)).log2_value


def test_not_representable_past_term_limit():
    b = bound_C(8)
    assert b.log2_value is None
    assert "not representable" in b.note
    assert b.exceeded_by(10**100) is False


def test_exceeded_by():
    b = bound_C(1)
    assert not b.exceeded_by(10**6)
