import random

import pytest

from orbitbound.orbits import (AffineSystem, NotPeriodic, OrbitError, Periodic, Reason, Undecided,
                               decide, decide_periodic, orbit_closure, permutation_check)
from orbitbound.polyring import PolyError, apply_map
from orbitbound.suites import HeightExceeded, random_system, word_oracle


def S(n, *maps, N=1):
    return AffineSystem.build(n, [list(m) for m in maps], N)


def test_closure_involution():
    st = orbit_closure(S(1, ["-x1"]), [5], 100)
    assert st.visited == {(5,), (-5,)} and st.stabilized and not st.frontier


def test_closure_shift_exceeds_budget():
    st = orbit_closure(S(1, ["x1 + 1"]), [0], 100)
    assert len(st.visited) == 101 and not st.stabilized


def test_closure_two_generators():
    st = orbit_closure(S(2, ["x2", "x1"], ["-x1", "-x2"]), [1, 2], 100)
    assert st.visited == {(1, 2), (2, 1), (-1, -2), (-2, -1)} and st.stabilized


def test_closure_matches_hand_enumeration():
    # hand oracle: apply both maps to everything until nothing new
    sys = S(2, ["x2", "x1"], ["-x1", "-x2"])
    seen, todo = {(1, 2)}, [(1, 2)]
    while todo:
        y = todo.pop()
        for _, F in sys.maps:
            z = apply_map(F, y)
            if z not in seen:
                seen.add(z)
                todo.append(z)
    assert orbit_closure(sys, [1, 2], 100).visited == seen


def test_permutation_check_examples():
    [c] = permutation_check(S(1, ["-x1"]), [(5,), (-5,)])
    assert c.bijective and c.permutation == {(5,): (-5,), (-5,): (5,)}
    [c] = permutation_check(S(1, ["36 - x1"]), [(0,), (36,)])
    assert c.bijective and c.permutation[(0,)] == (36,)
    [c] = permutation_check(S(1, ["x1^2"]), [(-1,), (1,)])
    assert not c.bijective
    assert c.collision == ((-1,), (1,), (1,)) and c.unhit == (-1,)


def test_permutation_check_requires_closed_set():
    with pytest.raises(OrbitError):
        permutation_check(S(1, ["x1 + 1"]), [(0,)])


def test_decide_examples():
    v = decide_periodic(S(1, ["36 - x1"]), [0], 10**4)
    assert isinstance(v, Periodic) and v.orbit == [(0,), (36,)]
    v = decide_periodic(S(1, ["x1 + 1"]), [0], 10**4)
    assert isinstance(v, Undecided) and v.budget == 10**4
    v = decide_periodic(S(1, ["x1^2"]), [-1], 10**4)
    assert isinstance(v, NotPeriodic) and v.reason is Reason.FINITE_NOT_PERMUTED
    assert v.witness["collision"] == ((-1,), (1,)) and v.witness["image"] == (1,)
    v = decide_periodic(S(1, ["x1 + 1"]), [0], 10**4, bound_override=50)
    assert isinstance(v, NotPeriodic) and v.reason is Reason.EXCEEDED_PROVEN_BOUND


def test_empty_generator_set_is_periodic():
    v = decide_periodic(AffineSystem(1, ()), [7], 10)
    assert isinstance(v, Periodic) and v.orbit == [(7,)] and v.permutations == {}


def test_rational_base_ring():
    sys = S(1, ["1/2*x1"], N=2)
    st = orbit_closure(sys, ["1"], 20)
    assert not st.stabilized
    with pytest.raises(PolyError):
        S(1, ["1/3*x1"], N=2)


def test_decision_metadata_uses_C1():
    d = decide(S(1, ["-x1"]), [1], 100)
    assert d.bound.label == "C(n)" and d.bound_override is None


def test_bad_budget():
    with pytest.raises(OrbitError):
        decide(S(1, ["-x1"]), [1], 0)


def tame_systems(seed, count):
    """Random systems whose orbit heights stay small (squaring maps can explode)."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n, maps, x = random_system(rng)
        try:
            word_oracle(n, maps, x)
        except HeightExceeded:
            continue
        out.append((n, maps, x))
    return out


def test_monotone_in_extra_rounds():
    """A larger budget only ever adds points (the chain is ascending)."""
    for n, maps, x in tame_systems(1, 40):
        sys = AffineSystem.build(n, maps)
        small = orbit_closure(sys, x, 20)
        big = orbit_closure(sys, x, 60)
        if small.stabilized:
            assert big.visited == small.visited
        else:
            assert len(big.visited) >= len(small.visited)


def test_deterministic_under_generator_order():
    for n, maps, x in tame_systems(2, 40):
        a = decide_periodic(AffineSystem.build(n, maps), x, 10**4, 200)
        b = decide_periodic(AffineSystem.build(n, list(reversed(maps))), x, 10**4, 200)
        assert a.tag == b.tag
        if isinstance(a, Periodic):
            assert a.orbit == b.orbit


def test_periodic_orbit_contracts_under_congruence():
    """Reduction mod a prime maps a periodic orbit onto a set permuted by S."""
    v = decide_periodic(S(2, ["x2", "x1"], ["-x1", "-x2"]), [1, 2], 100)
    for p in (3, 5):
        red = {tuple(c % p for c in y) for y in v.orbit}
        sys = S(2, ["x2", "x1"], ["-x1", "-x2"])
        for _, F in sys.maps:
            assert {tuple(c % p for c in apply_map(F, y)) for y in red} == red


def test_decide_in_dimension_two_without_override():
    v = decide_periodic(S(2, ["x2", "x1"]), [1, 2], 100)
    assert isinstance(v, Periodic)
    v = decide_periodic(S(2, ["x1 + 1", "x2"]), [0, 0], 100)
    assert isinstance(v, Undecided)


def test_bound_materialized_only_when_below_budget():
    from orbitbound.bounds import EffectiveBound, PrimePair
    from orbitbound.orbits import _materialize
    import mpmath
    small = EffectiveBound(1, PrimePair(2, 3), mpmath.mpf(5))  # bound 32
    assert _materialize(small, 100) == 32
    assert _materialize(small, 10) is None
    d = decide(S(1, ["x1 + 1"]), [0], 10**4)
    assert isinstance(d.verdict, Undecided)
