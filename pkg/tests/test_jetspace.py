import itertools
import random

import pytest

from orbitbound.jetspace import (JetError, JetRingCtx, jet_apply, jet_fingerprint, jet_mul,
                                 lift_point, point_set_size, ring_size)
from orbitbound.polyring import apply_map, jacobian_mod, parse_poly
from orbitbound.suites import reduce_mod_ideal_square


def ctx1(p, a=0):
    return JetRingCtx(p, 1, (a,))


def test_identity_element():
    c = ctx1(3)
    for u in c.elements():
        assert jet_mul(c.one(), u) == u


def test_p_squared_vanishes():
    c = ctx1(2)
    two = c.element(2, (0,))
    assert (two * two).is_zero()


def test_p_times_tangent_vanishes():
    c = ctx1(3)
    prod = c.element(3, (0,)) * c.element(0, (1,))
    assert prod.is_zero()
    # independent: 3 * (x - 0) reduced modulo (3, x)^2
    assert reduce_mod_ideal_square([0, 3], 0, 3) == (0, 0)


@pytest.mark.parametrize("p, n, want", [(2, 1, 8), (3, 2, 81)])
def test_ring_size(p, n, want):
    c = JetRingCtx(p, n, (0,) * n)
    assert ring_size(c) == want == sum(1 for _ in c.elements())


def test_point_set_size_n1_is_ring():
    c = ctx1(2)
    assert point_set_size(c) == 8


def test_bad_prime():
    with pytest.raises(JetError):
        JetRingCtx(4, 1, (0,))


def P(srcs, n):
    return [parse_poly(s, n) for s in srcs]


def test_jet_apply_shift():
    out = jet_apply(P(["x1 + 1"], 1), ctx1(2).tautological())
    assert out.base == (1,) and out.tangent == [[1]]


def test_jet_apply_square():
    out = jet_apply(P(["x1^2"], 1), ctx1(3, 1).tautological())
    assert out.base == (1,) and out.tangent == [[2]]


def test_jet_apply_swap():
    tau = JetRingCtx(3, 2, (1, 2)).tautological()
    out = jet_apply(P(["x2", "x1"], 2), tau)
    assert out.base == (2, 1) and out.tangent == [[0, 1], [1, 0]]


@pytest.mark.parametrize("y, p, a, base", [((5,), 2, (1,), (1,)), ((36,), 3, (0,), (0,)),
                                            ((7, 10), 3, (1, 1), (7, 1))])
def test_lift_point(y, p, a, base):
    P_ = lift_point(y, p)
    assert P_.ctx.a == a
    assert P_.base == base
    assert all(v == 0 for row in P_.tangent for v in row)


def test_fingerprint_negation():
    fp = jet_fingerprint(P(["-x1"], 1), (5,), 3)
    assert tuple(fp["base"]) == (4,) and fp["jacobian"] == [[2]]


@pytest.mark.parametrize("p, n", [(2, 1), (2, 2), (3, 1)])
def test_tautological_consistency_exhaustive(p, n):
    """Base of F(tau_a) is F(a) mod p^2 and tangent is J_F(a) mod p for every a."""
    rng = random.Random(p * 10 + n)
    for _ in range(5):
        F = [parse_poly(" + ".join(f"{rng.randint(-3, 3)}*x{rng.randint(1, n)}^{rng.randint(0, 3)}"
                                   for _ in range(3)), n) for _ in range(n)]
        for a in itertools.product(range(p), repeat=n):
            out = jet_apply(F, JetRingCtx(p, n, a).tautological())
            assert out.base == tuple(v % (p * p) for v in apply_map(F, a))
            assert out.tangent == jacobian_mod(F, a, p)


def test_equivariance_under_composition():
    """Applying G then F in the jet ring agrees with applying the composite map."""
    F = P(["x1^2 + x2", "x1 - 2*x2"], 2)
    G = P(["x2 + 1", "x1*x2"], 2)
    x1, x2 = parse_poly("x1", 2), parse_poly("x2", 2)
    subs = G
    FG = []
    for f in F:
        acc = parse_poly("0", 2)
        for e, c in f.terms.items():
            term = parse_poly(str(c), 2)
            for g, k in zip(subs, e):
                term = term * g**k
            acc = acc + term
        FG.append(acc)
    for p in (2, 3):
        for a in itertools.product(range(p), repeat=2):
            tau = JetRingCtx(p, 2, a).tautological()
            assert jet_apply(F, jet_apply(G, tau)) == jet_apply(FG, tau)
    del x1, x2
