from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from orbitbound.polyring import (Polynomial, PolyError, PolySyntaxError, format_poly,
                                 jacobian_mod, make_point, parse_poly)


def P(src, n=1, N=1):
    return parse_poly(src, n, N)


def test_parse_identity():
    assert P("x1").terms == {(1,): 1}


def test_parse_involution_terms():
    assert P("36 - x1").terms == {(0,): 36, (1,): -1}


def test_unknown_variable():
    with pytest.raises(PolyError, match="unknown variable"):
        P("x3", 2)


@pytest.mark.parametrize("src, pos", [("x1 +", 4), ("(x1", 3), ("x1 ** 2", 4), ("2 $ x1", 2)])
def test_syntax_errors_report_position(src, pos):
    with pytest.raises(PolySyntaxError) as err:
        P(src)
    assert err.value.pos == pos


def test_rational_denominator_must_divide_N():
    assert P("1/2*x1 + 1/3", 1, 6).terms == {(1,): Fraction(1, 2), (0,): Fraction(1, 3)}
    with pytest.raises(PolyError):
        P("1/5*x1", 1, 6)
    with pytest.raises(PolyError):
        P("1/2*x1", 1, 1)


@pytest.mark.parametrize("src, y, want", [
    ("x1^2", (3,), 9), ("36 - x1", (0,), 36), ("x1*x2 + 1", (2, -3), -5)])
def test_eval_examples(src, y, want):
    f = P(src, len(y))
    assert f.eval(y) == want


@pytest.mark.parametrize("src, y, m, want", [
    ("x1^2", (3,), 4, 1), ("x1 + 1", (1,), 2, 0), ("5*x1", (7,), 5, 0)])
def test_eval_mod_examples(src, y, m, want):
    assert P(src).eval_mod(y, m) == want


def test_eval_mod_rejects_modulus_sharing_factor_with_denominator():
    with pytest.raises(PolyError):
        P("1/2*x1", 1, 2).eval_mod((1,), 4)


@pytest.mark.parametrize("src, n, i, want", [
    ("x1^2*x2", 2, 1, "2*x1*x2"), ("x1^2", 2, 2, "0"), ("36 - x1", 1, 1, "-1")])
def test_partial_examples(src, n, i, want):
    assert P(src, n).partial(i) == P(want, n)


def test_partial_index_out_of_range():
    with pytest.raises(PolyError):
        P("x1").partial(2)


@pytest.mark.parametrize("F, a, p, want", [
    (["x2", "x1"], (1, 2), 3, [[0, 1], [1, 0]]),
    (["x1^2"], (1,), 3, [[2]]),
    (["x1 + 1"], (0,), 2, [[1]])])
def test_jacobian_examples(F, a, p, want):
    n = len(F)
    assert jacobian_mod([P(f, n) for f in F], a, p) == want


def test_jacobian_square_by_first_order_expansion():
    # (1 + e)^2 = 1 + 2e + e^2: tangent coefficient 2
    f = P("x1^2")
    e = Fraction(1, 10**9)
    slope = (f.eval((1 + e,)) - f.eval((1,))) / e
    assert int(slope) % 3 == jacobian_mod([f], (1,), 3)[0][0]


def test_make_point():
    assert make_point(["1/2", 3], 2, 2) == (Fraction(1, 2), 3)
    with pytest.raises(PolyError):
        make_point([1], 2)
    with pytest.raises(PolyError):
        make_point(["1/3"], 1, 2)


# property tests

coeff = st.integers(-20, 20)
exps = st.tuples(st.integers(0, 3), st.integers(0, 3))


@st.composite
def polys(draw, n=2):
    terms = draw(st.dictionaries(exps, coeff, max_size=5))
    return Polynomial(n, terms)


points = st.tuples(st.integers(-50, 50), st.integers(-50, 50))


@given(polys(), points, st.integers(2, 200))
def test_eval_mod_matches_eval(f, y, m):
    assert f.eval_mod(y, m) == f.eval(y) % m


@given(polys(), polys(), points)
def test_ring_homomorphism(f, g, y):
    assert (f + g).eval(y) == f.eval(y) + g.eval(y)
    assert (f * g).eval(y) == f.eval(y) * g.eval(y)


@given(polys(), polys(), st.sampled_from([1, 2]))
def test_leibniz_rule(f, g, i):
    assert (f * g).partial(i) == f.partial(i) * g + f * g.partial(i)


@given(polys())
def test_print_parse_round_trip(f):
    text = format_poly(f)
    g = parse_poly(text, 2)
    assert g == f
    assert format_poly(g) == text


@given(polys())
def test_canonical_no_zero_coefficients(f):
    assert all(c != 0 for c in f.terms.values())
    assert all(len(e) == 2 for e in f.terms)
    assert f - f == Polynomial(2, {})
