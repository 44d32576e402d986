from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from lrbv._expr import ParseError
from lrbv.ring import (
    PolyRing,
    format_poly,
    monomials_of_degree,
    monomials_up_to,
    parse_poly,
    partial_derivative,
    poly_arith,
    reduce_truncation,
    truncated_monomials,
)

R = PolyRing(("x", "y"))
X, Y = sympy.symbols("x y")

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
exps = st.tuples(st.integers(0, 3), st.integers(0, 3))
polys = st.dictionaries(exps, coeffs, max_size=5).map(lambda d: R.monomial((0, 0), 0) + sum((R.monomial(e, c) for e, c in d.items()), R.zero))


def to_sympy(p):
    return sympy.expand(sum(sympy.Rational(c.numerator, c.denominator) * X ** e[0] * Y ** e[1] for e, c in p.terms.items()))


def test_parse_examples():
    assert parse_poly("0", ["x", "y"]).is_zero()
    p = parse_poly("3/2*x^2*y - y", ["x", "y"])
    assert p.terms == {(2, 1): Fraction(3, 2), (0, 1): Fraction(-1)}
    assert parse_poly("x*(x+1) - x^2 - x", ["x"]).is_zero()


@pytest.mark.parametrize(
    "text,pos",
    [("x y", 2), ("x +", 3), ("z", 0), ("x^y", 2), ("(x", 2), ("x $ 1", 2), ("1/0", 2)],
)
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse_poly(text, R)
    assert info.value.position == pos


def test_arith_examples():
    x, y = R.var("x"), R.var("y")
    assert poly_arith("add", x, -x).is_zero()
    assert poly_arith("mul", x + y, x - y) == x**2 - y**2
    assert poly_arith("scale", 3 * x, Fraction(1, 3)) == x
    with pytest.raises(ValueError):
        poly_arith("add", x, PolyRing(("x",)).var("x"))


def test_derivative_examples():
    x, y = R.var(0), R.var(1)
    assert partial_derivative(x**2 * y, 0) == 2 * x * y
    assert partial_derivative(R.const(7), 0).is_zero()


def test_truncation_examples():
    x = PolyRing(("x",)).var(0)
    r = reduce_truncation(x**4 + x, [4])
    assert r == r.ring.var(0) and r.ring.truncation == (4,)
    assert reduce_truncation(PolyRing(("x",)).one, [2]) == 1
    xy = PolyRing(("x", "y")).monomial((3, 3))
    assert reduce_truncation(xy, [4, 3]).is_zero()


def test_format_roundtrip_and_order():
    p = parse_poly("y - 3/2*x^2*y + 2", R)
    assert format_poly(p) == "-3/2*x^2*y + y + 2"
    assert parse_poly(format_poly(p), R) == p


@given(polys)
def test_format_parse_roundtrip(p):
    assert parse_poly(format_poly(p), R) == p


@settings(max_examples=60)
@given(polys, polys, polys)
def test_ring_axioms_against_sympy(p, q, s):
    assert (p * q) * s == p * (q * s)
    assert p * (q + s) == p * q + p * s
    assert p * q == q * p
    assert to_sympy(p * q - s) == sympy.expand(to_sympy(p) * to_sympy(q) - to_sympy(s))


@settings(max_examples=60)
@given(polys, polys)
def test_leibniz_and_commuting_partials(p, q):
    for i in range(2):
        assert (p * q).diff(i) - p.diff(i) * q - p * q.diff(i) == 0
    assert p.diff(0).diff(1) == p.diff(1).diff(0)
    assert to_sympy(p.diff(0)) == sympy.diff(to_sympy(p), X)


@settings(max_examples=60)
@given(polys, polys)
def test_truncation_is_homomorphism(p, q):
    t = [3, 2]
    assert reduce_truncation(p * q, t) == reduce_truncation(p, t) * reduce_truncation(q, t)
    assert reduce_truncation(p + q, t) == reduce_truncation(p, t) + reduce_truncation(q, t)


def test_monomial_counts():
    from math import comb

    for d in range(6):
        assert len(monomials_of_degree(3, d)) == comb(d + 2, 2)
    assert len(monomials_up_to(2, 4)) == 15
    assert monomials_of_degree(2, 3, (1, 2)) == [(3, 0), (1, 1)]
    assert len(truncated_monomials((3, 2))) == 6


def test_equality_with_scalars_and_hash():
    assert R.const(2) == 2 and R.zero == 0
    assert hash(parse_poly("x+y", R)) == hash(parse_poly("y+x", R))


def test_variable_errors():
    with pytest.raises(ValueError):
        PolyRing(("x", "x"))
    with pytest.raises(ValueError):
        PolyRing(("x",), (0,))
    with pytest.raises(KeyError):
        R.var("z")
