from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equigraph.algebra import (
    ALPHA,
    EQUAL,
    GREATER,
    LESS,
    ONE,
    ZERO,
    AlgebraicPoint,
    AlphaSpec,
    canonical_key,
    make_alpha,
    point,
)
from equigraph.errors import EmptyIntervalError, OutOfRangeError, RationalAlphaError

from conftest import ALL_ALPHAS
from oracles import alpha_decimal, point_decimal

rationals = st.fractions(
    min_value=-4, max_value=4, max_denominator=100
)
points = st.builds(AlgebraicPoint, rationals, rationals)


def test_named_alphas_validate():
    for spec in ALL_ALPHAS:
        ctx = make_alpha(spec)
        assert ctx.sign(ALPHA) == GREATER
        assert ctx.lt(ALPHA, ONE)


def test_bad_specs_rejected():
    with pytest.raises(RationalAlphaError):
        make_alpha(AlphaSpec(-1, 1, 4, 1))  # d square
    with pytest.raises(RationalAlphaError):
        make_alpha(AlphaSpec(-1, 0, 2, 1))  # q = 0
    with pytest.raises(OutOfRangeError):
        make_alpha(AlphaSpec(-1, 1, 2, 0))  # r = 0
    with pytest.raises(OutOfRangeError):
        make_alpha(AlphaSpec(1, 1, 2, 1))  # 1 + sqrt(2) > 1
    with pytest.raises(OutOfRangeError):
        make_alpha(AlphaSpec(1, -1, 2, 1))  # 1 - sqrt(2) < 0


def test_point_arithmetic():
    x = point(Fraction(1, 2), 3)
    y = point(Fraction(1, 3), -1)
    assert x + y == point(Fraction(5, 6), 2)
    assert x - y == point(Fraction(1, 6), 4)
    assert -x == point(Fraction(-1, 2), -3)
    assert x.scale(2) == point(1, 6)
    assert point(1) + ALPHA.scale(2) == AlgebraicPoint(Fraction(1), Fraction(2))


def test_str_forms():
    assert str(point(0)) == "0"
    assert str(ALPHA) == "a"
    assert str(-ALPHA) == "-a"
    assert str(ALPHA.scale(2)) == "2a"
    assert str(point(1, -1)) == "1-a"
    assert str(point(Fraction(1, 2), 2)) == "1/2+2a"
    assert str(point(0, 2)) == "2a"


def test_known_comparisons(ctx):
    two_alpha = ALPHA.scale(2)
    assert ctx.lt(two_alpha, ONE)  # 2(sqrt(2)-1) < 1
    assert ctx.lt(ONE - two_alpha, ALPHA)
    assert ctx.compare(ALPHA, ALPHA) == EQUAL
    assert ctx.sign(ALPHA - ONE) == LESS
    golden = make_alpha(AlphaSpec(-1, 1, 5, 2))
    assert golden.lt(ONE, ALPHA.scale(2))  # 2a > 1 for a above 1/2


def test_pell_convergent_needs_exact_sign(ctx):
    # 665857/470832 is a Pell convergent: its square minus 2 times the
    # denominator squared is 1, so it exceeds sqrt(2) by about 1e-12 --
    # far below float discrimination at this magnitude.
    p, q = 665857, 470832
    assert p * p - 2 * q * q == 1
    near = point(Fraction(p, q) - 1)  # approximates alpha = sqrt(2)-1
    assert ctx.compare(near, ALPHA) == GREATER
    assert ctx.compare(point(-Fraction(p, q) + 1), -ALPHA) == LESS
    assert abs(ctx.to_float(near - ALPHA)) < 1e-11


def test_in_interval_endpoints(ctx):
    assert ctx.in_interval(ZERO, ZERO, ONE, closed=True)
    assert ctx.in_interval(ONE, ZERO, ONE, closed=True)
    assert not ctx.in_interval(ZERO, ZERO, ONE, closed=False)
    assert not ctx.in_interval(point(2), ZERO, ONE)
    assert ctx.in_interval(ALPHA, ZERO, ONE, closed=False)
    with pytest.raises(EmptyIntervalError):
        ctx.in_interval(ZERO, ONE, ZERO)


def test_canonical_key_matches_equality():
    a = point(Fraction(2, 4), Fraction(3, 9))
    b = point(Fraction(1, 2), Fraction(1, 3))
    assert a == b
    assert canonical_key(a) == canonical_key(b) == (1, 2, 1, 3)
    assert canonical_key(a) != canonical_key(point(Fraction(1, 2), Fraction(1, 4)))


@settings(max_examples=200)
@given(points, points)
def test_compare_antisymmetric(x, y):
    ctx = make_alpha(AlphaSpec(-1, 1, 2, 1))
    assert ctx.compare(x, y) == -ctx.compare(y, x)
    if x == y:
        assert ctx.compare(x, y) == EQUAL
    else:
        assert ctx.compare(x, y) != EQUAL  # alpha irrational: no other ties


@settings(max_examples=200)
@given(points, points, points)
def test_compare_transitive(x, y, z):
    ctx = make_alpha(AlphaSpec(-1, 1, 2, 1))
    if ctx.le(x, y) and ctx.le(y, z):
        assert ctx.le(x, z)


@settings(max_examples=200)
@given(points, points)
def test_sign_agrees_with_decimal_oracle(x, y):
    for spec in ALL_ALPHAS:
        ctx = make_alpha(spec)
        diff = x - y
        alpha = alpha_decimal(spec.p, spec.q, spec.d, spec.r)
        oracle_val = point_decimal(alpha, diff.u, diff.v)
        if diff == ZERO:
            assert ctx.sign(diff) == 0
        else:
            assert ctx.sign(diff) == (1 if oracle_val > 0 else -1)


@settings(max_examples=100)
@given(points, points)
def test_arithmetic_matches_float(x, y):
    ctx = make_alpha(AlphaSpec(-1, 1, 2, 1))
    assert ctx.to_float(x + y) == pytest.approx(
        ctx.to_float(x) + ctx.to_float(y), abs=1e-9
    )
    assert ctx.to_float(x - y) == pytest.approx(
        ctx.to_float(x) - ctx.to_float(y), abs=1e-9
    )
