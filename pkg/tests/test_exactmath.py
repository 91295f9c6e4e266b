from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramicalc.exactmath import (
    NEG_INF,
    Poly,
    X,
    ceil_rat,
    default_grid,
    format_rat,
    parse_grid_spec,
    poly_arith,
    poly_dominates,
    poly_eval,
    poly_nonneg_on_grid,
    poly_shift,
    prod,
    rat,
)

rats = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 1000)
nonneg_rats = st.fractions(min_value=0, max_value=200, max_denominator=20)
polys = st.lists(rats, max_size=6).map(Poly)
nonneg_polys = st.lists(st.fractions(min_value=0, max_value=50, max_denominator=10), max_size=6).map(Poly)

P = Poly([9, 7, 1])  # x^2 + 7x + 9


def test_rat_normalization():
    q = rat("6/4")
    assert (q.numerator, q.denominator) == (3, 2)
    assert rat("0/5") == Fraction(0, 1)
    assert rat(-3).denominator == 1
    assert format_rat(Fraction(7, 1)) == "7"
    assert format_rat(Fraction(-5, 2)) == "-5/2"


def test_rat_refuses_float():
    with pytest.raises(TypeError):
        rat(0.5)


def test_ceil_rat():
    assert ceil_rat("5/2") == 3
    assert ceil_rat(4) == 4
    assert ceil_rat(0) == 0


@pytest.mark.parametrize(
    "a, b, op, expected",
    [
        (Poly([2, 1]), Poly([3, 1]), "mul", Poly([6, 5, 1])),
        (P, Poly(), "add", P),
        (P, P, "sub", Poly()),
    ],
)
def test_poly_arith_examples(a, b, op, expected):
    assert poly_arith(a, b, op) == expected


def test_poly_scale():
    assert poly_arith(P, None, "scale", Fraction(1, 2)) == Poly(["9/2", "7/2", "1/2"])
    with pytest.raises(ValueError):
        poly_arith(P, None, "scale")


def test_normalization_and_degree():
    assert Poly([1, 0, 0]).coeffs == (Fraction(1),)
    assert Poly().degree == NEG_INF
    assert Poly([0, 0]).is_zero()
    assert P.degree == 2


@pytest.mark.parametrize(
    "p, t, expected",
    [
        (X, 3, Poly([3, 1])),
        (P, 3, Poly([39, 13, 1])),
        (P, 0, P),
    ],
)
def test_shift_examples(p, t, expected):
    assert poly_shift(p, t) == expected


@pytest.mark.parametrize(
    "p, x, expected",
    [(P, 0, 9), (X, Fraction(5, 2), Fraction(5, 2)), (P, 2, 27)],
)
def test_eval_examples(p, x, expected):
    assert poly_eval(p, x) == expected


def test_dominates_examples():
    a = Poly.linear(7) * Poly.linear(3)
    b = Poly.linear(6) * Poly.linear(4)
    assert b - a == Poly([3])
    assert poly_dominates(a, b)
    assert poly_dominates(P, P)
    assert not poly_dominates(X**2, X)


def test_grid_examples():
    assert poly_nonneg_on_grid(Poly([3]), [0, 1, 5])
    assert not poly_nonneg_on_grid(Poly([-1, 1]), [0])
    with pytest.raises(ValueError):
        poly_nonneg_on_grid(X, [Fraction(-1, 2)])


def test_grid_closed_form_minus_b8():
    # b_8 expanded independently with sympy
    b8 = Poly([142468740, 160765018, 67451254, 14359869, 1736294, 123695, 5106, 112, 1])
    closed = Poly.linear(3 * 8 - 3) * prod(Poly.linear(3 * j + 1) for j in range(1, 8))
    assert poly_nonneg_on_grid(closed - b8, [Fraction(k, 2) for k in range(201)])


def test_default_grid(monkeypatch):
    monkeypatch.delenv("RAMICALC_GRID", raising=False)
    g = default_grid()
    assert g[0] == 0 and g[1] == Fraction(1, 2) and g[-1] == 100 and len(g) == 201
    monkeypatch.setenv("RAMICALC_GRID", "0:1/3:1")
    assert default_grid() == [0, Fraction(1, 3), Fraction(2, 3), 1]


@pytest.mark.parametrize("spec", ["0:0:1", "1:1", "2:1:1", "-1:1:3", "a:b:c"])
def test_parse_grid_spec_rejects(spec):
    with pytest.raises(ValueError):
        parse_grid_spec(spec)


def test_str_and_json():
    assert str(P) == "x^2 + 7x + 9"
    assert str(Poly()) == "0"
    assert str(Poly([-3, 0, 1])) == "x^2 - 3"
    assert str(Poly([0, "7/2"])) == "(7/2)x"
    assert str(Poly([0, -1])) == "-x"
    assert P.to_json() == ["9", "7", "1"]
    assert Poly.from_json(["9", "7", "1"]) == P
    assert Poly.from_json(["1/2"]).coeffs == (Fraction(1, 2),)


@given(rats, rats.filter(lambda q: q != 0))
def test_rational_field(a, b):
    assert (a * b) / b == a
    assert a + (-a) == 0


@given(polys, rats, rats)
def test_shift_composes(p, s, t):
    assert poly_shift(poly_shift(p, s), t) == poly_shift(p, s + t)


@given(polys, rats, rats)
def test_shift_eval(p, t, x):
    assert poly_eval(poly_shift(p, t), x) == poly_eval(p, x + t)


@given(polys, rats, rats)
def test_affine_substitute(p, a, x):
    assert p.affine_substitute(a, 3)(x) == p(a + 3 * x)


@settings(max_examples=200)
@given(polys, polys, st.lists(nonneg_rats, min_size=1, max_size=10))
def test_dominance_is_sound(a, b, xs):
    if poly_dominates(a, b):
        assert all((b - a)(x) >= 0 for x in xs)


@given(nonneg_polys, nonneg_rats, nonneg_rats)
def test_nonneg_coeffs_monotone(p, x, y):
    lo, hi = min(x, y), max(x, y)
    assert p(lo) <= p(hi)


@given(polys, polys, rats)
def test_ring_homomorphism(p, q, x):
    assert (p * q)(x) == p(x) * q(x)
    assert (p + q)(x) == p(x) + q(x)
