from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from addchow.field import (
    INF,
    ImproperSolveError,
    Mobius,
    ParseError,
    ProjValue,
    RatFunc,
    UnknownVariableError,
    const,
    mobius_eval,
    mobius_solve,
    parse_proj,
    parse_ratfunc,
    var,
)

from .strategies import nonzero_ratfuncs, ratfuncs

u, v = var("u"), var("v")
b1, b2 = var("b1"), var("b2")


def c2_map() -> Mobius:
    return Mobius(b1, -b1 * b2, 1, -b1 * b2)


# arithmetic


def test_u_times_inverse_is_one():
    assert u * u.inv() == 1


def test_add_zero_cancels_common_factor():
    r = (u**2 - 1) / (u - 1) + 0
    assert r == u + 1
    assert r.den.is_ground


def test_partial_derivative_of_reciprocal():
    assert (1 / u).diff("u", declared=["u"]) == -1 / u**2


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        RatFunc.constant(0).inv()


def test_derivative_in_undeclared_variable_raises():
    with pytest.raises(UnknownVariableError):
        (u * v).diff("w", declared=["u", "v"])


def test_derivative_in_absent_declared_variable_is_zero():
    assert u.diff("v", declared=["u", "v"]) == 0


def test_denominator_is_monic():
    r = u / (3 * v + 6)
    assert r == (u / 3) / (v + 2)
    assert str(r) == str((u / 3) / (v + 2))


def test_constants_and_fractions():
    assert const(Fraction(1, 2)) + const(Fraction(1, 2)) == 1
    assert (u / u).is_one()
    assert const(3).constant_value() == 3


def test_substitution():
    assert (u**2 + v).subs("u", v + 1) == v**2 + 3 * v + 1


@given(nonzero_ratfuncs())
def test_mul_inverse_property(a):
    assert a * a.inv() == 1


@given(ratfuncs())
def test_canonical_form_idempotent(a):
    again = RatFunc(a.num, a.den)
    assert again == a
    assert again.key() == a.key()
    assert str(again) == str(a)


@given(ratfuncs(), ratfuncs())
def test_leibniz_rule(f, g):
    for x in ("u", "v"):
        assert (f * g).diff(x) == f * g.diff(x) + g * f.diff(x)


@given(ratfuncs())
def test_printed_form_parses_back(a):
    assert parse_ratfunc(str(a)) == a


@given(ratfuncs(), ratfuncs(), ratfuncs())
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a - a == 0
    assert (a * b) * c == a * (b * c)


# projective values and Mobius maps


def test_eval_c2_map_at_infinity():
    assert mobius_eval(c2_map(), INF) == b1


def test_eval_c2_map_at_zero():
    assert mobius_eval(c2_map(), ProjValue(0)) == 1


def test_eval_constant_map():
    m = Mobius.constant(5)
    assert mobius_eval(m, ProjValue(u)) == 5
    assert mobius_eval(m, INF) == 5


def test_solve_c2_map_for_zero():
    assert mobius_solve(c2_map(), ProjValue(0)) == b2


def test_solve_c2_map_for_infinity():
    assert mobius_solve(c2_map(), INF) == b1 * b2


def test_solve_constant_map_misses():
    assert mobius_solve(Mobius.constant(5), ProjValue(0)) is None


def test_solve_constant_map_identically_equal_raises():
    with pytest.raises(ImproperSolveError):
        mobius_solve(Mobius.constant(5), ProjValue(5))


def test_eval_at_pole_is_infinity():
    assert mobius_eval(c2_map(), ProjValue(b1 * b2)).is_infinite


def test_proj_value_zero_zero_rejected():
    with pytest.raises(ValueError):
        ProjValue(0, 0)


def test_proj_value_one_is_representable():
    assert ProjValue(1).is_one()


def test_parse_proj_infinity():
    assert parse_proj("inf").is_infinite
    assert parse_proj("b1/b2", ["b1", "b2"]) == b1 / b2


def test_parse_rejects_undeclared_names():
    with pytest.raises(UnknownVariableError):
        parse_ratfunc("b1 + z", ["b1"])


def test_parse_rejects_garbage():
    with pytest.raises(ParseError):
        parse_ratfunc("b1 +* )")
    with pytest.raises(ParseError):
        parse_ratfunc("f(b1)")


def test_mobius_compose_inverse_is_identity():
    m = c2_map()
    assert m.compose(m.inverse()).is_identity()
    assert m.inverse().compose(m).is_identity()


def test_mobius_from_ratfunc_round_trip():
    m = c2_map()
    text = m.to_string("t")
    assert Mobius.from_ratfunc(parse_ratfunc(text), "t") == m


def test_mobius_from_quadratic_rejected():
    with pytest.raises(ParseError):
        Mobius.from_ratfunc(var("t") ** 2, "t")


@st.composite
def mobius_maps(draw):
    while True:
        a, b, c, d = (draw(nonzero_ratfuncs(("u", "v"))) for _ in range(4))
        if not (a * d - b * c).is_zero():
            return Mobius(a, b, c, d)


@given(mobius_maps(), st.one_of(st.just(INF), nonzero_ratfuncs(("u", "v")).map(ProjValue)))
def test_solve_then_eval_round_trips(m, target):
    s = mobius_solve(m, target)
    assert mobius_eval(m, s) == target
