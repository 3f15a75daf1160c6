"""Hypothesis strategies for rational functions."""

from __future__ import annotations

from hypothesis import strategies as st

from addchow.field import RatFunc, var

VARS = ("u", "v", "w")


@st.composite
def polynomials(draw, names=VARS, max_terms=3, max_deg=2):
    terms = draw(st.lists(
        st.tuples(st.integers(-5, 5), *[st.integers(0, max_deg) for _ in names]),
        min_size=1, max_size=max_terms))
    p = RatFunc.constant(0)
    for coeff, *exps in terms:
        mono = RatFunc.constant(coeff)
        for name, e in zip(names, exps):
            mono = mono * var(name) ** e
        p = p + mono
    return p


@st.composite
def nonzero_polynomials(draw, names=VARS):
    p = draw(polynomials(names))
    return p if not p.is_zero() else RatFunc.constant(draw(st.integers(1, 7)))


@st.composite
def ratfuncs(draw, names=VARS):
    return draw(polynomials(names)) / draw(nonzero_polynomials(names))


@st.composite
def nonzero_ratfuncs(draw, names=VARS):
    return draw(nonzero_polynomials(names)) / draw(nonzero_polynomials(names))
