"""Shared generators for the exact-arithmetic property tests."""

from fractions import Fraction

import hypothesis.strategies as st

from germkit.polycore import Polynomial

VAR_NAMES = ("x", "y", "z")


@st.composite
def exponent_tuples(draw, nvars: int, max_per_var: int = 4):
    return tuple(
        draw(st.integers(0, max_per_var)) for _ in range(nvars)
    )


@st.composite
def polynomials(draw, nvars=None, max_terms: int = 5, coeff_bound: int = 6):
    """Sparse polynomial with small integer coefficients; may be zero."""
    n = nvars if nvars is not None else draw(st.integers(1, 3))
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        e = draw(exponent_tuples(n))
        terms[e] = terms.get(e, 0) + draw(st.integers(-coeff_bound, coeff_bound))
    return Polynomial(n, terms)


@st.composite
def nonzero_polynomials(draw, nvars=None, max_terms: int = 4):
    p = draw(polynomials(nvars=nvars, max_terms=max_terms))
    if p.is_zero():
        e = draw(exponent_tuples(p.nvars))
        p = p + Polynomial(p.nvars, {e: draw(st.sampled_from([-3, -1, 1, 2]))})
    return p


@st.composite
def rational_points(draw, nvars: int, bound: int = 4):
    return [
        Fraction(draw(st.integers(-bound, bound)), draw(st.integers(1, 3)))
        for _ in range(nvars)
    ]
