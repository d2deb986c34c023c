"""Exact polynomial arithmetic: ring axioms, calculus, division, matrices."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from germkit.errors import StructuralError
from germkit.polycore import (
    PolyMatrix,
    Polynomial,
    compose_polys,
    determinant,
    divides,
    exact_divide,
    jacobian_of,
    minors,
    rational_rank,
)

from conftest import nonzero_polynomials, polynomials, rational_points


def _vars(n):
    return [Polynomial.variable(n, i) for i in range(n)]


# -- ring axioms --------------------------------------------------------------


@given(polynomials(nvars=2), polynomials(nvars=2))
def test_addition_commutes(p, q):
    assert p + q == q + p


@given(polynomials(nvars=2), polynomials(nvars=2), polynomials(nvars=2))
def test_addition_associates(p, q, r):
    assert (p + q) + r == p + (q + r)


@given(polynomials(nvars=3))
def test_additive_identity_and_inverse(p):
    zero = Polynomial.zero(p.nvars)
    assert p + zero == p
    assert p - p == zero
    assert -(-p) == p


@given(polynomials(nvars=2), polynomials(nvars=2))
def test_multiplication_commutes(p, q):
    assert p * q == q * p


@settings(max_examples=60)
@given(polynomials(nvars=2), polynomials(nvars=2), polynomials(nvars=2))
def test_multiplication_associates(p, q, r):
    assert (p * q) * r == p * (q * r)


@given(polynomials(nvars=2), polynomials(nvars=2), polynomials(nvars=2))
def test_distributivity(p, q, r):
    assert p * (q + r) == p * q + p * r


@given(polynomials(nvars=2))
def test_multiplicative_identity(p):
    one = Polynomial.constant(p.nvars, 1)
    assert p * one == p
    assert p * Polynomial.zero(p.nvars) == Polynomial.zero(p.nvars)


@given(polynomials(nvars=2), st.integers(0, 5))
def test_power_is_repeated_multiplication(p, k):
    expected = Polynomial.constant(p.nvars, 1)
    for _ in range(k):
        expected = expected * p
    assert p**k == expected


# -- evaluation is a ring homomorphism ----------------------------------------


@given(st.data())
def test_eval_respects_ring_ops(data):
    p = data.draw(polynomials(nvars=2))
    q = data.draw(polynomials(nvars=2))
    a = data.draw(rational_points(2))
    assert (p + q).eval_at(a) == p.eval_at(a) + q.eval_at(a)
    assert (p * q).eval_at(a) == p.eval_at(a) * q.eval_at(a)


def test_eval_is_exact():
    x, y = _vars(2)
    p = x**3 - y
    assert p.eval_at([Fraction(1, 3), Fraction(1, 27)]) == 0
    assert p.eval_at([Fraction(1, 2), 0]) == Fraction(1, 8)


# -- degree, order, homogeneous slices ----------------------------------------


@given(nonzero_polynomials(nvars=2), nonzero_polynomials(nvars=2))
def test_degree_and_order_are_additive(p, q):
    assert (p * q).total_degree() == p.total_degree() + q.total_degree()
    assert (p * q).order() == p.order() + q.order()


def test_zero_has_no_degree_or_order():
    z = Polynomial.zero(2)
    assert z.total_degree() is None
    assert z.order() is None


@given(polynomials(nvars=3))
def test_homogeneous_components_partition(p):
    if p.is_zero():
        return
    total = Polynomial.zero(p.nvars)
    for d in range(p.total_degree() + 1):
        comp = p.homogeneous_component(d)
        for exps, _ in comp.terms.items():
            assert sum(exps) == d
        total = total + comp
    assert total == p


@given(nonzero_polynomials(nvars=2))
def test_leading_dominates_trailing(p):
    (le, lc) = p.leading_term()
    (te, tc) = p.trailing_term()
    assert lc != 0 and tc != 0
    assert (sum(le), le) >= (sum(te), te)
    assert sum(te) == p.order()
    assert sum(le) == p.total_degree()


def test_linear_coefficients_read_degree_one_slice():
    x, y, z = _vars(3)
    p = 3 * x - y + z * z + Polynomial.constant(3, 0)
    assert p.linear_coefficients() == [3, -1, 0]


# -- derivation ---------------------------------------------------------------


@given(polynomials(nvars=2), polynomials(nvars=2), st.integers(0, 1))
def test_leibniz_rule(p, q, i):
    assert (p * q).derive(i) == p.derive(i) * q + p * q.derive(i)


@given(polynomials(nvars=2), polynomials(nvars=2), st.integers(0, 1))
def test_derivation_is_linear(p, q, i):
    assert (p + q).derive(i) == p.derive(i) + q.derive(i)


@given(polynomials(nvars=3))
def test_partials_commute(p):
    assert p.derive(0).derive(2) == p.derive(2).derive(0)


def test_derive_golden():
    x, y = _vars(2)
    p = x**4 + x**2 * y**6 + y**9
    assert p.derive(0) == 4 * x**3 + 2 * x * y**6
    assert p.derive(1) == 6 * x**2 * y**5 + 9 * y**8


# -- divisibility -------------------------------------------------------------


@given(nonzero_polynomials(nvars=2), nonzero_polynomials(nvars=2))
@settings(max_examples=150, deadline=None)
def test_products_are_divisible(p, d):
    assert divides(d, p * d)
    assert exact_divide(p * d, d) == p


@given(nonzero_polynomials(nvars=2), nonzero_polynomials(nvars=2))
@settings(max_examples=150, deadline=None)
def test_divides_agrees_with_exact_division(p, d):
    if divides(d, p):
        assert exact_divide(p, d) * d == p
    else:
        with pytest.raises(StructuralError):
            exact_divide(p, d)


def test_monomial_divisibility_is_exponentwise():
    x, y = _vars(2)
    m = x**2 * y
    assert divides(m, x**3 * y - x**2 * y**4)
    assert not divides(m, x**3 + x**2 * y**4)
    assert divides(x - y, x * x - y * y)
    assert not divides(x - y, x * x + y * y)


def test_divide_by_zero_rejected():
    x, _ = _vars(2)
    with pytest.raises(StructuralError):
        exact_divide(x, Polynomial.zero(2))


# -- composition --------------------------------------------------------------


@given(st.data())
@settings(max_examples=80)
def test_composition_commutes_with_evaluation(data):
    outer = data.draw(polynomials(nvars=2, max_terms=4))
    inner = [data.draw(polynomials(nvars=2, max_terms=3)) for _ in range(2)]
    point = data.draw(rational_points(2, bound=2))
    composed = compose_polys([outer], inner)[0]
    via_values = outer.eval_at([g.eval_at(point) for g in inner])
    assert composed.eval_at(point) == via_values


# -- matrices -----------------------------------------------------------------


def _permanent_style_det(matrix: PolyMatrix, n: int) -> Polynomial:
    """Signed permutation expansion, the O(n!) definition."""
    total = Polynomial.zero(matrix.nvars)
    for perm in itertools.permutations(range(n)):
        inversions = sum(
            1
            for a in range(n)
            for b in range(a + 1, n)
            if perm[a] > perm[b]
        )
        prod = Polynomial.constant(matrix.nvars, (-1) ** inversions)
        for i in range(n):
            prod = prod * matrix.entry(i, perm[i])
        total = total + prod
    return total


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_determinant_matches_permutation_expansion(data):
    n = data.draw(st.integers(1, 3))
    rows = [
        [data.draw(polynomials(nvars=2, max_terms=2, coeff_bound=3)) for _ in range(n)]
        for _ in range(n)
    ]
    matrix = PolyMatrix(rows, nvars=2)
    assert determinant(matrix) == _permanent_style_det(matrix, n)


def test_determinant_4x4_triangular():
    diag = [2, -1, 3, 5]
    rows = [
        [
            Polynomial.constant(1, diag[i] if i == j else (1 if j > i else 0))
            for j in range(4)
        ]
        for i in range(4)
    ]
    det = determinant(PolyMatrix(rows, nvars=1))
    assert det == Polynomial.constant(1, -30)


def test_row_swap_flips_sign():
    x, y = _vars(2)
    rows = [[x, y], [y**2, x + y]]
    swapped = [rows[1], rows[0]]
    a = determinant(PolyMatrix(rows, nvars=2))
    b = determinant(PolyMatrix(swapped, nvars=2))
    assert a == -b


def test_minor_count_is_binomial():
    x, y = _vars(2)
    m = PolyMatrix([[x, y, x * y], [y, x, x + y]], nvars=2)
    assert len(minors(m, 1)) == 6
    assert len(minors(m, 2)) == 3


def test_jacobian_golden():
    x, y = _vars(2)
    jac = jacobian_of([x**2 + y**3, x**2 * y], 2)
    assert jac.entry(0, 0) == 2 * x
    assert jac.entry(0, 1) == 3 * y**2
    assert jac.entry(1, 0) == 2 * x * y
    assert jac.entry(1, 1) == x**2


def test_rational_rank_goldens():
    assert rational_rank([[1, 0], [0, 1]]) == 2
    assert rational_rank([[1, 2], [2, 4]]) == 1
    assert rational_rank([[0, 0], [0, 0]]) == 0
    assert (
        rational_rank(
            [
                [Fraction(1, 2), Fraction(1, 3)],
                [Fraction(3, 2), Fraction(1, 1)],
            ]
        )
        == 1
    )
