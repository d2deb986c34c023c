"""Seeded corpus, contact moves, and the invariance campaign machinery."""

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from germkit.boardman import boardman_symbol, symbol_prefix_equal
from germkit.equivlab import (
    ContactMove,
    CorpusSpec,
    SplitMix64,
    apply_contact_move,
    compose_moves,
    describe_germ,
    identity_move,
    invariance_report,
    random_germ,
    random_move,
)
from germkit.errors import StructuralError
from germkit.germinv import MapGerm
from germkit.germparse import parse_polynomial
from germkit.polycore import PolyMatrix, Polynomial

SPEC = CorpusSpec(seed=99, count=60)
XY = ("x", "y")


def _germ(*exprs, names=XY):
    return MapGerm(len(names), [parse_polynomial(e, names) for e in exprs])


# -- the generator itself -----------------------------------------------------


def test_splitmix_is_deterministic_and_bounded():
    a, b = SplitMix64(123), SplitMix64(123)
    assert [a.next64() for _ in range(8)] == [b.next64() for _ in range(8)]
    rng = SplitMix64(5)
    for _ in range(200):
        assert 0 <= rng.below(7) < 7
        assert -3 <= rng.int_between(-3, 3) <= 3
        assert rng.nonzero_int(4) != 0


def test_different_seeds_diverge():
    assert [SplitMix64(1).next64() for _ in range(4)] != [
        SplitMix64(2).next64() for _ in range(4)
    ]


# -- corpus -------------------------------------------------------------------


def test_corpus_spec_validation():
    for bad in (
        dict(seed=-1, count=1),
        dict(seed=2**64, count=1),
        dict(seed=0, count=-1),
        dict(seed=0, count=1, nvars=0),
        dict(seed=0, count=1, nvars=4),
        dict(seed=0, count=1, ncomps=3),
        dict(seed=0, count=1, degmax=6),
        dict(seed=0, count=1, coeff_bound=0),
    ):
        with pytest.raises(StructuralError):
            CorpusSpec(**bad)


def test_germ_index_bounds():
    with pytest.raises(StructuralError):
        random_germ(SPEC, -1)
    with pytest.raises(StructuralError):
        random_germ(SPEC, SPEC.count)


def test_corpus_is_a_pure_function_of_seed_and_index():
    assert random_germ(SPEC, 17) == random_germ(SPEC, 17)
    other = CorpusSpec(seed=100, count=60)
    assert any(random_germ(SPEC, i) != random_germ(other, i) for i in range(5))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, SPEC.count - 1))
def test_corpus_germs_obey_the_documented_shape(index):
    germ = random_germ(SPEC, index)
    assert 1 <= germ.nvars <= SPEC.nvars
    assert 1 <= germ.ncomps <= SPEC.ncomps
    for comp in germ.components:
        assert not comp.is_zero()
        assert 1 <= comp.term_count() <= 3
        assert 1 <= comp.order()
        assert comp.total_degree() <= SPEC.degmax
        mins = [min(e[k] for e in comp.terms) for k in range(germ.nvars)]
        assert all(m < 2 for m in mins)  # square monomial content is redrawn
    boardman_symbol(germ)  # screened draws complete under default caps


# -- contact moves ------------------------------------------------------------


def test_move_zero_is_the_identity():
    move = random_move(SPEC, 0, 2, 2)
    assert move == identity_move(2, 2)
    f = _germ("x^2 + y^3", "x^2*y")
    assert apply_contact_move(f, move) == f


def test_moves_are_deterministic():
    assert random_move(SPEC, 3, 2, 2) == random_move(SPEC, 3, 2, 2)
    assert random_move(SPEC, 3, 2, 2) != random_move(SPEC, 4, 2, 2)


def test_move_validation():
    x, y = (parse_polynomial(t, XY) for t in ("x", "y"))
    ident_u = identity_move(2, 1).U
    with pytest.raises(StructuralError):
        ContactMove(MapGerm(2, [x + y, x + y]), identity_move(2, 2).U)
    with pytest.raises(StructuralError):
        ContactMove(MapGerm(2, [x]), ident_u)
    singular_u = PolyMatrix([[Polynomial.constant(2, 1), Polynomial.constant(2, 1)],
                             [Polynomial.constant(2, 1), Polynomial.constant(2, 1)]], 2)
    with pytest.raises(StructuralError):
        ContactMove(MapGerm(2, [x, y]), singular_u)
    vanishing_u = PolyMatrix([[x]], 2)
    with pytest.raises(StructuralError):
        ContactMove(MapGerm(2, [x, y]), vanishing_u)


def test_apply_rejects_shape_mismatch():
    f = _germ("x^2 + y^3", "x^2*y")
    with pytest.raises(StructuralError):
        apply_contact_move(f, identity_move(3, 2))
    with pytest.raises(StructuralError):
        apply_contact_move(f, identity_move(2, 1))


def test_compose_moves_matches_sequential_application():
    f = _germ("x^2 + y^3", "x^2*y")
    m1 = random_move(SPEC, 1, 2, 2)
    m2 = random_move(SPEC, 2, 2, 2)
    sequential = apply_contact_move(apply_contact_move(f, m1), m2)
    combined = apply_contact_move(f, compose_moves(m1, m2))
    assert sequential == combined


@pytest.mark.parametrize(
    "exprs", [("x^2 + y^3", "x^2*y"), ("x^4 + y^5",), ("x*y",)]
)
def test_moves_preserve_the_invariants_exactly(exprs):
    f = _germ(*exprs)
    before = (f.order(), f.rank(), boardman_symbol(f))
    for idx in (1, 2, 3):
        moved = apply_contact_move(f, random_move(SPEC, idx, f.nvars, f.ncomps))
        assert moved.order() == before[0]
        assert moved.rank() == before[1]
        assert symbol_prefix_equal(boardman_symbol(moved), before[2], 64)


# -- campaign reports ---------------------------------------------------------


def test_small_campaign_runs_clean():
    spec = CorpusSpec(seed=7, count=5)
    report = invariance_report(spec, moves_per_germ=2)
    assert report.violation_count == 0
    assert len(report.cases) + len(report.germ_errors) * 2 == 10
    data = report.to_json_dict()
    assert data["summary"] == {
        "germs": 5,
        "moves_per_germ": 2,
        "cases": len(report.cases),
        "violations": 0,
        "errors": report.error_count,
    }
    assert data["violations"] == []


def test_campaign_report_is_reproducible():
    spec = CorpusSpec(seed=11, count=3)
    first = invariance_report(spec, moves_per_germ=2).to_json_dict()
    second = invariance_report(spec, moves_per_germ=2).to_json_dict()
    assert first == second


def test_describe_germ_uses_conventional_names():
    assert describe_germ(_germ("x^2 + y^3", "x^2*y")) == ["x^2 + y^3", "x^2*y"]
    assert describe_germ(_germ("x^2 + y^3", "x^2*y"), ("u", "v")) == [
        "u^2 + v^3",
        "u^2*v",
    ]
