"""Symbol iteration: golden values, run encoding, generator-set mechanics."""

import pytest

from germkit.boardman import (
    BoardmanSymbol,
    GeneratorSet,
    SymbolStatus,
    boardman_symbol,
    symbol_of_generators,
    symbol_prefix_equal,
)
from germkit.errors import ResourceLimitError, StructuralError
from germkit.germinv import MapGerm, identity_germ
from germkit.germparse import parse_polynomial
from germkit.polycore import Polynomial

XY = ("x", "y")


def _germ(*exprs, names=XY):
    return MapGerm(len(names), [parse_polynomial(e, names) for e in exprs])


def _poly(text, names=XY):
    return parse_polynomial(text, names)


# -- golden symbols -----------------------------------------------------------


@pytest.mark.parametrize(
    "expr, runs",
    [
        ("x^4 + y^9", [[2, 3], [1, 5], [0, None]]),
        ("x^4 + x^2*y^6 + y^9", [[2, 3], [1, 4], [0, None]]),
        ("x^4 + y^5", [[2, 3], [1, 1], [0, None]]),
        ("x^4 - 2*x^2*y^3 - 4*x*y^5 + y^6 + y^7", [[2, 3], [1, 1], [0, None]]),
    ],
)
def test_plane_curve_symbols(expr, runs):
    symbol = boardman_symbol(_germ(expr))
    assert symbol.to_json_dict() == {"runs": runs, "status": "stabilized_zero"}


def test_square_function_has_steady_tail():
    symbol = boardman_symbol(_germ("x^2"))
    assert symbol.to_json_dict() == {
        "runs": [[2, 1], [1, None]],
        "status": "steady_tail",
    }
    assert symbol.pretty() == "(2, 1, ...)"


def test_full_rank_linear_map_is_immediately_regular():
    symbol = boardman_symbol(_germ("x + y^2", "y"))
    assert symbol.runs == ((0, None),)
    assert symbol.status is SymbolStatus.STABILIZED_ZERO


def test_zero_map_symbol_is_constant_n():
    zero = MapGerm(3, [Polynomial.zero(3)])
    symbol = boardman_symbol(zero)
    assert symbol.runs == ((3, None),)
    assert symbol.status is SymbolStatus.STEADY_TAIL


def test_identity_symbol():
    assert boardman_symbol(identity_germ(3)).runs == ((0, None),)


def test_first_entry_is_corank():
    for germ in (_germ("x^2 + y^3", "x^2*y"), _germ("x", "y^3"), _germ("x*y")):
        first = boardman_symbol(germ).expand(1)[0]
        assert first == germ.nvars - germ.rank()


# -- run encoding -------------------------------------------------------------


def test_expand_and_pretty():
    symbol = boardman_symbol(_germ("x^4 + y^9"))
    assert symbol.expand(5) == [2, 2, 2, 1, 1]
    assert symbol.expand(12) == [2, 2, 2, 1, 1, 1, 1, 1, 0, 0, 0, 0]
    assert symbol.pretty() == "(2, 2, 2, 1, 1, 1, 1, 1, 0, ...)"
    assert symbol.is_unbounded()


def test_truncation_reports_honestly():
    symbol = boardman_symbol(_germ("x^4 + y^9"), max_steps=2)
    assert symbol.status is SymbolStatus.TRUNCATED
    assert not symbol.is_unbounded()
    assert symbol.expand(10) == [2, 2]
    assert symbol.pretty() == "(2, 2)"


def test_run_validation():
    with pytest.raises(StructuralError):
        BoardmanSymbol(((1, 2), (2, 1)), SymbolStatus.TRUNCATED)
    with pytest.raises(StructuralError):
        BoardmanSymbol(((2, None), (1, 1)), SymbolStatus.TRUNCATED)
    with pytest.raises(StructuralError):
        BoardmanSymbol(((2, 0),), SymbolStatus.TRUNCATED)
    with pytest.raises(StructuralError):
        BoardmanSymbol(((-1, 1),), SymbolStatus.TRUNCATED)


def test_prefix_comparison():
    a = boardman_symbol(_germ("x^4 + y^9"))  # (2, 2, 2, 1, 1, 1, 1, 1, 0, ...)
    b = boardman_symbol(_germ("x^4 + y^5"))  # (2, 2, 2, 1, 0, ...)
    assert symbol_prefix_equal(a, b, 4)
    assert not symbol_prefix_equal(a, b, 5)
    assert symbol_prefix_equal(a, a, 64)
    with pytest.raises(StructuralError):
        symbol_prefix_equal(a, b, 0)


# -- generator sets -----------------------------------------------------------


def test_from_polys_prunes_zeros_and_multiples():
    x, y = _poly("x"), _poly("y")
    gens = GeneratorSet.from_polys(
        2, [x, Polynomial.zero(2), x * x, x * y, y, _poly("2*y")]
    )
    assert list(gens.gens) == [x, y]


def test_critical_index_of_empty_set_is_n():
    assert GeneratorSet.from_polys(3, []).critical_index() == 3


def test_appended_keeps_redundant_combinations():
    base = GeneratorSet.from_germ(_germ("x^2 + y^3", "x^2*y"))
    h = _poly("1 + x").homogeneous_component(0) + _poly("x")  # 1 + x
    redundant = h * base.gens[0]
    grown = base.appended([redundant, Polynomial.zero(2), base.gens[1]], tag="extra")
    assert len(grown) == len(base) + 1
    assert grown.gens[-1] == redundant
    assert grown.provenance[-1] == "extra"


@pytest.mark.parametrize(
    "exprs, h",
    [
        (("x^2 + y^3", "x^2*y"), "1 + y"),
        (("x^4 + y^9",), "1 + x"),
        (("x^2",), "1 + y"),
    ],
)
def test_appended_redundancy_does_not_change_symbol(exprs, h):
    base = GeneratorSet.from_germ(_germ(*exprs))
    noisy = base.appended([_poly(h) * base.gens[0]], tag="extra")
    assert symbol_prefix_equal(
        symbol_of_generators(base), symbol_of_generators(noisy), 64
    )


def test_extension_guards():
    base = GeneratorSet.from_germ(_germ("x^2 + y^3", "x^2*y"))
    with pytest.raises(StructuralError):
        GeneratorSet.from_polys(2, []).jacobian_extension(1)
    with pytest.raises(StructuralError):
        base.jacobian_extension(3)
    with pytest.raises(StructuralError):
        GeneratorSet(2, [_poly("x + 1")], ["original"])


def test_generator_cap_raises_resource_error():
    with pytest.raises(ResourceLimitError) as err:
        boardman_symbol(_germ("x^2 + y^3", "x^2*y"), generator_cap=2)
    assert err.value.step == 1


def test_term_cap_raises_resource_error():
    with pytest.raises(ResourceLimitError):
        boardman_symbol(_germ("x^4 - 2*x^2*y^3 - 4*x*y^5 + y^6 + y^7"), term_cap=1)


def test_symbol_from_explicit_generators_matches_germ_path():
    germ = _germ("x^2 + y^3", "x^2*y")
    direct = boardman_symbol(germ)
    via_set = symbol_of_generators(GeneratorSet.from_germ(germ))
    assert direct == via_set
