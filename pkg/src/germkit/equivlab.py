"""Random germ corpora, smooth contact moves, and invariance campaigns.

A contact move is a pair (phi, U): phi a polynomial coordinate change with
invertible linear part, U a square polynomial matrix invertible at the origin.
It acts on a germ f by U * (f o phi).  Order, rank, and the iterated-Jacobian
symbol should all survive such moves; the campaign driver samples a seeded
corpus of germs and moves, recomputes all three invariants on each moved germ,
and reports every disagreement.

Moves are genuinely smooth, not merely bi-Lipschitz: a non-smooth change of
coordinates cannot be applied to a polynomial symbolically.  phi is also never
inverted here; the campaign only ever compares f against its moved image, so
polynomial one-way application suffices.

Randomness comes from splitmix64 (Steele, Lea and Flood 2014): 64-bit state
advanced by a fixed odd constant and finalized by two xor-shift-multiply
rounds.  It is seedable, tiny, and exactly reproducible in any language, so a
corpus is pinned by its spec alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .boardman import (
    DEFAULT_GENERATOR_CAP,
    DEFAULT_MAX_STEPS,
    BoardmanSymbol,
    boardman_symbol,
    symbol_prefix_equal,
)
from .errors import ResourceLimitError, StructuralError
from .germinv import MapGerm, identity_germ
from .germparse import print_polynomial
from .polycore import Polynomial, PolyMatrix, compose_polys

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(value: int) -> int:
    """splitmix64 finalizer: a bijective scramble of the 64-bit integers."""
    z = value & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Deterministic 64-bit generator with a one-line documented algorithm."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK64
        return _mix64(self.state)

    def below(self, bound: int) -> int:
        """Uniform draw from [0, bound), bias-free via rejection."""
        if bound <= 0:
            raise StructuralError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            v = self.next64()
            if v < limit:
                return v % bound

    def int_between(self, lo: int, hi: int) -> int:
        """Uniform integer in the inclusive range [lo, hi]."""
        return lo + self.below(hi - lo + 1)

    def nonzero_int(self, bound: int) -> int:
        """Uniform nonzero integer in [-bound, bound]."""
        v = 1 + self.below(bound)
        return v if self.below(2) == 0 else -v


def _stream(seed: int, kind: int, index: int) -> SplitMix64:
    """Independent generator for one (kind, index) slot of a corpus."""
    state = _mix64(seed)
    state = _mix64(state ^ (kind * _GOLDEN & _MASK64))
    state = _mix64(state ^ (index * _GOLDEN & _MASK64))
    return SplitMix64(state)


_GERM_STREAM = 1
_MOVE_STREAM = 2


@dataclass(frozen=True)
class CorpusSpec:
    """Everything needed to regenerate a corpus byte-for-byte."""

    seed: int
    count: int
    nvars: int = 3
    ncomps: int = 2
    degmax: int = 5
    coeff_bound: int = 4

    def __post_init__(self):
        if not 0 <= self.seed <= _MASK64:
            raise StructuralError("seed must fit in 64 bits")
        if self.count < 0:
            raise StructuralError("count must be non-negative")
        if not 1 <= self.nvars <= 3:
            raise StructuralError("nvars must be between 1 and 3")
        if not 1 <= self.ncomps <= 2:
            raise StructuralError("ncomps must be between 1 and 2")
        if not 1 <= self.degmax <= 5:
            raise StructuralError("degmax must be between 1 and 5")
        if self.coeff_bound < 1:
            raise StructuralError("coefficient bound must be positive")


def _square_content(terms: dict) -> bool:
    """Whether some variable's exponent is at least 2 in every term, i.e. the
    monomial content of the polynomial has a square factor."""
    mins = None
    for exps in terms:
        mins = exps if mins is None else tuple(map(min, mins, exps))
    return mins is not None and any(e >= 2 for e in mins)


def _draw_germ(rng: SplitMix64, spec: CorpusSpec) -> MapGerm:
    nvars = rng.int_between(1, spec.nvars)
    ncomps = rng.int_between(1, spec.ncomps)
    components = []
    for _ in range(ncomps):
        while True:
            terms: dict = {}
            for _ in range(rng.int_between(1, 3)):
                degree = rng.int_between(1, spec.degmax)
                exps = [0] * nvars
                for _ in range(degree):
                    exps[rng.below(nvars)] += 1
                key = tuple(exps)
                terms[key] = terms.get(key, 0) + rng.nonzero_int(spec.coeff_bound)
            comp = Polynomial(nvars, terms)
            if not comp.is_zero() and not _square_content(comp.terms):
                components.append(comp)
                break
    return MapGerm(nvars, components)


# Generator cap used while screening corpus candidates.  Every resource cap
# is monotone (an iteration that stays under a tighter cap stays under the
# default), so screening at a quarter of the default admits only germs that
# behave strictly better, and a diverging candidate blows past the tight cap
# orders of magnitude sooner than past the default.
_SCREEN_CAP = 128


def random_germ(spec: CorpusSpec, index: int) -> MapGerm:
    """The index-th germ of the corpus: 1..nvars variables, 1..ncomps nonzero
    components, 1-3 terms each, every term of total degree 1..degmax.

    Draws are rejected deterministically (the per-index stream just
    continues, so the accepted germ is a pure function of seed and index).
    Components whose monomial content has a square factor (y^2, x^2y,
    y^2(2y - 3), ...) generate non-reduced principal ideals, whose symbol
    iteration under a generic move adds fresh minors forever; they are
    redrawn on sight.  A candidate germ is then kept only if its own symbol
    and the symbols of two probe-moved copies all complete under a tightened
    generator cap: the corpus is meant to exercise the invariants, not the
    resource caps, so it is tuned until unmoved germs complete cleanly and
    germs that blow up under typical moves are rare.
    """
    if not 0 <= index < spec.count:
        raise StructuralError(f"index {index} outside corpus of {spec.count}")
    rng = _stream(spec.seed, _GERM_STREAM, index)
    while True:
        germ = _draw_germ(rng, spec)
        try:
            boardman_symbol(germ, generator_cap=_SCREEN_CAP)
            for _ in range(2):
                probe = _draw_move(rng, germ.nvars, germ.ncomps)
                boardman_symbol(
                    apply_contact_move(germ, probe), generator_cap=_SCREEN_CAP
                )
        except ResourceLimitError:
            continue
        return germ


def _fraction_det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(rows)
    if n == 1:
        return Fraction(rows[0][0])
    if n == 2:
        return Fraction(rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0])
    total = Fraction(0)
    sign = 1
    for col in range(n):
        sub = [[row[c] for c in range(n) if c != col] for row in rows[1:]]
        total += sign * Fraction(rows[0][col]) * _fraction_det(sub)
        sign = -sign
    return total


@dataclass(frozen=True)
class ContactMove:
    """A smooth contact move (phi, U) acting by f -> U * (f o phi)."""

    phi: MapGerm
    U: PolyMatrix

    def __post_init__(self):
        if self.phi.ncomps != self.phi.nvars:
            raise StructuralError("phi must map n variables to n components")
        linear = [c.linear_coefficients() for c in self.phi.components]
        if _fraction_det(linear) == 0:
            raise StructuralError("the linear part of phi must be invertible")
        if self.U.rows != self.U.cols:
            raise StructuralError("U must be square")
        if _fraction_det(self.U.at_origin()) == 0:
            raise StructuralError("U evaluated at the origin must be invertible")


def identity_move(nvars: int, ncomps: int) -> ContactMove:
    one = Polynomial.constant(nvars, 1)
    zero = Polynomial.zero(nvars)
    rows = [[one if i == j else zero for j in range(ncomps)] for i in range(ncomps)]
    return ContactMove(identity_germ(nvars), PolyMatrix(rows, nvars))


def _random_invertible(rng: SplitMix64, n: int, bound: int) -> list[list[int]]:
    # rejection keeps determinism: a singular draw is simply skipped
    while True:
        rows = [[rng.int_between(-bound, bound) for _ in range(n)] for _ in range(n)]
        if _fraction_det([[Fraction(v) for v in row] for row in rows]) != 0:
            return rows


def random_move(spec: CorpusSpec, index: int, nvars: int, ncomps: int) -> ContactMove:
    """The index-th move for germs of the given arity.  Index 0 is always the
    identity move; later indices draw phi = L + sparse quadratic terms and
    U = U0 + sparse perturbation vanishing at 0."""
    if index == 0:
        return identity_move(nvars, ncomps)
    return _draw_move(_stream(spec.seed, _MOVE_STREAM, index), nvars, ncomps)


def _draw_move(rng: SplitMix64, nvars: int, ncomps: int) -> ContactMove:
    linear = _random_invertible(rng, nvars, 3)
    phi_components = []
    for i in range(nvars):
        terms: dict = {}
        for j in range(nvars):
            if linear[i][j]:
                unit = tuple(1 if k == j else 0 for k in range(nvars))
                terms[unit] = linear[i][j]
        if rng.below(2) == 0:
            exps = [0] * nvars
            for _ in range(2):
                exps[rng.below(nvars)] += 1
            key = tuple(exps)
            terms[key] = terms.get(key, 0) + rng.nonzero_int(2)
        phi_components.append(Polynomial(nvars, terms))
    phi = MapGerm(nvars, phi_components)

    base = _random_invertible(rng, ncomps, 2)
    u_rows = []
    for i in range(ncomps):
        row = []
        for j in range(ncomps):
            terms = {(0,) * nvars: base[i][j]} if base[i][j] else {}
            if rng.below(3) == 0:
                degree = rng.int_between(1, 2)
                exps = [0] * nvars
                for _ in range(degree):
                    exps[rng.below(nvars)] += 1
                key = tuple(exps)
                terms[key] = terms.get(key, 0) + rng.nonzero_int(2)
            row.append(Polynomial(nvars, terms))
        u_rows.append(row)
    return ContactMove(phi, PolyMatrix(u_rows, nvars))


def apply_contact_move(germ: MapGerm, move: ContactMove) -> MapGerm:
    """U * (f o phi), exactly."""
    if move.phi.nvars != germ.nvars:
        raise StructuralError(
            f"move is in {move.phi.nvars} variables, germ in {germ.nvars}"
        )
    if move.U.rows != germ.ncomps:
        raise StructuralError(
            f"U is {move.U.rows}x{move.U.cols}, germ has {germ.ncomps} components"
        )
    composed = germ.compose(move.phi)
    out = []
    for i in range(germ.ncomps):
        acc = Polynomial.zero(germ.nvars)
        for j in range(germ.ncomps):
            acc = acc + move.U.entry(i, j) * composed.components[j]
        out.append(acc)
    return MapGerm(germ.nvars, out)


def compose_moves(first: ContactMove, second: ContactMove) -> ContactMove:
    """The single move equal to applying `first` then `second`.

    Applying in sequence gives U2 * ((U1 * (f o phi1)) o phi2)
    = U2 * (U1 o phi2) * (f o (phi1 o phi2)), so the composite is
    (phi1 o phi2,  U2 * (U1 o phi2)) with a matrix product in that order.
    """
    if first.phi.nvars != second.phi.nvars or first.U.rows != second.U.rows:
        raise StructuralError("moves act on different arities")
    phi = first.phi.compose(second.phi)
    inner = second.phi.components
    nvars = first.phi.nvars
    p = first.U.rows
    u1_moved = [
        compose_polys([first.U.entry(i, j) for j in range(p)], inner)
        for i in range(p)
    ]
    rows = []
    for i in range(p):
        row = []
        for j in range(p):
            acc = Polynomial.zero(nvars)
            for k in range(p):
                acc = acc + second.U.entry(i, k) * u1_moved[k][j]
            row.append(acc)
        rows.append(row)
    return ContactMove(phi, PolyMatrix(rows, nvars))


@dataclass(frozen=True)
class CaseRecord:
    """Outcome of one (germ, move) pair in a campaign."""

    germ_index: int
    move_index: int
    before: tuple
    after: tuple | None
    violations: tuple[str, ...]
    error: str | None

    def to_json_dict(self) -> dict:
        return {
            "germ": self.germ_index,
            "move": self.move_index,
            "before": list(self.before),
            "after": None if self.after is None else list(self.after),
            "violations": list(self.violations),
            "error": self.error,
        }


@dataclass(frozen=True)
class InvarianceReport:
    spec: CorpusSpec
    moves_per_germ: int
    cases: tuple[CaseRecord, ...]
    germ_errors: tuple[tuple[int, str], ...]

    @property
    def violation_count(self) -> int:
        return sum(1 for c in self.cases if c.violations)

    @property
    def error_count(self) -> int:
        return len(self.germ_errors) + sum(1 for c in self.cases if c.error)

    def to_json_dict(self) -> dict:
        return {
            "summary": {
                "germs": self.spec.count,
                "moves_per_germ": self.moves_per_germ,
                "cases": len(self.cases),
                "violations": self.violation_count,
                "errors": self.error_count,
            },
            "violations": [
                c.to_json_dict() for c in self.cases if c.violations
            ],
            "errors": [
                {"germ": g, "move": None, "error": msg} for g, msg in self.germ_errors
            ]
            + [
                {"germ": c.germ_index, "move": c.move_index, "error": c.error}
                for c in self.cases
                if c.error
            ],
        }


def _invariant_triple(
    germ: MapGerm, max_steps: int, generator_cap: int | None
) -> tuple[int, int, BoardmanSymbol]:
    return (
        germ.order(),
        germ.rank(),
        boardman_symbol(germ, max_steps=max_steps, generator_cap=generator_cap),
    )


def invariance_report(
    spec: CorpusSpec,
    moves_per_germ: int = 10,
    max_steps: int = DEFAULT_MAX_STEPS,
    generator_cap: int | None = DEFAULT_GENERATOR_CAP,
) -> InvarianceReport:
    """Recompute order, rank, and symbol for every corpus germ under every
    move.  Resource blowups are recorded per case and never abort the
    campaign.  Move indices start at 1: index 0 is the identity and would
    test nothing."""
    cases: list[CaseRecord] = []
    germ_errors: list[tuple[int, str]] = []
    for g_idx in range(spec.count):
        germ = random_germ(spec, g_idx)
        try:
            before = _invariant_triple(germ, max_steps, generator_cap)
        except ResourceLimitError as exc:
            germ_errors.append((g_idx, str(exc)))
            continue
        for m_off in range(moves_per_germ):
            m_idx = g_idx * moves_per_germ + m_off + 1
            move = random_move(spec, m_idx, germ.nvars, germ.ncomps)
            moved = apply_contact_move(germ, move)
            try:
                after = _invariant_triple(moved, max_steps, generator_cap)
            except ResourceLimitError as exc:
                cases.append(
                    CaseRecord(g_idx, m_idx, _triple_json(before), None, (), str(exc))
                )
                continue
            violations = []
            if before[0] != after[0]:
                violations.append(f"order {before[0]} -> {after[0]}")
            if before[1] != after[1]:
                violations.append(f"rank {before[1]} -> {after[1]}")
            if not symbol_prefix_equal(before[2], after[2], max_steps):
                violations.append(
                    f"symbol {before[2].pretty()} -> {after[2].pretty()}"
                )
            cases.append(
                CaseRecord(
                    g_idx,
                    m_idx,
                    _triple_json(before),
                    _triple_json(after),
                    tuple(violations),
                    None,
                )
            )
    return InvarianceReport(spec, moves_per_germ, tuple(cases), tuple(germ_errors))


def _triple_json(triple: tuple[int, int, BoardmanSymbol]) -> tuple:
    order, rank, symbol = triple
    return (order, rank, symbol.to_json_dict())


def describe_germ(germ: MapGerm, var_names: Sequence[str] | None = None) -> list[str]:
    """Printable component list, mainly for corpus listings and reports."""
    if var_names is None:
        var_names = ("x", "y", "z")[: germ.nvars]
    return [print_polynomial(c, var_names) for c in germ.components]
