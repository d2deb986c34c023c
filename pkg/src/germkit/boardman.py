"""Singularity symbols by iterated Jacobian extension.

Starting from the ideal generated by a germ's components, each step measures
the critical index i = n - rank(J(0)) of the current generator list and, when
i > 0, extends the list with all s x s minors of its Jacobian for s = n - i + 1
(the largest extension that keeps every generator vanishing at the origin).
The sequence of critical indices is the symbol.  It is non-increasing because
generators are only ever added, so it is stored run-length encoded.

Termination:

  * stabilized_zero - some step has full rank at the origin; the value 0
    repeats forever,
  * steady_tail     - a step adds no new generators and repeats the previous
    value; that value repeats forever,
  * truncated       - the step limit was hit first.

Pruning keeps the generator list small without changing the ideal: zero minors
are dropped, as is any minor that is an exact polynomial multiple of a
generator already present (scalar multiples being the degree-zero case,
detected first by normalizing the graded-lex leading coefficient to 1).
Dropping q*g changes nothing downstream: the ideal is unchanged, the rank of
the Jacobian at the origin depends only on the ideal, and by multilinearity
every minor involving the row d(q*g) = q*dg + g*dq lies in the ideal the kept
generators and their minors already generate.  Without this the minor
staircase of even small one-variable-dominated germs floods any generator cap
long before the symbol stabilizes.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ResourceLimitError, StructuralError, UndefinedInvariantError
from .germinv import MapGerm
from .polycore import Polynomial, PolyMatrix, determinant, divides, rational_rank

DEFAULT_MAX_STEPS = 64
DEFAULT_GENERATOR_CAP = 512

# Candidate minors allowed per extension step, as a multiple of the generator
# cap.  A diverging iteration (a germ whose true tail the syntactic
# stabilization test cannot see) grows its candidate count combinatorially;
# checking the count up front turns a multi-second grind into an immediate
# resource error.  Healthy runs stay one to two orders of magnitude below.
CANDIDATE_BUDGET_FACTOR = 8

# Terms allowed in a single kept minor.  The other divergence mode adds few
# generators per step but doubles their degree, so the caps on counts never
# fire while single determinants grow without bound.  Healthy runs over the
# default corpus peak well under 200 terms per generator.
DEFAULT_TERM_CAP = 1024

# Coefficient multiplications allowed while computing one candidate minor,
# as a multiple of the term cap.  Exact products multiply term counts, so
# dense entries make a single determinant cost far more than any minor the
# term cap would keep; estimating that cost from term counts alone aborts
# the grind before the first big product is formed, instead of after it.
MINOR_WORK_FACTOR = 64

ORIGINAL = "original"


def minor_tag(step: int) -> str:
    return f"minor-at-step-{step}"


def _normal_key(p: Polynomial):
    """Hashable form of p scaled so its graded-lex leading coefficient is 1;
    two polynomials collide exactly when one is a rational multiple of the
    other."""
    _, lead = p.leading_term()
    return frozenset((e, Fraction(c) / lead) for e, c in p.terms.items())


def _det_work(counts: Sequence[Sequence[int]]) -> int:
    """Multiplications a cofactor expansion of the determinant would need:
    the permanent of the term-count matrix."""
    total = 0
    for perm in itertools.permutations(range(len(counts))):
        prod = 1
        for i, j in enumerate(perm):
            prod *= counts[i][j]
        total += prod
    return total


class GeneratorSet:
    """Ordered, pruned list of ideal generators vanishing at the origin."""

    __slots__ = ("nvars", "gens", "provenance", "_keys", "_jac_rows")

    def __init__(
        self,
        nvars: int,
        gens: Sequence[Polynomial],
        provenance: Sequence[str],
        _keys: set | None = None,
    ):
        gens = tuple(gens)
        provenance = tuple(provenance)
        if len(gens) != len(provenance):
            raise StructuralError("one provenance tag per generator required")
        keys = set() if _keys is None else _keys
        for idx, g in enumerate(gens):
            if g.nvars != nvars:
                raise StructuralError(
                    f"generator {idx + 1} uses {g.nvars} variables, expected {nvars}"
                )
            if g.is_zero():
                raise StructuralError("zero generators are not allowed")
            if g.constant_term() != 0:
                raise StructuralError(
                    "generator does not vanish at the origin: the ideal is not proper"
                )
        if _keys is None:
            for g in gens:
                key = _normal_key(g)
                if key in keys:
                    raise StructuralError(
                        "generators must not be rational multiples of each other"
                    )
                keys.add(key)
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "provenance", provenance)
        object.__setattr__(self, "_keys", keys)
        object.__setattr__(self, "_jac_rows", None)

    @classmethod
    def from_polys(
        cls, nvars: int, polys: Iterable[Polynomial], tag: str = ORIGINAL
    ) -> "GeneratorSet":
        """Build from raw polynomials with the standard pruning: zeros and
        polynomial multiples of an earlier entry are silently dropped."""
        gens: list[Polynomial] = []
        keys: set = set()
        for p in polys:
            if p.is_zero():
                continue
            key = _normal_key(p)
            if key in keys:
                continue
            if any(divides(g, p) for g in gens):
                continue
            keys.add(key)
            gens.append(p)
        return cls(nvars, gens, [tag] * len(gens), _keys=keys)

    @classmethod
    def from_germ(cls, germ: MapGerm) -> "GeneratorSet":
        return cls.from_polys(germ.nvars, germ.components)

    def __len__(self) -> int:
        return len(self.gens)

    def __repr__(self) -> str:
        return f"GeneratorSet(nvars={self.nvars}, size={len(self.gens)})"

    def __setattr__(self, name, value):
        raise AttributeError("GeneratorSet instances are immutable")

    def _jacobian_rows(self) -> list[list[Polynomial]]:
        rows = self._jac_rows
        if rows is None:
            rows = [[g.derive(j) for j in range(self.nvars)] for g in self.gens]
            object.__setattr__(self, "_jac_rows", rows)
        return rows

    def critical_index(self) -> int:
        """n minus the rank at the origin of the generators' Jacobian.  The
        empty set has critical index n."""
        if not self.gens:
            return self.nvars
        rows = [g.linear_coefficients() for g in self.gens]
        return self.nvars - rational_rank(rows)

    def jacobian_extension(
        self,
        size: int,
        *,
        start_row: int = 0,
        max_generators: int | None = None,
        max_terms: int | None = None,
        step: int | None = None,
    ) -> "GeneratorSet":
        """Generators plus all size x size minors of their Jacobian, pruned.

        Minors are appended in lexicographic (row subset, column subset)
        order.  `start_row` skips minors drawn entirely from rows below it;
        callers use this when those minors were already produced by an earlier
        extension of the same size, where pruning would discard them anyway.
        `max_generators` aborts with a resource error as soon as the pruned
        list would exceed it, and up front when the step's candidate count
        already exceeds CANDIDATE_BUDGET_FACTOR times the cap.  `max_terms`
        aborts when a kept minor has more terms than that: generator count
        and candidate count both miss the divergence mode where few, ever
        denser minors are added each step.
        """
        if not self.gens:
            raise StructuralError("cannot extend an empty generator set")
        if not 1 <= size <= self.nvars:
            raise StructuralError(
                f"minor size {size} out of range in {self.nvars} variables"
            )
        if size > len(self.gens):
            # fewer rows than the minor size: the minor set is empty
            return self
        if max_generators is not None:
            budget = CANDIDATE_BUDGET_FACTOR * max_generators
            n_rows = len(self.gens)
            candidates = (
                math.comb(n_rows, size) - math.comb(min(start_row, n_rows), size)
            ) * math.comb(self.nvars, size)
            if candidates > budget:
                raise ResourceLimitError(
                    f"{candidates} candidate minors exceed the work budget "
                    f"{budget}"
                    + (f" at step {step}" if step is not None else ""),
                    step=step,
                )
        rows = self._jacobian_rows()
        gens = list(self.gens)
        provenance = list(self.provenance)
        keys = set(self._keys)
        tag = minor_tag(step) if step is not None else "minor"
        # (order, degree, leading exponents) per generator; a generator can
        # only divide a minor that dominates it in all three, so most
        # divisibility checks are settled here without dividing.
        meta = [(g.order(), g.total_degree(), g.leading_term()[0]) for g in gens]
        col_subsets = list(itertools.combinations(range(self.nvars), size))
        for row_idx in itertools.combinations(range(len(gens)), size):
            if row_idx[-1] < start_row:
                continue
            for col_idx in col_subsets:
                if size == 1:
                    minor = rows[row_idx[0]][col_idx[0]]
                else:
                    if max_terms is not None:
                        work = _det_work(
                            [[rows[i][j].term_count() for j in col_idx] for i in row_idx]
                        )
                        if work > MINOR_WORK_FACTOR * max_terms:
                            raise ResourceLimitError(
                                f"a candidate minor costs {work} products, over "
                                f"the work budget {MINOR_WORK_FACTOR * max_terms}"
                                + (f" at step {step}" if step is not None else ""),
                                step=step,
                            )
                    sub = PolyMatrix(
                        [[rows[i][j] for j in col_idx] for i in row_idx], self.nvars
                    )
                    minor = determinant(sub)
                if minor.is_zero():
                    continue
                key = _normal_key(minor)
                if key in keys:
                    continue
                if minor.constant_term() != 0:
                    raise StructuralError(
                        "a minor has nonzero constant term: the extended ideal"
                        " is not proper (the chosen minor size is too small)"
                    )
                m_ord = minor.order()
                m_deg = minor.total_degree()
                m_lead = minor.leading_term()[0]
                redundant = False
                for g, (g_ord, g_deg, g_lead) in zip(gens, meta):
                    if g_ord > m_ord or g_deg > m_deg:
                        continue
                    if any(a < b for a, b in zip(m_lead, g_lead)):
                        continue
                    if divides(g, minor):
                        redundant = True
                        break
                if redundant:
                    continue
                if max_terms is not None and minor.term_count() > max_terms:
                    raise ResourceLimitError(
                        f"a minor with {minor.term_count()} terms exceeds the "
                        f"term cap {max_terms}"
                        + (f" at step {step}" if step is not None else ""),
                        step=step,
                    )
                keys.add(key)
                gens.append(minor)
                meta.append((m_ord, m_deg, m_lead))
                provenance.append(tag)
                if max_generators is not None and len(gens) > max_generators:
                    raise ResourceLimitError(
                        f"generator cap {max_generators} exceeded"
                        + (f" at step {step}" if step is not None else ""),
                        step=step,
                    )
        return GeneratorSet(self.nvars, gens, provenance, _keys=keys)

    def appended(self, extra: Iterable[Polynomial], tag: str) -> "GeneratorSet":
        """This set plus further polynomials, dropping only zeros and rational
        multiples.  Deliberately weaker than the extension pruning so that
        redundant generators (say h*g for an existing g) really do join the
        list; robustness of the iteration against them is a property worth
        testing, not one to define away."""
        gens = list(self.gens)
        provenance = list(self.provenance)
        keys = set(self._keys)
        for p in extra:
            if p.is_zero():
                continue
            key = _normal_key(p)
            if key in keys:
                continue
            keys.add(key)
            gens.append(p)
            provenance.append(tag)
        return GeneratorSet(self.nvars, gens, provenance, _keys=keys)


class SymbolStatus(enum.Enum):
    STABILIZED_ZERO = "stabilized_zero"
    STEADY_TAIL = "steady_tail"
    TRUNCATED = "truncated"


@dataclass(frozen=True)
class BoardmanSymbol:
    """Run-length encoded symbol: (value, count) runs with strictly decreasing
    values; a None count means the value repeats forever."""

    runs: tuple[tuple[int, int | None], ...]
    status: SymbolStatus

    def __post_init__(self):
        values = [v for v, _ in self.runs]
        if any(values[i] <= values[i + 1] for i in range(len(values) - 1)):
            raise StructuralError("run values must strictly decrease")
        for idx, (value, count) in enumerate(self.runs):
            if count is None and idx != len(self.runs) - 1:
                raise StructuralError("only the final run may be unbounded")
            if count is not None and count < 1:
                raise StructuralError("run counts must be positive")
            if value < 0:
                raise StructuralError("run values must be non-negative")

    def is_unbounded(self) -> bool:
        return bool(self.runs) and self.runs[-1][1] is None

    def expand(self, upto: int) -> list[int]:
        """First `upto` symbol entries; shorter when the symbol is finite."""
        out: list[int] = []
        for value, count in self.runs:
            if count is None:
                while len(out) < upto:
                    out.append(value)
                break
            out.extend([value] * count)
            if len(out) >= upto:
                break
        return out[:upto]

    def pretty(self) -> str:
        """Sequence notation, with a trailing ellipsis for an unbounded tail:
        (2, 2, 2, 1, 0, ...)."""
        parts: list[str] = []
        for value, count in self.runs:
            if count is None:
                parts.append(str(value))
                parts.append("...")
            else:
                parts.extend([str(value)] * count)
        return "(" + ", ".join(parts) + ")"

    def to_json_dict(self) -> dict:
        return {
            "runs": [[value, count] for value, count in self.runs],
            "status": self.status.value,
        }


def _encode_runs(
    values: Sequence[int], tail_value: int | None
) -> tuple[tuple[int, int | None], ...]:
    runs: list[list] = []
    for v in values:
        if runs and runs[-1][0] == v:
            runs[-1][1] += 1
        else:
            runs.append([v, 1])
    if tail_value is not None:
        if runs and runs[-1][0] == tail_value:
            runs[-1][1] = None
        else:
            runs.append([tail_value, None])
    return tuple((v, c) for v, c in runs)


def symbol_of_generators(
    generators: GeneratorSet,
    max_steps: int = DEFAULT_MAX_STEPS,
    generator_cap: int | None = DEFAULT_GENERATOR_CAP,
    term_cap: int | None = DEFAULT_TERM_CAP,
) -> BoardmanSymbol:
    """Run the extension iteration on an explicit generator set."""
    if max_steps < 1:
        raise StructuralError("max_steps must be at least 1")
    n = generators.nvars
    if len(generators) == 0:
        return BoardmanSymbol(_encode_runs([], n), SymbolStatus.STEADY_TAIL)
    current = generators
    values: list[int] = []
    prev_size: int | None = None
    prev_start = 0
    for step in range(1, max_steps + 1):
        index = current.critical_index()
        if index == 0:
            return BoardmanSymbol(
                _encode_runs(values, 0), SymbolStatus.STABILIZED_ZERO
            )
        if step == max_steps:
            values.append(index)
            break
        size = n - index + 1
        start = prev_start if size == prev_size else 0
        before = len(current)
        extended = current.jacobian_extension(
            size,
            start_row=start,
            max_generators=generator_cap,
            max_terms=term_cap,
            step=step,
        )
        if len(extended) == before and values and values[-1] == index:
            return BoardmanSymbol(
                _encode_runs(values, index), SymbolStatus.STEADY_TAIL
            )
        values.append(index)
        current = extended
        prev_size = size
        prev_start = before
    return BoardmanSymbol(_encode_runs(values, None), SymbolStatus.TRUNCATED)


def boardman_symbol(
    germ: MapGerm,
    max_steps: int = DEFAULT_MAX_STEPS,
    generator_cap: int | None = DEFAULT_GENERATOR_CAP,
    term_cap: int | None = DEFAULT_TERM_CAP,
) -> BoardmanSymbol:
    """Symbol of a map germ.  The zero map yields the single unbounded run
    (n, ...) with a steady tail."""
    if germ.is_zero():
        return BoardmanSymbol(
            _encode_runs([], germ.nvars), SymbolStatus.STEADY_TAIL
        )
    return symbol_of_generators(
        GeneratorSet.from_germ(germ),
        max_steps=max_steps,
        generator_cap=generator_cap,
        term_cap=term_cap,
    )


def symbol_prefix_equal(a: BoardmanSymbol, b: BoardmanSymbol, upto: int) -> bool:
    """Whether two symbols agree on their first `upto` entries (unbounded runs
    repeat; finite symbols shorter than `upto` compare by what they have)."""
    if upto < 1:
        raise StructuralError("prefix length must be positive")
    return a.expand(upto) == b.expand(upto)
