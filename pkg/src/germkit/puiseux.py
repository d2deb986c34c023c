"""Numeric Newton-Puiseux expansion for plane-curve germs F(x, y) = 0.

Expansions solve x as a fractional power series in y.  Coefficients are
complex doubles while exponents stay exact rationals: the topological data
(characteristic exponents and the coprime pairs derived from them) depends
only on the exponents, so floating coefficients cost nothing where it
matters.  The pair convention, which the printed sets {(5,4)} and
{(3,2),(7,2)} pin down uniquely: with characteristic exponents
e_1 < e_2 < ..., the first pair is (num(e_1), den(e_1)) and the k-th is the
reduced numerator and denominator of e_k * n_1 * ... * n_{k-1}, every
n_k >= 2 and gcd(m_k, n_k) = 1.

The working polynomial after each substitution x = t^m (c + x_1), y = t^q
keeps integer exponents by construction; fractions only appear when a
branch's terms are mapped back to y-exponents.  Coefficients below 1e-10
relative to the largest are dropped after each transform so the next Newton
polygon is not polluted by roundoff shadows.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    GermConditionError,
    NonConvergenceError,
    StructuralError,
)
from .polycore import Polynomial

DEFAULT_MAX_TERMS = 12

_COEFF_DROP = 1e-10
_ROOT_RESIDUAL = 1e-12
_CLUSTER_TOL = 1e-8
_MAX_SWEEPS = 500


# -- Newton polygon -----------------------------------------------------------


def _pareto_minima(support) -> list[tuple[int, int]]:
    """Points of the support not dominated componentwise by another point,
    sorted by increasing first coordinate (hence decreasing second)."""
    best: dict[int, int] = {}
    for i, j in support:
        if i not in best or j < best[i]:
            best[i] = j
    out: list[tuple[int, int]] = []
    for i, j in sorted(best.items()):
        if not out or j < out[-1][1]:
            out.append((i, j))
    return out


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _lower_hull(pts: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    """Strictly convex lower hull of points sorted by first coordinate;
    collinear interior points are dropped."""
    hull: list[tuple[int, int]] = []
    for p in pts:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) <= 0:
            hull.pop()
        hull.append(p)
    return hull


@dataclass(frozen=True)
class NewtonEdge:
    """One compact face of the polygon, walked from larger to smaller
    x-exponent, with its rational inclination."""

    start: tuple[int, int]
    end: tuple[int, int]
    inclination: Fraction


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple[tuple[int, int], ...]
    edges: tuple[NewtonEdge, ...]


def _polygon_edges(support) -> list[NewtonEdge]:
    hull = _lower_hull(_pareto_minima(support))
    edges = []
    # decreasing i order: reverse the i-ascending hull walk
    hull = hull[::-1]
    for a, b in zip(hull, hull[1:]):
        incl = Fraction(b[1] - a[1], a[0] - b[0])
        edges.append(NewtonEdge(a, b, incl))
    return edges


def newton_polygon(F: Polynomial) -> NewtonPolygon:
    """Lower-left convex hull of the support of a two-variable germ.

    Vertices come in decreasing x-exponent order, so edges are ordered by
    increasing inclination.
    """
    if F.nvars != 2:
        raise StructuralError(
            f"a plane-curve germ needs exactly 2 variables, found {F.nvars}"
        )
    if F.is_zero():
        raise StructuralError("the zero polynomial has no Newton polygon")
    if F.constant_term() != 0:
        raise GermConditionError(
            "F(0,0) is nonzero: the curve does not pass through the origin"
        )
    edges = _polygon_edges(F.terms.keys())
    if edges:
        vertices = (edges[0].start,) + tuple(e.end for e in edges)
    else:
        vertices = (_pareto_minima(F.terms.keys())[0],)
    return NewtonPolygon(vertices, tuple(edges))


# -- root finding -------------------------------------------------------------


def _roots(coeffs: Sequence[complex]) -> list[complex]:
    """All roots of a dense complex polynomial (coefficients by ascending
    power, nonzero leading term) by simultaneous Durand-Kerner sweeps.

    Sweeps continue past the residual target until the iterates stagnate;
    multiple roots converge only linearly, and the extra sweeps let their
    clusters collapse far enough for the clustering tolerance to see them.
    """
    degree = len(coeffs) - 1
    lead = coeffs[-1]
    monic = [c / lead for c in coeffs]
    if degree == 1:
        return [-monic[0]]

    def value(z: complex) -> complex:
        acc = 0j
        for c in reversed(monic):
            acc = acc * z + c
        return acc

    radius = 1.0 + max(abs(c) for c in monic[:-1])
    seed = 0.4 + 0.9j
    roots = [radius * seed ** (k + 1) for k in range(degree)]
    scale = max(1.0, max(abs(c) for c in monic))
    target = _ROOT_RESIDUAL * scale
    hit_target = False
    prev_move = math.inf
    for _ in range(_MAX_SWEEPS):
        move = 0.0
        for k in range(degree):
            zk = roots[k]
            denom = 1.0 + 0j
            for l, zl in enumerate(roots):
                if l != k:
                    denom *= zk - zl
            if denom == 0:
                denom = 1e-30
            step = value(zk) / denom
            roots[k] = zk - step
            move = max(move, abs(step))
        residual = max(abs(value(z)) for z in roots)
        if residual <= target:
            hit_target = True
            # stagnation: no sweep-to-sweep improvement left
            if move >= prev_move or move <= 1e-15 * radius:
                return roots
        prev_move = move
    if hit_target:
        return roots
    raise NonConvergenceError(
        f"root finding stalled above residual {_ROOT_RESIDUAL} "
        f"after {_MAX_SWEEPS} sweeps"
    )


def _clustered(roots: Sequence[complex]) -> list[tuple[complex, int]]:
    """Roots grouped by proximity; each group becomes (mean, size).  The
    mean cancels the symmetric error of a multiple root's orbit."""
    n = len(roots)
    group = list(range(n))

    def find(a: int) -> int:
        while group[a] != a:
            group[a] = group[group[a]]
            a = group[a]
        return a

    for i in range(n):
        for j in range(i + 1, n):
            tol = _CLUSTER_TOL * max(1.0, abs(roots[i]), abs(roots[j]))
            if abs(roots[i] - roots[j]) <= tol:
                group[find(i)] = find(j)
    buckets: dict[int, list[complex]] = {}
    for i in range(n):
        buckets.setdefault(find(i), []).append(roots[i])
    return [(sum(b) / len(b), len(b)) for b in buckets.values()]


# -- the expansion ------------------------------------------------------------


def _cleaned(poly: dict) -> dict:
    if not poly:
        return poly
    top = max(abs(c) for c in poly.values())
    return {e: c for e, c in poly.items() if abs(c) >= _COEFF_DROP * top}


def _shifted(poly: dict, m: int, q: int, c: complex, mult: int) -> dict:
    """The working polynomial after x = t^m (c + x1), y = t^q, divided by
    the minimal t-power.

    The (s, 0) entries for s below the root multiplicity are the scaled
    derivatives of the edge polynomial at its own root, zero in exact
    arithmetic; the numeric residue left there by a clustered multiple root
    sits well above the coefficient-drop floor and would corrupt the next
    polygon, so they are removed outright."""
    level = min(m * s + q * t for s, t in poly)
    out: dict[tuple[int, int], complex] = {}
    for (s, t), a in poly.items():
        base = m * s + q * t - level
        # binomial expansion of (c + x1)^s
        binom = 1
        coeff = a * c**s
        for s1 in range(s + 1):
            key = (s1, base)
            out[key] = out.get(key, 0j) + coeff
            if s1 < s:
                binom = binom * (s - s1) // (s1 + 1)
                coeff = a * binom * c ** (s - s1 - 1)
    for s in range(mult):
        out.pop((s, 0), None)
    return _cleaned(out)


def _expand(
    poly: dict, budget: int, rooted: bool = False
) -> list[tuple[list, bool]]:
    """All solution tails x(t) -> 0 of the working polynomial, as lists of
    (t-exponent, coefficient) with a completeness flag.

    `rooted` marks frames below the first extracted root; only those may
    close a branch on the regularity test, so a smooth top-level germ still
    reports its leading term instead of an empty tail."""
    if not poly:
        return []
    tails: list[tuple[list, bool]] = []
    x_order = min(s for s, _ in poly)
    if x_order > 0:
        # x^k factor: k branches end exactly here
        tails.extend(([], True) for _ in range(x_order))
        poly = {(s - x_order, t): a for (s, t), a in poly.items()}
    if (0, 0) in poly:
        # nonzero constant term: nothing left that vanishes at the origin
        return tails
    if all(s == 0 for s, _ in poly):
        return tails
    if rooted and (1, 0) in poly:
        # separated and regular: the polygon anchors on the x-linear,
        # t-free entry, the tail continues as a plain power series, and
        # further terms would add no topological content.  Cutting here
        # also keeps the coefficient spread bounded; long regular tails
        # can grow geometrically and starve the relative drop floor.
        tails.append(([], True))
        return tails
    if budget <= 0:
        tails.append(([], False))
        return tails
    for edge in _polygon_edges(poly.keys()):
        m = edge.inclination.numerator
        q = edge.inclination.denominator
        level = min(m * s + q * t for s, t in poly)
        on_edge = {
            s: a for (s, t), a in poly.items() if m * s + q * t == level
        }
        low = min(on_edge)
        coeffs = [on_edge.get(s, 0j) for s in range(low, max(on_edge) + 1)]
        for center, size in _clustered(_roots(coeffs)):
            branched = _expand(
                _shifted(poly, m, q, center, size), budget - 1, True
            )
            for sub, done in branched:
                exponent = Fraction(m, q)
                tail = [(exponent, center)]
                tail.extend(((m + se) / q, sc) for se, sc in sub)
                tails.append((tail, done))
    return tails


@dataclass(frozen=True)
class PuiseuxBranch:
    """One fractional power series x(y) = sum of coeff * y^exponent.

    `denominator` is the lcm of the exponent denominators;
    `char_exponents` the subsequence at which the running lcm strictly
    grows.  An incomplete branch ran out of its term budget before the
    expansion separated, and carries no topological claim.
    """

    terms: tuple[tuple[Fraction, complex], ...]
    denominator: int
    char_exponents: tuple[Fraction, ...]
    complete: bool

    def __post_init__(self):
        exps = [e for e, _ in self.terms]
        if any(e <= 0 for e in exps):
            raise StructuralError("branch exponents must be positive")
        if any(a >= b for a, b in zip(exps, exps[1:])):
            raise StructuralError("branch exponents must strictly increase")

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        return puiseux_pairs(self)

    def evaluate(self, y: complex) -> complex:
        """Value of the truncated series at a point, via y^(1/denominator)."""
        root = y ** (1.0 / self.denominator)
        return sum(
            c * root ** int(e * self.denominator) for e, c in self.terms
        )

    def to_json_dict(self) -> dict:
        return {
            "exponents": [str(e) for e in self.char_exponents],
            "pairs": (
                [list(p) for p in puiseux_pairs(self)] if self.complete else None
            ),
            "complete": self.complete,
        }


def _build_branch(tail: list, complete: bool) -> PuiseuxBranch:
    denom = 1
    for e, _ in tail:
        denom = denom * e.denominator // math.gcd(denom, e.denominator)
    running = 1
    chars = []
    for e, _ in tail:
        grown = running * e.denominator // math.gcd(running, e.denominator)
        if grown > running:
            chars.append(e)
            running = grown
    return PuiseuxBranch(tuple(tail), denom, tuple(chars), complete)


def puiseux_expansions(
    F: Polynomial, max_terms: int = DEFAULT_MAX_TERMS
) -> list[PuiseuxBranch]:
    """All Puiseux roots x(y) of F(x, y) = 0, one branch per root.

    F must be reduced (square-free); that is the caller's contract and is
    not verified symbolically.  A factor x^k contributes k identically-zero
    branches.  Branches are expanded until they separate and turn regular
    (the working polynomial is degree 1 in the branch variable at the
    origin) or until max_terms terms have been extracted, whichever comes
    first; in the latter case the branch is flagged incomplete.
    """
    if F.nvars != 2:
        raise StructuralError(
            f"a plane-curve germ needs exactly 2 variables, found {F.nvars}"
        )
    if F.is_zero():
        raise StructuralError("the zero polynomial has no expansions")
    if F.constant_term() != 0:
        raise GermConditionError(
            "F(0,0) is nonzero: the curve does not pass through the origin"
        )
    if max_terms < 1:
        raise StructuralError("max_terms must be at least 1")
    support = F.terms
    if all(j >= 1 for _, j in support):
        raise StructuralError(
            "y divides F: the zero set contains the line y = 0, which no "
            "expansion x(y) can represent"
        )
    poly = {e: complex(c) for e, c in support.items()}
    return [_build_branch(tail, done) for tail, done in _expand(poly, max_terms)]


# -- topological data ---------------------------------------------------------


def puiseux_pairs(branch: PuiseuxBranch) -> tuple[tuple[int, int], ...]:
    """Coprime pairs from the characteristic exponents.

    With e_1 < e_2 < ... the pairs are (num, den) of e_1 and then of
    e_k * n_1 * ... * n_{k-1} in lowest terms; a branch with integer
    exponents has none.
    """
    if not branch.complete:
        raise NonConvergenceError(
            "the branch was cut at the term budget before separating; "
            "its pairs are not determined"
        )
    pairs = []
    carried = 1
    for e in branch.char_exponents:
        value = e * carried
        pairs.append((value.numerator, value.denominator))
        carried *= value.denominator
    return tuple(pairs)


def topologically_equal(pairs_a, pairs_b) -> bool:
    """Whether two complete single-branch pair lists agree, which is the
    branch-topology comparison the pairs exist for."""
    return [tuple(p) for p in pairs_a] == [tuple(p) for p in pairs_b]
