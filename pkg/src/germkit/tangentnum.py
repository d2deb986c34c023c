"""Floating-point probes of germ rescaling and equivalence identities.

The smooth theory compares a germ f with its first homogeneous part H_f by
zooming: phi_m(x) = m*phi(x/m) rescales a coordinate change, m^k*f(x/m)
rescales the germ itself (k the order of f), and as m grows both settle
toward limit objects whose agreement is the content of the equivalence
identities probed here.  Nothing in this module is symbolic: probes evaluate
on finite point grids in double precision and report sup-norm deviations,
the honest desk-scale shadow of statements about uniform convergence.

Scales default to powers of two.  Dividing or multiplying a double by a
power of two is exact, so the rescaling itself introduces no roundoff and
the reported deviations reflect the maps, not the arithmetic.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Sequence

from .equivlab import SplitMix64
from .errors import StructuralError, UndefinedInvariantError
from .germinv import MapGerm, identity_germ
from .germparse import LAbs, LConst, LVar
from .polycore import Polynomial, compose_polys

# m = 2^0 .. 2^20; the full sequence is probed, no subsequence extraction
DEFAULT_SCALES = tuple(2**j for j in range(21))

DEFAULT_GRID_STEP = 0.1


@dataclass(frozen=True)
class SampleGrid:
    """Finite set of probe points in [-1, 1]^n, tagged with how it was made."""

    points: tuple[tuple[float, ...], ...]
    generation: str

    def __post_init__(self):
        if not self.points:
            raise StructuralError("a sample grid needs at least one point")
        nvars = len(self.points[0])
        for pt in self.points:
            if len(pt) != nvars:
                raise StructuralError("grid points must share one dimension")
            if any(not -1.0 <= c <= 1.0 for c in pt):
                raise StructuralError("grid coordinates must lie in [-1, 1]")

    @property
    def nvars(self) -> int:
        return len(self.points[0])

    def __len__(self) -> int:
        return len(self.points)


def lattice_grid(nvars: int, step: float = DEFAULT_GRID_STEP) -> SampleGrid:
    """Regular lattice on [-1, 1]^n with the origin removed.

    The origin is excluded because every germ vanishes there, which would
    degenerate ratio probes; the surrounding points are what the local
    comparisons need anyway.
    """
    if nvars < 1:
        raise StructuralError("grid dimension must be at least 1")
    if not 0 < step <= 2:
        raise StructuralError("lattice step must lie in (0, 2]")
    reach = int(1 / step + 1e-9)
    axis = [i * step for i in range(-reach, reach + 1)]
    axis = [v for v in axis if -1.0 <= v <= 1.0]
    points: list[tuple[float, ...]] = []
    idx = [0] * nvars
    while True:
        pt = tuple(axis[i] for i in idx)
        if any(c != 0.0 for c in pt):
            points.append(pt)
        j = nvars - 1
        while j >= 0 and idx[j] == len(axis) - 1:
            idx[j] = 0
            j -= 1
        if j < 0:
            break
        idx[j] += 1
    return SampleGrid(tuple(points), f"lattice(step={step})")


def uniform_grid(nvars: int, count: int, seed: int) -> SampleGrid:
    """Seeded uniform samples in [-1, 1]^n, origin excluded."""
    if nvars < 1:
        raise StructuralError("grid dimension must be at least 1")
    if count < 1:
        raise StructuralError("sample count must be at least 1")
    rng = SplitMix64(seed)
    points: list[tuple[float, ...]] = []
    while len(points) < count:
        # top 53 bits give a uniform double in [0, 1)
        pt = tuple(
            (rng.next64() >> 11) / 9007199254740992.0 * 2.0 - 1.0
            for _ in range(nvars)
        )
        if any(c != 0.0 for c in pt):
            points.append(pt)
    return SampleGrid(tuple(points), f"uniform(seed={seed}, count={count})")


@dataclass(frozen=True)
class RescaleProbe:
    """A map to rescale, the scales to try, and where to evaluate.

    `expr` is one Lipschitz expression per output coordinate; the map sends
    the grid's space to itself, so rescaled outputs can be compared across
    scales pointwise.
    """

    expr: tuple
    m_sequence: tuple
    grid: SampleGrid

    def __post_init__(self):
        if not self.expr:
            raise StructuralError("the probed map needs at least one component")
        seq = self.m_sequence
        if not seq:
            raise StructuralError("the scale sequence must be nonempty")
        if seq[0] <= 0 or any(a >= b for a, b in zip(seq, seq[1:])):
            raise StructuralError(
                "scales must be strictly increasing and positive"
            )


def _max_var_index(expr) -> int:
    if isinstance(expr, LVar):
        return expr.index
    if isinstance(expr, LConst):
        return -1
    if isinstance(expr, LAbs):
        return _max_var_index(expr.arg)
    return max(_max_var_index(expr.left), _max_var_index(expr.right))


def eval_lipschitz(exprs: Sequence, point: Sequence[float]) -> list[float]:
    """Evaluate a Lipschitz expression map at a point, one float per
    component."""
    for idx, e in enumerate(exprs):
        if _max_var_index(e) >= len(point):
            raise StructuralError(
                f"component {idx + 1} uses more variables than the point has"
            )
    return [float(e.evaluate(point)) for e in exprs]


def rescale(exprs: Sequence, m, point: Sequence[float]) -> list[float]:
    """The rescaled map m * e(x/m) at one point."""
    if m <= 0:
        raise StructuralError("rescaling factor must be positive")
    inner = [c / m for c in point]
    return [m * v for v in eval_lipschitz(exprs, inner)]


def _sup_distance(rows_a, rows_b) -> float:
    return max(
        math.hypot(*(x - y for x, y in zip(a, b)))
        for a, b in zip(rows_a, rows_b)
    )


def empirical_lipschitz(map_like, grid: SampleGrid, m=None) -> float:
    """Largest ratio of output to input distance over all grid point pairs.

    `map_like` is a MapGerm or a sequence of Lipschitz expressions; with a
    scale m the ratio is taken for the rescaled map m * e(x/m) instead.
    """
    if m is None:
        values = [_value_at(map_like, pt) for pt in grid.points]
    else:
        values = [_rescaled_value_at(map_like, m, pt) for pt in grid.points]
    best = 0.0
    pts = grid.points
    for i in range(len(pts)):
        vi, pi = values[i], pts[i]
        for j in range(i + 1, len(pts)):
            dx = math.hypot(*(a - b for a, b in zip(pi, pts[j])))
            if dx == 0.0:
                continue
            dv = math.hypot(*(a - b for a, b in zip(vi, values[j])))
            ratio = dv / dx
            if ratio > best:
                best = ratio
    return best


@dataclass(frozen=True)
class ConvergenceReport:
    """Sup-norm deviations between consecutive rescalings, plus the values of
    the final rescaling as the limit estimate."""

    scales: tuple
    rows: tuple[tuple[object, object, float], ...]
    converged: bool
    limit_estimate: tuple[tuple[float, ...], ...]

    def to_json_dict(self) -> dict:
        return {
            "rows": [
                {"m_from": lo, "m_to": hi, "deviation": dev}
                for lo, hi, dev in self.rows
            ],
            "converged": self.converged,
        }


def convergence_probe(probe: RescaleProbe) -> ConvergenceReport:
    """Deviations sup_grid ||phi_m - phi_m'|| for consecutive scales.

    Convergence is declared empirically: the last three deviations must each
    shrink by a factor of at least 1.5 against their predecessor.  That test
    needs four deviations; shorter sequences never report convergence.
    """
    tables = [
        [tuple(rescale(probe.expr, m, pt)) for pt in probe.grid.points]
        for m in probe.m_sequence
    ]
    rows = tuple(
        (probe.m_sequence[i], probe.m_sequence[i + 1], _sup_distance(tables[i], tables[i + 1]))
        for i in range(len(tables) - 1)
    )
    deviations = [dev for _, _, dev in rows]
    converged = len(deviations) >= 4 and all(
        1.5 * deviations[-i] <= deviations[-i - 1] for i in (1, 2, 3)
    )
    return ConvergenceReport(
        tuple(probe.m_sequence), rows, converged, tuple(tables[-1])
    )


# -- float evaluation of polynomial germs -------------------------------------


@functools.lru_cache(maxsize=None)
def _compiled(p: Polynomial) -> tuple:
    """Terms as (float coefficient, exponents), graded-lex descending.  The
    fixed order makes evaluation deterministic across calls."""
    items = sorted(p.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)
    return tuple((float(c), e) for e, c in items)


def _eval_poly(p: Polynomial, point) -> float:
    total = 0.0
    for c, exps in _compiled(p):
        v = c
        for base, e in zip(point, exps):
            # repeated multiplication: exact under power-of-two rescaling of
            # the inputs, which the deviation probes rely on
            for _ in range(e):
                v *= base
        total += v
    return total


def _value_at(map_like, point) -> list[float]:
    if isinstance(map_like, MapGerm):
        return [_eval_poly(c, point) for c in map_like.components]
    return eval_lipschitz(map_like, point)


def _rescaled_value_at(map_like, m, point) -> list[float]:
    if m <= 0:
        raise StructuralError("rescaling factor must be positive")
    inner = [c / m for c in point]
    return [m * v for v in _value_at(map_like, inner)]


# -- exactly commuting equivalence quadruples ---------------------------------


def _unipotent_inverse(germ: MapGerm) -> MapGerm:
    """Exact inverse of a unipotent triangular coordinate change.

    Component i must read x_i + h_i where h_i involves only variables before
    i; back-substitution then solves for each variable in turn and the
    result is verified against the identity before being returned.
    """
    n = germ.nvars
    if germ.ncomps != n:
        raise StructuralError(
            f"a coordinate change must have {n} components, found {germ.ncomps}"
        )
    unit_rows = []
    for i, comp in enumerate(germ.components):
        unit = tuple(1 if j == i else 0 for j in range(n))
        terms = comp.terms
        if terms.get(unit) != 1:
            raise StructuralError(
                f"component {i + 1} is not unipotent: x{i + 1} must appear "
                "with coefficient 1"
            )
        rest = {e: c for e, c in terms.items() if e != unit}
        for e in rest:
            if any(e[j] for j in range(i, n)):
                raise StructuralError(
                    f"component {i + 1} is not triangular: only variables "
                    f"before x{i + 1} may appear beside it"
                )
        unit_rows.append((unit, Polynomial(n, rest)))
    inverse: list[Polynomial] = []
    identity = [Polynomial.variable(n, j) for j in range(n)]
    for i, (unit, shift) in enumerate(unit_rows):
        # x_i = y_i - h_i(x_1..x_{i-1}), earlier variables already solved
        substituted = compose_polys([shift], inverse + identity[i:])[0]
        inverse.append(identity[i] - substituted)
    inv = MapGerm(n, inverse)
    ident = identity_germ(n)
    if germ.compose(inv) != ident or inv.compose(germ) != ident:
        raise StructuralError("inverse verification failed")
    return inv


@dataclass(frozen=True)
class EquivalencePair:
    """Germs f, g with coordinate changes phi, psi satisfying f o phi =
    psi o g exactly, together with the exact inverses of the changes."""

    f: MapGerm
    g: MapGerm
    phi: MapGerm
    psi: MapGerm
    phi_inv: MapGerm
    psi_inv: MapGerm


def construct_equivalence(
    core: MapGerm, phi: MapGerm, psi: MapGerm
) -> EquivalencePair:
    """Build an exactly commuting quadruple around a core germ.

    g is the core itself and f = psi o core o phi^{-1}, so f o phi = psi o g
    holds as a polynomial identity; it is verified exactly before returning.
    Both coordinate changes must be unipotent triangular, the class whose
    inverses are again polynomial.
    """
    if phi.nvars != core.nvars:
        raise StructuralError("phi must act on the core's source space")
    if psi.nvars != core.ncomps:
        raise StructuralError("psi must act on the core's target space")
    phi_inv = _unipotent_inverse(phi)
    psi_inv = _unipotent_inverse(psi)
    f = psi.compose(core).compose(phi_inv)
    if f.compose(phi) != psi.compose(core):
        raise StructuralError("equivalence identity failed to close")
    return EquivalencePair(f, core, phi, psi, phi_inv, psi_inv)


def unipotent_quadruple() -> EquivalencePair:
    """The standard demonstration quadruple: quadratic shear coordinate
    changes around the core (x^2 + y^3, x^2 y)."""
    x = Polynomial.variable(2, 0)
    y = Polynomial.variable(2, 1)
    core = MapGerm(2, [x**2 + y**3, x**2 * y])
    phi = MapGerm(2, [x, y + x**2])
    psi = MapGerm(2, [x, y + x**2])
    return construct_equivalence(core, phi, psi)


# -- limit identity probe ------------------------------------------------------


@dataclass(frozen=True)
class LimitIdentityReport:
    """Per-scale sup deviations D1, D2 and identity residual R, with the
    germ order k used for the m^k rescaling."""

    k: int
    rows: tuple[tuple[object, float, float, float], ...]

    def to_json_rows(self) -> list[dict]:
        return [
            {"m": m, "D1": d1, "D2": d2, "R": r} for m, d1, d2, r in self.rows
        ]


def theorem31_probe(
    f: MapGerm,
    phi: MapGerm,
    psi: MapGerm,
    g: MapGerm | None = None,
    grid: SampleGrid | None = None,
    m_sequence: Sequence = DEFAULT_SCALES,
) -> LimitIdentityReport:
    """Probe the two rescaling limits and the identity residual.

    With k = order(f), H the first homogeneous part, and sups over the grid:

        D1(m) = sup || m^k f(phi(x/m)) - H_f(m phi(x/m)) ||
        D2(m) = sup || m^k psi(g(x/m)) - m^k psi(H_g(x) / m^k) ||
        R(m)  = sup || m^k f(phi(x/m)) - m^k psi(g(x/m)) ||

    For an exactly commuting quadruple R stays at roundoff scale and D1, D2
    decay like 1/m.  When g is omitted it is recovered exactly as
    psi^{-1} o f o phi, which requires psi to be unipotent triangular.
    """
    if g is None:
        g = _unipotent_inverse(psi).compose(f).compose(phi)
    if grid is None:
        grid = lattice_grid(f.nvars)
    if grid.nvars != f.nvars:
        raise StructuralError("grid dimension must match the germ's source")
    seq = tuple(m_sequence)
    if not seq or seq[0] <= 0 or any(a >= b for a, b in zip(seq, seq[1:])):
        raise StructuralError("scales must be strictly increasing and positive")
    k = f.order()
    h_f = f.first_homogeneous_part()
    h_g = g.first_homogeneous_part()
    rows = []
    for m in seq:
        mk = float(m) ** k
        d1 = d2 = r = 0.0
        for pt in grid.points:
            inner = [c / m for c in pt]
            phi_in = _value_at(phi, inner)
            lhs = [mk * v for v in _value_at(f, phi_in)]
            target = _value_at(h_f, [m * c for c in phi_in])
            d1 = max(d1, math.hypot(*(a - b for a, b in zip(lhs, target))))
            g_in = _value_at(g, inner)
            rhs = [mk * v for v in _value_at(psi, g_in)]
            hg_scaled = [v / mk for v in _value_at(h_g, pt)]
            rhs_h = [mk * v for v in _value_at(psi, hg_scaled)]
            d2 = max(d2, math.hypot(*(a - b for a, b in zip(rhs, rhs_h))))
            r = max(r, math.hypot(*(a - b for a, b in zip(lhs, rhs))))
        rows.append((m, d1, d2, r))
    return LimitIdentityReport(k, tuple(rows))


# -- norm comparability probe --------------------------------------------------


@dataclass(frozen=True)
class RatioInterval:
    """Observed range of ||f(x)|| / ||g(phi(x))|| and the comparability
    constant c with [min, max] inside [1/c, c]."""

    min_ratio: float
    max_ratio: float
    c: float

    def to_json_dict(self) -> dict:
        return {"min_ratio": self.min_ratio, "max_ratio": self.max_ratio, "c": self.c}


def lemma21_probe(f: MapGerm, g: MapGerm, phi, grid: SampleGrid) -> RatioInterval:
    """Ratios ||f(x)|| / ||g(phi(x))|| over the grid.

    Points where the denominator vanishes exactly are skipped (the origin is
    never on a lattice grid to begin with); if every point degenerates the
    interval does not exist.  phi may be a polynomial germ or a Lipschitz
    expression map.
    """
    lo = math.inf
    hi = 0.0
    seen = False
    for pt in grid.points:
        if all(c == 0.0 for c in pt):
            continue
        denom = math.hypot(*_value_at(g, _value_at(phi, pt)))
        if denom == 0.0:
            continue
        ratio = math.hypot(*_value_at(f, pt)) / denom
        seen = True
        lo = min(lo, ratio)
        hi = max(hi, ratio)
    if not seen:
        raise UndefinedInvariantError(
            "every grid point degenerates: no ratio to report"
        )
    c = max(hi, 1.0 / lo) if lo > 0.0 else math.inf
    return RatioInterval(lo, hi, c)
