"""Map germs at the origin and their basic invariants.

A MapGerm is a polynomial map f: (R^n, 0) -> (R^p, 0): a tuple of components
that all vanish at the origin.  Invariants:

  * order    - least total degree appearing in any component (zero components
               contribute nothing; the zero map has no order),
  * rank     - rank of the Jacobian at the origin over the rationals,
  * first homogeneous part - componentwise part of degree order(f),
  * graph map - x |-> (x, f(x)) in the same source variables.
"""

from __future__ import annotations

from typing import Sequence

from .errors import GermConditionError, StructuralError, UndefinedInvariantError
from .germparse import POLYNOMIAL_KIND, GermFile, parse_germ_file
from .polycore import (
    Polynomial,
    PolyMatrix,
    compose_polys,
    jacobian_of,
    rational_rank,
)


class MapGerm:
    """Polynomial map germ fixing the origin."""

    __slots__ = ("nvars", "components")

    def __init__(self, nvars: int, components: Sequence[Polynomial]):
        comps = tuple(components)
        if not comps:
            raise StructuralError("a map germ needs at least one component")
        for idx, comp in enumerate(comps):
            if comp.nvars != nvars:
                raise StructuralError(
                    f"component {idx + 1} uses {comp.nvars} variables, expected {nvars}"
                )
            if comp.constant_term() != 0:
                raise GermConditionError(
                    f"component {idx + 1} does not vanish at the origin: not a germ at 0"
                )
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "components", comps)

    @property
    def ncomps(self) -> int:
        return len(self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MapGerm):
            return NotImplemented
        return self.nvars == other.nvars and self.components == other.components

    def __hash__(self) -> int:
        return hash((self.nvars, self.components))

    def __repr__(self) -> str:
        return f"MapGerm(nvars={self.nvars}, ncomps={self.ncomps})"

    def __setattr__(self, name, value):
        raise AttributeError("MapGerm instances are immutable")

    # -- invariants -----------------------------------------------------------

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def order(self) -> int:
        """Least total degree over all components.  Undefined for the zero
        map, whose order is infinite."""
        orders = [c.order() for c in self.components if not c.is_zero()]
        if not orders:
            raise UndefinedInvariantError("the zero map has infinite order")
        return min(orders)

    def jacobian(self) -> PolyMatrix:
        return jacobian_of(self.components, self.nvars)

    def rank(self) -> int:
        """Rank of the Jacobian at the origin, i.e. of the linear parts."""
        rows = [c.linear_coefficients() for c in self.components]
        return rational_rank(rows)

    def first_homogeneous_part(self) -> "MapGerm":
        """Componentwise homogeneous part of degree order(f).  Components with
        no term in that degree come back zero."""
        k = self.order()
        return MapGerm(self.nvars, [c.homogeneous_component(k) for c in self.components])

    def graph_map(self) -> "MapGerm":
        """x |-> (x, f(x)): identity components followed by this germ's."""
        idents = [Polynomial.variable(self.nvars, j) for j in range(self.nvars)]
        return MapGerm(self.nvars, idents + list(self.components))

    # -- algebra --------------------------------------------------------------

    def compose(self, inner: "MapGerm") -> "MapGerm":
        """This germ after `inner`: (self o inner)(x) = self(inner(x))."""
        if inner.ncomps != self.nvars:
            raise StructuralError(
                f"inner map has {inner.ncomps} components, outer expects {self.nvars}"
            )
        return MapGerm(inner.nvars, compose_polys(self.components, inner.components))

    def eval_at(self, point):
        return [c.eval_at(point) for c in self.components]


def identity_germ(nvars: int) -> MapGerm:
    return MapGerm(nvars, [Polynomial.variable(nvars, j) for j in range(nvars)])


def germ_from_file(source: GermFile) -> MapGerm:
    if source.kind != POLYNOMIAL_KIND:
        raise StructuralError(
            f"expected a {POLYNOMIAL_KIND} germ file, found {source.kind}"
        )
    return MapGerm(len(source.var_names), source.components)


def load_germ(text: str) -> MapGerm:
    """Parse polynomial germ-file text straight to a MapGerm."""
    return germ_from_file(parse_germ_file(text))
