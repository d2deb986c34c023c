"""Exact multivariate polynomial arithmetic over the rationals.

A polynomial in n variables is a sparse map from exponent vectors (length-n
tuples of non-negative ints) to nonzero rational coefficients.  The
representation is canonical: zero coefficients are dropped at construction, and
integer-valued coefficients are stored as Python ints rather than Fractions
(the two hash and compare equal, and ints are much faster in the inner loops),
so equal polynomials always carry identical term maps.

Display order and leading-term conventions are graded lexicographic: terms are
compared first by total degree, then lexicographically on the exponent vector
with earlier variables taking precedence.
"""

from __future__ import annotations

import heapq
import itertools
import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import StructuralError

Exponents = tuple[int, ...]
Coeff = int | Fraction


def _grlex(exps: Exponents) -> tuple[int, Exponents]:
    return sum(exps), exps


def _norm_coeff(value: Coeff) -> Coeff:
    # type test rather than isinstance: Fraction's ABC metaclass check is slow
    if type(value) is int:
        return value
    if value.denominator == 1:
        return value.numerator
    return value


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("nvars", "_terms", "_hash", "_span", "_probe", "_prim")

    def __init__(self, nvars: int, terms: Mapping[Exponents, Coeff] | None = None):
        if nvars < 0:
            raise StructuralError("variable count must be non-negative")
        clean: dict[Exponents, Coeff] = {}
        if terms:
            for exps, coeff in terms.items():
                if len(exps) != nvars:
                    raise StructuralError(
                        f"exponent vector {exps} has length {len(exps)}, expected {nvars}"
                    )
                if any(e < 0 or not isinstance(e, int) for e in exps):
                    raise StructuralError(f"exponents must be non-negative ints: {exps}")
                if coeff:
                    clean[tuple(exps)] = _norm_coeff(coeff)
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_span", None)
        object.__setattr__(self, "_probe", None)
        object.__setattr__(self, "_prim", None)

    def _degree_span(self) -> tuple[int, int, Exponents, Exponents] | None:
        """(order, degree, trailing exponents, leading exponents), cached;
        None for the zero polynomial."""
        span = self._span
        if span is None and self._terms:
            lead = max(self._terms, key=_grlex)
            trail = min(self._terms, key=_grlex)
            degs = [sum(e) for e in self._terms]
            span = (min(degs), max(degs), trail, lead)
            object.__setattr__(self, "_span", span)
        return span

    # -- construction helpers -------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value: Coeff) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: Fraction(value)})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "Polynomial":
        if not 0 <= index < nvars:
            raise StructuralError(f"variable index {index} out of range for {nvars} variables")
        exps = tuple(1 if j == index else 0 for j in range(nvars))
        return cls(nvars, {exps: 1})

    # -- observation ----------------------------------------------------------

    @property
    def terms(self) -> dict[Exponents, Coeff]:
        """Copy of the term map (exponent vector -> coefficient)."""
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def term_count(self) -> int:
        return len(self._terms)

    def coefficient(self, exps: Exponents) -> Fraction:
        return Fraction(self._terms.get(tuple(exps), 0))

    def constant_term(self) -> Fraction:
        return Fraction(self._terms.get((0,) * self.nvars, 0))

    def total_degree(self) -> int | None:
        """Largest total degree of a term, or None for the zero polynomial."""
        span = self._degree_span()
        return None if span is None else span[1]

    def order(self) -> int | None:
        """Smallest total degree of a term, or None for the zero polynomial."""
        span = self._degree_span()
        return None if span is None else span[0]

    def homogeneous_component(self, degree: int) -> "Polynomial":
        """The sum of the terms of the given total degree."""
        picked = {e: c for e, c in self._terms.items() if sum(e) == degree}
        return Polynomial(self.nvars, picked)

    def linear_coefficients(self) -> list[Fraction]:
        """Coefficients of the degree-1 terms, one per variable."""
        out = []
        for j in range(self.nvars):
            unit = tuple(1 if i == j else 0 for i in range(self.nvars))
            out.append(Fraction(self._terms.get(unit, 0)))
        return out

    def leading_term(self) -> tuple[Exponents, Fraction]:
        """Graded-lex maximal term. Raises on the zero polynomial."""
        span = self._degree_span()
        if span is None:
            raise StructuralError("the zero polynomial has no leading term")
        return span[3], Fraction(self._terms[span[3]])

    def trailing_term(self) -> tuple[Exponents, Fraction]:
        """Graded-lex minimal term. Raises on the zero polynomial."""
        span = self._degree_span()
        if span is None:
            raise StructuralError("the zero polynomial has no trailing term")
        return span[2], Fraction(self._terms[span[2]])

    # -- arithmetic -----------------------------------------------------------

    def _check_same_ring(self, other: "Polynomial") -> None:
        if self.nvars != other.nvars:
            raise StructuralError(
                f"mixed variable counts: {self.nvars} vs {other.nvars}"
            )

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_same_ring(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        return Polynomial(self.nvars, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_same_ring(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) - c
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        return Polynomial(self.nvars, out)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            if not other:
                return Polynomial(self.nvars)
            return Polynomial(self.nvars, {e: c * other for e, c in self._terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_same_ring(other)
        return Polynomial(self.nvars, _mul_terms(self._terms, other._terms, self.nvars))

    __rmul__ = __mul__

    def __pow__(self, power: int) -> "Polynomial":
        if not isinstance(power, int) or power < 0:
            raise StructuralError("polynomial powers must be non-negative ints")
        result = Polynomial.constant(self.nvars, 1)
        base = self
        n = power
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def derive(self, var: int) -> "Polynomial":
        """Partial derivative with respect to the given variable index."""
        if not 0 <= var < self.nvars:
            raise StructuralError(f"variable index {var} out of range")
        out: dict[Exponents, Coeff] = {}
        for e, c in self._terms.items():
            k = e[var]
            if k:
                e2 = e[:var] + (k - 1,) + e[var + 1 :]
                out[e2] = c * k
        return Polynomial(self.nvars, out)

    def eval_at(self, point: Sequence[Coeff]) -> Fraction:
        """Exact evaluation at a rational point."""
        if len(point) != self.nvars:
            raise StructuralError(
                f"point has {len(point)} coordinates, expected {self.nvars}"
            )
        values = [Fraction(v) for v in point]
        total = Fraction(0)
        for e, c in self._terms.items():
            term = Fraction(c)
            for v, k in zip(values, e):
                if k:
                    term *= v**k
            total += term
        return total

    # -- dunder plumbing ------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.nvars, frozenset(self._terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        return f"Polynomial({self.nvars}, {self._terms!r})"

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial instances are immutable")


def _mul_terms(
    a: Mapping[Exponents, Coeff], b: Mapping[Exponents, Coeff], nvars: int
) -> dict[Exponents, Coeff]:
    """Sparse product of two term maps.

    When every exponent fits in 10 bits and there are at most 6 variables, the
    exponent vectors are packed into single ints so monomial products become
    integer additions; the result is unpacked at the end.  Falls back to tuple
    arithmetic otherwise.  Both paths produce identical results.
    """
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    if 0 < nvars <= 6:
        limit = 1 << 10
        if all(e < limit for exps in a for e in exps) and all(
            e < limit for exps in b for e in exps
        ):
            shifts = tuple(10 * i for i in range(nvars))
            mask = limit - 1

            def pack(exps: Exponents) -> int:
                k = 0
                for e, s in zip(exps, shifts):
                    k |= e << s
                return k

            pa = [(pack(e), c) for e, c in a.items()]
            pb = [(pack(e), c) for e, c in b.items()]
            acc: dict[int, Coeff] = {}
            get = acc.get
            for ka, ca in pa:
                for kb, cb in pb:
                    k = ka + kb
                    s = get(k, 0) + ca * cb
                    if s:
                        acc[k] = s
                    elif k in acc:
                        del acc[k]
            return {
                tuple((k >> s) & mask for s in shifts): c for k, c in acc.items()
            }
    acc2: dict[Exponents, Coeff] = {}
    get2 = acc2.get
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            s = get2(e, 0) + ca * cb
            if s:
                acc2[e] = s
            elif e in acc2:
                del acc2[e]
    return acc2


def exact_divide(p: Polynomial, d: Polynomial) -> Polynomial:
    """Quotient p / d when d divides p exactly.

    Repeatedly cancels the graded-lex leading term of the remainder against the
    leading term of d; for an exact multiple this always succeeds.  Raises
    StructuralError when the division is not exact.
    """
    p._check_same_ring(d)
    if d.is_zero():
        raise StructuralError("division by the zero polynomial")
    quotient: dict[Exponents, Coeff] = {}
    rem = p
    d_exps, d_coeff = d.leading_term()
    while not rem.is_zero():
        r_exps, r_coeff = rem.leading_term()
        diff = tuple(a - b for a, b in zip(r_exps, d_exps))
        if any(e < 0 for e in diff):
            raise StructuralError("non-exact polynomial division")
        q = r_coeff / d_coeff
        quotient[diff] = _norm_coeff(q)
        rem = rem - Polynomial(p.nvars, {diff: q}) * d
    return Polynomial(p.nvars, quotient)


def _integer_terms(terms: Mapping[Exponents, Coeff]) -> dict[Exponents, int]:
    """The term map scaled by the lcm of coefficient denominators.  Scaling by
    a nonzero rational changes no divisibility relation."""
    denom = 1
    for c in terms.values():
        # type test beats isinstance: Fraction's ABC metaclass check is slow
        if type(c) is not int:
            denom = denom * c.denominator // math.gcd(denom, c.denominator)
    if denom == 1:
        return dict(terms)
    return {e: int(c * denom) for e, c in terms.items()}


_PROBE_POINT = (3, 5, 7, 11, 13, 17, 19, 23)


def _primitive_terms(p: Polynomial) -> dict[Exponents, int]:
    """The term map of p scaled to primitive integer form (integer
    coefficients with gcd 1), cached.  Callers must not mutate the result."""
    prim = p._prim
    if prim is None:
        prim = _integer_terms(p._terms)
        content = 0
        for c in prim.values():
            content = math.gcd(content, c)
        if content > 1:
            prim = {e: c // content for e, c in prim.items()}
        object.__setattr__(p, "_prim", prim)
    return prim


def _prim_probe(p: Polynomial) -> int:
    """Integer value of the primitive form of p at a fixed odd point, cached.

    If d divides p over the rationals, the primitive forms divide in the
    integer ring (Gauss), so this value of d divides this value of p whenever
    the former is nonzero: one modulo settles most non-divisible pairs without
    a division.
    """
    value = p._probe
    if value is None:
        point = _PROBE_POINT
        if p.nvars > len(point):
            point += tuple(range(25, 25 + 2 * (p.nvars - len(point)), 2))
        value = 0
        for exps, coeff in _primitive_terms(p).items():
            m = coeff
            for x, e in zip(point, exps):
                if e:
                    m *= x**e
            value += m
        object.__setattr__(p, "_probe", value)
    return value


def divides(d: Polynomial, p: Polynomial) -> bool:
    """Whether d divides p exactly over the rationals.

    A monomial divisor reduces to componentwise exponent dominance.  General
    divisors go through cheap necessary conditions (degree span, leading and
    trailing term divisibility, both multiplicative under graded-lex, and an
    integer divisibility probe at a fixed point) before integer long division
    of primitive forms settles the rest: by Gauss's lemma d divides p over
    the rationals iff the primitive forms divide over the integers, so every
    quotient coefficient must come out an exact integer, and an exact
    division spends one step per quotient monomial, all of degree at most
    deg p - deg d, so running past the count of such monomials proves
    inexactness.
    """
    if d.is_zero():
        return p.is_zero()
    if p.is_zero():
        return True
    d._check_same_ring(p)
    d_terms = d._terms
    p_terms = p._terms
    if len(d_terms) == 1:
        (d_exps,) = d_terms
        return all(all(a >= b for a, b in zip(e, d_exps)) for e in p_terms)
    d_ord, d_deg, d_trail, d_lead = d._degree_span()
    p_ord, p_deg, p_trail, p_lead = p._degree_span()
    if d_deg > p_deg or d_ord > p_ord or p_deg - d_deg < p_ord - d_ord:
        return False
    if any(a < b for a, b in zip(p_lead, d_lead)):
        return False
    if any(a < b for a, b in zip(p_trail, d_trail)):
        return False
    dv = _prim_probe(d)
    if dv != 0 and _prim_probe(p) % dv:
        return False
    budget = math.comb(p_deg - d_deg + p.nvars, p.nvars)
    d_prim = _primitive_terms(d)
    dlc = d_prim[d_lead]
    d_rest = [(e, c) for e, c in d_prim.items() if e != d_lead]
    rem = dict(_primitive_terms(p))
    # max-heap on the graded-lex order via negated keys; entries go stale
    # when their exponent is cancelled or popped, so revalidate against rem
    heap = [(-sum(e), tuple(-x for x in e), e) for e in rem]
    heapq.heapify(heap)
    while heap:
        r_lead = heapq.heappop(heap)[2]
        rc = rem.pop(r_lead, None)
        if rc is None:
            continue
        diff = tuple(a - b for a, b in zip(r_lead, d_lead))
        if any(e < 0 for e in diff):
            return False
        qc, residue = divmod(rc, dlc)
        if residue:
            return False
        budget -= 1
        if budget < 0:
            return False
        for e, c in d_rest:
            shifted = tuple(a + b for a, b in zip(e, diff))
            old = rem.get(shifted)
            if old is None:
                s = -qc * c
                if s:
                    rem[shifted] = s
                    heapq.heappush(
                        heap, (-sum(shifted), tuple(-x for x in shifted), shifted)
                    )
            else:
                s = old - qc * c
                if s:
                    rem[shifted] = s
                else:
                    del rem[shifted]
    return not rem


class PolyMatrix:
    """Rectangular matrix of polynomials over one common variable set."""

    __slots__ = ("rows", "cols", "nvars", "entries")

    def __init__(self, entries: Sequence[Sequence[Polynomial]], nvars: int | None = None):
        rows = [tuple(row) for row in entries]
        if not rows or not rows[0]:
            raise StructuralError("matrix must have at least one row and column")
        cols = len(rows[0])
        if any(len(row) != cols for row in rows):
            raise StructuralError("ragged matrix")
        seen = {p.nvars for row in rows for p in row}
        if nvars is None:
            if len(seen) != 1:
                raise StructuralError("matrix entries live in different rings")
            nvars = seen.pop()
        elif seen - {nvars}:
            raise StructuralError("matrix entries live in different rings")
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "entries", tuple(rows))

    def entry(self, i: int, j: int) -> Polynomial:
        return self.entries[i][j]

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix(
            [[self.entries[i][j] for j in col_idx] for i in row_idx], self.nvars
        )

    def at_origin(self) -> list[list[Fraction]]:
        """Constant terms of all entries, as a rational matrix."""
        return [[p.constant_term() for p in row] for row in self.entries]

    def eval_at(self, point: Sequence[Coeff]) -> list[list[Fraction]]:
        return [[p.eval_at(point) for p in row] for row in self.entries]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __repr__(self) -> str:
        return f"PolyMatrix({self.rows}x{self.cols}, nvars={self.nvars})"

    def __setattr__(self, name, value):
        raise AttributeError("PolyMatrix instances are immutable")


def determinant(matrix: PolyMatrix) -> Polynomial:
    """Determinant of a square polynomial matrix.

    Sizes up to 3 expand by cofactors; larger sizes run fraction-free Bareiss
    elimination, whose interior divisions are exact by construction.
    """
    if matrix.rows != matrix.cols:
        raise StructuralError("determinant of a non-square matrix")
    n = matrix.rows
    e = matrix.entries
    if n == 1:
        return e[0][0]
    if n == 2:
        return e[0][0] * e[1][1] - e[0][1] * e[1][0]
    if n == 3:
        return (
            e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1])
            - e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0])
            + e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0])
        )
    work = [list(row) for row in e]
    sign = 1
    prev = Polynomial.constant(matrix.nvars, 1)
    for k in range(n - 1):
        pivot_row = next((r for r in range(k, n) if not work[r][k].is_zero()), None)
        if pivot_row is None:
            return Polynomial.zero(matrix.nvars)
        if pivot_row != k:
            work[k], work[pivot_row] = work[pivot_row], work[k]
            sign = -sign
        pivot = work[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = pivot * work[i][j] - work[i][k] * work[k][j]
                work[i][j] = exact_divide(num, prev)
            work[i][k] = Polynomial.zero(matrix.nvars)
        prev = pivot
    det = work[n - 1][n - 1]
    return det if sign > 0 else -det


def minors(matrix: PolyMatrix, size: int) -> list[Polynomial]:
    """All size x size minors, in lexicographic (row subset, column subset)
    order with the row subset varying slowest."""
    if not 1 <= size <= min(matrix.rows, matrix.cols):
        raise StructuralError(
            f"minor size {size} out of range for a {matrix.rows}x{matrix.cols} matrix"
        )
    out = []
    for row_idx in itertools.combinations(range(matrix.rows), size):
        for col_idx in itertools.combinations(range(matrix.cols), size):
            out.append(determinant(matrix.submatrix(row_idx, col_idx)))
    return out


def jacobian_of(polys: Sequence[Polynomial], nvars: int) -> PolyMatrix:
    """Jacobian matrix of a list of polynomials: entry (i, j) is d p_i / d x_j."""
    if not polys:
        raise StructuralError("jacobian of an empty list")
    if any(p.nvars != nvars for p in polys):
        raise StructuralError("jacobian entries live in different rings")
    return PolyMatrix([[p.derive(j) for j in range(nvars)] for p in polys], nvars)


def compose_polys(
    outer: Sequence[Polynomial], inner: Sequence[Polynomial]
) -> list[Polynomial]:
    """Substitute the inner polynomials for the outer ones' variables.

    Each outer polynomial must use exactly len(inner) variables; every inner
    polynomial must share one ring.  Powers of the inner components are cached
    across terms, so repeated exponents cost one multiplication each.
    """
    if not inner:
        raise StructuralError("composition with an empty inner map")
    m = inner[0].nvars
    if any(q.nvars != m for q in inner):
        raise StructuralError("inner components live in different rings")
    k = len(inner)
    one = Polynomial.constant(m, 1)
    power_cache: list[dict[int, Polynomial]] = [{0: one, 1: q} for q in inner]

    def power(j: int, e: int) -> Polynomial:
        cache = power_cache[j]
        if e not in cache:
            half = power(j, e // 2)
            cache[e] = half * half if e % 2 == 0 else half * half * inner[j]
        return cache[e]

    results = []
    for p in outer:
        if p.nvars != k:
            raise StructuralError(
                f"outer polynomial uses {p.nvars} variables, inner map provides {k}"
            )
        total = Polynomial.zero(m)
        for exps, coeff in p.terms.items():
            term = Polynomial.constant(m, Fraction(coeff))
            for j, e in enumerate(exps):
                if e:
                    term = term * power(j, e)
            total = total + term
        results.append(total)
    return results


def rational_rank(rows: Iterable[Sequence[Fraction]]) -> int:
    """Rank of a matrix of rationals, by exact Gaussian elimination."""
    work = [list(map(Fraction, row)) for row in rows]
    if not work:
        return 0
    ncols = len(work[0])
    rank = 0
    col = 0
    while rank < len(work) and col < ncols:
        pivot = next((r for r in range(rank, len(work)) if work[r][col]), None)
        if pivot is None:
            col += 1
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        lead = work[rank][col]
        for r in range(rank + 1, len(work)):
            if work[r][col]:
                factor = work[r][col] / lead
                work[r] = [a - factor * b for a, b in zip(work[r], work[rank])]
        rank += 1
        col += 1
    return rank
