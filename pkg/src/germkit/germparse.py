"""Parsing and printing for polynomial and Lipschitz map sources.

Expression grammar (whitespace-insensitive, `#` starts a comment to end of
line):

    expr    := term (('+' | '-') term)*
    term    := factor ('*' factor)*
    factor  := ('+' | '-') factor | power
    power   := atom ('^' INT)?
    atom    := INT ('/' INT)? | NAME | NAME '(' expr (',' expr)* ')' | '(' expr ')'

There is no implicit multiplication and `^` takes a non-negative integer
literal only.  Function-call atoms (abs, min, max) are accepted only in the
Lipschitz language; `^` is sugar there and desugars to repeated products.

Germ files are line-oriented:

    format 1
    kind polynomial-map        # or lipschitz-map
    vars x y
    component x^2 + y^3
    component x^2*y

The format line must come first; kind and vars must both appear before the
first component; components must vanish at the origin (checked exactly).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import GermConditionError, ParseError, StructuralError
from .polycore import Polynomial

_RESERVED = ("abs", "min", "max")


# -- Lipschitz expression trees ----------------------------------------------


@dataclass(frozen=True)
class LVar:
    index: int

    def evaluate(self, point: Sequence[float]) -> float:
        return point[self.index]

    def evaluate_exact(self, point: Sequence[Fraction]) -> Fraction:
        return Fraction(point[self.index])


@dataclass(frozen=True)
class LConst:
    value: Fraction

    def evaluate(self, point: Sequence[float]) -> float:
        return float(self.value)

    def evaluate_exact(self, point: Sequence[Fraction]) -> Fraction:
        return self.value


@dataclass(frozen=True)
class LAdd:
    left: "LipschitzExpr"
    right: "LipschitzExpr"

    def evaluate(self, point):
        return self.left.evaluate(point) + self.right.evaluate(point)

    def evaluate_exact(self, point):
        return self.left.evaluate_exact(point) + self.right.evaluate_exact(point)


@dataclass(frozen=True)
class LSub:
    left: "LipschitzExpr"
    right: "LipschitzExpr"

    def evaluate(self, point):
        return self.left.evaluate(point) - self.right.evaluate(point)

    def evaluate_exact(self, point):
        return self.left.evaluate_exact(point) - self.right.evaluate_exact(point)


@dataclass(frozen=True)
class LMul:
    left: "LipschitzExpr"
    right: "LipschitzExpr"

    def evaluate(self, point):
        return self.left.evaluate(point) * self.right.evaluate(point)

    def evaluate_exact(self, point):
        return self.left.evaluate_exact(point) * self.right.evaluate_exact(point)


@dataclass(frozen=True)
class LAbs:
    arg: "LipschitzExpr"

    def evaluate(self, point):
        return abs(self.arg.evaluate(point))

    def evaluate_exact(self, point):
        return abs(self.arg.evaluate_exact(point))


@dataclass(frozen=True)
class LMin:
    left: "LipschitzExpr"
    right: "LipschitzExpr"

    def evaluate(self, point):
        return min(self.left.evaluate(point), self.right.evaluate(point))

    def evaluate_exact(self, point):
        return min(self.left.evaluate_exact(point), self.right.evaluate_exact(point))


@dataclass(frozen=True)
class LMax:
    left: "LipschitzExpr"
    right: "LipschitzExpr"

    def evaluate(self, point):
        return max(self.left.evaluate(point), self.right.evaluate(point))

    def evaluate_exact(self, point):
        return max(self.left.evaluate_exact(point), self.right.evaluate_exact(point))


LipschitzExpr = Union[LVar, LConst, LAdd, LSub, LMul, LAbs, LMin, LMax]


# -- tokenizer ----------------------------------------------------------------

_PUNCT = "+-*^()/,"


@dataclass(frozen=True)
class _Token:
    kind: str  # "int", "name", one of _PUNCT, or "eof"
    text: str
    line: int
    col: int


def _tokenize(text: str, line: int = 1, col: int = 1) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch in " \t\r":
            i += 1
            col += 1
        elif ch == "#":
            while i < n and text[i] != "\n":
                i += 1
        elif ch.isdigit():
            start = i
            start_col = col
            while i < n and text[i].isdigit():
                i += 1
                col += 1
            tokens.append(_Token("int", text[start:i], line, start_col))
        elif ch.isalpha() or ch == "_":
            start = i
            start_col = col
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
                col += 1
            tokens.append(_Token("name", text[start:i], line, start_col))
        elif ch in _PUNCT:
            tokens.append(_Token(ch, ch, line, col))
            i += 1
            col += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("eof", "", line, col))
    return tokens


# -- expression parser --------------------------------------------------------


class _ExprParser:
    """Recursive-descent parser shared by the polynomial and Lipschitz
    languages; `calls` enables the abs/min/max atoms."""

    def __init__(self, tokens: list[_Token], var_names: Sequence[str], calls: bool):
        self.tokens = tokens
        self.pos = 0
        self.vars = {name: i for i, name in enumerate(var_names)}
        self.nvars = len(var_names)
        self.calls = calls

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            shown = tok.text or "end of input"
            raise ParseError(f"expected {kind!r}, found {shown!r}", tok.line, tok.col)
        return self.advance()

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok.kind != "eof":
            raise ParseError(f"unexpected {tok.text!r}", tok.line, tok.col)
        return node

    def expr(self):
        node = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.advance().kind
            rhs = self.term()
            node = self.make_add(node, rhs) if op == "+" else self.make_sub(node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek().kind == "*":
            self.advance()
            node = self.make_mul(node, self.factor())
        return node

    def factor(self):
        tok = self.peek()
        if tok.kind in ("+", "-"):
            self.advance()
            inner = self.factor()
            return inner if tok.kind == "+" else self.make_neg(inner)
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek().kind == "^":
            caret = self.advance()
            tok = self.peek()
            if tok.kind != "int":
                raise ParseError(
                    "exponent must be a non-negative integer literal",
                    caret.line,
                    caret.col,
                )
            self.advance()
            return self.make_pow(base, int(tok.text))
        return base

    def atom(self):
        tok = self.peek()
        if tok.kind == "int":
            self.advance()
            numerator = int(tok.text)
            if self.peek().kind == "/":
                self.advance()
                den_tok = self.expect("int")
                denominator = int(den_tok.text)
                if denominator == 0:
                    raise ParseError(
                        "zero denominator in rational literal", den_tok.line, den_tok.col
                    )
                return self.make_const(Fraction(numerator, denominator))
            return self.make_const(Fraction(numerator))
        if tok.kind == "name":
            self.advance()
            if self.calls and tok.text in _RESERVED:
                return self.call(tok)
            if tok.text not in self.vars:
                raise ParseError(f"unknown variable {tok.text!r}", tok.line, tok.col)
            return self.make_var(self.vars[tok.text])
        if tok.kind == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        shown = tok.text or "end of input"
        raise ParseError(f"unexpected {shown!r}", tok.line, tok.col)

    def call(self, name_tok: _Token):
        self.expect("(")
        args = [self.expr()]
        while self.peek().kind == ",":
            self.advance()
            args.append(self.expr())
        self.expect(")")
        want = 1 if name_tok.text == "abs" else 2
        if len(args) != want:
            raise ParseError(
                f"{name_tok.text} takes {want} argument{'s' if want > 1 else ''}",
                name_tok.line,
                name_tok.col,
            )
        if name_tok.text == "abs":
            return LAbs(args[0])
        if name_tok.text == "min":
            return LMin(args[0], args[1])
        return LMax(args[0], args[1])

    # node builders, overridden per language

    def make_const(self, value: Fraction):
        raise NotImplementedError

    def make_var(self, index: int):
        raise NotImplementedError

    def make_add(self, a, b):
        raise NotImplementedError

    def make_sub(self, a, b):
        raise NotImplementedError

    def make_mul(self, a, b):
        raise NotImplementedError

    def make_neg(self, a):
        raise NotImplementedError

    def make_pow(self, a, e: int):
        raise NotImplementedError


class _PolyParser(_ExprParser):
    def __init__(self, tokens, var_names):
        super().__init__(tokens, var_names, calls=False)

    def make_const(self, value):
        return Polynomial.constant(self.nvars, value)

    def make_var(self, index):
        return Polynomial.variable(self.nvars, index)

    def make_add(self, a, b):
        return a + b

    def make_sub(self, a, b):
        return a - b

    def make_mul(self, a, b):
        return a * b

    def make_neg(self, a):
        return -a

    def make_pow(self, a, e):
        return a**e


class _LipschitzParser(_ExprParser):
    def __init__(self, tokens, var_names):
        super().__init__(tokens, var_names, calls=True)

    def make_const(self, value):
        return LConst(value)

    def make_var(self, index):
        return LVar(index)

    def make_add(self, a, b):
        return LAdd(a, b)

    def make_sub(self, a, b):
        return LSub(a, b)

    def make_mul(self, a, b):
        return LMul(a, b)

    def make_neg(self, a):
        return LSub(LConst(Fraction(0)), a)

    def make_pow(self, a, e):
        # sugar: a^0 = 1, a^k = a * ... * a
        if e == 0:
            return LConst(Fraction(1))
        node = a
        for _ in range(e - 1):
            node = LMul(node, a)
        return node


def parse_polynomial(
    text: str, var_names: Sequence[str], line: int = 1
) -> Polynomial:
    """Parse an expression into a Polynomial over the named variables."""
    return _PolyParser(_tokenize(text, line=line), var_names).parse()


def parse_lipschitz(
    text: str, var_names: Sequence[str], line: int = 1
) -> LipschitzExpr:
    """Parse an expression into a Lipschitz expression tree."""
    return _LipschitzParser(_tokenize(text, line=line), var_names).parse()


# -- printing -----------------------------------------------------------------


def _coeff_str(value) -> str:
    f = Fraction(value)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def print_polynomial(p: Polynomial, var_names: Sequence[str]) -> str:
    """Canonical rendering: terms by increasing total degree, ties broken by
    decreasing lexicographic exponent vector.  parse_polynomial inverts it."""
    if len(var_names) != p.nvars:
        raise StructuralError(
            f"{len(var_names)} names given for {p.nvars} variables"
        )
    if p.is_zero():
        return "0"
    items = sorted(
        p.terms.items(), key=lambda item: (sum(item[0]), tuple(-e for e in item[0]))
    )
    pieces: list[str] = []
    for position, (exps, coeff) in enumerate(items):
        f = Fraction(coeff)
        negative = f < 0
        mag = -f if negative else f
        factors = []
        for name, e in zip(var_names, exps):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        if not factors:
            body = _coeff_str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_coeff_str(mag)] + factors)
        if position == 0:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces)


def print_lipschitz(e: LipschitzExpr, var_names: Sequence[str]) -> str:
    """Infix rendering of a Lipschitz expression; parse_lipschitz re-reads it
    to an equal tree."""
    if isinstance(e, LVar):
        return var_names[e.index]
    if isinstance(e, LConst):
        return _coeff_str(e.value)
    if isinstance(e, LAbs):
        return f"abs({print_lipschitz(e.arg, var_names)})"
    if isinstance(e, LMin):
        return f"min({print_lipschitz(e.left, var_names)}, {print_lipschitz(e.right, var_names)})"
    if isinstance(e, LMax):
        return f"max({print_lipschitz(e.left, var_names)}, {print_lipschitz(e.right, var_names)})"
    ops = {LAdd: "+", LSub: "-", LMul: "*"}
    op = ops[type(e)]
    return f"({print_lipschitz(e.left, var_names)} {op} {print_lipschitz(e.right, var_names)})"


# -- germ files ---------------------------------------------------------------

POLYNOMIAL_KIND = "polynomial-map"
LIPSCHITZ_KIND = "lipschitz-map"


@dataclass(frozen=True)
class GermFile:
    """Parsed germ source: named variables plus components in one language."""

    var_names: tuple[str, ...]
    kind: str
    components: tuple


def _strip_comment(raw: str) -> str:
    cut = raw.find("#")
    return raw if cut < 0 else raw[:cut]


def parse_germ_file(text: str) -> GermFile:
    """Parse germ-file source text.

    Raises ParseError for structural problems and GermConditionError when a
    component fails to vanish at the origin.
    """
    fmt_seen = False
    kind: str | None = None
    var_names: tuple[str, ...] | None = None
    components: list = []
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        stripped = _strip_comment(raw).strip()
        if not stripped:
            continue
        word, _, rest = stripped.partition(" ")
        rest = rest.strip()
        if not fmt_seen:
            if word != "format":
                raise ParseError("germ file must start with a format line", lineno, 1)
            if rest != "1":
                raise ParseError(f"unsupported format version {rest!r}", lineno, 1)
            fmt_seen = True
            continue
        if word == "format":
            raise ParseError("duplicate format line", lineno, 1)
        if word == "kind":
            if kind is not None:
                raise ParseError("duplicate kind line", lineno, 1)
            if rest not in (POLYNOMIAL_KIND, LIPSCHITZ_KIND):
                raise ParseError(f"unknown kind {rest!r}", lineno, 1)
            kind = rest
            continue
        if word == "vars":
            if var_names is not None:
                raise ParseError("duplicate vars line", lineno, 1)
            names = rest.split()
            if not names:
                raise ParseError("vars line names no variables", lineno, 1)
            for name in names:
                if not (name[0].isalpha() or name[0] == "_") or not all(
                    c.isalnum() or c == "_" for c in name
                ):
                    raise ParseError(f"invalid variable name {name!r}", lineno, 1)
                if name in _RESERVED:
                    raise ParseError(f"variable name {name!r} is reserved", lineno, 1)
            if len(set(names)) != len(names):
                raise ParseError("duplicate variable names", lineno, 1)
            var_names = tuple(names)
            continue
        if word == "component":
            if kind is None:
                raise ParseError("component before kind line", lineno, 1)
            if var_names is None:
                raise ParseError("component before vars line", lineno, 1)
            if not rest:
                raise ParseError("empty component expression", lineno, 1)
            if kind == POLYNOMIAL_KIND:
                components.append(parse_polynomial(rest, var_names, line=lineno))
            else:
                components.append(parse_lipschitz(rest, var_names, line=lineno))
            continue
        raise ParseError(f"unknown directive {word!r}", lineno, 1)
    if not fmt_seen:
        raise ParseError("germ file must start with a format line", last_line + 1, 1)
    if kind is None:
        raise ParseError("missing kind line", last_line + 1, 1)
    if var_names is None:
        raise ParseError("missing vars line", last_line + 1, 1)
    if not components:
        raise ParseError("germ file declares no components", last_line + 1, 1)
    origin = [Fraction(0)] * len(var_names)
    for idx, comp in enumerate(components):
        if kind == POLYNOMIAL_KIND:
            value = comp.constant_term()
        else:
            value = comp.evaluate_exact(origin)
        if value != 0:
            raise GermConditionError(
                f"component {idx + 1} does not vanish at the origin: not a germ at 0"
            )
    return GermFile(var_names=var_names, kind=kind, components=tuple(components))


def render_germ_file(germ: GermFile) -> str:
    """Inverse of parse_germ_file up to formatting."""
    lines = ["format 1", f"kind {germ.kind}", "vars " + " ".join(germ.var_names)]
    for comp in germ.components:
        if germ.kind == POLYNOMIAL_KIND:
            lines.append("component " + print_polynomial(comp, germ.var_names))
        else:
            lines.append("component " + print_lipschitz(comp, germ.var_names))
    return "\n".join(lines) + "\n"
