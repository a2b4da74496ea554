"""Textual map grammar and canonical printing.

Grammar (whitespace ignored)::

    map      := hom | biproj | affine | expr
    hom      := '[' expr (':' expr)+ ']'
    biproj   := '[' expr ':' expr ';' expr ':' expr ']'
    affine   := '(' expr (',' expr)+ ')'
    expr     := term (('+' | '-') term)*
    term     := unary (('*' | '/') unary)*
    unary    := ('+' | '-') unary | power
    power    := atom (('^' | '**') ['-'] INT)?
    atom     := NUMBER | 'i' | NAME | '(' expr ')'
    NUMBER   := digits ['.' digits]   (read exactly; '1/3' is a constant quotient)

``i`` is the imaginary unit and cannot be a variable name.  A Gaussian
rational literal is written ``a/b + c/d*i``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .gaussian import GaussianRational, I
from .poly import MultiPoly
from .ratfunc import RationalFunction


class MapSyntaxError(ValueError):
    """Malformed map text; ``offset`` is the 0-based character position."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"syntax error at offset {offset}: {message}")
        self.offset = offset


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>\*\*|[-+*/^()\[\]:,;]))"
)


@dataclass
class _Tok:
    kind: str  # 'num', 'name', 'op', 'end'
    text: str
    pos: int


def tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.start(m.lastgroup) != _skip_ws(text, pos):
            raise MapSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(_Tok("end", "", n))
    return toks


def _skip_ws(text: str, pos: int) -> int:
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


# AST nodes are tuples: ('num', GaussianRational) | ('var', name) | (op, a, b) |
# ('neg', a) | ('pow', a, int)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.tok
        if t.text != text or t.kind not in ("op",):
            found = "end of input" if t.kind == "end" else repr(t.text)
            raise MapSyntaxError(f"expected {text!r}, found {found}", t.pos)
        return self.advance()

    def fail(self, what: str):
        t = self.tok
        found = "end of input" if t.kind == "end" else repr(t.text)
        raise MapSyntaxError(f"expected {what}, found {found}", t.pos)

    # expression grammar
    def expr(self):
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            node = ("add" if op == "+" else "sub", node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in ("*", "/"):
            op = self.advance().text
            node = ("mul" if op == "*" else "div", node, self.unary())
        return node

    def unary(self):
        if self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            inner = self.unary()
            return ("neg", inner) if op == "-" else inner
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text in ("^", "**"):
            self.advance()
            sign = 1
            if self.tok.kind == "op" and self.tok.text == "-":
                self.advance()
                sign = -1
            if self.tok.kind != "num" or "." in self.tok.text:
                self.fail("integer exponent")
            e = int(self.advance().text)
            return ("pow", base, sign * e)
        return base

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self.advance()
            return ("num", GaussianRational(Fraction(t.text)))
        if t.kind == "name":
            self.advance()
            if t.text == "i":
                return ("num", I)
            return ("var", t.text, t.pos)
        if t.kind == "op" and t.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        self.fail("a number, variable or '('")

    # top level
    def map_text(self):
        """Returns (shape, list-of-AST) with shape in {'hom', 'biproj', 'affine', 'expr'}."""
        t = self.tok
        if t.kind == "op" and t.text == "[":
            self.advance()
            first = [self.expr()]
            groups = [first]
            while self.tok.kind == "op" and self.tok.text in (":", ";"):
                sep = self.advance().text
                if sep == ";":
                    groups.append([])
                groups[-1].append(self.expr())
            self.expect("]")
            self.end()
            if len(groups) == 1:
                if len(first) < 2:
                    raise MapSyntaxError("homogeneous map needs at least two components", t.pos)
                return "hom", first
            if len(groups) == 2 and all(len(g) == 2 for g in groups):
                return "biproj", groups[0] + groups[1]
            raise MapSyntaxError("bihomogeneous map must be written [a : b ; c : d]", t.pos)
        if t.kind == "op" and t.text == "(" and self._tuple_ahead():
            self.advance()
            items = [self.expr()]
            while self.tok.kind == "op" and self.tok.text == ",":
                self.advance()
                items.append(self.expr())
            self.expect(")")
            self.end()
            return "affine", items
        node = self.expr()
        self.end()
        return "expr", [node]

    def _tuple_ahead(self) -> bool:
        depth = 0
        for t in self.toks[self.i:]:
            if t.kind != "op":
                continue
            if t.text == "(":
                depth += 1
            elif t.text == ")":
                depth -= 1
                if depth == 0:
                    return False
            elif t.text == "," and depth == 1:
                return True
        return False

    def end(self):
        if self.tok.kind != "end":
            t = self.tok
            raise MapSyntaxError(f"unexpected {t.text!r}", t.pos)


def _names_in(node, acc: dict):
    kind = node[0]
    if kind == "var":
        acc.setdefault(node[1], node[2])
    elif kind in ("add", "sub", "mul", "div"):
        _names_in(node[1], acc)
        _names_in(node[2], acc)
    elif kind in ("neg", "pow"):
        _names_in(node[1], acc)


_PRIORITY = ["x", "y", "z", "w", "u", "v", "s", "t"]


def order_names(names) -> list[str]:
    """Default variable order: x, y, z, w, u, v, s, then t; indexed names by index."""

    def key(name: str):
        m = re.fullmatch(r"([A-Za-z_]+)(\d+)", name)
        stem, idx = (m.group(1), int(m.group(2))) if m else (name, -1)
        pri = _PRIORITY.index(stem) if stem in _PRIORITY else len(_PRIORITY)
        # t is the homogenizing variable and goes last
        if stem == "t":
            pri = len(_PRIORITY) + 1
        return (pri, stem, idx)

    return sorted(names, key=key)


def _evaluate(node, names: list[str], text: str) -> RationalFunction:
    n = len(names)
    kind = node[0]
    if kind == "num":
        return RationalFunction.constant(n, node[1])
    if kind == "var":
        return RationalFunction(MultiPoly.variable(n, names.index(node[1])))
    if kind == "neg":
        return -_evaluate(node[1], names, text)
    if kind == "pow":
        base = _evaluate(node[1], names, text)
        return base ** node[2]
    a = _evaluate(node[1], names, text)
    b = _evaluate(node[2], names, text)
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if b.is_zero():
        raise ZeroDivisionError("division by zero in map text")
    return a / b


def parse_expressions(text: str, variables: Sequence[str] | None = None):
    """Parse map text into ``(shape, names, [RationalFunction, ...])``."""
    parser = _Parser(text)
    shape, nodes = parser.map_text()
    found: dict = {}
    for node in nodes:
        _names_in(node, found)
    if variables is None:
        names = order_names(found)
    else:
        names = list(variables)
        for name, pos in found.items():
            if name not in names:
                raise MapSyntaxError(f"unknown variable {name!r}", pos)
    if not names:
        names = ["z"]
    comps = [_evaluate(node, names, text) for node in nodes]
    return shape, names, comps


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

def _coeff_text(c: GaussianRational) -> tuple[str, str]:
    """(sign, magnitude text) for a coefficient in front of a monomial."""
    if c.is_real():
        s = str(c)
        if s.startswith("-"):
            return "-", s[1:]
        return "+", s
    if c.real == 0:
        s = str(c)
        if s.startswith("-"):
            return "-", s[1:]
        return "+", s
    return "+", f"({c})"


def format_poly(p: MultiPoly, names: Sequence[str]) -> str:
    if p.is_zero():
        return "0"
    pieces = []
    for exps, c in p.items():
        mono = "*".join(
            (names[i] if e == 1 else f"{names[i]}^{e}") for i, e in enumerate(exps) if e
        )
        sign, mag = _coeff_text(c)
        if mono:
            body = mono if mag == "1" else f"{mag}*{mono}"
        else:
            body = mag
        pieces.append((sign, body))
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def format_ratfunc(r: RationalFunction, names: Sequence[str] | None) -> str:
    from .poly import default_names

    names = names or default_names(r.nvars)
    if r.is_polynomial():
        return format_poly(r.num, names)
    return f"({format_poly(r.num, names)})/({format_poly(r.den, names)})"
