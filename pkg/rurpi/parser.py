"""Text format for polynomial systems.

    system  = { blank | comment } header { line } ;
    header  = "vars:" ident { "," ident } ;
    line    = expr [ comment ] ;
    expr    = term { ("+" | "-") term } ;
    term    = unary { ("*" | "/") unary } ;      (* "/" only by a constant *)
    unary   = ("+" | "-") unary | power ;
    power   = atom [ "^" integer ] ;
    atom    = integer | ident | "(" expr ")" ;
    comment = "#" { any character } ;

Juxtaposition ("2x", "x y", "2(x+1)") is a syntax error.
"""

from __future__ import annotations

import re
from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .algebra.polyarith import IntPoly, Monomial, grevlex_key
from .errors import ParseError
from .models.system import PolySystem

RatPoly = dict[Monomial, Fraction]

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^(),:]))")
_HEADER = re.compile(r"\s*vars\s*:(?P<rest>.*)$")


@dataclass(frozen=True, slots=True)
class _Token:
    kind: str
    text: str
    column: int


def _tokenize(text: str, line: int) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        match = _TOKEN.match(text, pos)
        if match is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos + 1)
        kind = match.lastgroup
        start = match.start(kind)
        tokens.append(_Token(kind, match.group(kind), start + 1))
        pos = match.end()
    return tokens


class _LineParser:
    def __init__(self, text: str, line: int, variables: dict[str, int]) -> None:
        self.tokens = _tokenize(text, line)
        self.line = line
        self.variables = variables
        self.nvars = len(variables)
        self.pos = 0
        self.end_column = len(text) + 1

    # -- token plumbing

    def _peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _error(self, message: str, token: _Token | None = None) -> ParseError:
        column = token.column if token else self.end_column
        return ParseError(message, self.line, column)

    def _take(self, text: str) -> bool:
        tok = self._peek()
        if tok is not None and tok.kind == "op" and tok.text == text:
            self.pos += 1
            return True
        return False

    # -- polynomial arithmetic over Q

    def _const(self, c: Fraction | int) -> RatPoly:
        c = Fraction(c)
        return {(0,) * self.nvars: c} if c else {}

    @staticmethod
    def _add(a: RatPoly, b: RatPoly, sign: int = 1) -> RatPoly:
        out = dict(a)
        for m, c in b.items():
            v = out.get(m, 0) + sign * c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return out

    @staticmethod
    def _mul(a: RatPoly, b: RatPoly) -> RatPoly:
        out: RatPoly = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                v = out.get(m, 0) + ca * cb
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return out

    # -- grammar

    def parse(self) -> RatPoly:
        poly = self._expr()
        tok = self._peek()
        if tok is not None:
            if tok.kind in ("num", "ident") or tok.text == "(":
                raise self._error("implicit multiplication is not allowed", tok)
            raise self._error(f"unexpected {tok.text!r}", tok)
        return poly

    def _expr(self) -> RatPoly:
        acc = self._term()
        while True:
            if self._take("+"):
                acc = self._add(acc, self._term())
            elif self._take("-"):
                acc = self._add(acc, self._term(), -1)
            else:
                return acc

    def _term(self) -> RatPoly:
        acc = self._unary()
        while True:
            if self._take("*"):
                acc = self._mul(acc, self._unary())
            elif self._take("/"):
                tok = self._peek()
                divisor = self._unary()
                if any(any(m) for m in divisor) or not divisor:
                    raise self._error("division only by a nonzero constant", tok)
                (c,) = divisor.values()
                acc = {m: v / c for m, v in acc.items()}
            else:
                return acc

    def _unary(self) -> RatPoly:
        if self._take("-"):
            return {m: -c for m, c in self._unary().items()}
        if self._take("+"):
            return self._unary()
        return self._power()

    def _power(self) -> RatPoly:
        base = self._atom()
        if not self._take("^"):
            return base
        tok = self._peek()
        if tok is None or tok.kind != "num":
            raise self._error("exponent must be a nonnegative integer", tok)
        self.pos += 1
        result = self._const(1)
        for _ in range(int(tok.text)):
            result = self._mul(result, base)
        return result

    def _atom(self) -> RatPoly:
        tok = self._peek()
        if tok is None:
            raise self._error("unexpected end of line")
        self.pos += 1
        if tok.kind == "num":
            return self._const(int(tok.text))
        if tok.kind == "ident":
            index = self.variables.get(tok.text)
            if index is None:
                raise self._error(f"undeclared variable {tok.text!r}", tok)
            return {tuple(1 if k == index else 0 for k in range(self.nvars)): Fraction(1)}
        if tok.text == "(":
            inner = self._expr()
            if not self._take(")"):
                raise self._error("expected ')'", self._peek())
            return inner
        raise self._error(f"unexpected {tok.text!r}", tok)


def _content_lines(text: str) -> Iterator[tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if line.strip():
            yield number, line


def _parse_header(number: int, line: str) -> tuple[str, ...]:
    match = _HEADER.match(line)
    if match is None:
        raise ParseError("expected a 'vars:' declaration", number, 1)
    names = [name.strip() for name in match.group("rest").split(",")]
    offset = match.start("rest")
    for name in names:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
            raise ParseError(f"invalid variable name {name!r}", number, offset + 1)
    if len(set(names)) != len(names):
        raise ParseError("duplicate variable name", number, offset + 1)
    return tuple(names)


def parse_polynomial(text: str, variables: tuple[str, ...], line: int = 1) -> RatPoly:
    return _LineParser(text, line, {v: i for i, v in enumerate(variables)}).parse()


def clear_denominators(coeffs: Mapping[Monomial, Fraction], nvars: int) -> IntPoly:
    """Multiply by the lcm of the coefficient denominators."""
    scale = lcm(*(Fraction(c).denominator for c in coeffs.values())) if coeffs else 1
    return IntPoly.from_dict(
        {m: int(Fraction(c) * scale) for m, c in coeffs.items()}, nvars
    )


def parse_system(text: str, source: str | None = None) -> PolySystem:
    lines = _content_lines(text)
    first = next(lines, None)
    if first is None:
        raise ParseError("empty system")
    variables = _parse_header(*first)
    generators: list[IntPoly] = []
    for number, line in lines:
        poly = parse_polynomial(line, variables, number)
        if not poly:
            raise ParseError("polynomial is identically zero", number, 1)
        generators.append(clear_denominators(poly, len(variables)))
    if not generators:
        raise ParseError("empty system")
    return PolySystem(variables, tuple(generators), source)


def format_monomial(mono: Monomial, variables: tuple[str, ...]) -> str:
    parts = []
    for name, e in zip(variables, mono):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_polynomial(poly: IntPoly, variables: tuple[str, ...]) -> str:
    out = []
    for mono, c in sorted(poly.terms, key=lambda t: grevlex_key(t[0]), reverse=True):
        body = format_monomial(mono, variables)
        mag = abs(c)
        if not body:
            text = str(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{mag}*{body}"
        if not out:
            out.append(f"-{text}" if c < 0 else text)
        else:
            out.append(f"- {text}" if c < 0 else f"+ {text}")
    return " ".join(out) if out else "0"


def format_system(system: PolySystem) -> str:
    lines = ["vars: " + ", ".join(system.variables)]
    lines.extend(format_polynomial(g, system.variables) for g in system.generators)
    return "\n".join(lines) + "\n"
