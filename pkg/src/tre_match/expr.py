"""Timed regular expressions: syntax trees and a parser.

The syntax has two levels. Inside an atom there is a Boolean layer over
single-letter propositions (``!``, ``&&``, ``||``); around atoms there is a
regular layer with concatenation ``;``, choice ``|``, coincidence ``&``,
duration restriction ``%(m,n)``, star ``*``, plus ``+``, and the edge anchors
``<:`` (rising edge at the match start) and ``:>`` (falling edge at the end).
Binding, loosest to tightest: ``|``, ``&``, ``;``, then the postfix operators.
Anchors attach only to atoms.
"""

from __future__ import annotations

from dataclasses import dataclass


class ExprSyntaxError(ValueError):
    """Malformed expression text; ``position`` is a 0-based column offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (column {position + 1})")
        self.message = message
        self.position = position


# Boolean layer


@dataclass(frozen=True)
class BooleanExpr:
    pass


@dataclass(frozen=True)
class Prop(BooleanExpr):
    name: str


@dataclass(frozen=True)
class Not(BooleanExpr):
    operand: BooleanExpr


@dataclass(frozen=True)
class And(BooleanExpr):
    left: BooleanExpr
    right: BooleanExpr


@dataclass(frozen=True)
class Or(BooleanExpr):
    left: BooleanExpr
    right: BooleanExpr


# Regular layer


@dataclass(frozen=True)
class TimedRegex:
    pass


@dataclass(frozen=True)
class Atom(TimedRegex):
    expr: BooleanExpr
    left_anchor: bool = False
    right_anchor: bool = False


@dataclass(frozen=True)
class Concat(TimedRegex):
    left: TimedRegex
    right: TimedRegex


@dataclass(frozen=True)
class Choice(TimedRegex):
    left: TimedRegex
    right: TimedRegex


@dataclass(frozen=True)
class Coincide(TimedRegex):
    left: TimedRegex
    right: TimedRegex


@dataclass(frozen=True)
class Duration(TimedRegex):
    child: TimedRegex
    low: int
    high: int

    def __post_init__(self):
        if not (isinstance(self.low, int) and isinstance(self.high, int)):
            raise ValueError("duration bounds must be integers")
        if self.low < 0 or self.low > self.high:
            raise ValueError("duration bounds must satisfy 0 <= low <= high")


@dataclass(frozen=True)
class Star(TimedRegex):
    child: TimedRegex


@dataclass(frozen=True)
class Plus(TimedRegex):
    # allows_empty marks a Plus produced by desugaring Star; it changes
    # nullability only, never the set of matched zones.
    child: TimedRegex
    allows_empty: bool = False


def desugar(e: TimedRegex) -> TimedRegex:
    """Rewrite every Star into a Plus that additionally matches empty."""
    if isinstance(e, Atom):
        return e
    if isinstance(e, (Concat, Choice, Coincide)):
        return type(e)(desugar(e.left), desugar(e.right))
    if isinstance(e, Duration):
        return Duration(desugar(e.child), e.low, e.high)
    if isinstance(e, Star):
        return Plus(desugar(e.child), allows_empty=True)
    if isinstance(e, Plus):
        return Plus(desugar(e.child), allows_empty=e.allows_empty)
    raise TypeError(f"not a timed regex: {e!r}")


def nullable(e: TimedRegex) -> bool:
    """Whether ``e`` matches the empty behavior (a zero-length period)."""
    if isinstance(e, Atom):
        return False
    if isinstance(e, Concat):
        return nullable(e.left) and nullable(e.right)
    if isinstance(e, Choice):
        return nullable(e.left) or nullable(e.right)
    if isinstance(e, Coincide):
        # both sides must match the same (here zero-length) period
        return nullable(e.left) and nullable(e.right)
    if isinstance(e, Duration):
        return e.low == 0 and nullable(e.child)
    if isinstance(e, Star):
        return True
    if isinstance(e, Plus):
        return e.allows_empty or nullable(e.child)
    raise TypeError(f"not a timed regex: {e!r}")


def bool_to_text(b: BooleanExpr) -> str:
    if isinstance(b, Prop):
        return b.name
    if isinstance(b, Not):
        return f"!{bool_to_text(b.operand)}"
    if isinstance(b, And):
        return f"({bool_to_text(b.left)} && {bool_to_text(b.right)})"
    if isinstance(b, Or):
        return f"({bool_to_text(b.left)} || {bool_to_text(b.right)})"
    raise TypeError(f"not a Boolean expression: {b!r}")


def to_text(e: TimedRegex) -> str:
    """Fully parenthesized text form; ``parse_expr(to_text(e)) == e``."""
    if isinstance(e, Atom):
        return f"{'<:' if e.left_anchor else ''}{bool_to_text(e.expr)}{':>' if e.right_anchor else ''}"
    if isinstance(e, Concat):
        return f"({to_text(e.left)};{to_text(e.right)})"
    if isinstance(e, Choice):
        return f"({to_text(e.left)}|{to_text(e.right)})"
    if isinstance(e, Coincide):
        return f"({to_text(e.left)}&{to_text(e.right)})"
    if isinstance(e, Duration):
        return f"({to_text(e.child)})%({e.low},{e.high})"
    if isinstance(e, Star):
        return f"({to_text(e.child)})*"
    if isinstance(e, Plus):
        suffix = "*" if e.allows_empty else "+"
        return f"({to_text(e.child)}){suffix}"
    raise TypeError(f"not a timed regex: {e!r}")


# Tokens: (kind, text, position)

_TWO_CHAR = {"&&": "ANDAND", "||": "OROR", "<:": "LANCHOR", ":>": "RANCHOR"}
_ONE_CHAR = {
    "!": "NOT",
    "&": "AND",
    "|": "OR",
    ";": "SEMI",
    "(": "LPAREN",
    ")": "RPAREN",
    "*": "STAR",
    "+": "PLUS",
    "%": "PERCENT",
    ",": "COMMA",
}


def _lex(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        two = text[i : i + 2]
        if two in _TWO_CHAR:
            tokens.append((_TWO_CHAR[two], two, i))
            i += 2
            continue
        if c in _ONE_CHAR:
            tokens.append((_ONE_CHAR[c], c, i))
            i += 1
            continue
        if c.isascii() and c.isalpha():
            tokens.append(("LETTER", c, i))
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("INT", text[i:j], i))
            i = j
            continue
        raise ExprSyntaxError(f"unexpected character {c!r}", i)
    tokens.append(("EOF", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, str, int]]):
        self.tokens = tokens
        self.index = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.index]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.index]
        if tok[0] != "EOF":
            self.index += 1
        return tok

    def check(self, kind: str) -> bool:
        return self.tokens[self.index][0] == kind

    def accept(self, kind: str) -> bool:
        if self.check(kind):
            self.index += 1
            return True
        return False

    def expect(self, kind: str, what: str) -> tuple[str, str, int]:
        tok = self.peek()
        if tok[0] != kind:
            raise ExprSyntaxError(f"expected {what}", tok[2])
        return self.advance()

    def fail(self, message: str) -> ExprSyntaxError:
        return ExprSyntaxError(message, self.peek()[2])

    # Regular layer, loosest first.

    def choice(self) -> TimedRegex:
        e = self.coincide()
        while self.accept("OR"):
            e = Choice(e, self.coincide())
        return e

    def coincide(self) -> TimedRegex:
        e = self.concat()
        while self.accept("AND"):
            e = Coincide(e, self.concat())
        return e

    def concat(self) -> TimedRegex:
        e = self.postfixed()
        while self.accept("SEMI"):
            e = Concat(e, self.postfixed())
        return e

    def postfixed(self) -> TimedRegex:
        e = self.primary()
        while True:
            if self.accept("STAR"):
                e = Star(e)
            elif self.accept("PLUS"):
                e = Plus(e)
            elif self.check("PERCENT"):
                e = self.duration(e)
            elif self.check("RANCHOR"):
                pos = self.peek()[2]
                self.advance()
                if not isinstance(e, Atom):
                    raise ExprSyntaxError("right anchor ':>' requires a Boolean atom", pos)
                if e.right_anchor:
                    raise ExprSyntaxError("duplicate right anchor", pos)
                e = Atom(e.expr, e.left_anchor, True)
            else:
                return e

    def duration(self, child: TimedRegex) -> TimedRegex:
        self.expect("PERCENT", "'%'")
        self.expect("LPAREN", "'(' after '%'")
        low_tok = self.expect("INT", "integer lower duration bound")
        self.expect("COMMA", "','")
        high_tok = self.expect("INT", "integer upper duration bound")
        self.expect("RPAREN", "')'")
        low, high = int(low_tok[1]), int(high_tok[1])
        if low > high:
            raise ExprSyntaxError("duration bounds out of order", high_tok[2])
        return Duration(child, low, high)

    def primary(self) -> TimedRegex:
        tok = self.peek()
        if tok[0] == "LANCHOR":
            self.advance()
            return Atom(self.bool_or(), left_anchor=True)
        if tok[0] in ("LETTER", "NOT"):
            return Atom(self.bool_or())
        if tok[0] == "LPAREN":
            # '(' is ambiguous: a Boolean grouping makes an atom, otherwise it
            # groups a regular subexpression. Try the Boolean reading first and
            # backtrack on failure.
            mark = self.index
            self.advance()
            try:
                b = self.bool_or()
                self.expect("RPAREN", "')'")
                return Atom(b)
            except ExprSyntaxError:
                self.index = mark
            self.advance()
            e = self.choice()
            self.expect("RPAREN", "')'")
            return e
        raise self.fail("expected an expression")

    # Boolean layer.

    def bool_or(self) -> BooleanExpr:
        e = self.bool_and()
        while self.accept("OROR"):
            e = Or(e, self.bool_and())
        return e

    def bool_and(self) -> BooleanExpr:
        e = self.bool_unary()
        while self.accept("ANDAND"):
            e = And(e, self.bool_unary())
        return e

    def bool_unary(self) -> BooleanExpr:
        if self.accept("NOT"):
            return Not(self.bool_unary())
        return self.bool_primary()

    def bool_primary(self) -> BooleanExpr:
        tok = self.peek()
        if tok[0] == "LETTER":
            self.advance()
            return Prop(tok[1])
        if tok[0] == "LPAREN":
            self.advance()
            e = self.bool_or()
            self.expect("RPAREN", "')'")
            return e
        raise self.fail("expected a proposition")


def parse_expr(text: str) -> TimedRegex:
    """Parse expression text, raising ExprSyntaxError with a column offset."""
    parser = _Parser(_lex(text))
    e = parser.choice()
    tok = parser.peek()
    if tok[0] != "EOF":
        raise ExprSyntaxError(f"unexpected {tok[1]!r}", tok[2])
    return e
