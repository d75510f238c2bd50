"""Region expression language for the causal calculus.

Grammar (loosest binding first):

    expr    := meet ('|' meet)*
    meet    := prefix ('&' prefix)*
    prefix  := 'boost' '(' num ')' prefix | postfix ('+' pair)*
    postfix := atom "'"*
    atom    := literal | '(' expr ')'
    literal := 'c' '(' interval (',' interval)* ')' | 'W' | 'point' pair
             | 'full' | 'empty'
    interval:= '[' num ',' num ']'
    pair    := '(' num ',' num ')'

Numbers accept an optional sign, decimals, exponents and inf.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import List, Tuple, Union

from . import causal1d as cz


class RegionSyntaxError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.msg = msg
        self.line = line
        self.col = col


# -- AST ------------------------------------------------------------------------


@dataclass(frozen=True)
class Cone:
    intervals: Tuple[Tuple[float, float], ...]


@dataclass(frozen=True)
class Wedge:
    pass


@dataclass(frozen=True)
class Point:
    x0: float
    x1: float


@dataclass(frozen=True)
class Full:
    pass


@dataclass(frozen=True)
class Empty:
    pass


@dataclass(frozen=True)
class Complement:
    arg: "Expr"


@dataclass(frozen=True)
class Meet:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Join:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Translate:
    arg: "Expr"
    x0: float
    x1: float


@dataclass(frozen=True)
class BoostBy:
    t: float
    arg: "Expr"


Expr = Union[Cone, Wedge, Point, Full, Empty, Complement, Meet, Join, Translate, BoostBy]


# -- lexer ----------------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>[+-]?(?:inf\b|(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?))
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[()\[\],'&|+])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> List[Token]:
    out = []
    pos, line, lstart = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise RegionSyntaxError(f"unexpected character {text[pos]!r}", line, pos - lstart + 1)
        kind = m.lastgroup
        if kind == "ws":
            nl = m.group().count("\n")
            if nl:
                line += nl
                lstart = m.start() + m.group().rindex("\n") + 1
        else:
            out.append(Token(kind, m.group(), line, m.start() - lstart + 1))
        pos = m.end()
    return out


# -- parser ------------------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self) -> Token | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def error(self, msg: str):
        t = self.peek()
        if t is None:
            last = self.toks[-1] if self.toks else Token("", "", 1, 1)
            raise RegionSyntaxError("unexpected end of input" if not msg else msg, last.line, last.col)
        raise RegionSyntaxError(msg, t.line, t.col)

    def take(self, text: str) -> Token:
        t = self.peek()
        if t is None:
            self.error(f"unexpected end of input, expected {text!r}")
        if t.text != text:
            self.error(f"expected {text!r}, found {t.text!r}")
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        t = self.peek()
        return t is not None and t.text == text

    def number(self) -> float:
        t = self.peek()
        if t is None:
            self.error("unexpected end of input, expected a number")
        if t.kind != "num":
            self.error(f"expected a number, found {t.text!r}")
        self.i += 1
        return float(t.text)

    def pair(self) -> Tuple[float, float]:
        self.take("(")
        a = self.number()
        self.take(",")
        b = self.number()
        self.take(")")
        return a, b

    def parse(self) -> Expr:
        if not self.toks:
            raise RegionSyntaxError("empty expression", 1, 1)
        e = self.expr()
        if self.peek() is not None:
            self.error(f"unexpected {self.peek().text!r}")
        return e

    def expr(self) -> Expr:
        e = self.meet()
        while self.at("|"):
            self.i += 1
            e = Join(e, self.meet())
        return e

    def meet(self) -> Expr:
        e = self.prefix()
        while self.at("&"):
            self.i += 1
            e = Meet(e, self.prefix())
        return e

    def prefix(self) -> Expr:
        if self.at("boost"):
            self.i += 1
            self.take("(")
            t = self.number()
            self.take(")")
            return BoostBy(t, self.prefix())
        e = self.postfix()
        while self.at("+"):
            self.i += 1
            x0, x1 = self.pair()
            e = Translate(e, x0, x1)
        return e

    def postfix(self) -> Expr:
        e = self.atom()
        while self.at("'"):
            self.i += 1
            e = Complement(e)
        return e

    def atom(self) -> Expr:
        t = self.peek()
        if t is None:
            self.error("")
        if t.text == "(":
            self.i += 1
            e = self.expr()
            self.take(")")
            return e
        if t.kind != "name":
            self.error(f"unexpected {t.text!r}")
        self.i += 1
        if t.text == "W":
            return Wedge()
        if t.text == "full":
            return Full()
        if t.text == "empty":
            return Empty()
        if t.text == "point":
            return Point(*self.pair())
        if t.text == "c":
            self.take("(")
            ivs = [self.interval()]
            while self.at(","):
                self.i += 1
                ivs.append(self.interval())
            self.take(")")
            return Cone(tuple(ivs))
        raise RegionSyntaxError(f"unbound literal {t.text!r}", t.line, t.col)

    def interval(self) -> Tuple[float, float]:
        t = self.take("[")
        a = self.number()
        self.take(",")
        b = self.number()
        self.take("]")
        if a > b:
            raise RegionSyntaxError(f"interval [{a:g}, {b:g}] has a > b", t.line, t.col)
        return a, b


def parse_region(text: str) -> Expr:
    return _Parser(text).parse()


# -- printer ------------------------------------------------------------------------------


def _num(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


_PREC = {Join: 0, Meet: 1, BoostBy: 2, Translate: 2, Complement: 3}


def _prec(e: Expr) -> int:
    return _PREC.get(type(e), 4)


def to_text(e: Expr) -> str:
    if isinstance(e, Cone):
        return "c(" + ", ".join(f"[{_num(a)}, {_num(b)}]" for a, b in e.intervals) + ")"
    if isinstance(e, Wedge):
        return "W"
    if isinstance(e, Full):
        return "full"
    if isinstance(e, Empty):
        return "empty"
    if isinstance(e, Point):
        return f"point({_num(e.x0)}, {_num(e.x1)})"
    if isinstance(e, Complement):
        inner = to_text(e.arg)
        return (inner if _prec(e.arg) >= 3 else f"({inner})") + "'"
    if isinstance(e, Translate):
        inner = to_text(e.arg)
        # the argument of '+' is a postfix chain or another translation
        if not (_prec(e.arg) >= 3 or isinstance(e.arg, Translate)):
            inner = f"({inner})"
        return f"{inner} + ({_num(e.x0)}, {_num(e.x1)})"
    if isinstance(e, BoostBy):
        inner = to_text(e.arg)
        if _prec(e.arg) < 2:
            inner = f"({inner})"
        return f"boost({_num(e.t)}) {inner}"
    if isinstance(e, (Meet, Join)):
        p = _prec(e)
        op = " & " if isinstance(e, Meet) else " | "
        left = to_text(e.left)
        right = to_text(e.right)
        if _prec(e.left) < p:
            left = f"({left})"
        if _prec(e.right) <= p:  # left associative
            right = f"({right})"
        return left + op + right
    raise TypeError(f"not a region expression: {e!r}")


# -- evaluation -------------------------------------------------------------------------


def evaluate(e: Expr) -> cz.CausalRegion:
    if isinstance(e, Cone):
        return cz.spatial_completion(list(e.intervals))
    if isinstance(e, Wedge):
        return cz.CausalRegion.right_wedge()
    if isinstance(e, Full):
        return cz.CausalRegion.full()
    if isinstance(e, Empty):
        return cz.CausalRegion.empty()
    if isinstance(e, Point):
        return cz.CausalRegion.point(e.x0, e.x1)
    if isinstance(e, Complement):
        return cz.causal_complement(evaluate(e.arg))
    if isinstance(e, Meet):
        return cz.region_meet(evaluate(e.left), evaluate(e.right))
    if isinstance(e, Join):
        return cz.region_join(evaluate(e.left), evaluate(e.right))
    if isinstance(e, Translate):
        return cz.translate(evaluate(e.arg), e.x0, e.x1)
    if isinstance(e, BoostBy):
        return cz.boost(evaluate(e.arg), e.t)
    raise TypeError(f"not a region expression: {e!r}")


def eval_region(text: str) -> cz.CausalRegion:
    return evaluate(parse_region(text))
