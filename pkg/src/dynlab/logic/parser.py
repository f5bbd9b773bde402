"""Text syntax for formulas and terms.

Grammar (also in docs/grammar.md)::

    formula  ::= quant | impl
    quant    ::= ("exists" | "forall") IDENT+ "." formula
    impl     ::= disj [ "->" formula ]
    disj     ::= conj { "|" conj }
    conj     ::= unary { "&" unary }
    unary    ::= "!" unary | quant | primary
    primary  ::= "true" | "false" | "(" formula ")"
               | IDENT "{" term "," term "}"
               | term ( "=" | "!=" ) term
               | IDENT [ "(" term { "," term } ")" ]
    term     ::= "ite" "(" formula "," term "," term ")"
               | IDENT "(" term { "," term } ")"
               | IDENT

A bare identifier in term position is a constant when it is listed in
``constants`` and a variable otherwise; in formula position it is a 0-ary
relation.  ``R{a,b}`` abbreviates ``R(a,b) | R(b,a)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..core import DynlabError
from .syntax import (
    App, And, Bool, Const, Eq, Exists, Forall, Formula, Implies, Ite, Not, Or, Rel, Term, Var,
    sym_edge,
)

KEYWORDS = {"exists", "forall", "true", "false", "ite"}
_TOKEN = re.compile(
    r"\s*(?:(?P<op>->|!=|[(){},.&|!=])|(?P<ident>[A-Za-z_#][A-Za-z0-9_#']*|[0-9]+))"
)


class ParseError(DynlabError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", *_line_col(text, pos))
        kind = "op" if m.group("op") else "ident"
        start = m.start(kind)
        toks.append(_Tok(kind, m.group(kind), start))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, text: str, constants):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.constants = frozenset(constants)

    # helpers
    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k=1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return ParseError(msg, *_line_col(self.text, tok.pos))

    def accept(self, text) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            raise self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")

    def ident(self) -> str:
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            raise self.error(f"expected identifier, found {t.text or 'end of input'!r}")
        self.i += 1
        return t.text

    def at_keyword(self, *words) -> bool:
        return self.tok.kind == "ident" and self.tok.text in words

    # grammar
    def formula(self) -> Formula:
        if self.at_keyword("exists", "forall"):
            return self.quant()
        left = self.disj()
        if self.accept("->"):
            return Implies(left, self.formula())
        return left

    def quant(self) -> Formula:
        q = self.tok.text
        self.i += 1
        names = [self.ident()]
        while self.tok.kind == "ident" and self.tok.text not in KEYWORDS:
            names.append(self.ident())
        self.expect(".")
        body = self.formula()
        cls = Exists if q == "exists" else Forall
        for n in reversed(names):
            body = cls(n, body)
        return body

    def disj(self) -> Formula:
        parts = [self.conj()]
        while self.accept("|"):
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conj(self) -> Formula:
        parts = [self.unary()]
        while self.accept("&"):
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self) -> Formula:
        if self.accept("!"):
            return Not(self.unary())
        if self.at_keyword("exists", "forall"):
            return self.quant()
        return self.primary()

    def primary(self) -> Formula:
        if self.at_keyword("true"):
            self.i += 1
            return Bool(True)
        if self.at_keyword("false"):
            self.i += 1
            return Bool(False)
        if self.accept("("):
            f = self.formula()
            self.expect(")")
            return f
        start = self.tok
        if start.kind == "ident" and self.peek().text == "{" and start.text not in KEYWORDS:
            name = self.ident()
            self.expect("{")
            a = self.term()
            self.expect(",")
            b = self.term()
            self.expect("}")
            return sym_edge(name, a, b)
        left = self.term(formula_position=True)
        if self.accept("="):
            return Eq(left, self.term())
        if self.accept("!="):
            return Not(Eq(left, self.term()))
        # relation atom
        if isinstance(left, Var):
            return Rel(left.name, ())
        if isinstance(left, Const):
            return Rel(left.name, ())
        if isinstance(left, App):
            return Rel(left.fun, left.args)
        raise self.error("expected a relation atom or an equation", start)

    def term(self, formula_position=False) -> Term:
        if self.at_keyword("ite"):
            self.i += 1
            self.expect("(")
            cond = self.formula()
            self.expect(",")
            a = self.term()
            self.expect(",")
            b = self.term()
            self.expect(")")
            return Ite(cond, a, b)
        name = self.ident()
        if self.accept("("):
            args = [self.term()]
            while self.accept(","):
                args.append(self.term())
            self.expect(")")
            return App(name, tuple(args))
        if name in self.constants:
            return Const(name)
        return Var(name)

    def done(self):
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")


def parse_formula(text: str, constants=()) -> Formula:
    p = _Parser(text, constants)
    f = p.formula()
    p.done()
    return f


def parse_term(text: str, constants=()) -> Term:
    p = _Parser(text, constants)
    t = p.term()
    p.done()
    return t


# --- printing ------------------------------------------------------------------------

_PREC = {Exists: 0, Forall: 0, Implies: 1, Or: 2, And: 3, Not: 4}


def format_term(t: Term) -> str:
    if isinstance(t, (Var, Const)):
        return t.name
    if isinstance(t, App):
        return f"{t.fun}({', '.join(format_term(a) for a in t.args)})"
    if isinstance(t, Ite):
        return f"ite({format_formula(t.cond)}, {format_term(t.then)}, {format_term(t.other)})"
    raise TypeError(f"not a term: {t!r}")


def format_formula(f: Formula) -> str:
    return _fmt(f)


def _wrap(child: Formula, parent_prec: int, allow_equal=False) -> str:
    prec = _PREC.get(type(child), 5)
    text = _fmt(child)
    if prec < parent_prec or (prec == parent_prec and not allow_equal):
        return f"({text})"
    return text


def _fmt(f: Formula) -> str:
    if isinstance(f, Bool):
        return "true" if f.value else "false"
    if isinstance(f, Rel):
        if not f.args:
            return f.name
        return f"{f.name}({', '.join(format_term(a) for a in f.args)})"
    if isinstance(f, Eq):
        return f"{format_term(f.left)} = {format_term(f.right)}"
    if isinstance(f, Not):
        if isinstance(f.body, Eq):
            return f"{format_term(f.body.left)} != {format_term(f.body.right)}"
        inner = _PREC.get(type(f.body), 5)
        text = _fmt(f.body)
        return f"!{text}" if inner > 4 else f"!({text})"
    if isinstance(f, And):
        return " & ".join(_wrap(a, 3) for a in f.args)
    if isinstance(f, Or):
        return " | ".join(_wrap(a, 2) for a in f.args)
    if isinstance(f, Implies):
        return f"{_wrap(f.left, 1)} -> {_wrap(f.right, 1, allow_equal=True) if not isinstance(f.right, (Exists, Forall)) else _fmt(f.right)}"
    if isinstance(f, (Exists, Forall)):
        kw = "exists" if isinstance(f, Exists) else "forall"
        names = [f.var]
        body = f.body
        while type(body) is type(f):
            names.append(body.var)
            body = body.body
        return f"{kw} {' '.join(names)}. {_fmt(body)}"
    raise TypeError(f"not a formula: {f!r}")
