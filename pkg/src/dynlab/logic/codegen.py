"""Compile formulas and terms to Python closures.

The generated code is semantically identical to :mod:`dynlab.logic.evaluate`
(property-tested against it) and is what the engine uses for update rules.
"""

from __future__ import annotations

import functools
from typing import Callable

from ..core import Structure
from .evaluate import EvaluationError
from .syntax import (
    And, App, Bool, Const, Eq, Exists, Forall, Formula, Implies, Ite, Not, Or, Rel, Term, Var,
    free_vars,
)


class _Gen:
    def __init__(self):
        self.rels: dict[str, str] = {}
        self.funs: dict[str, str] = {}
        self.consts: dict[str, str] = {}
        self.vars: dict[str, str] = {}
        self.bound = 0

    def var(self, name: str) -> str:
        if name not in self.vars:
            self.vars[name] = f"v{len(self.vars)}"
        return self.vars[name]

    def rel(self, name: str) -> str:
        return self.rels.setdefault(name, f"R{len(self.rels)}")

    def fun(self, name: str) -> str:
        return self.funs.setdefault(name, f"F{len(self.funs)}")

    def const(self, name: str) -> str:
        return self.consts.setdefault(name, f"C{len(self.consts)}")

    def term(self, t: Term) -> str:
        if isinstance(t, Var):
            return self.var(t.name)
        if isinstance(t, Const):
            return self.const(t.name)
        if isinstance(t, App):
            if not t.args:
                return self.const(t.fun)
            f = self.fun(t.fun)
            return f"{f}.get({self.tup(t.args)}, D{f[1:]})"
        if isinstance(t, Ite):
            return f"({self.term(t.then)} if {self.formula(t.cond)} else {self.term(t.other)})"
        raise TypeError(f"not a term: {t!r}")

    def tup(self, args) -> str:
        if not args:
            return "()"
        return "(" + ", ".join(self.term(a) for a in args) + ",)"

    def formula(self, f: Formula) -> str:
        if isinstance(f, Bool):
            return "True" if f.value else "False"
        if isinstance(f, Rel):
            return f"({self.tup(f.args)} in {self.rel(f.name)})"
        if isinstance(f, Eq):
            return f"({self.term(f.left)} == {self.term(f.right)})"
        if isinstance(f, Not):
            return f"(not {self.formula(f.body)})"
        if isinstance(f, And):
            return "(" + " and ".join(self.formula(g) for g in f.args) + ")" if f.args else "True"
        if isinstance(f, Or):
            return "(" + " or ".join(self.formula(g) for g in f.args) + ")" if f.args else "False"
        if isinstance(f, Implies):
            return f"((not {self.formula(f.left)}) or {self.formula(f.right)})"
        if isinstance(f, (Exists, Forall)):
            saved = self.vars.get(f.var)
            v = f"q{self.bound}"
            self.bound += 1
            self.vars[f.var] = v
            body = self.formula(f.body)
            if saved is None:
                del self.vars[f.var]
            else:
                self.vars[f.var] = saved
            op = "any" if isinstance(f, Exists) else "all"
            return f"{op}({body} for {v} in _dom)"
        raise TypeError(f"not a formula: {f!r}")

    def prelude(self) -> list[str]:
        lines = ["_rels = _s.relations", "_funs = _s.functions", "_dom = _s.domain"]
        for name, ident in self.rels.items():
            lines.append(f"{ident} = _rel(_rels, {name!r})")
        for name, ident in self.funs.items():
            lines.append(f"{ident}, D{ident[1:]} = _fun(_funs, {name!r})")
        for name, ident in self.consts.items():
            lines.append(f"{ident} = _const(_funs, {name!r})")
        return lines


def _rel(rels, name):
    try:
        return rels[name]
    except KeyError:
        raise EvaluationError(f"unknown relation {name}") from None


def _fun(funs, name):
    try:
        f = funs[name]
    except KeyError:
        raise EvaluationError(f"unknown function {name}") from None
    return f.table, f.default


def _const(funs, name):
    table, default = _fun(funs, name)
    return table.get((), default)


def _build(src: str, name: str) -> Callable:
    env = {"_rel": _rel, "_fun": _fun, "_const": _const}
    exec(compile(src, f"<dynlab:{name}>", "exec"), env)
    fn = env[name]
    fn.__source__ = src
    return fn


def _check_bound(obj, bound) -> None:
    missing = free_vars(obj) - set(bound)
    if missing:
        raise EvaluationError(f"unbound variables {sorted(missing)}")


def _params(gen: _Gen, params) -> str:
    idents = [gen.var(p) for p in params]
    if len(set(params)) != len(params):
        raise EvaluationError(f"duplicate parameter names {params}")
    return ", ".join(idents)


@functools.lru_cache(maxsize=4096)
def compile_formula(f: Formula, params: tuple[str, ...]) -> Callable[..., bool]:
    """``fn(structure, *values) -> bool``."""
    _check_bound(f, params)
    g = _Gen()
    sig = _params(g, params)
    body = g.formula(f)
    lines = [f"def _fn(_s{', ' if sig else ''}{sig}):"]
    lines += ["    " + ln for ln in g.prelude()]
    lines.append(f"    return {body}")
    return _build("\n".join(lines), "_fn")


@functools.lru_cache(maxsize=4096)
def compile_term(t: Term, params: tuple[str, ...]) -> Callable:
    _check_bound(t, params)
    g = _Gen()
    sig = _params(g, params)
    body = g.term(t)
    lines = [f"def _fn(_s{', ' if sig else ''}{sig}):"]
    lines += ["    " + ln for ln in g.prelude()]
    lines.append(f"    return {body}")
    return _build("\n".join(lines), "_fn")


def _unpack(sig: str, n: int) -> str:
    if n == 0:
        return "    pass"
    if n == 1:
        return f"    {sig}, = _p"
    return f"    {sig} = _p"


@functools.lru_cache(maxsize=4096)
def compile_relation(
    f: Formula, params: tuple[str, ...], tuple_vars: tuple[str, ...]
) -> Callable[[Structure, tuple], frozenset]:
    """``fn(structure, param_values) -> frozenset`` of all ``tuple_vars`` tuples satisfying ``f``."""
    _check_bound(f, params + tuple_vars)
    if set(params) & set(tuple_vars):
        raise EvaluationError("parameter and tuple variables must be distinct")
    g = _Gen()
    sig = _params(g, params)
    tv = [g.var(v) for v in tuple_vars]
    body = g.formula(f)
    lines = ["def _fn(_s, _p):", _unpack(sig, len(params))]
    lines += ["    " + ln for ln in g.prelude()]
    if not tv:
        lines.append(f"    return _ONE if {body} else _EMPTY")
    else:
        loops = " ".join(f"for {v} in _dom" for v in tv)
        lines.append(f"    return frozenset(({', '.join(tv)},) {loops} if {body})")
    src = "\n".join(lines)
    env = {"_rel": _rel, "_fun": _fun, "_const": _const, "_ONE": frozenset([()]), "_EMPTY": frozenset()}
    exec(compile(src, "<dynlab:relation>", "exec"), env)
    fn = env["_fn"]
    fn.__source__ = src
    return fn


@functools.lru_cache(maxsize=4096)
def compile_function(
    t: Term, params: tuple[str, ...], tuple_vars: tuple[str, ...]
) -> Callable[[Structure, tuple], dict]:
    """``fn(structure, param_values) -> {point: value}`` over all points of the domain."""
    _check_bound(t, params + tuple_vars)
    if set(params) & set(tuple_vars):
        raise EvaluationError("parameter and tuple variables must be distinct")
    g = _Gen()
    sig = _params(g, params)
    tv = [g.var(v) for v in tuple_vars]
    body = g.term(t)
    lines = ["def _fn(_s, _p):", _unpack(sig, len(params))]
    lines += ["    " + ln for ln in g.prelude()]
    if not tv:
        lines.append(f"    return {{(): {body}}}")
    else:
        loops = " ".join(f"for {v} in _dom" for v in tv)
        lines.append(f"    return {{({', '.join(tv)},): {body} {loops}}}")
    return _build("\n".join(lines), "_fn")
