"""Abstract syntax for first-order formulas and function terms (with if-then-else)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from ..core import Schema, SchemaError


# --- terms -----------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class App:
    fun: str
    args: tuple["Term", ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Ite:
    cond: "Formula"
    then: "Term"
    other: "Term"


Term = Union[Var, Const, App, Ite]


# --- formulas -----------------------------------------------------------------


@dataclass(frozen=True)
class Bool:
    value: bool


@dataclass(frozen=True)
class Rel:
    name: str
    args: tuple[Term, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    args: tuple["Formula", ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Or:
    args: tuple["Formula", ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


Formula = Union[Bool, Rel, Eq, Not, And, Or, Implies, Exists, Forall]

TRUE = Bool(True)
FALSE = Bool(False)


# --- smart constructors -----------------------------------------------------------


def conj(*parts: Formula) -> Formula:
    flat: list[Formula] = []
    for p in parts:
        if isinstance(p, And):
            flat.extend(p.args)
        elif p == TRUE:
            continue
        elif p == FALSE:
            return FALSE
        else:
            flat.append(p)
    if not flat:
        return TRUE
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(*parts: Formula) -> Formula:
    flat: list[Formula] = []
    for p in parts:
        if isinstance(p, Or):
            flat.extend(p.args)
        elif p == FALSE:
            continue
        elif p == TRUE:
            return TRUE
        else:
            flat.append(p)
    if not flat:
        return FALSE
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def neq(a: Term, b: Term) -> Formula:
    return Not(Eq(a, b))


def exists(names: Iterable[str], body: Formula) -> Formula:
    for n in reversed(list(names)):
        body = Exists(n, body)
    return body


def forall(names: Iterable[str], body: Formula) -> Formula:
    for n in reversed(list(names)):
        body = Forall(n, body)
    return body


def sym_edge(rel: str, a: Term, b: Term) -> Formula:
    """``R{a,b}`` sugar: R(a,b) | R(b,a)."""
    return Or((Rel(rel, (a, b)), Rel(rel, (b, a))))


def distinct(terms: Iterable[Term]) -> Formula:
    terms = list(terms)
    return conj(*(neq(a, b) for i, a in enumerate(terms) for b in terms[i + 1 :]))


# --- syntactic queries ---------------------------------------------------------


def quantifier_free(f) -> bool:
    if isinstance(f, (Exists, Forall)):
        return False
    if isinstance(f, (Var, Const, Bool)):
        return True
    if isinstance(f, (App, Rel)):
        return all(quantifier_free(a) for a in f.args)
    if isinstance(f, Ite):
        return quantifier_free(f.cond) and quantifier_free(f.then) and quantifier_free(f.other)
    if isinstance(f, Eq):
        return quantifier_free(f.left) and quantifier_free(f.right)
    if isinstance(f, Not):
        return quantifier_free(f.body)
    if isinstance(f, (And, Or)):
        return all(quantifier_free(a) for a in f.args)
    if isinstance(f, Implies):
        return quantifier_free(f.left) and quantifier_free(f.right)
    raise TypeError(f"not a formula or term: {f!r}")


def free_vars(f) -> frozenset[str]:
    if isinstance(f, Var):
        return frozenset([f.name])
    if isinstance(f, (Const, Bool)):
        return frozenset()
    if isinstance(f, (App, Rel, And, Or)):
        return frozenset().union(*(free_vars(a) for a in f.args))
    if isinstance(f, Ite):
        return free_vars(f.cond) | free_vars(f.then) | free_vars(f.other)
    if isinstance(f, Eq):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, Implies):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (Exists, Forall)):
        return free_vars(f.body) - {f.var}
    raise TypeError(f"not a formula or term: {f!r}")


def depth(t: Term) -> int:
    """Nesting depth: variables and constants 0, applications 1 + max argument depth."""
    if isinstance(t, (Var, Const)):
        return 0
    if isinstance(t, App):
        return 1 + max((depth(a) for a in t.args), default=-1) if t.args else 0
    if isinstance(t, Ite):
        return max(depth(t.then), depth(t.other), formula_term_depth(t.cond))
    raise TypeError(f"not a term: {t!r}")


def formula_term_depth(f: Formula) -> int:
    """Maximum depth of any term occurring in ``f``."""
    if isinstance(f, Bool):
        return 0
    if isinstance(f, Rel):
        return max((depth(a) for a in f.args), default=0)
    if isinstance(f, Eq):
        return max(depth(f.left), depth(f.right))
    if isinstance(f, Not):
        return formula_term_depth(f.body)
    if isinstance(f, (And, Or)):
        return max((formula_term_depth(a) for a in f.args), default=0)
    if isinstance(f, Implies):
        return max(formula_term_depth(f.left), formula_term_depth(f.right))
    if isinstance(f, (Exists, Forall)):
        return formula_term_depth(f.body)
    raise TypeError(f"not a formula: {f!r}")


def symbols(f) -> set[str]:
    """Relation and function/constant names used in ``f``."""
    out: set[str] = set()

    def walk(g):
        if isinstance(g, Const):
            out.add(g.name)
        elif isinstance(g, (App, Rel)):
            out.add(g.fun if isinstance(g, App) else g.name)
            for a in g.args:
                walk(a)
        elif isinstance(g, Ite):
            walk(g.cond), walk(g.then), walk(g.other)
        elif isinstance(g, Eq):
            walk(g.left), walk(g.right)
        elif isinstance(g, Implies):
            walk(g.left), walk(g.right)
        elif isinstance(g, Not):
            walk(g.body)
        elif isinstance(g, (And, Or)):
            for a in g.args:
                walk(a)
        elif isinstance(g, (Exists, Forall)):
            walk(g.body)

    walk(f)
    return out


def check_well_formed(f, schema: Schema) -> None:
    """Raise SchemaError on unknown symbols or arity mismatches."""
    funs = schema.function_arities()

    def walk(g):
        if isinstance(g, Var) or isinstance(g, Bool):
            return
        if isinstance(g, Const):
            if g.name not in funs or funs[g.name] != 0:
                raise SchemaError(f"unknown constant {g.name}")
        elif isinstance(g, App):
            if funs.get(g.fun) != len(g.args):
                raise SchemaError(f"bad application {g.fun}/{len(g.args)}")
            for a in g.args:
                walk(a)
        elif isinstance(g, Rel):
            if schema.relations.get(g.name) != len(g.args):
                raise SchemaError(f"bad relation atom {g.name}/{len(g.args)}")
            for a in g.args:
                walk(a)
        elif isinstance(g, Ite):
            if not quantifier_free(g.cond):
                raise SchemaError("ite condition must be quantifier-free")
            walk(g.cond), walk(g.then), walk(g.other)
        elif isinstance(g, (Eq, Implies)):
            walk(g.left), walk(g.right)
        elif isinstance(g, Not):
            walk(g.body)
        elif isinstance(g, (And, Or)):
            for a in g.args:
                walk(a)
        elif isinstance(g, (Exists, Forall)):
            walk(g.body)
        else:
            raise TypeError(f"not a formula or term: {g!r}")

    walk(f)


def substitute(f, mapping: dict[str, Term]):
    """Capture-avoiding only for the simple case used here: bound names shadow the mapping."""
    if isinstance(f, Var):
        return mapping.get(f.name, f)
    if isinstance(f, (Const, Bool)):
        return f
    if isinstance(f, App):
        return App(f.fun, tuple(substitute(a, mapping) for a in f.args))
    if isinstance(f, Rel):
        return Rel(f.name, tuple(substitute(a, mapping) for a in f.args))
    if isinstance(f, Ite):
        return Ite(substitute(f.cond, mapping), substitute(f.then, mapping), substitute(f.other, mapping))
    if isinstance(f, Eq):
        return Eq(substitute(f.left, mapping), substitute(f.right, mapping))
    if isinstance(f, Implies):
        return Implies(substitute(f.left, mapping), substitute(f.right, mapping))
    if isinstance(f, Not):
        return Not(substitute(f.body, mapping))
    if isinstance(f, And):
        return And(tuple(substitute(a, mapping) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(substitute(a, mapping) for a in f.args))
    if isinstance(f, (Exists, Forall)):
        inner = {k: v for k, v in mapping.items() if k != f.var}
        return type(f)(f.var, substitute(f.body, inner))
    raise TypeError(f"not a formula or term: {f!r}")
