"""Reference (tree-walking) semantics of terms and formulas over a Structure."""

from __future__ import annotations

from typing import Mapping

from ..core import DynlabError, Element, Structure
from .syntax import (
    And, App, Bool, Const, Eq, Exists, Forall, Formula, Implies, Ite, Not, Or, Rel, Term, Var,
    free_vars,
)


class EvaluationError(DynlabError):
    pass


Assignment = Mapping[str, Element]


def eval_term(s: Structure, t: Term, a: Assignment) -> Element:
    if isinstance(t, Var):
        try:
            return a[t.name]
        except KeyError:
            raise EvaluationError(f"unbound variable {t.name}") from None
    if isinstance(t, Const):
        if t.name not in s.functions:
            raise EvaluationError(f"unknown constant {t.name}")
        return s.constant(t.name)
    if isinstance(t, App):
        if t.fun not in s.functions:
            raise EvaluationError(f"unknown function {t.fun}")
        return s.apply(t.fun, [eval_term(s, x, a) for x in t.args])
    if isinstance(t, Ite):
        if eval_formula(s, t.cond, a):
            return eval_term(s, t.then, a)
        return eval_term(s, t.other, a)
    raise TypeError(f"not a term: {t!r}")


def eval_formula(s: Structure, f: Formula, a: Assignment) -> bool:
    if isinstance(f, Bool):
        return f.value
    if isinstance(f, Rel):
        if f.name not in s.relations:
            raise EvaluationError(f"unknown relation {f.name}")
        return tuple(eval_term(s, x, a) for x in f.args) in s.relations[f.name]
    if isinstance(f, Eq):
        return eval_term(s, f.left, a) == eval_term(s, f.right, a)
    if isinstance(f, Not):
        return not eval_formula(s, f.body, a)
    if isinstance(f, And):
        return all(eval_formula(s, g, a) for g in f.args)
    if isinstance(f, Or):
        return any(eval_formula(s, g, a) for g in f.args)
    if isinstance(f, Implies):
        return (not eval_formula(s, f.left, a)) or eval_formula(s, f.right, a)
    if isinstance(f, Exists):
        return any(eval_formula(s, f.body, {**a, f.var: e}) for e in s.domain)
    if isinstance(f, Forall):
        return all(eval_formula(s, f.body, {**a, f.var: e}) for e in s.domain)
    raise TypeError(f"not a formula: {f!r}")


def static_eval(s: Structure, sentence: Formula, *, compiled: bool = True) -> bool:
    """Evaluate a sentence from scratch.

    By default this goes through the generated-code backend; ``compiled=False``
    uses the tree-walking interpreter.
    """
    fv = free_vars(sentence)
    if fv:
        raise EvaluationError(f"sentence has free variables: {sorted(fv)}")
    if not compiled:
        return eval_formula(s, sentence, {})
    from .codegen import compile_formula

    return compile_formula(sentence, ())(s)


def query_relation(s: Structure, f: Formula, variables) -> frozenset:
    """All tuples over the domain (for ``variables``) satisfying ``f``."""
    from .codegen import compile_relation

    return compile_relation(f, (), tuple(variables))(s, ())
