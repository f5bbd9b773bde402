"""First-order formulas and DynQF terms: syntax, parsing, evaluation and compilation."""

from .codegen import compile_formula, compile_function, compile_relation, compile_term
from .evaluate import EvaluationError, eval_formula, eval_term, query_relation, static_eval
from .parser import ParseError, format_formula, format_term, parse_formula, parse_term
from .syntax import (
    FALSE, TRUE, And, App, Bool, Const, Eq, Exists, Forall, Formula, Implies, Ite, Not, Or, Rel,
    Term, Var, check_well_formed, conj, depth, disj, distinct, exists, forall, formula_term_depth,
    free_vars, neq, quantifier_free, substitute, sym_edge, symbols,
)
from .terms import enumerate_terms

__all__ = [name for name in dir() if not name.startswith("_")]
