"""Enumeration of ite-free terms up to a nesting depth."""

from __future__ import annotations

import itertools
from typing import Sequence

from ..core import Schema
from .syntax import App, Const, Term, Var


def enumerate_terms(schema: Schema, variables: Sequence[str], m: int) -> list[Term]:
    """All terms of depth <= m over ``variables``, constants and the schema's functions.

    Order: depth 0 (variables in the given order, then constants by name), then
    each further depth level, functions by name, argument tuples in the
    lexicographic order induced by the earlier list.
    """
    if m < 0:
        raise ValueError("depth must be non-negative")
    terms: list[Term] = [Var(v) for v in variables]
    terms += [Const(c) for c in sorted(schema.constants)]
    funs = sorted((f, ar) for f, ar in schema.functions.items() if ar > 0)
    zero_ary = sorted(f for f, ar in schema.functions.items() if ar == 0)
    terms += [App(f, ()) for f in zero_ary]
    frontier_start = 0
    for _ in range(m):
        previous = terms[:]
        fresh = set(previous[frontier_start:])
        level: list[Term] = []
        for f, ar in funs:
            for args in itertools.product(previous, repeat=ar):
                if any(a in fresh for a in args):
                    level.append(App(f, args))
        frontier_start = len(terms)
        terms += level
        if not level:
            break
    return terms
