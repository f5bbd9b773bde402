"""m-neighborhoods, m-similarity and the similar-tuple finder for unary functions."""

from __future__ import annotations

import itertools
from typing import Sequence

from ..core import AtomicType, DynlabError, Schema, Structure, atomic_type
from ..logic import Var, enumerate_terms, eval_term
from .combinatorics import ordered_tau_clique


def neighborhood(s: Structure, A, m: int) -> frozenset:
    """N^m(A): values of all function terms of depth <= m over A (level-wise closure)."""
    level = set(A) | {s.constant(c) for c in s.schema.constants}
    level |= {s.apply(f, ()) for f, ar in s.schema.functions.items() if ar == 0}
    funs = [(f, ar) for f, ar in sorted(s.schema.functions.items()) if ar > 0]
    for _ in range(m):
        new = set(level)
        for f, ar in funs:
            for args in itertools.product(sorted(level, key=s.position), repeat=ar):
                new.add(s.apply(f, args))
        if new == level:
            break
        level = new
    return frozenset(level)


def neighborhood_by_terms(s: Structure, A: Sequence, m: int) -> frozenset:
    """Same set via explicit term enumeration (reference implementation)."""
    A = list(A)
    names = [f"x{i}" for i in range(len(A))]
    out = set()
    for t in enumerate_terms(s.schema, names, m):
        out.add(eval_term(s, t, dict(zip(names, A))))
    return frozenset(out)


def _pairs(s: Structure, t: Structure, a: Sequence, b: Sequence, m: int) -> set | None:
    """{(u^S(ā), u^T(b̄)) | u term of depth <= m}, or None if the schemas differ."""
    if s.schema != t.schema or len(a) != len(b):
        return None
    level = set(zip(a, b))
    level |= {(s.constant(c), t.constant(c)) for c in s.schema.constants}
    level |= {(s.apply(f, ()), t.apply(f, ())) for f, ar in s.schema.functions.items() if ar == 0}
    funs = [(f, ar) for f, ar in sorted(s.schema.functions.items()) if ar > 0]
    for _ in range(m):
        new = set(level)
        ordered_level = sorted(level, key=lambda p: (s.position(p[0]), t.position(p[1])))
        for f, ar in funs:
            for args in itertools.product(ordered_level, repeat=ar):
                new.add((s.apply(f, [x for x, _ in args]), t.apply(f, [y for _, y in args])))
        if new == level:
            break
        level = new
    return level


def m_similar(s: Structure, t: Structure, a: Sequence, b: Sequence, m: int) -> dict | None:
    """The bijection π: N^m(ā) -> N^m(b̄) witnessing ā ≈_m b̄, or None.

    π is forced by π(u^S(ā)) = u^T(b̄) for every term u of depth <= m; it must
    be well defined, injective, and preserve all relations on N^m.
    """
    pairs = _pairs(s, t, a, b, m)
    if pairs is None:
        return None
    pi: dict = {}
    for x, y in pairs:
        if pi.setdefault(x, y) != y:
            return None
    if len(set(pi.values())) != len(pi):
        return None
    dom = sorted(pi, key=s.position)
    for r, ar in s.schema.relations.items():
        rs, rt = s.relations[r], t.relations[r]
        for tup in itertools.product(dom, repeat=ar):
            if (tup in rs) != (tuple(pi[e] for e in tup) in rt):
                return None
    return pi


def is_m_similarity(s, t, a, b, m, pi) -> bool:
    """Check a proposed π against the three defining conditions directly via terms."""
    names = [f"x{i}" for i in range(len(a))]
    terms = enumerate_terms(s.schema, names, m)
    env_s, env_t = dict(zip(names, a)), dict(zip(names, b))
    nm_s = set()
    for u in terms:
        vs, vt = eval_term(s, u, env_s), eval_term(t, u, env_t)
        if pi.get(vs) != vt:
            return False
        nm_s.add(vs)
    if set(pi) != nm_s or len(set(pi.values())) != len(pi):
        return False
    dom = sorted(nm_s, key=s.position)
    for r, ar in s.schema.relations.items():
        for tup in itertools.product(dom, repeat=ar):
            if (tup in s.relations[r]) != (tuple(pi[e] for e in tup) in t.relations[r]):
                return False
    return True


def neighborhood_vector(s: Structure, a: Sequence, m: int) -> tuple:
    """(ā, t_1(ā), ..., t_l(ā)) over the canonical enumeration of depth-<=m terms."""
    names = [f"x{i}" for i in range(len(a))]
    env = dict(zip(names, a))
    return tuple(eval_term(s, u, env) for u in enumerate_terms(s.schema, names, m) if not _is_leaf(u, names))


def _is_leaf(u, names) -> bool:
    return isinstance(u, Var) and u.name in names


def similarity_type(s: Structure, a: Sequence, m: int) -> AtomicType:
    vec = tuple(a) + neighborhood_vector(s, a, m)
    return atomic_type(s, vec)


def similarity_structure(s: Structure, order: Sequence, m: int, k: int) -> Structure:
    """Relational structure with one k-ary relation R_γ per similarity type γ of ordered k-tuples."""
    by_type: dict[AtomicType, list] = {}
    for tup in itertools.combinations(order, k):
        by_type.setdefault(similarity_type(s, tup, m), []).append(tup)
    names = {g: f"R{i}" for i, g in enumerate(sorted(by_type))}
    schema = Schema({names[g]: k for g in by_type})
    return Structure(tuple(order), schema, {names[g]: ts for g, ts in by_type.items()}, check=False)


def find_similar_tuples(s: Structure, order: Sequence | None = None, m: int = 1,
                        target: int | None = None, k: int = 1) -> tuple | None:
    """A subset whose ≺-ordered k-tuples are pairwise m-similar (verified), or None."""
    if any(ar > 1 for ar in s.schema.functions.values()):
        raise DynlabError("find_similar_tuples needs functions of arity at most 1")
    order = tuple(s.domain if order is None else order)
    derived = similarity_structure(s, order, m, k)
    out = ordered_tau_clique(derived, order, target, k=k)
    if out is None:
        return None
    tuples = list(itertools.combinations(out, k))
    for x in tuples:
        for y in tuples:
            if m_similar(s, s, x, y, m) is None:
                raise AssertionError(f"{x} and {y} share a similarity type but are not {m}-similar")
    return out
