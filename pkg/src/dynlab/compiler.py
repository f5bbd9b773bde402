"""Insertion-only DynProp programs for semi-positive existential graph sentences.

Pipeline: sentence -> union of conjunctive queries with inequalities ->
one all-distinct query per equality type -> subgraph pattern H -> program
with one auxiliary relation R_Y per proper subset Y of H's nodes.

R_Y holds the duplicate-free tuples a (indexed like Y, in node order) that
extend to H_(Y,Z): H without the edges inside Y, with the remaining nodes Z
mapped injectively to fresh elements.  After inserting (u,v) a tuple enters
R_Y when it was there before, or when some nonempty W ⊆ Z of at most two
nodes can be sent to u and/or v such that (a, σ(W)) was already in
R_{Y∪W} and every edge of H inside Y∪W touching W is present once (u,v)
is added.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import DynlabError, Schema, Structure
from .engine import DynamicProgram, Initializer, Rule
from .logic import (
    FALSE, TRUE, And, Bool, Const, Eq, Exists, Forall, Formula, Implies, Not, Or, Rel, Term, Var,
    conj, disj, distinct, exists, format_formula, neq,
)

GRAPH = Schema({"E": 2})


class UnsupportedFormula(DynlabError):
    pass


@dataclass(frozen=True)
class CQ:
    """∃ variables . edges ∧ equalities ∧ inequalities; terms are Var or Const."""

    variables: tuple[str, ...]
    edges: frozenset[tuple[Term, Term]] = frozenset()
    eqs: frozenset[tuple[Term, Term]] = frozenset()
    neqs: frozenset[tuple[Term, Term]] = frozenset()

    def formula(self) -> Formula:
        atoms = [Rel("E", e) for e in sorted(self.edges, key=_term_key)]
        atoms += [Eq(a, b) for a, b in sorted(self.eqs, key=_term_key)]
        atoms += [neq(a, b) for a, b in sorted(self.neqs, key=_term_key)]
        return exists(self.variables, conj(*atoms))


def _term_key(pair):
    return tuple((type(t).__name__, t.name) for t in pair)


@dataclass(frozen=True)
class SubgraphPattern:
    nodes: tuple[str, ...]
    edges: frozenset[tuple[str, str]]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", frozenset(tuple(e) for e in self.edges))
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("pattern nodes must be distinct")
        if any(a not in self.nodes or b not in self.nodes for a, b in self.edges):
            raise ValueError("pattern edges must join listed nodes")

    def __len__(self):
        return len(self.nodes)

    def sorted_edges(self) -> list[tuple[str, str]]:
        pos = {x: i for i, x in enumerate(self.nodes)}
        return sorted(self.edges, key=lambda e: (pos[e[0]], pos[e[1]]))

    def sentence(self) -> Formula:
        body = conj(distinct([Var(x) for x in self.nodes]), *(Rel("E", (Var(a), Var(b))) for a, b in self.sorted_edges()))
        return exists(self.nodes, body)

    def canonical(self) -> tuple:
        """Isomorphism-invariant key (minimum edge list over all relabelings)."""
        k = len(self.nodes)
        best = None
        for perm in itertools.permutations(range(k)):
            pos = {x: perm[i] for i, x in enumerate(self.nodes)}
            key = tuple(sorted((pos[a], pos[b]) for a, b in self.edges))
            if best is None or key < best:
                best = key
        return (k, best)


@dataclass(frozen=True)
class Partition:
    y: tuple[str, ...]
    z: tuple[str, ...]


def partitions(h: SubgraphPattern) -> list[Partition]:
    """All partitions with |z| >= 1, y and z in node order, by increasing |y|."""
    out = []
    for r in range(len(h.nodes)):
        for ys in itertools.combinations(h.nodes, r):
            out.append(Partition(ys, tuple(x for x in h.nodes if x not in ys)))
    return out


# --- normalization -----------------------------------------------------------------


def _rename_apart(f: Formula, used: set, mapping: dict) -> Formula:
    if isinstance(f, Exists):
        name = f.var
        while name in used:
            name = name + "'"
        used.add(name)
        return Exists(name, _rename_apart(f.body, used, {**mapping, f.var: name}))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(_rename_apart(g, used, mapping) for g in f.args))
    if isinstance(f, Not):
        return Not(_rename_apart(f.body, used, mapping))
    if isinstance(f, Rel):
        return Rel(f.name, tuple(_rn(t, mapping) for t in f.args))
    if isinstance(f, Eq):
        return Eq(_rn(f.left, mapping), _rn(f.right, mapping))
    if isinstance(f, Bool):
        return f
    if isinstance(f, Forall):
        raise UnsupportedFormula("universal quantifiers are not semi-positive existential")
    if isinstance(f, Implies):
        raise UnsupportedFormula("implications are not semi-positive existential")
    raise UnsupportedFormula(f"unsupported construct {type(f).__name__}")


def _rn(t: Term, mapping: dict) -> Term:
    if isinstance(t, Var):
        if t.name not in mapping:
            raise UnsupportedFormula(f"free variable {t.name}: only sentences are supported")
        return Var(mapping[t.name])
    if isinstance(t, Const):
        return t
    raise UnsupportedFormula("function terms are not allowed")


def _dnf(f: Formula) -> list[list[tuple]]:
    """Disjunction of conjunctions of literals ("E", a, b) / ("=", a, b) / ("!=", a, b)."""
    if isinstance(f, Exists):
        return _dnf(f.body)
    if isinstance(f, Bool):
        return [[]] if f.value else []
    if isinstance(f, Rel):
        if f.name != "E" or len(f.args) != 2:
            raise UnsupportedFormula(f"only the binary edge relation E is supported, got {f.name}")
        return [[("E", *f.args)]]
    if isinstance(f, Eq):
        return [[("=", f.left, f.right)]]
    if isinstance(f, Not):
        if isinstance(f.body, Eq):
            return [[("!=", f.body.left, f.body.right)]]
        raise UnsupportedFormula("negation is only allowed on equalities")
    if isinstance(f, Or):
        return [c for g in f.args for c in _dnf(g)]
    if isinstance(f, And):
        out = [[]]
        for g in f.args:
            out = [a + b for a in out for b in _dnf(g)]
        return out
    raise UnsupportedFormula(f"unsupported construct {type(f).__name__}")


def to_ucq_neq(sentence: Formula) -> list[CQ]:
    """Equivalent (over nonempty domains) list of conjunctive queries with inequalities."""
    f = _rename_apart(sentence, set(), {})
    order = []

    def collect(g):
        if isinstance(g, Exists):
            order.append(g.var)
            collect(g.body)
        elif isinstance(g, (And, Or)):
            for a in g.args:
                collect(a)
        elif isinstance(g, Not):
            collect(g.body)

    collect(f)
    out: list[CQ] = []
    for lits in _dnf(f):
        used = {t.name for lit in lits for t in lit[1:] if isinstance(t, Var)}
        cq = CQ(
            tuple(v for v in order if v in used),
            frozenset((a, b) for k, a, b in lits if k == "E"),
            frozenset((a, b) for k, a, b in lits if k == "="),
            frozenset((a, b) for k, a, b in lits if k == "!="),
        )
        if cq not in out:
            out.append(cq)
    return out


def set_partitions(items: Sequence) -> Iterable[list[list]]:
    """All set partitions, blocks ordered by first element (restricted growth strings)."""
    items = list(items)
    if not items:
        yield []
        return

    def rec(i, blocks):
        if i == len(items):
            yield [list(b) for b in blocks]
            return
        for b in blocks:
            b.append(items[i])
            yield from rec(i + 1, blocks)
            b.pop()
        blocks.append([items[i]])
        yield from rec(i + 1, blocks)
        blocks.pop()

    yield from rec(0, [])


def expand_equality_types(cq: CQ) -> list[CQ]:
    """One all-distinct CQ per equality type of the variables consistent with cq."""
    out = []
    for blocks in set_partitions(cq.variables):
        rep = {v: Var(b[0]) for b in blocks for v in b}

        def m(t):
            return rep[t.name] if isinstance(t, Var) else t

        if any(m(a) == m(b) for a, b in cq.neqs):
            continue
        eqs = {(m(a), m(b)) for a, b in cq.eqs if m(a) != m(b)}
        if any(isinstance(a, Var) and isinstance(b, Var) for a, b in eqs):
            continue
        reps = tuple(b[0] for b in blocks)
        neqs = {(m(a), m(b)) for a, b in cq.neqs}
        neqs |= {(Var(a), Var(b)) for a, b in itertools.combinations(reps, 2)}
        out.append(CQ(reps, frozenset((m(a), m(b)) for a, b in cq.edges), frozenset(eqs), frozenset(neqs)))
    return out


def pattern_of(cq: CQ) -> SubgraphPattern:
    terms = [t for e in cq.edges | cq.eqs | cq.neqs for t in e]
    if any(isinstance(t, Const) for t in terms):
        raise UnsupportedFormula("constants are not supported by the pattern compiler")
    if cq.eqs:
        raise UnsupportedFormula("expected an all-distinct conjunctive query")
    return SubgraphPattern(cq.variables, frozenset((a.name, b.name) for a, b in cq.edges))


def patterns_of(sentence: Formula, dedupe: bool = True) -> list[SubgraphPattern]:
    out: list[SubgraphPattern] = []
    seen = set()
    for cq in to_ucq_neq(sentence):
        for d in expand_equality_types(cq):
            h = pattern_of(d)
            key = h.canonical() if dedupe else h
            if key not in seen:
                seen.add(key)
                out.append(h)
    return out


# --- extension semantics (brute force) ----------------------------------------------


def extends_to(g: Structure, a: Sequence, h: SubgraphPattern, part: Partition) -> bool:
    """Can ``a`` (for part.y) be extended by fresh distinct elements to H_(y,z) in g?"""
    a = tuple(a)
    if len(a) != len(part.y):
        raise ValueError("tuple length must equal |y|")
    ys = set(part.y)
    edges = [(p, q) for p, q in h.edges if not (p in ys and q in ys)]
    E = g.relations["E"]
    rest = [e for e in g.domain if e not in a]
    for b in itertools.permutations(rest, len(part.z)):
        img = dict(zip(part.y, a))
        img.update(zip(part.z, b))
        if all((img[p], img[q]) in E for p, q in edges):
            return True
    return False


def extension_relation(g: Structure, h: SubgraphPattern, part: Partition) -> frozenset:
    return frozenset(
        a for a in itertools.permutations(g.domain, len(part.y)) if extends_to(g, a, h, part)
    )


# --- code generation -----------------------------------------------------------------


def relation_name(part_y: Sequence[str], prefix: str = "") -> str:
    return prefix + ("R_" + "_".join(part_y) if part_y else "R0")


def _fresh(base: str, taken: set) -> str:
    name = base
    while name in taken:
        name += "'"
    return name


def _edge_new(s: Term, t: Term, u: Var, v: Var) -> Formula:
    """E(s,t) in the graph after inserting (u,v)."""
    if s == u and t == v:
        return TRUE
    if s == u:
        return disj(Rel("E", (s, t)), Eq(t, v))
    if t == v:
        return disj(Rel("E", (s, t)), Eq(s, u))
    return disj(Rel("E", (s, t)), conj(Eq(s, u), Eq(t, v)))


def update_formula(h: SubgraphPattern, part: Partition, u: str, v: str, prefix: str = "") -> Formula:
    """φ^{R_y}_{ins E}(u,v; y)."""
    U, V = Var(u), Var(v)
    ys = list(part.y)
    cases = []
    for r in (1, 2):
        for W in itertools.combinations(part.z, r):
            touching = [(p, q) for p, q in h.edges if (p in W or q in W) and p in ys + list(W) and q in ys + list(W)]
            if not touching:
                continue
            for images in itertools.permutations((U, V), r):
                sigma = dict(zip(W, images))
                img = {y: Var(y) for y in ys}
                img.update(sigma)
                parts: list[Formula] = []
                bigger = tuple(x for x in h.nodes if x in img)
                if len(bigger) < len(h.nodes):
                    parts.append(Rel(relation_name(bigger, prefix), tuple(img[x] for x in bigger)))
                parts += [neq(t, Var(y)) for t in images for y in ys]
                if r == 2:
                    parts.append(neq(U, V))
                for p, q in sorted(touching, key=lambda e: (h.nodes.index(e[0]), h.nodes.index(e[1]))):
                    parts.append(_edge_new(img[p], img[q], U, V))
                cases.append(conj(*parts))
    old = Rel(relation_name(part.y, prefix), tuple(Var(y) for y in ys))
    return conj(distinct([Var(y) for y in ys]), disj(old, *cases))


def initial_definition(h: SubgraphPattern, part: Partition) -> Formula:
    ys = set(part.y)
    edges = [Rel("E", (Var(p), Var(q))) for p, q in h.sorted_edges() if not (p in ys and q in ys)]
    return conj(
        distinct([Var(y) for y in part.y]),
        exists(part.z, conj(distinct([Var(x) for x in h.nodes]), *edges)),
    )


def _mod_vars(nodes: Iterable[str]) -> tuple[str, str]:
    taken = set(nodes)
    u = _fresh("u", taken)
    return u, _fresh("v", taken | {u})


def _pattern_rules(h: SubgraphPattern, prefix: str, u: str, v: str):
    rels, rules, defs = {}, [], {}
    for part in partitions(h):
        name = relation_name(part.y, prefix)
        rels[name] = len(part.y)
        rules.append(Rule(name, "ins", "E", (u, v), part.y, update_formula(h, part, u, v, prefix)))
        defs[name] = [list(part.y), format_formula(initial_definition(h, part))]
    return rels, rules, defs


def compile_pattern(h: SubgraphPattern, prefix: str = "") -> DynamicProgram:
    """Insertion-only program whose query (the R for y = ()) says "H is a subgraph"."""
    if len(h) == 0:
        q = prefix + "R0"
        return DynamicProgram(
            f"pattern-{prefix or 'H'}-empty",
            GRAPH,
            Schema({q: 0}),
            [Rule(q, "ins", "E", ("u", "v"), (), TRUE)],
            Initializer("static-bruteforce", {"definitions": {q: [[], "true"]}}),
            q,
            {("ins", "E")},
        )
    u, v = _mod_vars(h.nodes)
    rels, rules, defs = _pattern_rules(h, prefix, u, v)
    return DynamicProgram(
        f"pattern{len(h)}",
        GRAPH,
        Schema(rels),
        rules,
        Initializer("static-bruteforce", {"definitions": defs}),
        relation_name((), prefix),
        {("ins", "E")},
    )


def compile_semipositive(sentence: Formula, *, name: str = "compiled", free=()) -> DynamicProgram:
    """Combine the pattern programs of all equality-type disjuncts with a fresh query Q."""
    if free:
        raise UnsupportedFormula("non-boolean queries are not supported")
    hs = patterns_of(sentence)
    nodes = {x for h in hs for x in h.nodes}
    u, v = _mod_vars(nodes)
    rels: dict[str, int] = {}
    rules: list[Rule] = []
    defs: dict = {}
    q_rule_parts, q_defs = [], []
    for i, h in enumerate(hs, 1):
        prefix = f"H{i}_"
        if len(h) == 0:
            q_rule_parts.append(TRUE)
            q_defs.append("true")
            continue
        r, ru, d = _pattern_rules(h, prefix, u, v)
        rels.update(r)
        rules += ru
        defs.update(d)
        q0 = relation_name((), prefix)
        q_rule_parts.append(next(x.body for x in ru if x.symbol == q0))
        q_defs.append(f"({d[q0][1]})")
    q = _fresh("Q", set(rels))
    rels[q] = 0
    rules.append(Rule(q, "ins", "E", (u, v), (), disj(*q_rule_parts)))
    defs[q] = [[], " | ".join(q_defs) if q_defs else "false"]
    return DynamicProgram(
        name, GRAPH, Schema(rels), rules, Initializer("static-bruteforce", {"definitions": defs}), q,
        {("ins", "E")},
    )


def clique_sentence(k: int) -> Formula:
    xs = [Var(f"x{i}") for i in range(1, k + 1)]
    edges = [disj(Rel("E", (a, b)), Rel("E", (b, a))) for a, b in itertools.combinations(xs, 2)]
    return exists([x.name for x in xs], conj(distinct(xs), *edges))
