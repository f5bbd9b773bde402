"""Executable checks of the two Substructure Lemmas on concrete instances.

The DynProp version: if S|A and T|B are isomorphic via π, then after
π-respecting modification sequences the restrictions are still isomorphic
via π (and a boolean query agrees).  The DynQF version replaces isomorphism
by m-similarity before and 0-similarity after.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from ..core import (
    DynlabError, FunctionTable, Modification, Schema, Structure, induced_substructure, is_isomorphism,
)
from ..engine import DynamicProgram, Initializer, ProgramState, Rule, run, step
from ..logic import App, Const, Eq, Formula, Ite, Not, Rel, Term, Var, conj, disj
from .similarity import m_similar


@dataclass
class Verdict:
    holds: bool
    status: str
    witness: dict = field(default_factory=dict)


def respects(alpha: Sequence[Modification], beta: Sequence[Modification], pi: dict) -> bool:
    if len(alpha) != len(beta):
        return False
    for a, b in zip(alpha, beta):
        if a.kind != b.kind or a.relation != b.relation:
            return False
        if any(e not in pi for e in a.tuple) or tuple(pi[e] for e in a.tuple) != b.tuple:
            return False
    return True


Runner = Callable[[DynamicProgram, ProgramState, Sequence[Modification]], ProgramState]


def check_substructure_lemma(
    p: DynamicProgram, S: ProgramState, T: ProgramState, A, B, pi: dict, alpha, beta,
    runner: Runner = run,
) -> Verdict:
    if p.logic != "DynProp":
        raise DynlabError("the relational substructure lemma applies to DynProp programs")
    A, B = list(A), list(B)
    sa, tb = induced_substructure(S.structure, A), induced_substructure(T.structure, B)
    if set(pi) != set(A) or not is_isomorphism(sa, tb, pi):
        raise DynlabError("precondition: S|A and T|B must be isomorphic via pi")
    if not respects(alpha, beta, pi):
        raise DynlabError("precondition: alpha and beta must respect pi")
    S2, T2 = runner(p, S, alpha), runner(p, T, beta)
    sa2, tb2 = induced_substructure(S2.structure, A), induced_substructure(T2.structure, B)
    if not is_isomorphism(sa2, tb2, pi):
        diff = _first_difference(sa2, tb2, pi)
        return Verdict(False, "violated: restrictions not isomorphic via pi", diff)
    if p.aux_schema.relations[p.query] == 0 and S2.query_answer() != T2.query_answer():
        return Verdict(False, "violated: boolean queries differ",
                       {"S": S2.query_answer(), "T": T2.query_answer()})
    return Verdict(True, "holds")


def _first_difference(a: Structure, b: Structure, pi: dict) -> dict:
    for r, rel in a.relations.items():
        mapped = {tuple(pi[e] for e in t) for t in rel}
        if mapped != b.relations[r]:
            extra = sorted(mapped ^ b.relations[r], key=repr)
            return {"relation": r, "tuples": [list(t) for t in extra[:5]]}
    return {}


# --- random instances ----------------------------------------------------------------


def _random_formula(rng, atoms, d) -> Formula:
    if d == 0 or rng.random() < 0.25:
        a = rng.choice(atoms)
        return Not(a) if rng.random() < 0.4 else a
    op = rng.random()
    if op < 0.15:
        return Not(_random_formula(rng, atoms, d - 1))
    parts = [_random_formula(rng, atoms, d - 1) for _ in range(2)]
    return conj(*parts) if op < 0.6 else disj(*parts)


def random_dynprop_program(seed, input_schema: Schema | None = None) -> DynamicProgram:
    """Pseudorandom DynProp program: a few aux relations (arity <= 2) and a 0-ary Q."""
    rng = random.Random(f"dynprop:{seed}")
    input_schema = input_schema or Schema({"E": 2})
    aux = {"Q": 0}
    for i in range(rng.randint(1, 3)):
        aux[f"R{i}"] = rng.choice((1, 2, 2))
    supported = [(k, r) for r in input_schema.relations for k in ("ins", "del")]
    rules = []
    for kind, rel in supported:
        mod = tuple(f"u{i}" for i in range(input_schema.relations[rel]))
        for sym, ar in sorted(aux.items()):
            ys = tuple(f"y{i}" for i in range(ar))
            here = [Var(x) for x in mod + ys]
            atoms: list[Formula] = []
            for r, rar in {**input_schema.relations, **aux}.items():
                atoms += [Rel(r, t) for t in itertools.product(here, repeat=rar)] if here or rar == 0 else []
            atoms += [Eq(a, b) for a, b in itertools.combinations(here, 2)]
            rules.append(Rule(sym, kind, rel, mod, ys, _random_formula(rng, atoms, 3)))
    return DynamicProgram(f"random-dynprop-{seed}", input_schema, Schema(aux), rules,
                          Initializer("random", {"seed": seed}), "Q", supported)


def _random_relations(rng, schema: Schema, domain, density=0.35) -> dict:
    return {
        r: {t for t in itertools.product(domain, repeat=ar) if rng.random() < density}
        for r, ar in schema.relations.items()
    }


@dataclass
class Trial:
    program: DynamicProgram
    S: ProgramState
    T: ProgramState
    A: list
    B: list
    pi: dict
    alpha: list
    beta: list


def random_lemma_trial(seed) -> Trial:
    """Program, two states, and a π-copy of S|A planted in T, plus respecting sequences."""
    rng = random.Random(f"lemma51:{seed}")
    p = random_dynprop_program(seed)
    schema = p.schema
    S_dom = [f"s{i}" for i in range(rng.randint(3, 6))]
    T_dom = [f"t{i}" for i in range(rng.randint(3, 6))]
    size = rng.randint(1, min(len(S_dom), len(T_dom), 3))
    A = rng.sample(S_dom, size)
    B = rng.sample(T_dom, size)
    pi = dict(zip(A, B))
    S_rels = _random_relations(rng, schema, S_dom)
    T_rels = _random_relations(rng, schema, T_dom)
    # overwrite T on B with the π-image of S on A
    for r, ar in schema.relations.items():
        T_rels[r] = {t for t in T_rels[r] if not all(e in B for e in t)}
        T_rels[r] |= {tuple(pi[e] for e in t) for t in S_rels[r] if all(e in A for e in t)}
    S = ProgramState(p, Structure(S_dom, schema, S_rels))
    T = ProgramState(p, Structure(T_dom, schema, T_rels))
    alpha = []
    for _ in range(rng.randint(0, 6)):
        kind, rel = sorted(p.supported)[rng.randrange(len(p.supported))]
        alpha.append(Modification(kind, rel, tuple(rng.choice(A) for _ in range(schema.relations[rel]))))
    beta = [m.mapped(pi) for m in alpha]
    return Trial(p, S, T, A, B, pi, alpha, beta)


def corrupted_run(p: DynamicProgram, s: ProgramState, ms) -> ProgramState:
    """A broken engine: each aux tuple is computed from its rule at a shifted tuple.

    The shift peeks at the next domain element, so updates are no longer local.
    """
    for m in ms:
        new = step(p, s, m)
        dom = s.domain
        nxt = {e: dom[(i + 1) % len(dom)] for i, e in enumerate(dom)}
        rels = {}
        for sym, ar in p.aux_schema.relations.items():
            if ar == 0:
                continue
            computed = new.structure.relations[sym]
            rels[sym] = frozenset(t for t in itertools.product(dom, repeat=ar)
                                  if (nxt[t[0]],) + t[1:] in computed)
        s = ProgramState(p, new.structure.replace(relations=rels))
    return s


def substructure_suite(trials: int = 500, seed: int = 0, runner: Runner = run) -> dict:
    held = violated = 0
    first = None
    for i in range(trials):
        tr = random_lemma_trial(f"{seed}:{i}")
        v = check_substructure_lemma(tr.program, tr.S, tr.T, tr.A, tr.B, tr.pi, tr.alpha, tr.beta, runner)
        if v.holds:
            held += 1
        else:
            violated += 1
            if first is None:
                first = {"trial": i, "status": v.status, "witness": v.witness}
    return {"trials": trials, "seed": seed, "held": held, "violated": violated, "first_violation": first}


# --- DynQF ---------------------------------------------------------------------------


def check_substructure_lemma_qf(
    p: DynamicProgram, S: ProgramState, T: ProgramState, a: Sequence, b: Sequence, m: int,
    alpha, beta, runner: Runner = run,
) -> Verdict:
    """Lemma for programs with functions: ā ≈_m b̄ before, ā ≈_0 b̄ after (same π)."""
    pi = m_similar(S.structure, T.structure, a, b, m)
    if pi is None:
        raise DynlabError(f"precondition: the tuples are not {m}-similar")
    if not respects(alpha, beta, dict(zip(a, b))):
        raise DynlabError("precondition: alpha and beta must respect pi")
    S2, T2 = runner(p, S, alpha), runner(p, T, beta)
    pi0 = m_similar(S2.structure, T2.structure, a, b, 0)
    if pi0 is None:
        return Verdict(False, "violated: not 0-similar after the sequences", {"m": m})
    if any(pi.get(x, y) != y for x, y in pi0.items()):
        return Verdict(False, "violated: 0-similarity uses a different bijection", {"m": m})
    return Verdict(True, "holds")


def _random_term(rng, leaves: list[Term], funs: list[str], atoms_for, d: int) -> Term:
    if d == 0 or rng.random() < 0.3:
        return rng.choice(leaves)
    r = rng.random()
    if r < 0.2:
        cond = _random_formula(rng, atoms_for(leaves), 1)
        return Ite(cond, _random_term(rng, leaves, funs, atoms_for, d - 1),
                   _random_term(rng, leaves, funs, atoms_for, d - 1))
    return App(rng.choice(funs), (_random_term(rng, leaves, funs, atoms_for, d - 1),))


def random_dynqf_program(seed, max_depth: int = 2) -> DynamicProgram:
    """Pseudorandom DynQF program: unary aux functions f, g, a constant c, relations U/1, Q/0."""
    rng = random.Random(f"dynqf:{seed}")
    inp = Schema({"E": 2})
    aux = Schema({"U": 1, "Q": 0}, frozenset({"c"}), {"f": 1, "g": 1})
    supported = [("ins", "E"), ("del", "E")]
    funs = ["f", "g"]

    def atoms_for(leaves):
        out: list[Formula] = [Rel("Q", ())]
        for t in leaves:
            out.append(Rel("U", (t,)))
        for x, y in itertools.product(leaves, repeat=2):
            out.append(Rel("E", (x, y)))
        out += [Eq(x, y) for x, y in itertools.combinations(leaves, 2)]
        return out

    rules = []
    for kind, rel in supported:
        mod = ("u", "v")
        for sym in ("f", "g", "c", "U", "Q"):
            ys = ("y",) if sym in ("f", "g", "U") else ()
            leaves: list[Term] = [Var(x) for x in mod + ys] + [Const("c")]
            if sym in ("f", "g"):
                body = _random_term(rng, leaves, funs, atoms_for, max_depth)
            elif sym == "c":
                body = _random_term(rng, leaves, funs, atoms_for, max_depth)
            else:
                fl = leaves + [App(f, (t,)) for f in funs for t in leaves]
                body = _random_formula(rng, atoms_for(fl), 2)
            rules.append(Rule(sym, kind, rel, mod, ys, body))
    return DynamicProgram(f"random-dynqf-{seed}", inp, aux, rules, Initializer("random", {"seed": seed}),
                          "Q", supported, logic="DynQF")


def _random_qf_state(rng, p: DynamicProgram, dom: list) -> Structure:
    schema = p.schema
    rels = _random_relations(rng, schema, dom)
    funs = {}
    for f, ar in schema.function_arities().items():
        table = {t: rng.choice(dom) for t in itertools.product(dom, repeat=ar)}
        funs[f] = FunctionTable(table, dom[0])
    return Structure(dom, schema, rels, funs)


def _duplicated_state(rng, p: DynamicProgram, size: int) -> tuple[Structure, list, list]:
    """A state with an automorphism swapping two f-chains and fixing the rest."""
    schema = p.schema
    one = [f"a{i}" for i in range(size)]
    two = [f"b{i}" for i in range(size)]
    extra = [f"e{i}" for i in range(rng.randint(1, 2))]
    dom = one + two + extra
    swap = {**dict(zip(one, two)), **dict(zip(two, one)), **{e: e for e in extra}}
    rels = _random_relations(rng, schema, dom, density=0.25)
    for r in rels:
        rels[r] |= {tuple(swap[e] for e in t) for t in rels[r]}
    funs = {"c": FunctionTable({(): rng.choice(extra)}, dom[0])}
    for f in ("f", "g"):
        table = {}
        for i, x in enumerate(one):
            if f == "f" and i + 1 < size:
                y = one[i + 1]
            else:
                y = rng.choice(one + extra)
            table[(x,)] = y
            table[(swap[x],)] = swap[y]
        for x in extra:
            table[(x,)] = rng.choice(extra)
        funs[f] = FunctionTable(table, dom[0])
    return Structure(dom, schema, rels, funs), one, two


def _similar_pair(rng, p: DynamicProgram, max_m: int):
    """(state, ā, b̄, depth): a pair from a swapped pair of chains, possibly perturbed.

    Flipping U at one element of the second chain caps the similarity depth
    at roughly its distance from the chain head; unperturbed pairs are
    similar at every depth (reported as ``max_m``).
    """
    size = rng.randint(2, 7)
    s, one, two = _duplicated_state(rng, p, size)
    if rng.random() < 0.75:
        x = rng.choice(two)
        u = set(s.relations["U"]) ^ {(x,)}
        s = s.replace(relations={"U": u})
    a, b = (one[0],), (two[0],)
    if m_similar(s, s, a, b, 0) is None:
        return None
    return s, a, b, similarity_depth(s, s, a, b, max_m)


def similarity_depth(s, t, a, b, max_m: int) -> int:
    """Largest m <= max_m with ā ≈_m b̄ (assumes ā ≈_0 b̄)."""
    mm = 0
    while mm < max_m and m_similar(s, t, a, b, mm + 1) is not None:
        mm += 1
    return mm


def qf_suite(m: int, trials: int = 200, seed: int = 0, length: int = 2, max_m: int = 10) -> dict:
    """Seeded campaign for the DynQF lemma at a fixed m.

    Draws random DynQF programs and element pairs that are at least
    m-similar, applies random respecting sequences of length <= ``length``
    and checks 0-similarity afterwards.
    """
    rng = random.Random(f"qf-suite:{seed}:{m}:{length}")
    held = violated = 0
    first = None
    i = 0
    while held + violated < trials:
        i += 1
        p = random_dynqf_program(f"{seed}:{i}")
        drawn = _similar_pair(rng, p, max_m)
        if drawn is None or drawn[3] < m:
            continue
        s, a, b, _ = drawn
        alpha = []
        for _ in range(rng.randint(0, length)):
            alpha.append(Modification(rng.choice(("ins", "del")), "E", (a[0], a[0])))
        beta = [x.mapped({a[0]: b[0]}) for x in alpha]
        v = check_substructure_lemma_qf(p, ProgramState(p, s), ProgramState(p, s), a, b, m, alpha, beta)
        if v.holds:
            held += 1
        else:
            violated += 1
            if first is None:
                first = {"program": p.name, "status": v.status}
    return {"m": m, "trials": trials, "seed": seed, "length": length, "held": held,
            "violated": violated, "first_violation": first}


def qf_scan(trials: int = 200, seed: int = 0, length: int = 2, max_m: int = 8) -> dict:
    """Run :func:`qf_suite` for m = 0..max_m; report violations per m and the smallest clean m."""
    by_m = {}
    smallest = None
    for m in range(max_m + 1):
        r = qf_suite(m, trials, seed, length, max_m)
        by_m[str(m)] = r["violated"]
        if smallest is None and r["violated"] == 0:
            smallest = m
    return {"trials": trials, "seed": seed, "length": length, "violations_by_m": by_m,
            "smallest_passing_m": smallest}
