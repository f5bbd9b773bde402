"""Lower-bound instances for k-clique and for an ∃*∀* query, and the α/β demo."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Sequence

from ..core import DynlabError, Modification, Schema, Structure, find_isomorphism, induced_substructure
from ..engine import DynamicProgram, Initializer, ProgramState, Rule, init_state, run
from ..logic import Const, Eq, Formula, Not, Rel, Var, conj, disj, parse_formula, static_eval
from .combinatorics import HyperedgeColoring, find_monochromatic_clique, ordered_tau_clique, search_antiramsey_coloring
from .thresholds import GUARANTEED_CLIQUE

EAFO_SENTENCE = "exists x. forall y. E(s,x) & (E(y,t) -> E(x,y))"


def clique_query(k: int) -> Formula:
    from ..compiler import clique_sentence

    return clique_sentence(k)


@dataclass(frozen=True)
class LowerBoundInstance:
    k: int
    A: tuple
    B: tuple[tuple, ...]
    B_prime: tuple[tuple, ...]
    variant: str
    structure: Structure

    def c(self, b: Sequence) -> str:
        return c_name(self.A, b)

    def manifest(self) -> dict:
        return {
            "k": self.k,
            "A": list(self.A),
            "B": [list(b) for b in self.B],
            "B_prime": [list(b) for b in self.B_prime],
            "order": list(self.A),
            "variant": self.variant,
        }


def c_name(order: Sequence, b: Sequence) -> str:
    pos = {a: i for i, a in enumerate(order)}
    return "c_" + "".join(str(x) for x in sorted(b, key=pos.__getitem__))


def build_lowerbound_instance(A: Sequence, B, k: int, variant: str = "clique") -> LowerBoundInstance:
    """Graph on A ⊎ C (C = one element per (k+1)-subset) with edges (c_b, b_i) for b in B.

    The ``eafo`` variant adds constants s, t (as elements "s", "t") and the
    edges (s, c_b) for b in B.
    """
    if variant not in ("clique", "eafo"):
        raise DynlabError(f"unknown variant {variant!r}")
    A = tuple(A)
    pos = {a: i for i, a in enumerate(A)}
    subsets = [tuple(c) for c in itertools.combinations(A, k + 1)]
    Bs = {tuple(sorted(b, key=pos.__getitem__)) for b in B}
    if not Bs <= set(subsets):
        raise DynlabError("B must consist of (k+1)-subsets of A")
    B_sorted = tuple(b for b in subsets if b in Bs)
    B_prime = tuple(b for b in subsets if b not in Bs)
    C = [c_name(A, b) for b in subsets]
    edges = [(c_name(A, b), x) for b in B_sorted for x in b]
    domain = list(A) + C
    if variant == "eafo":
        domain += ["s", "t"]
        edges += [("s", c_name(A, b)) for b in B_sorted]
        schema = Schema({"E": 2}, frozenset({"s", "t"}))
        g = Structure(domain, schema, {"E": edges}, constants={"s": "s", "t": "t"})
    else:
        g = Structure(domain, Schema({"E": 2}), {"E": edges})
    return LowerBoundInstance(k, A, B_sorted, B_prime, variant, g)


def completion_sequence(b: Sequence, order: Sequence, variant: str = "clique") -> list[Modification]:
    """α for b: all (b_i, b_j), i < j, in lexicographic order; or (b_i, t) for ``eafo``."""
    pos = {a: i for i, a in enumerate(order)}
    bs = sorted(b, key=pos.__getitem__)
    if variant == "eafo":
        return [Modification("ins", "E", (x, "t")) for x in bs]
    return [Modification("ins", "E", (x, y)) for x, y in itertools.combinations(bs, 2)]


def query_for(inst: LowerBoundInstance) -> Formula:
    if inst.variant == "eafo":
        return parse_formula(EAFO_SENTENCE, ("s", "t"))
    return clique_query(inst.k + 2)


# --- the strawman: a k-ary DynProp program over the instance's input schema ---------


def random_formula(rng: random.Random, atoms: list[Formula], depth: int) -> Formula:
    if depth == 0 or rng.random() < 0.3:
        a = rng.choice(atoms)
        return Not(a) if rng.random() < 0.3 else a
    op = rng.choice(("and", "or", "not"))
    if op == "not":
        return Not(random_formula(rng, atoms, depth - 1))
    parts = [random_formula(rng, atoms, depth - 1) for _ in range(2)]
    return conj(*parts) if op == "and" else disj(*parts)


def strawman_program(input_schema: Schema, k: int, seed: int, aux_count: int = 1) -> DynamicProgram:
    """A pseudorandom k-ary DynProp program (aux relations of arity k plus a 0-ary Q)."""
    rng = random.Random(f"strawman:{k}:{seed}")
    aux = {f"A{i}": k for i in range(aux_count)}
    aux["Q"] = 0
    mod = ("u", "v")
    ys = tuple(f"y{i}" for i in range(1, k + 1))
    consts = [Const(c) for c in sorted(input_schema.constants)]
    rules = []
    for sym, ar in sorted(aux.items()):
        here = [Var(x) for x in mod + ys[:ar]] + consts
        atoms: list[Formula] = [Rel("E", (a, b)) for a in here for b in here]
        atoms += [Rel(r, t) for r, rar in sorted(aux.items()) for t in itertools.product(here, repeat=rar)]
        atoms += [Eq(a, b) for a, b in itertools.combinations(here, 2)]
        rules.append(Rule(sym, "ins", "E", mod, ys[:ar], random_formula(rng, atoms, 3)))
    return DynamicProgram(
        f"strawman-k{k}-s{seed}",
        input_schema,
        Schema(aux),
        rules,
        Initializer("random", {"seed": seed, "density": 0.5}),
        "Q",
        [("ins", "E")],
    )


def disparity(k: int, n: int, seed: int = 0, schema_tag: str = "unary1") -> dict:
    """Both halves of the Ramsey disparity at desk scale.

    (S1) every structure over n elements in the schema has an ordered clique of
    the exhaustively computed size g; (S2) a 2-coloring of [n]^(k+1) whose
    monochromatic cliques are all smaller than g.
    """
    g = GUARANTEED_CLIQUE[schema_tag].get(n)
    if g is None:
        raise DynlabError(f"no exhaustive threshold for {schema_tag} at n={n}")
    col = search_antiramsey_coloring(n, k + 1, g, seed)
    if col is None:
        raise DynlabError(f"no 2-coloring of [{n}]^{k + 1} without monochromatic {g}-cliques found")
    return {"k": k, "n": n, "guaranteed": g, "coloring": col, "max_monochromatic": col.max_monochromatic()}


def split_by_coloring(A: Sequence, col: HyperedgeColoring) -> tuple[list, list]:
    B, Bp = [], []
    for e, c in sorted(col.colors.items()):
        (B if c == 1 else Bp).append(tuple(A[i - 1] for i in e))
    return B, Bp


@dataclass
class DemoResult:
    variant: str
    instance: LowerBoundInstance
    clique: tuple
    b: tuple
    b_prime: tuple
    isomorphism: dict | None
    answer_alpha: bool
    answer_beta: bool
    strawman_alpha: bool
    strawman_beta: bool
    compiled_alpha: bool | None
    compiled_beta: bool | None
    lemma_holds: bool
    trace: list[str]

    @property
    def ok(self) -> bool:
        ok = (
            self.isomorphism is not None
            and self.answer_alpha
            and not self.answer_beta
            and self.strawman_alpha == self.strawman_beta
            and self.lemma_holds
        )
        if self.compiled_alpha is not None:
            ok = ok and self.compiled_alpha and not self.compiled_beta
        return ok


def lowerbound_demo(variant: str = "clique", n: int = 5, seed: int = 0) -> DemoResult:
    """k = 1 end to end: instance, (S1) clique in the strawman's state, α vs β."""
    from .lemmas import check_substructure_lemma

    k = 1
    d = disparity(k, n, seed)
    A = tuple(f"a{i}" for i in range(1, n + 1))
    B, _ = split_by_coloring(A, d["coloring"])
    inst = build_lowerbound_instance(A, B, k, variant)
    trace = [f"instance: |A|={n} |B|={len(inst.B)} |B'|={len(inst.B_prime)} variant={variant}"]
    p = strawman_program(inst.structure.schema, k, seed)
    state = init_state(p, inst.structure)
    # (S1) on the state restricted to A (types of single elements, constants included)
    sub = _restrict_for_types(state, A)
    clique = ordered_tau_clique(sub, A, target=d["guaranteed"], k=k)
    if clique is None:
        raise DynlabError("no ordered clique of the guaranteed size: threshold table is wrong")
    trace.append(f"ordered clique A' = {list(clique)}")
    pairs = [tuple(x) for x in itertools.combinations(clique, k + 1)]
    b = next(x for x in pairs if x in inst.B)
    bp = next(x for x in pairs if x in inst.B_prime)
    trace.append(f"b = {list(b)} in B, b' = {list(bp)} in B'")
    consts = sorted(inst.structure.schema.constants)
    side_a = list(b) + [inst.structure.constant(c) for c in consts]
    side_b = list(bp) + [inst.structure.constant(c) for c in consts]
    pi = dict(zip(side_a, side_b))
    iso = find_isomorphism(
        induced_substructure(state.structure, side_a), induced_substructure(state.structure, side_b), fixed=pi
    )
    trace.append(f"pre-modification isomorphism: {iso}")
    alpha = completion_sequence(b, A, variant)
    beta = completion_sequence(bp, A, variant)
    q = query_for(inst)
    g_alpha = run_input(inst.structure, alpha)
    g_beta = run_input(inst.structure, beta)
    ans_a, ans_b = static_eval(g_alpha, q), static_eval(g_beta, q)
    trace.append(f"alpha = {[str(m) for m in alpha]} -> query {ans_a}")
    trace.append(f"beta = {[str(m) for m in beta]} -> query {ans_b}")
    sa, sb = run(p, state, alpha), run(p, state, beta)
    trace.append(f"strawman Q after alpha = {sa.query_answer()}, after beta = {sb.query_answer()}")
    verdict = check_substructure_lemma(p, state, state, side_a, side_b, iso or pi, alpha, beta)
    trace.append(f"substructure lemma: {verdict.status}")
    ca = cb = None
    if variant == "clique":
        from ..compiler import compile_semipositive

        cp = compile_semipositive(q, name="3-clique")
        cs = init_state(cp, inst.structure)
        ca, cb = run(cp, cs, alpha).query_answer(), run(cp, cs, beta).query_answer()
        trace.append(f"compiled {cp.arity}-ary program Q after alpha = {ca}, after beta = {cb}")
    return DemoResult(variant, inst, clique, b, bp, iso, ans_a, ans_b, sa.query_answer(),
                      sb.query_answer(), ca, cb, verdict.holds, trace)


def run_input(g: Structure, ms) -> Structure:
    from ..core import apply_sequence

    return apply_sequence(g, ms)


def _restrict_for_types(state: ProgramState, A) -> Structure:
    """The state on A plus constants, typed as a structure (for ordered-clique search)."""
    s = state.structure
    keep = list(A) + [s.constant(c) for c in sorted(s.schema.constants)]
    return induced_substructure(s, keep)
