"""Padding programs: maintain any boolean graph property by pointer chasing.

The domain is split into modifiable elements D⁺ and non-modifiable elements
D⁻.  D⁻ holds one element c_G per graph G over D⁺ (plus, for the binary
variant, intermediates c_{G,a,ins} and c_{G,a,del}).  Precomputed functions
move a pointer p from c_G to the element of the modified graph, and a unary
relation marks the graphs with the property.

Encoding: a graph over D⁺ = (d_0, ..., d_{n-1}) is the bit vector of its
adjacency matrix in row-major order, bit i·n + j set iff (d_i, d_j) is an
edge; c_G is named ``c`` followed by that bit string.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Sequence

from .core import DynlabError, FunctionTable, Schema, Structure
from .engine import (
    DifftestReport, DynamicProgram, InitializationError, Initializer, ProgramState, Rule, difftest,
    register_initializer,
)
from .logic import App, Const, Rel, Var

GRAPH = Schema({"E": 2})
VARIANTS = ("ternary", "binary")


class SplitError(DynlabError):
    pass


@dataclass(frozen=True)
class SplitDomain:
    """D = D⁺ ⊎ D⁻ with D⁻ named after the graphs (and intermediates) it encodes."""

    plus: tuple
    variant: str = "ternary"

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise SplitError(f"unknown padding variant {self.variant!r}")
        object.__setattr__(self, "plus", tuple(self.plus))
        if len(set(self.plus)) != len(self.plus) or not self.plus:
            raise SplitError("D⁺ must be a nonempty list of distinct elements")
        if set(self.plus) & set(self.minus):
            raise SplitError("D⁺ clashes with the names of D⁻")

    @property
    def n(self) -> int:
        return len(self.plus)

    @property
    def bits(self) -> int:
        return self.n * self.n

    def code(self, edges) -> str:
        idx = {e: i for i, e in enumerate(self.plus)}
        bits = ["0"] * self.bits
        for a, b in edges:
            bits[idx[a] * self.n + idx[b]] = "1"
        return "".join(bits)

    def graph_of(self, code: str) -> frozenset:
        return frozenset(
            (self.plus[i // self.n], self.plus[i % self.n]) for i, bit in enumerate(code) if bit == "1"
        )

    def codes(self) -> list[str]:
        return [format(i, f"0{self.bits}b") for i in range(2**self.bits)]

    def c(self, edges) -> str:
        return "c" + self.code(edges)

    def intermediate(self, code: str, a, kind: str) -> str:
        return f"c{code}_{self.plus.index(a)}_{kind}"

    @property
    def minus(self) -> tuple:
        out = ["c" + code for code in self.codes()]
        if self.variant == "binary":
            out += [self.intermediate(code, a, kind)
                    for code in self.codes() for a in self.plus for kind in ("ins", "del")]
        return tuple(out)

    @property
    def domain(self) -> tuple:
        return self.plus + self.minus

    def expected_minus_size(self) -> int:
        base = 2**self.bits
        return base if self.variant == "ternary" else base * (1 + 2 * self.n)

    def to_dict(self) -> dict:
        return {"plus": list(self.plus), "variant": self.variant,
                "encoding": "row-major adjacency bits over plus, element 'c'+bits"}


def random_property(n: int, seed) -> str:
    """Seeded truth table over all 2^(n²) graphs, as a bit string indexed by graph code."""
    rng = random.Random(f"property:{n}:{seed}")
    return "".join(rng.choice("01") for _ in range(2 ** (n * n)))


def truth_table(split: SplitDomain, oracle: Callable[[frozenset], bool]) -> str:
    return "".join("1" if oracle(split.graph_of(code)) else "0" for code in split.codes())


def build_padding_program(oracle: Callable[[frozenset], bool] | str, split: SplitDomain) -> DynamicProgram:
    """Padding program for the property given as oracle (edge set -> bool) or truth table."""
    table = oracle if isinstance(oracle, str) else truth_table(split, oracle)
    if len(table) != 2**split.bits or set(table) - {"0", "1"}:
        raise SplitError(f"truth table must have {2 ** split.bits} bits")
    u, v = Var("u"), Var("v")
    ptr = Const("p")
    if split.variant == "ternary":
        aux = Schema({"Q": 0, "R_Q": 1}, frozenset({"p"}), {"f_ins": 3, "f_del": 3})
        moved = {k: App(f"f_{k}", (u, v, ptr)) for k in ("ins", "del")}
    else:
        aux = Schema({"Q": 0, "R_Q": 1}, frozenset({"p"}),
                     {"f_ins": 2, "f_del": 2, "s_ins": 2, "s_del": 2})
        moved = {k: App(f"s_{k}", (v, App(f"f_{k}", (u, ptr)))) for k in ("ins", "del")}
    rules = []
    for kind in ("ins", "del"):
        rules.append(Rule("p", kind, "E", ("u", "v"), (), moved[kind]))
        rules.append(Rule("Q", kind, "E", ("u", "v"), (), Rel("R_Q", (moved[kind],))))
        for sym, ar in sorted(aux.functions.items()):
            ys = tuple(f"y{i}" for i in range(ar))
            rules.append(Rule(sym, kind, "E", ("u", "v"), ys, App(sym, tuple(Var(y) for y in ys))))
        rules.append(Rule("R_Q", kind, "E", ("u", "v"), ("y",), Rel("R_Q", (Var("y"),))))
    return DynamicProgram(
        f"padding-{split.variant}-n{split.n}",
        GRAPH,
        aux,
        rules,
        Initializer("padding", {**split.to_dict(), "truth_table": table}),
        "Q",
        [("ins", "E"), ("del", "E")],
        logic="DynQF",
        modifiable=frozenset(split.plus),
    )


@register_initializer("padding")
def _init_padding(p, inp: Structure, plus, variant, truth_table, encoding=None):
    split = SplitDomain(tuple(plus), variant)
    if tuple(inp.domain) != split.domain:
        raise InitializationError(
            f"padding needs the domain D⁺ followed by the {len(split.minus)} elements of D⁻"
        )
    plus_set = set(split.plus)
    edges = inp.relations["E"]
    if any(a not in plus_set or b not in plus_set for a, b in edges):
        raise InitializationError("the initial graph has edges touching D⁻")
    first = inp.domain[0]
    codes = split.codes()
    funs: dict[str, dict] = {}
    if variant == "ternary":
        for kind in ("ins", "del"):
            table = {}
            for code in codes:
                g = split.graph_of(code)
                for a, b in itertools.product(split.plus, repeat=2):
                    h = g | {(a, b)} if kind == "ins" else g - {(a, b)}
                    table[(a, b, "c" + code)] = split.c(h)
            funs[f"f_{kind}"] = table
    else:
        for kind in ("ins", "del"):
            f, s = {}, {}
            for code in codes:
                g = split.graph_of(code)
                for a in split.plus:
                    mid = split.intermediate(code, a, kind)
                    f[(a, "c" + code)] = mid
                    for b in split.plus:
                        h = g | {(a, b)} if kind == "ins" else g - {(a, b)}
                        s[(b, mid)] = split.c(h)
            funs[f"f_{kind}"], funs[f"s_{kind}"] = f, s
    functions = {name: FunctionTable(t, first) for name, t in funs.items()}
    functions["p"] = FunctionTable({(): split.c(edges)}, first)
    holds = frozenset(("c" + code,) for code, bit in zip(codes, truth_table) if bit == "1")
    q = frozenset({()}) if truth_table[int(split.code(edges), 2)] == "1" else frozenset()
    return {"R_Q": holds, "Q": q}, functions


def check_arity_discipline(p: DynamicProgram, variant: str) -> bool:
    aux = p.aux_schema
    if variant == "ternary":
        return max(aux.functions.values()) <= 3 and max(aux.relations.values()) <= 1
    return max(aux.functions.values()) <= 2 and max(aux.relations.values()) <= 1


def pointer_sound(split: SplitDomain, state: ProgramState) -> bool:
    """p = c_G for exactly the current graph G."""
    return state.structure.constant("p") == split.c(state.structure.relations["E"])


def difftest_padding(variant: str, n: int, oracle_seed, sequences: int, length: int, seed,
                     plus: Sequence | None = None) -> DifftestReport:
    """Random property and sequences over D⁺; checks Q and pointer soundness after every prefix."""
    split = SplitDomain(tuple(plus) if plus is not None else tuple(f"v{i}" for i in range(n)), variant)
    table = random_property(n, oracle_seed)
    p = build_padding_program(table, split)
    unsound = []

    def oracle(inp: Structure) -> bool:
        return table[int(split.code(inp.relations["E"]), 2)] == "1"

    def make_input(rng, domain):
        edges = [e for e in itertools.product(split.plus, repeat=2) if rng.random() < 0.4]
        return Structure(domain, GRAPH, {"E": edges})

    def on_state(state):
        if not pointer_sound(split, state):
            unsound.append(state.structure.constant("p"))

    report = difftest(p, oracle, len(split.domain), sequences, length, seed, domain=split.domain,
                      elements=split.plus, make_input=make_input, on_state=on_state)
    report.extra = {"pointer_unsound": len(unsound), "minus_size": len(split.minus),
                    "oracle_seed": oracle_seed, "variant": variant}
    return report
