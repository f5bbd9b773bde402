"""Replays of the worked examples, each asserting the facts it illustrates."""

from __future__ import annotations

from dataclasses import dataclass, field

from .builtins import counter_saturated, graph, max_outdegree, max_outdegree_nodes, three_clique
from .compiler import Partition, compile_semipositive, extends_to, patterns_of, relation_name
from .core import ins
from .engine import difftest, init_state, run_trace, step

PATTERN_SENTENCE = (
    "exists x1 x2 x3 x4. x1 != x2 & x1 != x3 & x1 != x4 & x2 != x3 & x2 != x4 & x3 != x4"
    " & E(x3,x1) & E(x1,x2) & E(x3,x2) & E(x2,x4)"
)


@dataclass
class DemoReport:
    name: str
    lines: list[str] = field(default_factory=list)
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def check(self, label: str, value: bool) -> None:
        self.checks[label] = bool(value)
        self.lines.append(f"[{'ok' if value else 'FAIL'}] {label}")

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def three_clique_demo() -> DemoReport:
    rep = DemoReport("three-clique")
    p = three_clique()
    g = graph(["a1", "a2", "a3", "a4", "a5"], [("a2", "a3"), ("a3", "a4"), ("a1", "a5")])
    s = init_state(p, g)
    rep.lines.append(f"G: {sorted(g.relations['E'])}")
    rep.lines.append(f"R: {sorted(s.relation('R'))}")
    rep.check("initially R = {(a2,a4), (a4,a2)}", s.relation("R") == {("a2", "a4"), ("a4", "a2")})
    t, records = run_trace(p, s, [ins("E", "a2", "a5")])
    rep.lines += [str(r) for r in records]
    gained = t.relation("R") - s.relation("R")
    rep.check("ins(a2,a5) puts (a1,a2) and (a2,a1) into R", {("a1", "a2"), ("a2", "a1")} <= gained)
    rep.check("R gains exactly (a1,a2), (a2,a1), (a3,a5), (a5,a3)",
              gained == {("a1", "a2"), ("a2", "a1"), ("a3", "a5"), ("a5", "a3")})
    rep.check("no 3-clique yet", t.query_answer() is False)
    return rep


def figure1_demo() -> DemoReport:
    from .logic import parse_formula

    rep = DemoReport("figure1")
    f = parse_formula(PATTERN_SENTENCE)
    (h,) = patterns_of(f)
    big = Partition(("x1", "x2", "x3"), ("x4",))
    small = Partition(("x1", "x2"), ("x3", "x4"))
    g = graph(["a1", "a2", "a3", "a4"], [("a3", "a2"), ("a2", "a4")])
    rep.lines.append(f"H: {sorted(h.edges)}")
    rep.lines.append(f"G: {sorted(g.relations['E'])}")
    rep.check("before: (a1,a2,a3) extends to H((x1,x2,x3),(x4))", extends_to(g, ("a1", "a2", "a3"), h, big))
    rep.check("before: (a1,a2) does not extend to H((x1,x2),(x3,x4))", not extends_to(g, ("a1", "a2"), h, small))
    g2 = graph(g.domain, list(g.relations["E"]) + [("a3", "a1")])
    rep.check("after ins(a3,a1): (a1,a2) extends to H((x1,x2),(x3,x4))", extends_to(g2, ("a1", "a2"), h, small))
    p = compile_semipositive(f, name="figure1")
    s = init_state(p, g)
    t = step(p, s, ins("E", "a3", "a1"))
    r_small = relation_name(small.y, "H1_")
    rep.lines.append(f"compiled {r_small} after: {sorted(t.relation(r_small))}")
    rep.check(f"compiled program: (a1,a2) enters {r_small}",
              ("a1", "a2") not in s.relation(r_small) and ("a1", "a2") in t.relation(r_small))
    return rep


def max_outdegree_demo(sizes=(1, 2, 3, 4, 5), sequences: int = 200, length: int = 12, seed: int = 0) -> DemoReport:
    rep = DemoReport("max-outdegree")
    for n in sizes:
        r = difftest(max_outdegree(), max_outdegree_nodes, n, sequences, length, seed, taint=counter_saturated)
        rep.lines.append(r.summary())
        rep.check(f"n={n}: Q is the max-outdegree set after every prefix", r.ok)
    r = difftest(max_outdegree(as_written=True), max_outdegree_nodes, 4, 50, length, seed, taint=counter_saturated)
    rep.lines.append(r.summary())
    rep.check("the literal Succ(u) insertion term is caught by the oracle", not r.ok)
    return rep


def padding_demo(seed: int = 0) -> DemoReport:
    from .padding import SplitDomain, build_padding_program, check_arity_discipline, difftest_padding, random_property

    rep = DemoReport("padding")
    rep.check("|D+| = 2 needs |D-| = 16 (ternary)", len(SplitDomain(("a", "b")).minus) == 16)
    split = SplitDomain(("a", "b"), "binary")
    p = build_padding_program(random_property(2, seed), split)
    rep.check("binary variant uses functions of arity <= 2", check_arity_discipline(p, "binary"))
    from .core import Structure
    from .padding import GRAPH

    s = init_state(p, Structure(split.domain, GRAPH))
    t = step(p, s, ins("E", "a", "b"))
    mid = t.structure.apply("f_ins", ("a", s.structure.constant("p")))
    rep.lines.append(f"p: {s.structure.constant('p')} -> {mid} -> {t.structure.constant('p')}")
    rep.check("binary: ins(a,b) moves p to c_G+(a,b) via c_G,a,ins",
              mid == split.intermediate(split.code(()), "a", "ins")
              and t.structure.constant("p") == split.c({("a", "b")}))
    for variant, n in (("ternary", 2), ("ternary", 3), ("binary", 2)):
        r = difftest_padding(variant, n, seed, 100, 10, seed)
        rep.lines.append(r.summary())
        rep.check(f"{variant} |D+|={n}: 0 mismatches, pointer sound",
                  r.ok and r.extra["pointer_unsound"] == 0)
    return rep


DEMOS = {
    "three-clique": three_clique_demo,
    "figure1": figure1_demo,
    "max-outdegree": max_outdegree_demo,
    "padding": padding_demo,
}
