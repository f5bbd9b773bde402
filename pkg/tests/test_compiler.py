import random

import pytest
from hypothesis import given, settings, strategies as st

from dynlab.builtins import all_graphs, graph, three_clique, TRIANGLE
from dynlab.compiler import (
    Partition, SubgraphPattern, UnsupportedFormula, clique_sentence, compile_pattern, compile_semipositive,
    expand_equality_types, extension_relation, extends_to, partitions, patterns_of, relation_name, set_partitions,
    to_ucq_neq,
)
from dynlab.demos import PATTERN_SENTENCE
from dynlab.engine import difftest, init_state, random_modifications, step
from dynlab.logic import Or, parse_formula, static_eval

H4 = SubgraphPattern(("x1", "x2", "x3", "x4"), {("x3", "x1"), ("x1", "x2"), ("x3", "x2"), ("x2", "x4")})


def ucq_formula(cqs):
    return Or(tuple(cq.formula() for cq in cqs)) if len(cqs) > 1 else cqs[0].formula()


def test_ucq_symmetric_edge():
    cqs = to_ucq_neq(parse_formula("exists x1 x2. E{x1,x2}"))
    assert len(cqs) == 2
    assert {tuple(sorted((a.name, b.name) for a, b in cq.edges)) for cq in cqs} == {(("x1", "x2"),), (("x2", "x1"),)}


def test_ucq_already_conjunctive():
    assert len(to_ucq_neq(parse_formula("exists x y. E(x,y) & x != y"))) == 1


def test_ucq_three_clique_has_eight_cqs():
    f = clique_sentence(3)
    cqs = to_ucq_neq(f)
    assert len(cqs) == 8
    g = ucq_formula(cqs)
    for n in range(1, 4):
        for G in all_graphs(range(n)):
            assert static_eval(G, f) == static_eval(G, g)


def test_ucq_rejects_negation_and_forall():
    for text in ("exists x y. !E(x,y)", "forall x. E(x,x)", "exists x. E(x,x) -> E(x,x)"):
        with pytest.raises(UnsupportedFormula):
            to_ucq_neq(parse_formula(text))


def test_equality_types_two_vars():
    (cq,) = to_ucq_neq(parse_formula("exists x1 x2. E(x1,x2)"))
    types = expand_equality_types(cq)
    assert len(types) == 2
    assert sorted(len(t.variables) for t in types) == [1, 2]
    (cq,) = to_ucq_neq(parse_formula("exists x1 x2. E(x1,x2) & x1 != x2"))
    assert len(expand_equality_types(cq)) == 1


def test_equality_types_bell_three():
    f = parse_formula("exists x1 x2 x3. E(x1,x2) & E(x2,x3)")
    (cq,) = to_ucq_neq(f)
    types = expand_equality_types(cq)
    assert len(types) == 5
    g = ucq_formula(types)
    for n in range(1, 4):
        for G in all_graphs(range(n)):
            assert static_eval(G, f) == static_eval(G, g)


def test_bell_numbers():
    assert [sum(1 for _ in set_partitions(range(n))) for n in range(6)] == [1, 1, 2, 5, 15, 52]


def test_four_node_pattern():
    (h,) = patterns_of(parse_formula(PATTERN_SENTENCE))
    assert h.nodes == H4.nodes and h.edges == H4.edges


def test_self_loop_and_edgeless_patterns():
    (h,) = patterns_of(parse_formula("exists x1. E(x1,x1)"))
    assert len(h) == 1 and h.edges == {("x1", "x1")}
    (h,) = patterns_of(parse_formula("exists x1 x2 x3. x1 != x2 & x1 != x3 & x2 != x3"))
    assert len(h) == 3 and not h.edges


def test_patterns_deduplicated_up_to_isomorphism():
    assert len(patterns_of(clique_sentence(3))) == 2
    assert len(patterns_of(clique_sentence(3), dedupe=False)) == 8


def test_partitions_keep_a_nonempty_z():
    ps = partitions(H4)
    assert len(ps) == 15
    assert all(p.z for p in ps)
    assert ps[0] == Partition((), H4.nodes)


def test_extends_to_before_and_after_insertion():
    g = graph(["a1", "a2", "a3", "a4"], [("a3", "a2"), ("a2", "a4")])
    assert extends_to(g, ("a1", "a2", "a3"), H4, Partition(("x1", "x2", "x3"), ("x4",)))
    small = Partition(("x1", "x2"), ("x3", "x4"))
    assert not extends_to(g, ("a1", "a2"), H4, small)
    g2 = graph(g.domain, list(g.relations["E"]) + [("a3", "a1")])
    assert extends_to(g2, ("a1", "a2"), H4, small)


def test_triangle_pattern_arities_and_agreement():
    h = SubgraphPattern(("x", "y", "z"), {("x", "y"), ("y", "z"), ("x", "z")})
    p = compile_pattern(h)
    assert set(p.aux_schema.relations.values()) == {0, 1, 2}
    f = h.sentence()
    assert difftest(p, f, 5, 100, 12, 0).ok


def test_compiled_triangle_agrees_with_builtin():
    f = parse_formula(TRIANGLE)
    assert difftest(compile_semipositive(f), f, 5, 100, 12, 1).ok
    assert difftest(three_clique(), f, 5, 100, 12, 1).ok


def test_single_edge_pattern():
    h = SubgraphPattern(("x", "y"), {("x", "y")})
    p = compile_pattern(h)
    s = init_state(p, graph("abc", []))
    assert not s.query_answer()
    from dynlab.core import ins

    s = step(p, s, ins("E", "a", "b"))
    assert s.query_answer()
    s = step(p, s, ins("E", "c", "c"))
    assert s.query_answer()


def test_four_node_pattern_difftest():
    assert difftest(compile_pattern(H4), H4.sentence(), 5, 100, 10, 0).ok


def test_clique_arities():
    assert compile_semipositive(clique_sentence(3)).arity == 2
    p4 = compile_semipositive(clique_sentence(4))
    assert p4.arity == 3
    assert difftest(p4, clique_sentence(4), 5, 40, 12, 0).ok


def test_self_loop_sentence_is_nullary():
    f = parse_formula("exists x. E(x,x)")
    p = compile_semipositive(f)
    assert p.arity == 0
    assert difftest(p, f, 4, 100, 8, 0).ok


def test_constants_and_free_variables_unsupported():
    with pytest.raises(UnsupportedFormula):
        compile_semipositive(parse_formula("exists x. E(s,x)", ("s",)))
    with pytest.raises(UnsupportedFormula):
        compile_semipositive(clique_sentence(3), free=("x",))


def test_empty_pattern_is_constant_true():
    p = compile_pattern(SubgraphPattern((), frozenset()))
    assert init_state(p, graph("a", [])).query_answer()


def test_relation_names():
    assert relation_name(()) == "R0"
    assert relation_name(("x1", "x3"), "H1_") == "H1_R_x1_x3"


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_aux_relations_track_extension_semantics(seed):
    # every R_(y) equals the brute-force extension relation after each insertion
    h = H4
    p = compile_pattern(h)
    rng = random.Random(seed)
    dom = tuple(range(5))
    s = init_state(p, graph(dom, []))
    for m in random_modifications(rng, p.input_schema, [("ins", "E")], dom, 6):
        s = step(p, s, m)
    for part in partitions(h):
        assert s.relation(relation_name(part.y)) == extension_relation(s.structure.reduct(p.input_schema), h, part)
