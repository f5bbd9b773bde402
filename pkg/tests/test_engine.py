import pytest

from dynlab.builtins import graph
from dynlab.compiler import clique_sentence, compile_semipositive
from dynlab.core import Schema, Structure, dele, ins
from dynlab.engine import (
    DynamicProgram, InitializationError, Initializer, ProgramError, Rule, UnsupportedModification, difftest,
    init_state, run, run_trace, step,
)
from dynlab.logic import Rel, Var, disj, parse_formula

GRAPH = Schema({"E": 2})
TRIANGLE = clique_sentence(3)


def swap_program():
    aux = Schema({"A": 0, "B": 0})
    rules = [
        Rule("A", "ins", "E", ("u", "v"), (), Rel("B", ())),
        Rule("B", "ins", "E", ("u", "v"), (), Rel("A", ())),
    ]
    init = Initializer("static-bruteforce", {"definitions": {"A": [[], "true"], "B": [[], "false"]}})
    return DynamicProgram("swap", GRAPH, aux, rules, init, "A", [("ins", "E")])


def test_updates_are_simultaneous():
    p = swap_program()
    s = init_state(p, graph("ab", []))
    t = step(p, s, ins("E", "a", "b"))
    assert t.relation("A") == frozenset() and t.relation("B") == {()}
    assert step(p, t, ins("E", "a", "b")).relation("A") == {()}


def test_rule_table_must_be_complete():
    aux = Schema({"A": 0, "B": 0})
    rules = [Rule("A", "ins", "E", ("u", "v"), (), Rel("B", ()))]
    with pytest.raises(ProgramError, match="missing"):
        DynamicProgram("bad", GRAPH, aux, rules, Initializer("empty"), "A", [("ins", "E")])


def test_free_variables_checked():
    aux = Schema({"A": 0})
    rules = [Rule("A", "ins", "E", ("u", "v"), (), parse_formula("E(u,w)"))]
    with pytest.raises(ProgramError, match="free variables"):
        DynamicProgram("bad", GRAPH, aux, rules, Initializer("empty"), "A", [("ins", "E")])


def test_dynprop_rules_quantifier_free():
    aux = Schema({"A": 0})
    rules = [Rule("A", "ins", "E", ("u", "v"), (), parse_formula("exists w. E(u,w)"))]
    with pytest.raises(ProgramError, match="quantifier-free"):
        DynamicProgram("bad", GRAPH, aux, rules, Initializer("empty"), "A", [("ins", "E")])
    DynamicProgram("ok", GRAPH, aux, rules, Initializer("empty"), "A", [("ins", "E")], logic="DynFO")


def test_dynprop_has_no_functions():
    aux = Schema({"A": 0}, frozenset({"c"}))
    rules = [
        Rule("A", "ins", "E", ("u", "v"), (), Rel("A", ())),
        Rule("c", "ins", "E", ("u", "v"), (), Var("u")),
    ]
    with pytest.raises(ProgramError):
        DynamicProgram("bad", GRAPH, aux, rules, Initializer("empty"), "A", [("ins", "E")])
    DynamicProgram("ok", GRAPH, aux, rules, Initializer("empty"), "A", [("ins", "E")], logic="DynQF")


def test_unknown_initializer():
    p = DynamicProgram("p", GRAPH, Schema({"A": 0}), [Rule("A", "ins", "E", ("u", "v"), (), Rel("A", ()))],
                       Initializer("nope"), "A", [("ins", "E")])
    with pytest.raises(InitializationError):
        init_state(p, graph("a", []))


def test_compiled_triangle_initially_true_on_k3():
    p = compile_semipositive(TRIANGLE)
    assert init_state(p, graph("abc", [("a", "b"), ("b", "c"), ("a", "c")])).query_answer() is True


def test_compiled_triangle_on_empty_graph_is_all_empty():
    p = compile_semipositive(TRIANGLE)
    s = init_state(p, graph("abcd", []))
    assert all(not s.relation(r) for r in p.aux_schema.relations)


def test_run_empty_sequence_is_identity():
    p = compile_semipositive(TRIANGLE)
    s = init_state(p, graph("abc", []))
    assert run(p, s, []) == s


def test_run_builds_a_triangle():
    p = compile_semipositive(TRIANGLE)
    s = init_state(p, graph("abc", []))
    ms = [ins("E", "a", "b"), ins("E", "b", "c"), ins("E", "a", "c")]
    assert run(p, s, ms[:2]).query_answer() is False
    assert run(p, s, ms).query_answer() is True


def test_deletion_rejected_with_index():
    p = compile_semipositive(TRIANGLE)
    s = init_state(p, graph("abc", []))
    with pytest.raises(UnsupportedModification) as err:
        run(p, s, [ins("E", "a", "b"), dele("E", "a", "b")])
    assert err.value.index == 1


def test_modifiable_elements_enforced():
    p = swap_program()
    p.modifiable = frozenset("a")
    s = init_state(p, graph("ab", []))
    step(p, s, ins("E", "a", "a"))
    with pytest.raises(UnsupportedModification):
        step(p, s, ins("E", "a", "b"))


def test_trace_records_deltas():
    p = swap_program()
    _, recs = run_trace(p, init_state(p, graph("ab", [])), [ins("E", "a", "b")])
    assert str(recs[0]) == "0\tins E a b\tQ=0\t-A() +B()"


def test_difftest_is_deterministic():
    p = compile_semipositive(TRIANGLE)
    a = difftest(p, TRIANGLE, 4, 20, 6, 3)
    b = difftest(p, TRIANGLE, 4, 20, 6, 3)
    assert a.to_dict() == b.to_dict() and a.ok


def test_difftest_length_zero_checks_initialization_only():
    p = compile_semipositive(TRIANGLE)
    r = difftest(p, TRIANGLE, 4, 10, 0, 0)
    assert r.checks == 10 and r.ok


def test_difftest_catches_a_dropped_disjunct():
    # mutation control: drop the case where the new edge closes an (x1,x2) witness
    p = compile_semipositive(TRIANGLE)
    key = ("Q", "ins", "E")
    r = p.rules[key]
    rules = dict(p.rules)
    rules[key] = Rule(r.symbol, r.kind, r.relation, r.mod_vars, r.tuple_vars, disj(r.body.args[0], *r.body.args[2:]))
    broken = DynamicProgram("broken", p.input_schema, p.aux_schema, rules, p.initializer, p.query, p.supported)
    assert not difftest(broken, TRIANGLE, 5, 100, 12, 0).ok


def test_insertion_only_monotone():
    p = compile_semipositive(TRIANGLE)
    from dynlab.engine import random_modifications
    import random

    rng = random.Random(0)
    s = init_state(p, graph(range(5), []))
    seen = False
    for m in random_modifications(rng, GRAPH, [("ins", "E")], range(5), 30):
        s = step(p, s, m)
        seen = seen or s.query_answer()
        assert s.query_answer() == seen
