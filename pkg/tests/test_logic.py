import itertools
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynlab.core import FunctionTable, Schema, Structure, induced_substructure
from dynlab.logic import (
    And, App, Bool, Const, Eq, EvaluationError, Exists, Forall, Implies, Ite, Not, Or, ParseError, Rel, Var,
    compile_formula, compile_relation, compile_term, depth, enumerate_terms, eval_formula, eval_term,
    format_formula, format_term, free_vars, parse_formula, parse_term, quantifier_free, query_relation,
    static_eval,
)

CORPUS = Path(__file__).parent / "data" / "parse_corpus.txt"
CORPUS_CONSTANTS = ("s", "t", "c", "Max", "zero")
GRAPH = Schema({"E": 2})


def corpus_lines():
    for line in CORPUS.read_text().splitlines():
        if line.startswith("#") or not line:
            continue
        text, printed = line.split("\t")
        yield text, printed


@pytest.mark.parametrize("text,printed", list(corpus_lines()))
def test_golden_parse_corpus(text, printed):
    f = parse_formula(text, CORPUS_CONSTANTS)
    assert format_formula(f) == printed
    assert parse_formula(printed, CORPUS_CONSTANTS) == f


@pytest.mark.parametrize(
    "text,line,column",
    [
        ("E(x,", 1, 5),
        ("E(x,y) &\n  & E(y,x)", 2, 3),
        ("exists . E(x,x)", 1, 8),
        ("E(x,y) $ E(y,x)", 1, 8),
        ("E(x,y))", 1, 7),
    ],
)
def test_parse_errors_have_positions(text, line, column):
    with pytest.raises(ParseError) as err:
        parse_formula(text)
    assert (err.value.line, err.value.column) == (line, column)


def test_brace_sugar_is_symmetric_edge():
    assert parse_formula("E{x,y}") == Or((Rel("E", (Var("x"), Var("y"))), Rel("E", (Var("y"), Var("x")))))


def test_constants_versus_variables():
    assert parse_term("f(c, x)", ("c",)) == App("f", (Const("c"), Var("x")))


def test_term_round_trip_with_ite():
    t = parse_term("ite(E(u,v) & x = u, Pred(#edges(x)), #edges(x))")
    assert parse_term(format_term(t)) == t


def test_ite_picks_first_branch_on_true():
    s = Structure("ab", GRAPH)
    assert eval_term(s, Ite(Bool(True), Var("x"), Var("y")), {"x": "a", "y": "b"}) == "a"


def test_succ_pred_clamped():
    dom = tuple(range(4))
    sch = Schema({}, functions={"Succ": 1, "Pred": 1})
    s = Structure(dom, sch, functions={
        "Succ": {(i,): min(i + 1, 3) for i in dom},
        "Pred": {(i,): max(i - 1, 0) for i in dom},
    })
    assert eval_term(s, parse_term("Succ(Pred(x))"), {"x": 0}) == 1


def test_zero_ary_function_is_its_interpretation():
    s = Structure("ab", Schema({}, frozenset({"Max"})), constants={"Max": "b"})
    assert eval_term(s, Const("Max"), {}) == "b"


def test_unbound_variable_is_an_error():
    with pytest.raises(EvaluationError):
        eval_formula(Structure("a", GRAPH), parse_formula("E(x,y)"), {"x": "a"})


def test_equality_of_same_element():
    assert eval_formula(Structure("a", GRAPH), parse_formula("x = y"), {"x": "a", "y": "a"})


TRIANGLE = "exists x1 x2 x3. x1 != x2 & x1 != x3 & x2 != x3 & E{x1,x2} & E{x2,x3} & E{x1,x3}"


def test_triangle_sentence():
    tri = Structure("abc", GRAPH, {"E": [("a", "b"), ("b", "c"), ("c", "a")]})
    path = Structure("abc", GRAPH, {"E": [("a", "b"), ("b", "c")]})
    f = parse_formula(TRIANGLE)
    assert static_eval(tri, f) and not static_eval(path, f)
    assert static_eval(tri, f, compiled=False) and not static_eval(path, f, compiled=False)


def test_static_eval_rejects_free_variables():
    with pytest.raises(EvaluationError):
        static_eval(Structure("a", GRAPH), parse_formula("E(x,x)"))


def test_loop_sentence_on_loop_free_graph():
    assert not static_eval(Structure("ab", GRAPH, {"E": [("a", "b")]}), parse_formula("exists x. E(x,x)"))


def test_update_formula_holds_at_a_completing_tuple():
    from dynlab.builtins import three_clique

    p = three_clique()
    g = Structure(["a1", "a2", "a3", "a4", "a5"], GRAPH, {"E": [("a2", "a3"), ("a3", "a4"), ("a1", "a5")]})
    body = next(r.body for r in p.rules.values() if r.symbol == "R")
    # the carried-over R disjunct is false here, the guarded case applies
    s = Structure(g.domain, p.schema, {"E": g.relations["E"], "R": [("a2", "a4"), ("a4", "a2")]})
    assert eval_formula(s, body, {"u": "a2", "v": "a5", "x": "a1", "y": "a2"})


def test_query_relation():
    s = Structure("abc", GRAPH, {"E": [("a", "b"), ("b", "c")]})
    assert query_relation(s, parse_formula("exists z. E(x,z)"), ("x",)) == {("a",), ("b",)}


def test_enumerate_terms_depth_zero():
    sch = Schema({}, frozenset({"c"}))
    assert enumerate_terms(sch, ["x"], 0) == [Var("x"), Const("c")]


def test_enumerate_terms_depth_one():
    sch = Schema({}, frozenset({"c"}), {"f": 1})
    assert enumerate_terms(sch, ["x"], 1) == [Var("x"), Const("c"), App("f", (Var("x"),)), App("f", (Const("c"),))]


def test_enumerate_terms_counts():
    sch = Schema({}, functions={"f": 1})
    assert len(enumerate_terms(sch, ["x"], 2)) == 3


@pytest.mark.parametrize("m", [0, 1, 2])
def test_enumerate_terms_monotone(m):
    sch = Schema({}, frozenset({"c"}), {"f": 1, "g": 2})
    small, big = enumerate_terms(sch, ["x", "y"], m), enumerate_terms(sch, ["x", "y"], m + 1)
    assert set(small) <= set(big)
    assert all(depth(t) <= m for t in small)
    assert len(set(big)) == len(big)


# --- random formulas: compiled vs interpreted, locality --------------------------------

SCHEMA = Schema({"E": 2, "U": 1, "P": 0}, frozenset({"c"}), {"f": 1})
VARS = ["x", "y", "z"]


def terms(depth_left):
    leaves = st.sampled_from([Var(v) for v in VARS] + [Const("c")])
    if depth_left == 0:
        return leaves
    return st.one_of(leaves, terms(depth_left - 1).map(lambda t: App("f", (t,))))


def formulas(depth_left, quantifiers=True):
    atoms = st.one_of(
        st.tuples(terms(1), terms(1)).map(lambda p: Rel("E", p)),
        terms(1).map(lambda t: Rel("U", (t,))),
        st.just(Rel("P", ())),
        st.tuples(terms(1), terms(1)).map(lambda p: Eq(*p)),
        st.booleans().map(Bool),
    )
    if depth_left == 0:
        return atoms
    sub = formulas(depth_left - 1, quantifiers)
    options = [
        atoms,
        sub.map(Not),
        st.tuples(sub, sub).map(lambda p: And(p)),
        st.tuples(sub, sub).map(lambda p: Or(p)),
        st.tuples(sub, sub).map(lambda p: Implies(*p)),
        st.tuples(sub, terms(0), terms(0)).map(lambda p: Eq(Ite(p[0], p[1], p[2]), Var("x"))),
    ]
    if quantifiers:
        options += [
            st.tuples(st.sampled_from(VARS), sub).map(lambda p: Exists(p[0], p[1])),
            st.tuples(st.sampled_from(VARS), sub).map(lambda p: Forall(p[0], p[1])),
        ]
    return st.one_of(*options)


@st.composite
def structures(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    dom = list(range(n))
    pairs = list(itertools.product(dom, repeat=2))
    e = draw(st.lists(st.sampled_from(pairs), max_size=8))
    u = draw(st.lists(st.sampled_from(dom), max_size=n))
    p = draw(st.booleans())
    f = draw(st.lists(st.sampled_from(dom), min_size=n, max_size=n))
    c = draw(st.sampled_from(dom))
    return Structure(dom, SCHEMA, {"E": e, "U": [(x,) for x in u], "P": [()] if p else []},
                     {"f": FunctionTable({(i,): f[i] for i in dom}, dom[0])}, constants={"c": c})


@settings(max_examples=200, deadline=None)
@given(structures(), formulas(3), st.data())
def test_codegen_agrees_with_interpreter(s, f, data):
    a = {v: data.draw(st.sampled_from(s.domain)) for v in VARS}
    fn = compile_formula(f, tuple(VARS))
    assert fn(s, *[a[v] for v in VARS]) == eval_formula(s, f, a)


@settings(max_examples=100, deadline=None)
@given(structures(), terms(3), st.data())
def test_codegen_terms_agree(s, t, data):
    a = {v: data.draw(st.sampled_from(s.domain)) for v in VARS}
    assert compile_term(t, tuple(VARS))(s, *[a[v] for v in VARS]) == eval_term(s, t, a)


@settings(max_examples=60, deadline=None)
@given(structures(3), formulas(2))
def test_compiled_relation_matches_query_relation(s, f):
    rel = compile_relation(f, (), tuple(VARS))(s, ())
    assert rel == query_relation(s, f, tuple(VARS))


@settings(max_examples=150, deadline=None)
@given(structures(5), formulas(3, quantifiers=False), st.data())
def test_quantifier_free_formulas_are_local(s, f, data):
    assert quantifier_free(f)
    a = {v: data.draw(st.sampled_from(s.domain)) for v in VARS}
    # close the evaluation context under f so terms of depth <= 1 stay inside
    keep = set(a.values()) | {s.constant("c")}
    while True:
        more = {s.apply("f", (e,)) for e in keep} - keep
        if not more:
            break
        keep |= more
    sub = induced_substructure(s, keep)
    assert eval_formula(sub, f, a) == eval_formula(s, f, a)


@settings(max_examples=100, deadline=None)
@given(structures(6), formulas(2, quantifiers=False), st.data())
def test_exists_is_a_disjunction(s, f, data):
    a = {v: data.draw(st.sampled_from(s.domain)) for v in VARS}
    want = any(eval_formula(s, f, {**a, "x": e}) for e in s.domain)
    assert eval_formula(s, Exists("x", f), a) == want


def test_free_vars():
    assert free_vars(parse_formula("exists x. E(x,y) & f(z) = c", ("c",))) == {"y", "z"}
