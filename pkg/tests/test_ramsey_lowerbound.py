import pytest

from dynlab.core import DynlabError, find_isomorphism, induced_substructure, ins
from dynlab.logic import parse_formula, static_eval
from dynlab.ramsey.lowerbound import (
    EAFO_SENTENCE, build_lowerbound_instance, completion_sequence, disparity, lowerbound_demo, query_for,
    run_input,
)

A3 = ("a1", "a2", "a3")


def test_clique_instance():
    inst = build_lowerbound_instance(A3, [("a1", "a2")], 1)
    assert inst.structure.relations["E"] == {("c_a1a2", "a1"), ("c_a1a2", "a2")}
    assert len(inst.structure.domain) - 3 == 3
    assert inst.B_prime == (("a1", "a3"), ("a2", "a3"))


def test_empty_b_is_edgeless():
    inst = build_lowerbound_instance(A3, [], 1)
    assert not inst.structure.relations["E"]


def test_eafo_instance_adds_source_edges():
    inst = build_lowerbound_instance(A3, [("a1", "a2")], 1, "eafo")
    assert ("s", "c_a1a2") in inst.structure.relations["E"]
    assert inst.structure.constant("s") == "s" and inst.structure.constant("t") == "t"


def test_b_must_be_subsets():
    with pytest.raises(DynlabError):
        build_lowerbound_instance(A3, [("a1",)], 1)


def test_completion_sequences():
    assert completion_sequence(("b1", "b2", "b3"), ("b1", "b2", "b3")) == [
        ins("E", "b1", "b2"), ins("E", "b1", "b3"), ins("E", "b2", "b3")
    ]
    assert completion_sequence(("b1",), ("b1",)) == []
    assert completion_sequence(("b2", "b1"), ("b1", "b2"), "eafo") == [ins("E", "b1", "t"), ins("E", "b2", "t")]


def test_alpha_beta_separate_the_queries():
    A = tuple(f"a{i}" for i in range(1, 6))
    B = [("a1", "a2"), ("a3", "a4")]
    for variant in ("clique", "eafo"):
        inst = build_lowerbound_instance(A, B, 1, variant)
        q = query_for(inst)
        assert static_eval(run_input(inst.structure, completion_sequence(("a1", "a2"), A, variant)), q)
        assert not static_eval(run_input(inst.structure, completion_sequence(("a1", "a3"), A, variant)), q)


def test_eafo_sentence_parses_with_constants():
    parse_formula(EAFO_SENTENCE, ("s", "t"))


def test_pre_modification_substructures_isomorphic():
    A = tuple(f"a{i}" for i in range(1, 6))
    inst = build_lowerbound_instance(A, [("a1", "a2")], 1)
    s = inst.structure
    iso = find_isomorphism(induced_substructure(s, ["a1", "a2"]), induced_substructure(s, ["a3", "a4"]),
                           fixed={"a1": "a3", "a2": "a4"})
    assert iso == {"a1": "a3", "a2": "a4"}


def test_disparity_small():
    d = disparity(1, 5, 0)
    assert d["guaranteed"] == 3
    assert d["max_monochromatic"] < 3


@pytest.mark.parametrize("variant", ["clique", "eafo"])
def test_lowerbound_demo(variant):
    r = lowerbound_demo(variant)
    assert r.isomorphism is not None
    assert r.answer_alpha and not r.answer_beta
    assert r.strawman_alpha == r.strawman_beta
    assert r.ok
    if variant == "clique":
        # the binary compiled program does tell the two apart
        assert r.compiled_alpha and not r.compiled_beta


def test_lowerbound_demo_is_deterministic():
    assert lowerbound_demo("clique", seed=3).trace == lowerbound_demo("clique", seed=3).trace
