import itertools

from hypothesis import given, settings, strategies as st

from dynlab.builtins import graph
from dynlab.core import Schema, Structure, atomic_type
from dynlab.ramsey import (
    HyperedgeColoring, color_by_type, coloring_from_index, exhaustive_sweep, find_monochromatic_clique,
    is_ordered_tau_clique, ordered_tau_clique, pentagon_coloring, search_antiramsey_coloring, tower, verify_clique,
)
from dynlab.ramsey.combinatorics import edges
from dynlab.ramsey.thresholds import GUARANTEED_CLIQUE, RAMSEY_2, SCHEMAS, guaranteed_clique


def test_tower():
    assert tower(1, 5) == 5
    assert tower(2, 3) == 8
    assert tower(3, 2) == 16


def test_color_by_type_unary():
    s = Structure(range(5), Schema({"U": 1}), {"U": [(1,), (3,)]})
    c = color_by_type(s)
    assert len(c.used) == 2
    assert {c((i + 1,)) for i in (1, 3)} != {c((i + 1,)) for i in (0, 2, 4)}


def test_color_by_type_empty_relations_is_monochromatic():
    c = color_by_type(Structure(range(4), Schema({"E": 2})))
    assert c.used == [1]


def test_color_by_type_pairs_on_a_fixed_graph():
    g = graph(range(4), [(0, 1), (1, 0), (1, 2), (3, 0)])
    c = color_by_type(g, k=2)
    # four pair patterns: both directions, forward, backward, none
    assert len(c.used) == 4
    assert c((2, 4)) == c((3, 4)) == c((1, 3))
    assert len({c((1, 2)), c((2, 3)), c((1, 4)), c((1, 3))}) == 4


def test_all_one_color_clique():
    c = HyperedgeColoring(4, 2, {e: 1 for e in edges(4, 2)})
    assert find_monochromatic_clique(c, 4) == (1, 2, 3, 4)


def test_pentagon_has_no_triangle():
    c = pentagon_coloring()
    assert find_monochromatic_clique(c, 3) is None
    assert not any(verify_clique(c, t) for t in itertools.combinations(range(1, 6), 3))


def test_sweep_at_six_finds_triangles_everywhere():
    r = exhaustive_sweep(6, 2, 3)
    assert r["colorings"] == 2**15 and r["checked"] == 2**15
    assert r["clique_free"] == []


def test_sweep_slices_partition_the_work():
    total = 2**10
    a = exhaustive_sweep(5, 2, 3, range(0, total // 2))
    b = exhaustive_sweep(5, 2, 3, range(total // 2, total))
    assert sorted(a["clique_free"] + b["clique_free"]) == exhaustive_sweep(5, 2, 3)["clique_free"]
    # the pentagon and its complement are among them
    assert len(a["clique_free"] + b["clique_free"]) == 12


def test_antiramsey_search():
    c = search_antiramsey_coloring(5, 2, 3, seed=0)
    assert c is not None and find_monochromatic_clique(c, 3) is None
    assert search_antiramsey_coloring(6, 2, 3, seed=0, budget=300) is None
    assert search_antiramsey_coloring(4, 2, 2, seed=0) is None


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**10 - 1), st.integers(2, 5))
def test_found_cliques_verify(index, size):
    c = coloring_from_index(5, 2, index)
    clique = find_monochromatic_clique(c, size)
    if clique is not None:
        assert len(clique) == size and verify_clique(c, clique)
    else:
        assert not any(verify_clique(c, t) for t in itertools.combinations(range(1, 6), size))


def test_ordered_clique_empty_relations_is_whole_prefix():
    s = Structure(range(5), Schema({"E": 2}))
    assert ordered_tau_clique(s, target=3) == (0, 1, 2)
    assert ordered_tau_clique(s) == (0, 1, 2, 3, 4)


def test_ordered_clique_in_the_larger_u_class():
    s = Structure(range(6), Schema({"U": 1}), {"U": [(0,), (2,), (5,)]})
    out = ordered_tau_clique(s, target=3)
    assert out in ((0, 2, 5), (1, 3, 4))
    s = Structure(range(7), Schema({"U": 1}), {"U": [(0,), (2,), (5,)]})
    assert ordered_tau_clique(s) == (1, 3, 4, 6)


@settings(max_examples=25, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 4), st.integers(0, 4)), max_size=12))
def test_ordered_pairs_in_a_clique_share_their_type(es):
    s = graph(range(5), es)
    out = ordered_tau_clique(s)
    assert is_ordered_tau_clique(s, out)
    types = {atomic_type(s, t) for t in itertools.combinations(out, 2)}
    assert len(types) <= 1


def test_threshold_table_recomputes():
    for tag, table in GUARANTEED_CLIQUE.items():
        for n, g in table.items():
            if tag == "unary2" and n > 5:
                continue
            assert guaranteed_clique(SCHEMAS[tag], n) == g, (tag, n)


def test_ramsey_table():
    assert RAMSEY_2 == {2: 2, 3: 6}
    assert exhaustive_sweep(5, 2, 3)["clique_free"]
