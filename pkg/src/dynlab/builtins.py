"""Hand-written programs: the binary 3-clique program and the max-outdegree DynQF program."""

from __future__ import annotations

import itertools

from .core import FunctionTable, Schema, Structure
from .engine import DynamicProgram, Initializer, Rule, register_initializer
from .logic import parse_formula, parse_term

GRAPH = Schema({"E": 2})

TRIANGLE = "exists x y z. x != y & x != z & y != z & E{x,y} & E{y,z} & E{x,z}"

# Pairs (x, y) whose insertion would complete a triangle.
_R_DEFINITION = "x != y & exists z. z != x & z != y & E{x,z} & E{y,z}"

# Literal form: R is overwritten on every insertion and unguarded against u = y etc.
_R_AS_WRITTEN = (
    "u != v & x != y & ((E{u,y} & v = x) | (E{u,x} & v = y) | (E{v,y} & u = x) | (E{v,x} & u = y))"
)
_R_FIXED = (
    "R(x,y) | (u != v & x != y & ((E{u,y} & v = x & u != y) | (E{u,x} & v = y & u != x)"
    " | (E{v,y} & u = x & v != y) | (E{v,x} & u = y & v != x)))"
)


def three_clique(as_written: bool = False) -> DynamicProgram:
    """Binary insertion-only DynProp program for "the graph contains a 3-clique".

    ``as_written=True`` gives the literal rule without the ``R(x,y) |``
    carry-over and the self-loop guards; it is kept as a negative exhibit.
    """
    body = parse_formula(_R_AS_WRITTEN if as_written else _R_FIXED)
    rules = [
        Rule("R", "ins", "E", ("u", "v"), ("x", "y"), body),
        Rule("Q", "ins", "E", ("u", "v"), (), parse_formula("Q | R(u,v)")),
    ]
    init = Initializer(
        "static-bruteforce",
        {"definitions": {"R": [["x", "y"], _R_DEFINITION], "Q": [[], TRIANGLE]}},
    )
    return DynamicProgram(
        "three-clique-as-written" if as_written else "three-clique",
        GRAPH,
        Schema({"R": 2, "Q": 0}),
        rules,
        init,
        "Q",
        {("ins", "E")},
    )


# --- max outdegree ------------------------------------------------------------------

_MAXDEG_CONSTANTS = ("zero", "one", "Max")

_INS = {
    "#edges": "ite(!E(u,v) & x = u, Succ(#edges(x)), #edges(x))",
    "#nodes": (
        "ite(!E(u,v) & x = #edges(u), Pred(#nodes(x)),"
        " ite(!E(u,v) & x = Succ(#edges(u)), Succ(#nodes(x)), #nodes(x)))"
    ),
    "Max": "ite(Max = #edges(u) & !E(u,v), Succ(Max), Max)",
}
_MAX_AS_WRITTEN = "ite(Max = #edges(u) & !E(u,v), Succ(u), Max)"

# Deletion terms are not printed; these are the mirror images of the insertion terms.
# Max only drops when u was the unique node of maximal outdegree.
_DEL = {
    "#edges": "ite(E(u,v) & x = u, Pred(#edges(x)), #edges(x))",
    "#nodes": (
        "ite(E(u,v) & x = #edges(u), Pred(#nodes(x)),"
        " ite(E(u,v) & x = Pred(#edges(u)), Succ(#nodes(x)), #nodes(x)))"
    ),
    "Max": "ite(E(u,v) & Max = #edges(u) & #nodes(Max) = one, Pred(Max), Max)",
}


def max_outdegree(as_written: bool = False) -> DynamicProgram:
    """Unary DynQF program maintaining the set of nodes of maximal outdegree.

    Elements double as numbers via the clamped Succ/Pred functions.  With
    ``as_written=True`` the insertion term for Max uses ``Succ(u)`` literally.
    """
    consts = _MAXDEG_CONSTANTS
    aux = Schema(
        {"Q": 1},
        frozenset(consts),
        {"Succ": 1, "Pred": 1, "#edges": 1, "#nodes": 1},
    )
    rules = []
    for kind, terms in (("ins", dict(_INS)), ("del", dict(_DEL))):
        if kind == "ins" and as_written:
            terms["Max"] = _MAX_AS_WRITTEN
        for sym in ("#edges", "#nodes"):
            rules.append(Rule(sym, kind, "E", ("u", "v"), ("x",), parse_term(terms[sym], consts)))
        rules.append(Rule("Max", kind, "E", ("u", "v"), (), parse_term(terms["Max"], consts)))
        q = f"{terms['#edges']} = {terms['Max']}"
        rules.append(Rule("Q", kind, "E", ("u", "v"), ("x",), parse_formula(q, consts)))
        for sym in ("Succ", "Pred"):
            rules.append(Rule(sym, kind, "E", ("u", "v"), ("x",), parse_term(f"{sym}(x)", consts)))
        for c in ("zero", "one"):
            rules.append(Rule(c, kind, "E", ("u", "v"), (), parse_term(c, consts)))
    return DynamicProgram(
        "max-outdegree-as-written" if as_written else "max-outdegree",
        GRAPH,
        aux,
        rules,
        Initializer("max-outdegree"),
        "Q",
        {("ins", "E"), ("del", "E")},
        logic="DynQF",
    )


def outdegrees(g: Structure) -> dict:
    deg = {a: 0 for a in g.domain}
    for a, _ in g.relations["E"]:
        deg[a] += 1
    return deg


def max_outdegree_nodes(g: Structure) -> frozenset:
    """From-scratch oracle: the query relation {(a,) | a has maximal outdegree}."""
    deg = outdegrees(g)
    top = max(deg.values(), default=0)
    return frozenset((a,) for a, d in deg.items() if d == top)


def counter_saturated(g: Structure) -> bool:
    """True when a count the program needs equals n and so cannot be represented.

    Either a node has outdegree n, or all n nodes share one outdegree i >= 1.
    Saturation of the node counter at 0 (e.g. the empty graph) is harmless:
    that counter only feeds back into itself.
    """
    n = len(g.domain)
    deg = outdegrees(g)
    if any(d >= n for d in deg.values()):
        return True
    values = set(deg.values())
    return len(values) == 1 and values != {0}


@register_initializer("max-outdegree")
def _init_max_outdegree(p, inp):
    dom = inp.domain
    n = len(dom)

    def num(i):
        return dom[min(i, n - 1)]

    succ = {(dom[i],): num(i + 1) for i in range(n)}
    pred = {(dom[i],): dom[max(i - 1, 0)] for i in range(n)}
    deg = outdegrees(inp)
    edges = {(a,): num(d) for a, d in deg.items()}
    hist = {}
    for d in deg.values():
        hist[d] = hist.get(d, 0) + 1
    nodes = {(dom[i],): num(hist.get(i, 0)) for i in range(n)}
    top = max(deg.values(), default=0)
    funs = {
        "Succ": FunctionTable(succ, dom[0]),
        "Pred": FunctionTable(pred, dom[0]),
        "#edges": FunctionTable(edges, dom[0]),
        "#nodes": FunctionTable(nodes, dom[0]),
        "zero": FunctionTable({(): dom[0]}, dom[0]),
        "one": FunctionTable({(): num(1)}, dom[0]),
        "Max": FunctionTable({(): num(top)}, dom[0]),
    }
    q = frozenset((a,) for a, d in deg.items() if num(d) == num(top))
    return {"Q": q}, funs


def empty_graph(n: int) -> Structure:
    return Structure(tuple(range(n)), GRAPH)


def graph(domain, edges) -> Structure:
    return Structure(tuple(domain), GRAPH, {"E": [tuple(e) for e in edges]})


def all_graphs(domain):
    """Every directed graph (self-loops included) over ``domain``; 2^(n^2) of them."""
    pairs = list(itertools.product(domain, repeat=2))
    for bits in range(2 ** len(pairs)):
        yield graph(domain, [p for i, p in enumerate(pairs) if bits >> i & 1])
