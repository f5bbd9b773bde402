"""Hyperedge colorings, monochromatic cliques and ordered τ-cliques."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from ..core import AtomicType, Structure, atomic_type


def tower(k: int, n: int) -> int:
    """tow_k(n): n under a stack of k-1 twos; tow_1(n) = n."""
    if k < 1:
        raise ValueError("k must be positive")
    v = n
    for _ in range(k - 1):
        v = 2**v
    return v


@dataclass(frozen=True)
class HyperedgeColoring:
    """Colors 1..r for the k-subsets of nodes 1..n (keys are sorted tuples)."""

    n: int
    k: int
    colors: dict
    palette: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "colors", dict(self.colors))
        if set(self.colors) != set(itertools.combinations(range(1, self.n + 1), self.k)):
            raise ValueError("a coloring must be total over all k-subsets")

    def __hash__(self):
        return hash((self.n, self.k, tuple(sorted(self.colors.items()))))

    def __call__(self, edge) -> int:
        return self.colors[tuple(sorted(edge))]

    @property
    def used(self) -> list[int]:
        return sorted(set(self.colors.values()))

    def max_monochromatic(self) -> int:
        """Size of the largest monochromatic clique."""
        size = min(self.k, self.n)
        while size < self.n and find_monochromatic_clique(self, size + 1) is not None:
            size += 1
        return size


def edges(n: int, k: int) -> list[tuple]:
    return list(itertools.combinations(range(1, n + 1), k))


def coloring_from_index(n: int, k: int, index: int) -> HyperedgeColoring:
    """2-coloring whose i-th k-subset (lex order) gets color 1 + bit i of ``index``."""
    es = edges(n, k)
    return HyperedgeColoring(n, k, {e: 1 + (index >> i & 1) for i, e in enumerate(es)})


def find_monochromatic_clique(c: HyperedgeColoring, size: int) -> tuple | None:
    """Lexicographically least node set of ``size`` whose k-subsets share one color."""
    n, k = c.n, c.k
    if size > n:
        return None
    colors = c.colors
    chosen: list[int] = []

    def ok(node: int, col):
        # all new k-subsets through ``node`` must have color ``col``
        for rest in itertools.combinations(chosen, k - 1):
            x = colors[rest + (node,)]
            if col is None:
                col = x
            elif x != col:
                return False, col
        return True, col

    def rec(start: int, col) -> bool:
        if len(chosen) == size:
            return True
        for node in range(start, n - (size - len(chosen)) + 2):
            good, ncol = ok(node, col)
            if not good:
                continue
            chosen.append(node)
            if rec(node + 1, ncol):
                return True
            chosen.pop()
        return False

    if rec(1, None):
        return tuple(chosen)
    return None


def verify_clique(c: HyperedgeColoring, nodes: Sequence[int]) -> bool:
    return len({c(e) for e in itertools.combinations(sorted(nodes), c.k)}) <= 1


def exhaustive_sweep(n: int, k: int, size: int, indices: Iterator[int] | None = None) -> dict:
    """Check every 2-coloring of [n]^k for a monochromatic clique of ``size``.

    Returns counts and the ordinals of colorings without such a clique.
    ``indices`` restricts the sweep to a slice (for splitting across workers).
    """
    total = 2 ** len(edges(n, k))
    idx = range(total) if indices is None else indices
    checked, free = 0, []
    for i in idx:
        checked += 1
        if find_monochromatic_clique(coloring_from_index(n, k, i), size) is None:
            free.append(i)
    return {"n": n, "k": k, "size": size, "colorings": total, "checked": checked, "clique_free": free}


def pentagon_coloring() -> HyperedgeColoring:
    """Pairs of a 5-cycle get color 1, the pentagram pairs color 2."""
    cyc = {(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)}
    return HyperedgeColoring(5, 2, {e: 1 if e in cyc else 2 for e in edges(5, 2)})


def search_antiramsey_coloring(
    n: int, k: int, size: int, seed: int, budget: int = 2000
) -> HyperedgeColoring | None:
    """Seeded local search for a 2-coloring of [n]^k with no monochromatic ``size``-clique.

    Only exactly verified colorings are returned.  ``size <= k`` is hopeless
    whenever n >= size (any ``size``-set is trivially monochromatic).
    """
    if size > n:
        return HyperedgeColoring(n, k, {e: 1 for e in edges(n, k)})
    if size <= k:
        return None
    rng = random.Random(f"antiramsey:{n}:{k}:{size}:{seed}")
    es = edges(n, k)
    tries = 0
    while tries < budget:
        colors = {e: rng.choice((1, 2)) for e in es}
        for _ in range(4 * len(es)):
            tries += 1
            c = HyperedgeColoring(n, k, colors)
            clique = find_monochromatic_clique(c, size)
            if clique is None:
                return c
            inner = list(itertools.combinations(clique, k))
            e = inner[rng.randrange(len(inner))]
            colors[e] = 3 - colors[e]
            if tries >= budget:
                break
    return None


# --- ordered τ-cliques -------------------------------------------------------------


def color_by_type(s: Structure, order: Sequence | None = None, k: int | None = None) -> HyperedgeColoring:
    """Color each k-set {e1 < ... < ek} (nodes = positions 1..n in ``order``) by its atomic type."""
    order = tuple(s.domain if order is None else order)
    k = s.schema.max_relation_arity() if k is None else k
    types: dict[tuple, AtomicType] = {}
    for idx in itertools.combinations(range(1, len(order) + 1), k):
        types[idx] = atomic_type(s, [order[i - 1] for i in idx])
    palette = tuple(sorted(set(types.values())))
    index = {t: i + 1 for i, t in enumerate(palette)}
    return HyperedgeColoring(len(order), k, {e: index[t] for e, t in types.items()}, palette)


def is_ordered_tau_clique(s: Structure, subset: Sequence, order: Sequence | None = None,
                          k: int | None = None) -> bool:
    order = tuple(s.domain if order is None else order)
    k = s.schema.max_relation_arity() if k is None else k
    pos = {e: i for i, e in enumerate(order)}
    elems = sorted(subset, key=pos.__getitem__)
    return len({atomic_type(s, t) for t in itertools.combinations(elems, k)}) <= 1


def ordered_tau_clique(
    s: Structure, order: Sequence | None = None, target: int | None = None, k: int | None = None
) -> tuple | None:
    """A subset of at least ``target`` elements whose ordered k-tuples share one atomic type.

    Returns the lexicographically least clique of exactly ``target`` elements
    (in ``order``), verified by direct type comparison; with ``target=None``
    the largest size that exists is used.
    """
    order = tuple(s.domain if order is None else order)
    k = s.schema.max_relation_arity() if k is None else k
    if k == 0:
        # the empty tuple is the only 0-tuple: every subset is a clique
        size = len(order) if target is None else target
        return order[:size] if size <= len(order) else None
    c = color_by_type(s, order, k)
    sizes = [target] if target is not None else range(len(order), 0, -1)
    for size in sizes:
        nodes = find_monochromatic_clique(c, size) if size >= k else tuple(range(1, size + 1))
        if nodes is not None:
            out = tuple(order[i - 1] for i in nodes)
            if not is_ordered_tau_clique(s, out, order, k):
                raise AssertionError("clique search and type comparison disagree")
            return out
    return None
