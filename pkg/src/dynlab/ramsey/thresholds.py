"""Exhaustively computed desk-scale thresholds.

``GUARANTEED_CLIQUE`` maps a schema tag and a domain size n to the largest
size g such that *every* structure over n ordered elements has an ordered
τ-clique of size g.  ``RAMSEY_2`` lists the exact 2-color graph Ramsey
numbers found by the exhaustive sweep.  Regenerate with
``python -m dynlab.ramsey.thresholds``; the tests recompute the cheap
entries and compare.
"""

from __future__ import annotations

import itertools

from ..core import Schema, Structure
from .combinatorics import exhaustive_sweep, ordered_tau_clique

SCHEMAS = {
    "unary1": Schema({"U": 1}),
    "unary2": Schema({"U": 1, "V": 1}),
    "graph": Schema({"E": 2}),
}

GUARANTEED_CLIQUE = {
    "unary1": {1: 1, 2: 1, 3: 2, 4: 2, 5: 3, 6: 3, 7: 4, 8: 4},
    "unary2": {1: 1, 2: 1, 3: 1, 4: 1, 5: 2, 6: 2},
    "graph": {1: 1, 2: 2, 3: 2},
}

# smallest n such that every 2-coloring of pairs has a monochromatic clique of the size
RAMSEY_2 = {2: 2, 3: 6}


def all_structures(schema: Schema, n: int):
    dom = tuple(range(n))
    slots = [(r, t) for r, ar in schema.relations.items() for t in itertools.product(dom, repeat=ar)]
    for bits in range(2 ** len(slots)):
        rels: dict = {r: [] for r in schema.relations}
        for i, (r, t) in enumerate(slots):
            if bits >> i & 1:
                rels[r].append(t)
        yield Structure(dom, schema, rels, check=False)


def guaranteed_clique(schema: Schema, n: int) -> int:
    """min over all structures of the largest ordered τ-clique (exhaustive)."""
    best = n
    for s in all_structures(schema, n):
        size = len(ordered_tau_clique(s, target=None))
        best = min(best, size)
        if best == 1:
            break
    return best


def ramsey_number(size: int, limit: int = 6) -> int | None:
    for n in range(size, limit + 1):
        if not exhaustive_sweep(n, 2, size)["clique_free"]:
            return n
    return None


def recompute() -> dict:
    out = {}
    for tag, table in GUARANTEED_CLIQUE.items():
        out[tag] = {n: guaranteed_clique(SCHEMAS[tag], n) for n in table}
    return {"guaranteed_clique": out, "ramsey_2": {s: ramsey_number(s) for s in RAMSEY_2}}


if __name__ == "__main__":  # pragma: no cover
    import json

    print(json.dumps(recompute(), indent=2, sort_keys=True))
