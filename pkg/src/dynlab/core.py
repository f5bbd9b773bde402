"""Finite structures, atomic types, substructures, isomorphisms and modifications.

Elements are plain hashable Python values (``str`` or ``int`` in practice).
A domain is a tuple; its tuple order is the fixed element order used wherever
an order on the domain is needed.  Constants are stored as 0-ary functions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

Element = Hashable


class DynlabError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(DynlabError):
    pass


class MalformedModification(DynlabError):
    pass


class NotClosedError(DynlabError):
    """Raised when an induced substructure would drop a constant or function value."""


@dataclass(frozen=True)
class Schema:
    relations: Mapping[str, int] = field(default_factory=dict)
    constants: frozenset[str] = frozenset()
    functions: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "relations", dict(sorted(self.relations.items())))
        object.__setattr__(self, "functions", dict(sorted(self.functions.items())))
        object.__setattr__(self, "constants", frozenset(self.constants))
        names = list(self.relations) + list(self.constants) + list(self.functions)
        if len(names) != len(set(names)):
            raise SchemaError(f"symbol names must be pairwise distinct: {sorted(names)}")
        for name, ar in itertools.chain(self.relations.items(), self.functions.items()):
            if ar < 0:
                raise SchemaError(f"negative arity for {name}")

    def __hash__(self):
        return hash((tuple(self.relations.items()), self.constants, tuple(self.functions.items())))

    @property
    def symbols(self) -> set[str]:
        return set(self.relations) | set(self.constants) | set(self.functions)

    def function_arities(self) -> dict[str, int]:
        """Functions including constants (as 0-ary functions)."""
        out = {c: 0 for c in self.constants}
        out.update(self.functions)
        return out

    def union(self, other: "Schema") -> "Schema":
        return Schema(
            {**self.relations, **other.relations},
            self.constants | other.constants,
            {**self.functions, **other.functions},
        )

    def max_relation_arity(self) -> int:
        return max(self.relations.values(), default=0)


@dataclass(frozen=True)
class FunctionTable:
    """A total function given by explicit points plus a default value."""

    table: Mapping[tuple, Element]
    default: Element

    def __post_init__(self):
        cleaned = {k: v for k, v in self.table.items() if v != self.default}
        object.__setattr__(self, "table", cleaned)

    def __call__(self, *args):
        return self.table.get(tuple(args), self.default)

    def __hash__(self):
        return hash((frozenset(self.table.items()), self.default))


def _same_function(f: FunctionTable, g: FunctionTable, domain, arity) -> bool:
    if f.default == g.default:
        return f.table == g.table
    return all(f(*p) == g(*p) for p in itertools.product(domain, repeat=arity))


class Structure:
    """An immutable finite structure over a schema.

    ``functions`` maps every function symbol *and* every constant symbol to a
    :class:`FunctionTable`; constants use the key ``()``.
    """

    __slots__ = ("domain", "schema", "relations", "functions", "_pos")

    def __init__(
        self,
        domain: Sequence[Element],
        schema: Schema,
        relations: Mapping[str, Iterable[tuple]] | None = None,
        functions: Mapping[str, FunctionTable | Mapping[tuple, Element]] | None = None,
        constants: Mapping[str, Element] | None = None,
        *,
        check: bool = True,
    ):
        self.domain = tuple(domain)
        self.schema = schema
        self._pos = {e: i for i, e in enumerate(self.domain)}
        if len(self._pos) != len(self.domain):
            raise SchemaError("domain elements must be pairwise distinct")
        relations = relations or {}
        self.relations = {
            name: frozenset(tuple(t) for t in relations.get(name, ())) for name in schema.relations
        }
        funs: dict[str, FunctionTable] = {}
        functions = dict(functions or {})
        for name, value in (constants or {}).items():
            functions[name] = {(): value}
        for name in schema.function_arities():
            if name not in functions:
                raise SchemaError(f"missing interpretation for function/constant {name}")
            f = functions[name]
            if not isinstance(f, FunctionTable):
                f = FunctionTable(dict(f), self.domain[0] if self.domain else None)
            funs[name] = f
        self.functions = funs
        if check:
            self._validate(relations, functions)

    def _validate(self, relations, functions):
        extra = (set(relations) - set(self.schema.relations)) | (
            set(functions) - set(self.schema.function_arities())
        )
        if extra:
            raise SchemaError(f"symbols not in schema: {sorted(extra)}")
        dom = self._pos
        for name, rel in self.relations.items():
            ar = self.schema.relations[name]
            for t in rel:
                if len(t) != ar:
                    raise SchemaError(f"tuple {t} has wrong arity for {name}/{ar}")
                for e in t:
                    if e not in dom:
                        raise SchemaError(f"tuple {t} of {name} leaves the domain")
        for name, ar in self.schema.function_arities().items():
            f = self.functions[name]
            for args, val in f.table.items():
                if len(args) != ar or any(a not in dom for a in args) or val not in dom:
                    raise SchemaError(f"bad point {args}->{val} for function {name}")
            total = len(self.domain) ** ar
            if len(f.table) < total and f.default not in dom:
                raise SchemaError(f"function {name} is not total over the domain")

    # --- access -----------------------------------------------------------
    def constant(self, name: str) -> Element:
        f = self.functions[name]
        return f.table.get((), f.default)

    @property
    def constants(self) -> dict[str, Element]:
        return {c: self.constant(c) for c in sorted(self.schema.constants)}

    def apply(self, name: str, args: Sequence[Element]) -> Element:
        return self.functions[name].table.get(tuple(args), self.functions[name].default)

    def holds(self, name: str, args: Sequence[Element]) -> bool:
        return tuple(args) in self.relations[name]

    def position(self, e: Element) -> int:
        return self._pos[e]

    def __contains__(self, e) -> bool:
        return e in self._pos

    def __len__(self) -> int:
        return len(self.domain)

    # --- derived values ---------------------------------------------------
    def replace(self, *, relations=None, functions=None, schema=None, domain=None) -> "Structure":
        rels = dict(self.relations)
        rels.update(relations or {})
        funs = dict(self.functions)
        funs.update(functions or {})
        return Structure(
            self.domain if domain is None else domain,
            self.schema if schema is None else schema,
            rels,
            funs,
            check=False,
        )

    def reduct(self, schema: Schema) -> "Structure":
        return Structure(
            self.domain,
            schema,
            {r: self.relations[r] for r in schema.relations},
            {f: self.functions[f] for f in schema.function_arities()},
            check=False,
        )

    def expand(self, schema: Schema, relations=None, functions=None) -> "Structure":
        """Add new symbols (from ``schema``) to this structure."""
        rels = dict(self.relations)
        rels.update(relations or {})
        funs = dict(self.functions)
        funs.update(functions or {})
        return Structure(self.domain, self.schema.union(schema), rels, funs)

    def reorder(self, order: Sequence[Element]) -> "Structure":
        if sorted(map(self._pos.get, order)) != list(range(len(self.domain))):
            raise SchemaError("order must be a permutation of the domain")
        return Structure(order, self.schema, self.relations, self.functions, check=False)

    def __eq__(self, other):
        if not isinstance(other, Structure):
            return NotImplemented
        if set(self.domain) != set(other.domain) or self.schema != other.schema:
            return False
        if self.relations != other.relations:
            return False
        ar = self.schema.function_arities()
        return all(
            _same_function(self.functions[f], other.functions[f], self.domain, ar[f]) for f in ar
        )

    def __hash__(self):
        return hash((frozenset(self.domain), tuple(sorted(self.relations.items(), key=lambda kv: kv[0]))))

    def __repr__(self):
        rels = ", ".join(f"{r}={sorted(t, key=repr)}" for r, t in self.relations.items())
        return f"Structure(domain={list(self.domain)}, {rels})"


@dataclass(frozen=True)
class Modification:
    kind: str  # "ins" | "del"
    relation: str
    tuple: tuple

    def __post_init__(self):
        if self.kind not in ("ins", "del"):
            raise MalformedModification(f"unknown modification kind {self.kind!r}")
        object.__setattr__(self, "tuple", tuple(self.tuple))

    def __str__(self):
        return " ".join([self.kind, self.relation, *map(str, self.tuple)])

    def mapped(self, pi: Mapping[Element, Element]) -> "Modification":
        return Modification(self.kind, self.relation, tuple(pi[e] for e in self.tuple))


def ins(relation: str, *tup) -> Modification:
    return Modification("ins", relation, tup)


def dele(relation: str, *tup) -> Modification:
    return Modification("del", relation, tup)


def check_modification(schema: Schema, domain_or_structure, m: Modification) -> None:
    if m.relation not in schema.relations:
        raise MalformedModification(f"unknown input relation {m.relation!r}")
    ar = schema.relations[m.relation]
    if len(m.tuple) != ar:
        raise MalformedModification(f"{m}: arity {len(m.tuple)} != {ar}")
    for e in m.tuple:
        if e not in domain_or_structure:
            raise MalformedModification(f"{m}: element {e!r} not in domain")


def apply_modification(db: Structure, m: Modification) -> Structure:
    """Apply an insertion or deletion; duplicate inserts and absent deletes are no-ops."""
    check_modification(db.schema, db, m)
    rel = db.relations[m.relation]
    new = rel | {m.tuple} if m.kind == "ins" else rel - {m.tuple}
    if new is rel or new == rel:
        return db
    return db.replace(relations={m.relation: new})


def apply_sequence(db: Structure, ms: Iterable[Modification]) -> Structure:
    for m in ms:
        db = apply_modification(db, m)
    return db


def induced_substructure(s: Structure, d: Iterable[Element]) -> Structure:
    d = set(d)
    missing = d - set(s.domain)
    if missing:
        raise NotClosedError(f"elements not in domain: {sorted(map(repr, missing))}")
    for c in s.schema.constants:
        if s.constant(c) not in d:
            raise NotClosedError(f"constant {c}={s.constant(c)!r} not in the subset")
    sub_domain = tuple(e for e in s.domain if e in d)
    funs = {}
    for name, ar in s.schema.function_arities().items():
        table = {}
        for args in itertools.product(sub_domain, repeat=ar):
            v = s.apply(name, args)
            if v not in d:
                raise NotClosedError(f"subset not closed under {name}: {name}{args}={v!r}")
            table[args] = v
        funs[name] = FunctionTable(table, sub_domain[0] if sub_domain else None)
    rels = {r: frozenset(t for t in ts if all(e in d for e in t)) for r, ts in s.relations.items()}
    return Structure(sub_domain, s.schema, rels, funs, check=False)


# --- atomic types ----------------------------------------------------------------


def _type_terms(schema: Schema, k: int) -> list[tuple]:
    return [("x", i) for i in range(1, k + 1)] + [("c", c) for c in sorted(schema.constants)]


def atom_candidates(schema: Schema, k: int) -> list[tuple]:
    """The fixed enumeration of atoms used for k-ary atomic types over ``schema``.

    Atoms are tuples: ``("R", name, terms)``, ``("=", t1, t2)`` and
    ``("f", name, args, value)`` where terms are ``("x", i)`` or ``("c", name)``.
    """
    terms = _type_terms(schema, k)
    atoms: list[tuple] = []
    for i, t1 in enumerate(terms):
        for t2 in terms[i + 1 :]:
            atoms.append(("=", t1, t2))
    for name, ar in schema.relations.items():
        for args in itertools.product(terms, repeat=ar):
            atoms.append(("R", name, args))
    for name, ar in schema.functions.items():
        if ar == 0:
            continue
        for args in itertools.product(terms, repeat=ar):
            for val in terms:
                atoms.append(("f", name, args, val))
    return atoms


def format_atom(atom: tuple) -> str:
    def term(t):
        return f"x{t[1]}" if t[0] == "x" else t[1]

    if atom[0] == "=":
        return f"{term(atom[1])}={term(atom[2])}"
    if atom[0] == "R":
        return f"{atom[1]}({','.join(map(term, atom[2]))})"
    return f"{atom[1]}({','.join(map(term, atom[2]))})={term(atom[3])}"


@dataclass(frozen=True, order=True)
class AtomicType:
    """The set of satisfied atoms, stored as a sorted tuple of their string forms."""

    atoms: tuple[str, ...]

    @property
    def key(self) -> str:
        return "{" + ", ".join(self.atoms) + "}"

    def __contains__(self, atom_text: str) -> bool:
        return atom_text in self.atoms

    def __str__(self):
        return self.key


def atomic_type(s: Structure, tup: Sequence[Element]) -> AtomicType:
    tup = tuple(tup)
    for e in tup:
        if e not in s:
            raise SchemaError(f"element {e!r} not in domain")
    k = len(tup)

    def val(t):
        return tup[t[1] - 1] if t[0] == "x" else s.constant(t[1])

    sat = []
    for atom in atom_candidates(s.schema, k):
        if atom[0] == "=":
            ok = val(atom[1]) == val(atom[2])
        elif atom[0] == "R":
            ok = tuple(val(t) for t in atom[2]) in s.relations[atom[1]]
        else:
            ok = s.apply(atom[1], [val(t) for t in atom[2]]) == val(atom[3])
        if ok:
            sat.append(format_atom(atom))
    return AtomicType(tuple(sorted(sat)))


# --- isomorphism -------------------------------------------------------------------


def is_isomorphism(a: Structure, b: Structure, pi: Mapping[Element, Element]) -> bool:
    """Check that ``pi`` is an isomorphism from ``a`` onto ``b``."""
    if a.schema != b.schema or len(a) != len(b):
        return False
    if set(pi) != set(a.domain) or set(pi.values()) != set(b.domain):
        return False
    for name, rel in a.relations.items():
        if {tuple(pi[e] for e in t) for t in rel} != b.relations[name]:
            return False
    for name, ar in a.schema.function_arities().items():
        for args in itertools.product(a.domain, repeat=ar):
            if pi[a.apply(name, args)] != b.apply(name, [pi[e] for e in args]):
                return False
    return True


def find_isomorphism(
    a: Structure, b: Structure, *, fixed: Mapping[Element, Element] | None = None
) -> dict | None:
    """Lexicographically least isomorphism from ``a`` to ``b`` (by domain order), or None.

    ``fixed`` pre-assigns some images.
    """
    if a.schema != b.schema:
        raise SchemaError("find_isomorphism needs structures over the same schema")
    if len(a) != len(b):
        return None
    if any(len(a.relations[r]) != len(b.relations[r]) for r in a.relations):
        return None
    pi: dict = {}
    for c in a.schema.constants:
        ca, cb = a.constant(c), b.constant(c)
        if pi.get(ca, cb) != cb:
            return None
        pi[ca] = cb
    for x, y in (fixed or {}).items():
        if pi.get(x, y) != y:
            return None
        pi[x] = y
    if len(set(pi.values())) != len(pi):
        return None

    # invariant: number of occurrences per relation/position, used for pruning
    def profile(s: Structure, e):
        return tuple(
            sum(1 for t in s.relations[r] if t[i] == e)
            for r in s.schema.relations
            for i in range(s.schema.relations[r])
        )

    prof_a = {e: profile(a, e) for e in a.domain}
    prof_b = {e: profile(b, e) for e in b.domain}
    if sorted(prof_a.values()) != sorted(prof_b.values()):
        return None
    index_a = {e: [] for e in a.domain}
    for r, rel in a.relations.items():
        for t in rel:
            for e in set(t):
                index_a[e].append((r, t))
    index_b = {e: [] for e in b.domain}
    for r, rel in b.relations.items():
        for t in rel:
            for e in set(t):
                index_b[e].append((r, t))
    fun_ar = a.schema.function_arities()

    def consistent(x, y) -> bool:
        if prof_a[x] != prof_b[y]:
            return False
        for r, t in index_a[x]:
            if all(e in pi for e in t) and tuple(pi[e] for e in t) not in b.relations[r]:
                return False
        inv = {v: k for k, v in pi.items()}
        for r, t in index_b[y]:
            if all(e in inv for e in t) and tuple(inv[e] for e in t) not in a.relations[r]:
                return False
        for name, ar in fun_ar.items():
            if ar == 0:
                continue
            for args in itertools.product(list(pi), repeat=ar):
                if x not in args:
                    continue
                va = a.apply(name, args)
                if va in pi and pi[va] != b.apply(name, [pi[e] for e in args]):
                    return False
        return True

    for x, y in list(pi.items()):
        del pi[x]
        if not consistent(x, y):
            return None
        pi[x] = y
    todo = [e for e in a.domain if e not in pi]

    def search(i: int) -> bool:
        if i == len(todo):
            return is_isomorphism(a, b, pi)
        x = todo[i]
        used = set(pi.values())
        for y in b.domain:
            if y in used or not consistent(x, y):
                continue
            pi[x] = y
            if search(i + 1):
                return True
            del pi[x]
        return False

    if search(0):
        return {e: pi[e] for e in a.domain}
    return None


def ordered(domain_order: Sequence[Element], elems: Iterable[Element]) -> tuple:
    pos = {e: i for i, e in enumerate(domain_order)}
    return tuple(sorted(elems, key=pos.__getitem__))


def ordered_tuples(elems: Sequence[Element], k: int) -> Iterator[tuple]:
    """All ≺-ordered k-tuples over ``elems`` (which must already be in order)."""
    return itertools.combinations(elems, k)
