"""Dynamic programs (DynProp / DynQF / DynFO) and their execution.

A program state is a single :class:`Structure` over the union of the input
and auxiliary schemas.  A step evaluates every update rule in the *old*
state and installs all results at once.
"""

from __future__ import annotations

import importlib
import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .core import (
    DynlabError, FunctionTable, Modification, Schema, SchemaError, Structure, apply_modification,
    check_modification,
)
from .logic import (
    App, Const, Formula, Rel, Term, Var, check_well_formed, compile_function, compile_relation,
    compile_term, free_vars, query_relation, quantifier_free, static_eval,
)

KINDS = ("ins", "del")
LOGICS = ("DynProp", "DynQF", "DynFO")


class ProgramError(DynlabError):
    """A malformed dynamic program."""


class UnsupportedModification(DynlabError):
    pass


class InitializationError(DynlabError):
    pass


@dataclass(frozen=True)
class Rule:
    """Update rule for ``symbol`` under modification ``kind`` of input relation ``relation``."""

    symbol: str
    kind: str
    relation: str
    mod_vars: tuple[str, ...]
    tuple_vars: tuple[str, ...]
    body: Formula | Term

    def __post_init__(self):
        object.__setattr__(self, "mod_vars", tuple(self.mod_vars))
        object.__setattr__(self, "tuple_vars", tuple(self.tuple_vars))

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.symbol, self.kind, self.relation)

    def is_identity(self) -> bool:
        args = tuple(Var(v) for v in self.tuple_vars)
        b = self.body
        if isinstance(b, Rel):
            return b.name == self.symbol and b.args == args
        if isinstance(b, App):
            return b.fun == self.symbol and b.args == args
        if isinstance(b, Const):
            return b.name == self.symbol and not args
        return False


@dataclass(frozen=True)
class Initializer:
    """A named, serializable initialization strategy."""

    name: str
    params: Mapping = field(default_factory=dict)

    def __hash__(self):
        return hash(self.name)


_INITIALIZERS: dict[str, Callable] = {}


def register_initializer(name: str):
    def deco(fn):
        _INITIALIZERS[name] = fn
        return fn

    return deco


def get_initializer(name: str) -> Callable:
    if name not in _INITIALIZERS:
        # construction-specific initializers live next to their constructions
        for mod in ("dynlab.builtins", "dynlab.padding"):
            importlib.import_module(mod)
    try:
        return _INITIALIZERS[name]
    except KeyError:
        raise InitializationError(f"unknown initializer {name!r}") from None


@dataclass(eq=False)
class DynamicProgram:
    name: str
    input_schema: Schema
    aux_schema: Schema
    rules: dict[tuple[str, str, str], Rule]
    initializer: Initializer
    query: str
    supported: frozenset[tuple[str, str]]
    logic: str = "DynProp"
    # elements that may occur in modifications (None: all)
    modifiable: frozenset | None = None

    def __post_init__(self):
        self.supported = frozenset(tuple(s) for s in self.supported)
        if not isinstance(self.rules, dict):
            self.rules = {r.key: r for r in self.rules}
        self._compiled: dict = {}
        self.validate()

    @property
    def schema(self) -> Schema:
        return self.input_schema.union(self.aux_schema)

    @property
    def arity(self) -> int:
        return self.aux_schema.max_relation_arity()

    @property
    def aux_symbols(self) -> list[str]:
        return sorted(self.aux_schema.symbols)

    def aux_arity(self, symbol: str) -> int:
        if symbol in self.aux_schema.relations:
            return self.aux_schema.relations[symbol]
        return self.aux_schema.function_arities()[symbol]

    def is_relation(self, symbol: str) -> bool:
        return symbol in self.aux_schema.relations

    def validate(self) -> None:
        if self.logic not in LOGICS:
            raise ProgramError(f"unknown logic {self.logic!r}")
        if self.query not in self.aux_schema.relations:
            raise ProgramError(f"query symbol {self.query!r} is not an aux relation")
        if set(self.input_schema.symbols) & set(self.aux_schema.symbols):
            raise ProgramError("input and auxiliary symbols overlap")
        if self.logic == "DynProp" and self.aux_schema.function_arities():
            raise ProgramError("DynProp programs have no auxiliary functions or constants")
        for kind, rel in self.supported:
            if kind not in KINDS or rel not in self.input_schema.relations:
                raise ProgramError(f"bad supported modification {kind} {rel}")
        schema = self.schema
        expected = {(s, k, r) for s in self.aux_symbols for k, r in self.supported}
        if set(self.rules) != expected:
            missing = sorted(expected - set(self.rules))
            extra = sorted(set(self.rules) - expected)
            raise ProgramError(f"rule table mismatch: missing {missing}, unexpected {extra}")
        for rule in self.rules.values():
            if len(rule.mod_vars) != self.input_schema.relations[rule.relation]:
                raise ProgramError(f"{rule.key}: wrong number of modification variables")
            if len(rule.tuple_vars) != self.aux_arity(rule.symbol):
                raise ProgramError(f"{rule.key}: wrong number of tuple variables")
            if len(set(rule.mod_vars + rule.tuple_vars)) != len(rule.mod_vars + rule.tuple_vars):
                raise ProgramError(f"{rule.key}: variable names must be distinct")
            if not free_vars(rule.body) <= set(rule.mod_vars + rule.tuple_vars):
                raise ProgramError(f"{rule.key}: free variables outside x and y")
            is_formula = not _is_term(rule.body)
            if self.is_relation(rule.symbol) != is_formula:
                raise ProgramError(f"{rule.key}: relations need formulas, functions need terms")
            try:
                check_well_formed(rule.body, schema)
            except SchemaError as e:
                raise ProgramError(f"{rule.key}: {e}") from None
            if self.logic != "DynFO" and not quantifier_free(rule.body):
                raise ProgramError(f"{rule.key}: {self.logic} rules must be quantifier-free")

    def compiled(self, rule: Rule):
        fn = self._compiled.get(rule.key)
        if fn is None:
            if self.is_relation(rule.symbol):
                fn = compile_relation(rule.body, rule.mod_vars, rule.tuple_vars)
            elif rule.tuple_vars:
                fn = compile_function(rule.body, rule.mod_vars, rule.tuple_vars)
            else:
                fn = compile_term(rule.body, rule.mod_vars)
            self._compiled[rule.key] = fn
        return fn


def _is_term(x) -> bool:
    from .logic import Ite

    return isinstance(x, (Var, Const, App, Ite))


@dataclass(frozen=True, eq=False)
class ProgramState:
    """(D, I, A) packed into one structure over input + aux schema."""

    program: DynamicProgram
    structure: Structure

    @property
    def domain(self):
        return self.structure.domain

    @property
    def input(self) -> Structure:
        return self.structure.reduct(self.program.input_schema)

    @property
    def aux(self) -> Structure:
        return self.structure.reduct(self.program.aux_schema)

    def relation(self, name: str) -> frozenset:
        return self.structure.relations[name]

    def query_answer(self):
        """Boolean for a 0-ary query symbol, else the query relation."""
        rel = self.structure.relations[self.program.query]
        if self.program.aux_schema.relations[self.program.query] == 0:
            return () in rel
        return rel

    def __eq__(self, other):
        return isinstance(other, ProgramState) and self.structure == other.structure


# --- initialization -------------------------------------------------------------


def init_state(p: DynamicProgram, inp: Structure) -> ProgramState:
    if inp.schema != p.input_schema:
        raise InitializationError("input structure does not match the program's input schema")
    fn = get_initializer(p.initializer.name)
    relations, functions = fn(p, inp, **dict(p.initializer.params))
    missing = set(p.aux_schema.relations) - set(relations)
    missing |= set(p.aux_schema.function_arities()) - set(functions)
    if missing:
        raise InitializationError(f"initializer left symbols undefined: {sorted(missing)}")
    structure = Structure(
        inp.domain,
        p.schema,
        {**inp.relations, **relations},
        {**inp.functions, **functions},
    )
    return ProgramState(p, structure)


def _default_functions(p: DynamicProgram, inp: Structure) -> dict:
    first = inp.domain[0] if inp.domain else None
    return {f: FunctionTable({}, first) for f in p.aux_schema.function_arities()}


@register_initializer("empty")
def _init_empty(p, inp):
    return {r: frozenset() for r in p.aux_schema.relations}, _default_functions(p, inp)


@register_initializer("static-bruteforce")
def _init_static(p, inp, definitions=None):
    """``definitions``: symbol -> [tuple_vars, formula text] over the input schema."""
    from .logic import parse_formula

    definitions = definitions or {}
    rels = {}
    consts = sorted(inp.schema.constants)
    for r in p.aux_schema.relations:
        if r not in definitions:
            rels[r] = frozenset()
            continue
        tuple_vars, text = definitions[r]
        rels[r] = query_relation(inp, parse_formula(text, consts), tuple_vars)
    return rels, _default_functions(p, inp)


@register_initializer("random")
def _init_random(p, inp, seed=0, density=0.3):
    rng = random.Random(f"init-random:{seed}")
    rels = {}
    for r, ar in p.aux_schema.relations.items():
        rels[r] = frozenset(
            t for t in itertools.product(inp.domain, repeat=ar) if rng.random() < density
        )
    funs = {}
    for f, ar in p.aux_schema.function_arities().items():
        table = {t: rng.choice(inp.domain) for t in itertools.product(inp.domain, repeat=ar)}
        funs[f] = FunctionTable(table, inp.domain[0])
    return rels, funs


# --- execution -------------------------------------------------------------------


def step(p: DynamicProgram, s: ProgramState, m: Modification) -> ProgramState:
    if (m.kind, m.relation) not in p.supported:
        raise UnsupportedModification(f"program {p.name!r} does not support {m.kind} {m.relation}")
    old = s.structure
    check_modification(p.input_schema, old, m)
    if p.modifiable is not None and any(e not in p.modifiable for e in m.tuple):
        raise UnsupportedModification(f"{m}: touches a non-modifiable element")
    new_rels = {}
    new_funs = {}
    for sym in p.aux_symbols:
        rule = p.rules[(sym, m.kind, m.relation)]
        if rule.is_identity():
            continue
        fn = p.compiled(rule)
        if p.is_relation(sym):
            new_rels[sym] = fn(old, m.tuple)
        elif rule.tuple_vars:
            new_funs[sym] = FunctionTable(fn(old, m.tuple), old.functions[sym].default)
        else:
            new_funs[sym] = FunctionTable({(): fn(old, *m.tuple)}, old.functions[sym].default)
    rel = old.relations[m.relation]
    new_rels[m.relation] = rel | {m.tuple} if m.kind == "ins" else rel - {m.tuple}
    return ProgramState(p, old.replace(relations=new_rels, functions=new_funs))


def run(p: DynamicProgram, s: ProgramState, ms: Iterable[Modification]) -> ProgramState:
    for i, m in enumerate(ms):
        try:
            s = step(p, s, m)
        except DynlabError as e:
            e.index = i
            e.args = (f"modification {i} ({m}): {e}",)
            raise
    return s


@dataclass(frozen=True)
class TraceRecord:
    index: int
    modification: Modification
    query: object
    deltas: tuple[str, ...]

    def __str__(self):
        q = _fmt_query(self.query)
        return f"{self.index}\t{self.modification}\tQ={q}\t{' '.join(self.deltas) or '-'}"


def _fmt_query(q) -> str:
    if isinstance(q, bool):
        return "1" if q else "0"
    return "{" + ",".join(" ".join(map(str, t)) for t in sorted(q, key=repr)) + "}"


def _fmt_tuple(t) -> str:
    return "(" + ",".join(map(str, t)) + ")"


def state_deltas(p: DynamicProgram, before: ProgramState, after: ProgramState) -> list[str]:
    out = []
    for sym in p.aux_symbols:
        if p.is_relation(sym):
            a, b = before.relation(sym), after.relation(sym)
            out += [f"+{sym}{_fmt_tuple(t)}" for t in sorted(b - a, key=repr)]
            out += [f"-{sym}{_fmt_tuple(t)}" for t in sorted(a - b, key=repr)]
        else:
            ar = p.aux_arity(sym)
            for args in itertools.product(before.domain, repeat=ar):
                x, y = before.structure.apply(sym, args), after.structure.apply(sym, args)
                if x != y:
                    out.append(f"{sym}{_fmt_tuple(args) if ar else ''}:{x}->{y}")
    return out


def run_trace(p: DynamicProgram, s: ProgramState, ms: Iterable[Modification]):
    """Like :func:`run`, returning the final state and one TraceRecord per step."""
    records = []
    for i, m in enumerate(ms):
        try:
            t = step(p, s, m)
        except DynlabError as e:
            e.index = i
            e.args = (f"modification {i} ({m}): {e}",)
            raise
        records.append(TraceRecord(i, m, t.query_answer(), tuple(state_deltas(p, s, t))))
        s = t
    return s, records


# --- differential testing -----------------------------------------------------------


@dataclass
class Mismatch:
    sequence: int
    prefix: int
    initial: list
    modifications: list[str]
    expected: object
    got: object

    def to_dict(self) -> dict:
        return {
            "sequence": self.sequence,
            "prefix": self.prefix,
            "initial": self.initial,
            "modifications": self.modifications,
            "expected": _jsonable(self.expected),
            "got": _jsonable(self.got),
        }


def _jsonable(v):
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    return sorted([list(t) for t in v], key=repr)


@dataclass
class DifftestReport:
    program: str
    n: int
    sequences: int
    length: int
    seed: int
    checks: int = 0
    excluded: int = 0
    noop_sequences: int = 0
    mismatches: list[Mismatch] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> dict:
        return {
            "program": self.program,
            "n": self.n,
            "sequences": self.sequences,
            "length": self.length,
            "seed": self.seed,
            "checks": self.checks,
            "excluded": self.excluded,
            "noop_sequences": self.noop_sequences,
            "mismatch_count": len(self.mismatches),
            "mismatches": [m.to_dict() for m in self.mismatches],
            **self.extra,
        }

    def summary(self) -> str:
        return (
            f"{self.program}: {self.sequences} sequences x {self.length}, n={self.n}, "
            f"{self.checks} checks, {self.excluded} excluded, {len(self.mismatches)} mismatches"
        )


def random_modifications(
    rng: random.Random,
    schema: Schema,
    supported: Sequence[tuple[str, str]],
    elements: Sequence,
    length: int,
    dup_rate: float = 0.25,
    ensure_repeat: bool = False,
) -> list[Modification]:
    """Pseudorandom modifications; about ``dup_rate`` of them repeat an earlier tuple.

    With ``ensure_repeat`` a sequence of length >= 2 without any repeat gets
    its last modification replaced by a copy of the first.
    """
    kinds = sorted(supported)
    seen: list[tuple[str, tuple]] = []
    out = []
    for _ in range(length):
        kind, rel = kinds[rng.randrange(len(kinds))]
        same = [t for r, t in seen if r == rel]
        if same and rng.random() < dup_rate:
            tup = same[rng.randrange(len(same))]
        else:
            tup = tuple(rng.choice(elements) for _ in range(schema.relations[rel]))
        seen.append((rel, tup))
        out.append(Modification(kind, rel, tup))
    if ensure_repeat and length >= 2 and len(set(seen)) == len(seen):
        out[-1] = out[0]
    return out


def random_input(rng: random.Random, schema: Schema, domain: Sequence, empty_rate=0.25,
                 constants: Mapping | None = None) -> Structure:
    rels = {}
    if rng.random() >= empty_rate:
        density = rng.choice((0.1, 0.2, 0.35, 0.5))
        for r, ar in schema.relations.items():
            rels[r] = [t for t in itertools.product(domain, repeat=ar) if rng.random() < density]
    return Structure(domain, schema, rels, constants=constants or {})


def difftest(
    p: DynamicProgram,
    oracle: Formula | Callable[[Structure], object],
    n: int,
    sequences: int,
    length: int,
    seed: int,
    *,
    taint: Callable[[Structure], bool] | None = None,
    domain: Sequence | None = None,
    elements: Sequence | None = None,
    make_input: Callable[[random.Random, Sequence], Structure] | None = None,
    on_state: Callable[[ProgramState], None] | None = None,
    max_mismatches: int = 20,
    ensure_repeat: bool = False,
) -> DifftestReport:
    """Compare the maintained query with a from-scratch oracle after every prefix.

    ``oracle`` is a boolean sentence (evaluated with static_eval) or a callable
    on the input structure returning the expected query answer.  A ``taint``
    predicate marks inputs outside the program's contract; the rest of such a
    sequence is excluded and counted.  Sequences containing a modification
    that leaves the input unchanged (e.g. a duplicate insertion) are counted
    in ``noop_sequences``.
    """
    domain = tuple(range(n)) if domain is None else tuple(domain)
    elements = domain if elements is None else tuple(elements)
    if callable(oracle):
        expected_of = oracle
    else:
        expected_of = lambda inp: static_eval(inp, oracle)  # noqa: E731
    report = DifftestReport(p.name, len(domain), sequences, length, seed)
    constants = None
    for i in range(sequences):
        rng = random.Random(f"difftest:{seed}:{i}")
        if make_input is not None:
            inp = make_input(rng, domain)
        else:
            inp = random_input(rng, p.input_schema, domain, constants=constants)
        ms = random_modifications(rng, p.input_schema, sorted(p.supported), elements, length,
                                  ensure_repeat=ensure_repeat)
        initial = [[r, sorted([list(t) for t in ts], key=repr)] for r, ts in sorted(inp.relations.items())]
        state = init_state(p, inp)
        noop = False
        for j in range(length + 1):
            if j:
                before = state.input
                state = step(p, state, ms[j - 1])
                noop = noop or state.input == before
            cur = state.input
            if taint is not None and taint(cur):
                report.excluded += length + 1 - j
                break
            if on_state is not None:
                on_state(state)
            report.checks += 1
            want, got = expected_of(cur), state.query_answer()
            if want != got:
                if len(report.mismatches) < max_mismatches:
                    report.mismatches.append(
                        Mismatch(i, j, initial, [str(m) for m in ms[:j]], want, got)
                    )
                else:
                    report.mismatches.append(Mismatch(i, j, [], [], want, got))
                break
        report.noop_sequences += noop
    return report
