"""File formats: structures and programs as JSON documents, scripts as text.

Structure document::

    {"schema": {"relations": {"E": 2}, "constants": ["s"], "functions": {"f": 1}},
     "domain": ["a", "b"],
     "constants": {"s": "a"},
     "relations": {"E": [["a", "b"]]},
     "functions": {"f": [["a", "b"]]}}

Function entries are ``[args..., value]``; unlisted points map to the first
domain element.  A script has one modification per line (``ins E a b``);
blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

import itertools
import json
from typing import Any, Sequence

from .core import FunctionTable, Modification, Schema, Structure
from .engine import DynamicProgram, Initializer, Rule
from .logic import ParseError, format_formula, format_term, parse_formula, parse_term


def dumps(doc: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None


def _need(doc: dict, key: str, where: str):
    if not isinstance(doc, dict) or key not in doc:
        raise ParseError(f"{where}: missing field {key!r}", 1, 1)
    return doc[key]


# --- schemas -------------------------------------------------------------------------


def schema_to_json(s: Schema) -> dict:
    return {"relations": dict(s.relations), "constants": sorted(s.constants), "functions": dict(s.functions)}


def schema_from_json(doc: dict) -> Schema:
    if not isinstance(doc, dict):
        raise ParseError("schema must be an object", 1, 1)
    return Schema(doc.get("relations", {}), frozenset(doc.get("constants", ())), doc.get("functions", {}))


# --- structures ----------------------------------------------------------------------


def _elem(x):
    return tuple(x) if isinstance(x, list) else x


def structure_to_json(s: Structure) -> dict:
    first = s.domain[0] if s.domain else None
    funs = {}
    for name, ar in sorted(s.schema.functions.items()):
        f = s.functions[name]
        if f.default == first:
            points = sorted(f.table.items(), key=lambda kv: [s.position(e) for e in kv[0]])
        else:
            points = [(args, f(*args)) for args in itertools.product(s.domain, repeat=ar)]
            points = [(a, v) for a, v in points if v != first]
        funs[name] = [list(args) + [v] for args, v in points]
    return {
        "schema": schema_to_json(s.schema),
        "domain": list(s.domain),
        "constants": {c: s.constant(c) for c in sorted(s.schema.constants)},
        "relations": {
            r: [list(t) for t in sorted(ts, key=lambda t: [s.position(e) for e in t])]
            for r, ts in sorted(s.relations.items())
        },
        "functions": funs,
    }


def structure_from_json(doc: dict) -> Structure:
    schema = schema_from_json(_need(doc, "schema", "structure"))
    domain = [_elem(x) for x in _need(doc, "domain", "structure")]
    if not domain and (schema.constants or schema.functions):
        raise ParseError("structure: constants and functions need a nonempty domain", 1, 1)
    first = domain[0] if domain else None
    rels = {r: [tuple(_elem(x) for x in t) for t in ts] for r, ts in doc.get("relations", {}).items()}
    unknown = set(rels) - set(schema.relations)
    if unknown:
        raise ParseError(f"structure: relations {sorted(unknown)} not in the schema", 1, 1)
    funs: dict[str, FunctionTable] = {}
    for name, ar in schema.functions.items():
        table = {}
        for entry in doc.get("functions", {}).get(name, []):
            if len(entry) != ar + 1:
                raise ParseError(f"structure: entry {entry} of {name} needs {ar} arguments and a value", 1, 1)
            table[tuple(_elem(x) for x in entry[:-1])] = _elem(entry[-1])
        funs[name] = FunctionTable(table, first)
    consts = doc.get("constants", {})
    for c in schema.constants:
        if c not in consts:
            raise ParseError(f"structure: constant {c!r} has no value", 1, 1)
        funs[c] = FunctionTable({(): _elem(consts[c])}, first)
    return Structure(domain, schema, rels, funs)


def load_structure(text: str) -> Structure:
    return structure_from_json(loads(text))


def dump_structure(s: Structure) -> str:
    return dumps(structure_to_json(s))


# --- programs ------------------------------------------------------------------------


def _body_text(body) -> str:
    try:
        return format_formula(body)
    except TypeError:
        return format_term(body)


def program_to_json(p: DynamicProgram) -> dict:
    rules = []
    for key in sorted(p.rules):
        r = p.rules[key]
        rules.append({
            "symbol": r.symbol,
            "kind": r.kind,
            "relation": r.relation,
            "mod_vars": list(r.mod_vars),
            "tuple_vars": list(r.tuple_vars),
            "body": _body_text(r.body),
        })
    return {
        "name": p.name,
        "logic": p.logic,
        "input_schema": schema_to_json(p.input_schema),
        "aux_schema": schema_to_json(p.aux_schema),
        "rules": rules,
        "initializer": {"name": p.initializer.name, "params": dict(p.initializer.params)},
        "query": p.query,
        "supported": [list(s) for s in sorted(p.supported)],
        "modifiable": None if p.modifiable is None else sorted(p.modifiable, key=repr),
    }


def program_from_json(doc: dict) -> DynamicProgram:
    inp = schema_from_json(_need(doc, "input_schema", "program"))
    aux = schema_from_json(_need(doc, "aux_schema", "program"))
    consts = tuple(sorted(inp.constants | aux.constants))
    term_symbols = set(aux.functions) | aux.constants
    rules = []
    for i, r in enumerate(_need(doc, "rules", "program")):
        sym = _need(r, "symbol", f"rule {i}")
        text = _need(r, "body", f"rule {i}")
        try:
            body = parse_term(text, consts) if sym in term_symbols else parse_formula(text, consts)
        except ParseError as e:
            raise ParseError(f"rule {i} ({sym}): {e.args[0].rsplit(' at line', 1)[0]}", e.line, e.column) from None
        rules.append(Rule(sym, _need(r, "kind", f"rule {i}"), _need(r, "relation", f"rule {i}"),
                          tuple(r.get("mod_vars", ())), tuple(r.get("tuple_vars", ())), body))
    init = _need(doc, "initializer", "program")
    modifiable = doc.get("modifiable")
    return DynamicProgram(
        doc.get("name", "program"),
        inp,
        aux,
        rules,
        Initializer(_need(init, "name", "initializer"), init.get("params", {})),
        _need(doc, "query", "program"),
        [tuple(s) for s in _need(doc, "supported", "program")],
        logic=doc.get("logic", "DynProp"),
        modifiable=None if modifiable is None else frozenset(_elem(x) for x in modifiable),
    )


def load_program(text: str) -> DynamicProgram:
    return program_from_json(loads(text))


def dump_program(p: DynamicProgram) -> str:
    return dumps(program_to_json(p))


# --- scripts -------------------------------------------------------------------------


def parse_script(text: str, domain: Sequence | None = None) -> list[Modification]:
    """Modifications, one per line.  Tokens are resolved against ``domain`` by their text."""
    lookup = None if domain is None else {str(e): e for e in domain}
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0]
        words = body.split()
        if not words:
            continue
        col = len(body) - len(body.lstrip()) + 1
        if words[0] not in ("ins", "del") or len(words) < 2:
            raise ParseError(f"expected 'ins <relation> <elements>' or 'del ...', got {line.strip()!r}",
                             lineno, col)
        elems = []
        for w in words[2:]:
            if lookup is None:
                elems.append(w)
            elif w in lookup:
                elems.append(lookup[w])
            else:
                raise ParseError(f"unknown element {w!r}", lineno, body.index(w) + 1)
        out.append(Modification(words[0], words[1], tuple(elems)))
    return out


def format_script(ms: Sequence[Modification]) -> str:
    return "".join(f"{m}\n" for m in ms)
