"""Command-line workbench.

Exit codes: 0 success or verified, 1 contract violation (mismatch, violated
check, unsupported modification), 2 usage or parse error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import __version__
from .core import DynlabError
from .formats import (
    dump_structure, dumps, load_program, load_structure, parse_script, structure_to_json,
)
from .logic import ParseError
from .manifest import build_manifest


class ContractViolation(click.ClickException):
    exit_code = 1


def _read(path: str) -> str:
    return Path(path).read_text()


def _emit(text: str, out: str | None) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text)


def _with_manifest(doc: dict, manifest: dict) -> dict:
    return {**doc, "manifest": manifest}


def _parse_guard(fn, *args):
    try:
        return fn(*args)
    except ParseError as e:
        raise click.UsageError(f"parse error: {e}") from None
    except DynlabError as e:
        raise click.UsageError(f"malformed input: {e}") from None


@click.group()
@click.version_option(__version__, prog_name="dynlab")
def main():
    """Dynamic complexity workbench: programs, compiler, Ramsey gadgets and demos."""


@main.command()
@click.argument("sentence_file", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--out", type=click.Path(dir_okay=False), help="Program file to write (default stdout).")
@click.option("--name", default=None, help="Program name (default: file stem).")
def compile(sentence_file, out, name):
    """Compile a semi-positive existential sentence into an insertion-only program."""
    from .compiler import UnsupportedFormula, compile_semipositive
    from .formats import program_to_json
    from .logic import parse_formula

    f = _parse_guard(parse_formula, _read(sentence_file))
    try:
        p = compile_semipositive(f, name=name or Path(sentence_file).stem)
    except UnsupportedFormula as e:
        raise ContractViolation(f"unsupported sentence: {e}") from None
    man = build_manifest("compile", inputs={"sentence": sentence_file}, params={"name": p.name})
    _emit(dumps(_with_manifest(program_to_json(p), man)), out)


@main.command()
@click.argument("program_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("structure_file", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--out", type=click.Path(dir_okay=False), help="State file to write (default stdout).")
def init(program_file, structure_file, out):
    """Compute the initial state of a program for an input structure."""
    from .engine import init_state

    p = _parse_guard(load_program, _read(program_file))
    inp = _parse_guard(load_structure, _read(structure_file))
    try:
        s = init_state(p, inp)
    except DynlabError as e:
        raise ContractViolation(str(e)) from None
    man = build_manifest("init", inputs={"program": program_file, "structure": structure_file})
    _emit(dumps(_with_manifest(structure_to_json(s.structure), man)), out)


@main.command()
@click.argument("program_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("structure_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("script_file", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--out", type=click.Path(dir_okay=False), help="Write the final state here.")
@click.option("--trace", "trace_out", type=click.Path(dir_okay=False), help="Write the trace here (default stdout).")
def run(program_file, structure_file, script_file, out, trace_out):
    """Run a modification script; prints one trace line per step."""
    from .engine import init_state, run_trace

    p = _parse_guard(load_program, _read(program_file))
    inp = _parse_guard(load_structure, _read(structure_file))
    ms = _parse_guard(parse_script, _read(script_file), inp.domain)
    man = build_manifest("run", inputs={"program": program_file, "structure": structure_file,
                                        "script": script_file})
    try:
        s = init_state(p, inp)
        final, records = run_trace(p, s, ms)
    except DynlabError as e:
        raise ContractViolation(f"{type(e).__name__}: {e}") from None
    trace = f"# manifest {json.dumps(man, sort_keys=True)}\n" + "".join(f"{r}\n" for r in records)
    _emit(trace, trace_out)
    if out:
        Path(out).write_text(dumps(_with_manifest(structure_to_json(final.structure), man)))


@main.command()
@click.argument("program_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--sentence", "sentence_file", type=click.Path(exists=True, dir_okay=False),
              help="Boolean sentence the program should maintain.")
@click.option("--oracle", type=click.Choice(["max-outdegree"]), help="Built-in oracle instead of a sentence.")
@click.option("-n", "--size", "n", default=5, show_default=True, help="Domain size.")
@click.option("--sequences", default=200, show_default=True)
@click.option("--length", default=12, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--report", "report_out", type=click.Path(dir_okay=False), help="Write the JSON report here.")
def difftest(program_file, sentence_file, oracle, n, sequences, length, seed, report_out):
    """Compare a program with a from-scratch oracle; exit 0 iff no mismatches."""
    from .engine import difftest as run_difftest
    from .logic import parse_formula

    if (sentence_file is None) == (oracle is None):
        raise click.UsageError("give exactly one of --sentence and --oracle")
    p = _parse_guard(load_program, _read(program_file))
    inputs = {"program": program_file}
    taint = None
    if sentence_file:
        target = _parse_guard(parse_formula, _read(sentence_file), sorted(p.input_schema.constants))
        inputs["sentence"] = sentence_file
    else:
        from .builtins import counter_saturated, max_outdegree_nodes

        target, taint = max_outdegree_nodes, counter_saturated
    try:
        rep = run_difftest(p, target, n, sequences, length, seed, taint=taint)
    except DynlabError as e:
        raise ContractViolation(str(e)) from None
    man = build_manifest("difftest", inputs=inputs, seed=seed,
                         params={"n": n, "sequences": sequences, "length": length, "oracle": oracle})
    text = dumps(_with_manifest(rep.to_dict(), man))
    if report_out:
        Path(report_out).write_text(text)
    click.echo(rep.summary())
    if not rep.ok:
        where = f" (report: {report_out})" if report_out else ""
        raise ContractViolation(f"{len(rep.mismatches)} mismatches{where}")


@main.command("ramsey-clique")
@click.option("-n", "n", required=True, type=int, help="Number of nodes.")
@click.option("-k", "k", default=2, show_default=True, help="Hyperedge size.")
@click.option("--size", required=True, type=int, help="Clique size to look for.")
@click.option("--index", type=int, default=None, help="Check one coloring (by ordinal) instead of all.")
def ramsey_clique(n, k, size, index):
    """Exhaustively check 2-colorings of k-subsets of [n] for monochromatic cliques."""
    from .ramsey import coloring_from_index, exhaustive_sweep, find_monochromatic_clique

    if index is not None:
        c = coloring_from_index(n, k, index)
        clique = find_monochromatic_clique(c, size)
        click.echo(dumps({"n": n, "k": k, "size": size, "index": index,
                          "clique": None if clique is None else list(clique)}), nl=False)
        return
    r = exhaustive_sweep(n, k, size)
    out = dict(r)
    out["clique_free_count"] = len(out.pop("clique_free"))
    out["every_coloring_has_clique"] = out["clique_free_count"] == 0
    click.echo(dumps(out), nl=False)


@main.command("ramsey-anticolor")
@click.option("-n", "n", required=True, type=int)
@click.option("-k", "k", default=2, show_default=True)
@click.option("--size", required=True, type=int, help="Forbidden monochromatic clique size.")
@click.option("--seed", default=0, show_default=True)
@click.option("--budget", default=2000, show_default=True)
def ramsey_anticolor(n, k, size, seed, budget):
    """Search for a 2-coloring without monochromatic cliques of the given size."""
    from .ramsey import search_antiramsey_coloring

    c = search_antiramsey_coloring(n, k, size, seed, budget)
    if c is None:
        raise ContractViolation("no such coloring found within the budget")
    doc = {"n": n, "k": k, "size": size, "seed": seed, "max_monochromatic": c.max_monochromatic(),
           "colors": [list(e) + [col] for e, col in sorted(c.colors.items())]}
    click.echo(dumps(doc), nl=False)


def _parse_bspec(spec: str, A: tuple, k: int, seed: int) -> list:
    import itertools
    import random

    subsets = list(itertools.combinations(A, k + 1))
    if spec == "all":
        return subsets
    if spec == "none":
        return []
    if spec == "random":
        rng = random.Random(f"bspec:{seed}")
        return [b for b in subsets if rng.random() < 0.5]
    out = []
    for part in spec.split(";"):
        names = [x.strip() for x in part.split(",") if x.strip()]
        if len(names) != k + 1 or any(x not in A for x in names):
            raise click.UsageError(f"bad B entry {part!r}: need {k + 1} elements of A")
        out.append(tuple(names))
    return out


@main.command("lb-gen")
@click.option("-k", "k", default=1, show_default=True)
@click.option("--size", "size", default=5, show_default=True, help="|A|.")
@click.option("--b", "bspec", default="random", show_default=True,
              help="'all', 'none', 'random' or explicit subsets 'a1,a2;a3,a4'.")
@click.option("--variant", type=click.Choice(["clique", "eafo"]), default="clique", show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("-o", "--out", type=click.Path(dir_okay=False), required=True, help="Instance structure file.")
def lb_gen(k, size, bspec, variant, seed, out):
    """Generate a lower-bound instance plus a sidecar manifest (OUT.manifest.json)."""
    from .ramsey import build_lowerbound_instance

    A = tuple(f"a{i}" for i in range(1, size + 1))
    inst = build_lowerbound_instance(A, _parse_bspec(bspec, A, k, seed), k, variant)
    man = build_manifest("lb-gen", seed=seed, params={"k": k, "size": size, "b": bspec, "variant": variant})
    Path(out).write_text(dump_structure(inst.structure))
    Path(out + ".manifest.json").write_text(dumps({**inst.manifest(), "seed": seed, "manifest": man}))
    click.echo(f"wrote {out}: |A|={size} |B|={len(inst.B)} |B'|={len(inst.B_prime)}")


@main.command("lb-demo")
@click.option("--variant", type=click.Choice(["clique", "eafo"]), default="clique", show_default=True)
@click.option("-n", "n", default=5, show_default=True, help="|A|.")
@click.option("--seed", default=0, show_default=True)
def lb_demo(variant, n, seed):
    """End-to-end k=1 lower-bound trace: instance, α vs β, query outcomes."""
    from .ramsey import lowerbound_demo

    try:
        r = lowerbound_demo(variant, n, seed)
    except DynlabError as e:
        raise ContractViolation(str(e)) from None
    for line in r.trace:
        click.echo(line)
    click.echo(f"verdict: {'ok' if r.ok else 'FAILED'}")
    if not r.ok:
        raise ContractViolation("lower-bound demo checks failed")


@main.command()
@click.argument("structure_file", type=click.Path(exists=True, dir_okay=False))
@click.option("-m", "m", default=1, show_default=True, help="Term depth.")
@click.option("-k", "k", default=1, show_default=True, help="Tuple arity.")
@click.option("--target", type=int, default=None, help="Subset size (default: largest).")
def similar(structure_file, m, k, target):
    """Find a subset whose ordered k-tuples are pairwise m-similar."""
    from .ramsey import find_similar_tuples

    s = _parse_guard(load_structure, _read(structure_file))
    try:
        out = find_similar_tuples(s, None, m, target, k)
    except DynlabError as e:
        raise ContractViolation(str(e)) from None
    man = build_manifest("similar", inputs={"structure": structure_file}, params={"m": m, "k": k, "target": target})
    click.echo(dumps({"subset": None if out is None else list(out), "manifest": man}), nl=False)
    if out is None:
        raise ContractViolation("no subset of the requested size")


@main.command("sublemma-suite")
@click.option("--lemma", type=click.Choice(["dynprop", "dynqf"]), default="dynprop", show_default=True)
@click.option("--trials", default=500, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--corrupt", is_flag=True, help="Use the deliberately broken runner (mutation control).")
@click.option("--length", default=2, show_default=True, help="Sequence length bound (dynqf).")
@click.option("--max-m", default=8, show_default=True, help="Largest m scanned (dynqf).")
def sublemma_suite(lemma, trials, seed, corrupt, length, max_m):
    """Seeded property campaigns for the two substructure lemmas."""
    from .ramsey import corrupted_run, qf_scan, substructure_suite
    from .engine import run as plain_run

    if lemma == "dynprop":
        r = substructure_suite(trials, seed, corrupted_run if corrupt else plain_run)
        r["runner"] = "corrupted" if corrupt else "engine"
        click.echo(dumps(r), nl=False)
        if r["violated"] and not corrupt:
            raise ContractViolation(f"{r['violated']} violations")
        if corrupt and not r["violated"]:
            raise ContractViolation("mutation control was not detected")
        return
    r = qf_scan(trials, seed, length, max_m)
    click.echo(dumps(r), nl=False)
    if r["smallest_passing_m"] is None:
        raise ContractViolation("no m passed")


@main.command()
@click.argument("name", type=click.Choice(["three-clique", "figure1", "max-outdegree", "padding"]))
def demo(name):
    """Replay a worked example and assert its facts."""
    from .demos import DEMOS

    rep = DEMOS[name]()
    click.echo(rep.text(), nl=False)
    if not rep.ok:
        raise ContractViolation(f"demo {name}: {sum(not v for v in rep.checks.values())} checks failed")


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
