"""Command-line entry points.

Batch-oriented: every command reads files or flags, prints a
deterministic plain-text report (identical seeds give byte-identical
output) and exits 0 on success.  ``check-laws`` can additionally write
a machine-readable JSON summary.
"""

import json
import sys

import click

from . import calculus as cal
from .denot import SemEnv, interp_closed
from .differential import dhat
from .lawcheck import REGISTRY, run_all
from .spaces import parse_space, parse_space_expr
from .web_core import Budget, Rel, atom_from_text, atom_to_text, rel_to_text

ALL_KINDS = ("coh", "nucs", "rel")


@click.group()
def main():
    """Coherent differentiation: law checks and a differential λ-calculus."""


@main.command("check-laws")
@click.option("--model", default="all", help="coh, nucs, rel or all")
@click.option("--trials", default=100, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--budget", default=3, show_default=True, help="max multiset degree")
@click.option("--only", default=None, help="run a single named law")
@click.option("--summary", type=click.Path(), default=None, help="write a JSON summary here")
def check_laws(model, trials, seed, budget, only, summary):
    """Run the categorical-law registry and report PASS/FAIL per law."""
    kinds = ALL_KINDS if model == "all" else (model,)
    for k in kinds:
        if k not in ALL_KINDS:
            raise click.UsageError(f"unknown model {k!r}")
    if only is not None and only not in REGISTRY:
        raise click.UsageError(f"unknown law {only!r}; known: {', '.join(sorted(REGISTRY))}")
    results = run_all(
        kinds=kinds,
        seed=seed,
        trials=trials,
        budget=Budget(budget, 20000),
        only=None if only is None else {only},
    )
    results.sort(key=lambda r: (r.kind, r.name))
    failures = 0
    for r in results:
        status = "PASS" if r.ok else "FAIL"
        line = f"{status} {r.kind:4s} {r.name:24s} trials={r.trials}"
        if r.witness:
            line += f"  [{r.witness}]"
        click.echo(line)
        failures += 0 if r.ok else 1
    click.echo(f"{len(results) - failures}/{len(results)} law checks passed")
    if summary is not None:
        payload = {
            "seed": seed,
            "trials": trials,
            "budget": budget,
            "results": [
                {
                    "name": r.name,
                    "kind": r.kind,
                    "ok": r.ok,
                    "trials": r.trials,
                    "witness": r.witness,
                }
                for r in results
            ],
        }
        with open(summary, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    sys.exit(0 if failures == 0 else 1)


def _load_term(path):
    with open(path) as fh:
        text = fh.read()
    src = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    return cal.parse(src)


@main.command()
@click.argument("file", type=click.Path(exists=True))
def typecheck(file):
    """Print the type of the closed term in FILE (.cdl)."""
    m = _load_term(file)
    try:
        ty = cal.typecheck(m)
    except cal.TypeError_ as e:
        click.echo(f"type error: {e}", err=True)
        sys.exit(1)
    click.echo(cal.ty_to_text(ty))


@main.command()
@click.argument("file", type=click.Path(exists=True))
@click.option("--fuel", default=1000, show_default=True)
@click.option("--trace", is_flag=True, help="print every intermediate term")
def reduce(file, fuel, trace):
    """Normalize the term in FILE (.cdl) and print the normal form."""
    m = _load_term(file)
    try:
        cal.typecheck(m)
    except cal.TypeError_ as e:
        click.echo(f"type error: {e}", err=True)
        sys.exit(1)
    for _ in range(fuel):
        if trace:
            click.echo(cal.to_text(m))
        n = cal.step(m)
        if n is None:
            if not trace:
                click.echo(cal.to_text(m))
            return
        m = n
    click.echo(f"no normal form within {fuel} steps", err=True)
    sys.exit(1)


@main.command("eval")
@click.argument("file", type=click.Path(exists=True))
@click.option("--kind", default="coh", show_default=True, help="coh, nucs or rel")
@click.option("--budget", default=3, show_default=True)
@click.option("--nmax", default=3, show_default=True, help="largest literal in the nat web")
def eval_cmd(file, kind, budget, nmax):
    """Print the truncated denotation of the closed term in FILE."""
    if kind not in ALL_KINDS:
        raise click.UsageError(f"unknown kind {kind!r}")
    m = _load_term(file)
    try:
        cal.typecheck(m)
    except cal.TypeError_ as e:
        click.echo(f"type error: {e}", err=True)
        sys.exit(1)
    sem = SemEnv(kind=kind, nmax=nmax, budget=Budget(budget, 20000))
    den = interp_closed(m, sem)
    for line in sorted(atom_to_text(b) for _, b in den):
        click.echo(line)


def _load_rel_file(path):
    """A .rel file: `space` lines, `source`/`target` lines, then pairs."""
    env = {}
    source = target = None
    pair_lines = []
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("space "):
                sp = parse_space(line)
                env[sp.name] = sp
            elif line.startswith("source "):
                source = parse_space_expr(line[len("source "):], env)
            elif line.startswith("target "):
                target = parse_space_expr(line[len("target "):], env)
            else:
                pair_lines.append(line)
    if source is None or target is None:
        raise click.UsageError(f"{path}: needs `source` and `target` lines")
    pairs = set()
    for line in pair_lines:
        sep = "↦" if "↦" in line else "->"
        lhs, rhs = line.split(sep, 1)
        pairs.add((atom_from_text(lhs.strip()), atom_from_text(rhs.strip())))
    return source, target, Rel(frozenset(pairs), "s", "")


@main.command()
@click.argument("file", type=click.Path(exists=True))
@click.option("--budget", default=3, show_default=True)
def derive(file, budget):
    """Differentiate the Kleisli morphism in FILE (.rel): print D̂s."""
    E, F, s = _load_rel_file(file)
    out = dhat(E, F, s, Budget(budget, 20000))
    text = rel_to_text(out)
    if text:
        click.echo(text)


@main.command()
@click.argument("what", type=click.Choice(["taylor"]))
def demo(what):
    """Showcase runs; `taylor` contrasts uniform and non-uniform derivatives."""
    from .web_core import Base, MSet, Multiset

    a, b = Base("a"), Base("b")
    budget = Budget(3, 20000)
    s2 = Rel(frozenset({(MSet(Multiset.of([a, a])), b)}), "s'", "")
    click.echo("s' = { [a,a] ↦ b }   (a square: the first-order term vanishes)")
    for kind, blurb in (
        ("coh", "uniform: the derivative at degree 1 vanishes"),
        ("nucs", "non-uniform: the cross term survives"),
    ):
        from .spaces import BaseSpace

        E = BaseSpace(kind, (a,), name="E")
        F = BaseSpace(kind, (b,), name="F")
        out = dhat(E, F, s2, budget)
        click.echo(f"-- D̂s' in {kind} ({blurb})")
        text = rel_to_text(out)
        if text:
            click.echo(text)


if __name__ == "__main__":
    main()
