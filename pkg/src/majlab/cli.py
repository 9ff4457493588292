"""Command-line interface."""

from __future__ import annotations

import json
import sys

import click

from .core import CM, GM, Transcript, enum_cap
from .exact_solver import solve as solver_solve
from .harness import (
    MatchConfig,
    audit_any,
    bounds_csv,
    bounds_table,
    fuzz as run_fuzz,
    play_repl,
    run_match,
)
from .questioners import Hypergraph

_MODEL = click.Choice([GM, CM])


@click.group()
def main():
    """Two-color majority query games: adversaries, bounds, exact values."""


@main.command()
@click.option("--model", type=_MODEL, required=True)
@click.option("--k", type=int, required=True)
@click.option("--n-from", type=int, required=True)
@click.option("--n-to", type=int, required=True)
@click.option("--csv", "as_csv", is_flag=True, help="CSV instead of a table")
@click.option("--json", "as_json", is_flag=True, help="JSON instead of a table")
def bounds(model, k, n_from, n_to, as_csv, as_json):
    """Closed-form lower/upper bounds over a range of n."""
    rows = bounds_table(model, k, range(n_from, n_to + 1))
    if as_csv:
        click.echo(bounds_csv(rows), nl=False)
    elif as_json:
        click.echo(json.dumps([r.to_json() for r in rows], indent=2))
    else:
        for r in rows:
            flag = "" if r.preconditions_met else "  [preconditions not met]"
            click.echo(f"{r.model} n={r.n} k={r.k} {r.side:5} "
                       f"{r.name:20} {r.value}{flag}")


@main.command()
@click.option("--model", type=_MODEL, required=True)
@click.option("--n", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.option("--adversary", default="paper",
              help="paper | optimal | replay:FILE")
@click.option("--questioner", default="random",
              help="random | greedy | property-b | human | replay:FILE")
@click.option("--seed", type=int, default=0)
@click.option("--trace", is_flag=True)
@click.option("--witness", type=click.Path(exists=True),
              help="hypergraph file for the property-b questioner")
@click.option("--out", type=click.Path(), help="write the transcript JSON here")
def match(model, n, k, adversary, questioner, seed, trace, witness, out):
    """Play one full match and audit it."""
    wit = None
    if witness:
        with open(witness, encoding="utf-8") as fh:
            wit = Hypergraph.from_file_text(fh.read())
    cfg = MatchConfig(model=model, n=n, k=k, adversary=adversary,
                      questioner=questioner, seed=seed, trace=trace,
                      witness=wit)
    if questioner == "human":
        transcript = play_repl(cfg, sys.stdin, sys.stdout)
        if transcript is None:
            raise SystemExit(1)
        if out:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(transcript.to_json_str(indent=2))
        return
    report = run_match(cfg)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(report.transcript.to_json_str(indent=2))
    click.echo(json.dumps({
        "rounds": report.rounds,
        "verdict": report.transcript.verdict.to_json(),
        "audit_ok": report.audit.ok,
        "audit_violations": report.audit.violations,
        "certificate_bound": report.certificate_bound,
        "certificate_ok": report.certificate_ok,
    }, indent=2))
    if trace:
        for row in report.trace:
            click.echo(json.dumps(row))
    if not report.ok:
        raise SystemExit(1)


@main.command()
@click.option("--model", type=_MODEL, required=True)
@click.option("--n", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.option("--cap", type=int, default=None,
              help="override the solver's instance-size cap")
def solve(model, n, k, cap):
    """Exact worst-case query count by minimax (small instances)."""
    result = solver_solve(model, n, k, cap)
    click.echo(json.dumps(result.to_json()))


@main.command()
@click.argument("file", type=click.Path(exists=True))
def audit(file):
    """Audit a transcript file."""
    with open(file, encoding="utf-8") as fh:
        transcript = Transcript.from_json_str(fh.read())
    rep = audit_any(transcript)
    click.echo(json.dumps({
        "rounds": rep.rounds,
        "prefix_consistent": rep.prefix_consistent,
        "disclosures_sound": rep.disclosures_sound,
        "verdict_valid": rep.verdict_valid,
        "final_coloring_consistent": rep.final_coloring_consistent,
        "violations": rep.violations,
    }, indent=2))
    if not rep.ok:
        raise SystemExit(1)


@main.command()
@click.option("--model", type=_MODEL, required=True)
@click.option("--matches", type=int, default=1000)
@click.option("--seed", type=int, default=0)
@click.option("--n-from", type=int, default=6)
@click.option("--n-to", type=int, default=18)
@click.option("--k-from", type=int, default=3)
@click.option("--k-to", type=int, default=5)
def fuzz(model, matches, seed, n_from, n_to, k_from, k_to):
    """Randomized matches with per-round invariant checking."""
    rep = run_fuzz(model, range(n_from, n_to + 1), range(k_from, k_to + 1),
                   matches, seed)
    click.echo(rep.summary())
    if not rep.ok:
        raise SystemExit(1)


@main.command()
@click.option("--model", type=_MODEL, required=True)
@click.option("--n", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.option("--adversary", default="paper")
def play(model, n, k, adversary):
    """Interactive match: you are the questioner."""
    cfg = MatchConfig(model=model, n=n, k=k, adversary=adversary,
                      questioner="human")
    transcript = play_repl(cfg, sys.stdin, sys.stdout)
    raise SystemExit(0 if transcript is not None else 1)


if __name__ == "__main__":
    main()
