"""Command-line front end for the verification suites and module builders."""

from __future__ import annotations

import json
import sys
from fractions import Fraction

import click

from .halfint import HalfInt
from .scalars import CLASSICAL, QUANTUM


def _parse_top(text: str):
    return [HalfInt.of(Fraction(part)) for part in text.split(",")]


@click.group()
def main():
    """Exact verification toolkit for the orthogonal Gelfand-Tsetlin machinery."""


@main.command()
@click.argument("suite", required=False)
@click.option("--suite", "suite_opt", default=None, help="suite name (alternative to the argument)")
@click.option("--n", "n", type=int, default=None, help="size parameter")
@click.option("--mode", type=click.Choice([QUANTUM, CLASSICAL]), default=None)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--tol", type=float, default=1e-9, show_default=True,
              help="numeric tolerance (numeric suites only)")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
              help="write the JSON report here")
@click.option("--timings/--no-timings", default=False,
              help="include wall times in the serialized report")
def verify(suite, suite_opt, n, mode, seed, tol, out_path, timings):
    """Run a verification suite (relations-numeric, relations-exact,
    telescoping, generic, embedding, invariance, casimir-consistency, all)."""
    from .suites import run_suite, serialize_report

    suite = suite or suite_opt
    if not suite:
        raise click.ClickException("pass a suite name (argument or --suite)")
    try:
        report = run_suite(suite, n, mode, seed=seed, tol=tol)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    text = serialize_report(report, include_timings=timings)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    _print_summary(report)
    sys.exit(0 if report["passed"] else 1)


def _print_summary(report):
    if report["suite"] == "all":
        for sub in report["reports"]:
            _print_summary(sub)
        click.echo(f"all: {'PASS' if report['passed'] else 'FAIL'}")
        return
    for c in report["checks"]:
        mark = "ok " if c["status"] == "pass" else "FAIL"
        t = f" ({c['wall_time']:.2f}s)" if "wall_time" in c else ""
        click.echo(f"[{mark}] {report['suite']} n={report['n']} {report['mode']}: {c['check']}{t}")


@main.group()
def casimir():
    """Central-element computations."""


@casimir.command()
@click.option("--n", "n", type=int, required=True)
@click.option("--d", "d", type=int, required=True, help="half the degree")
@click.option("--top", required=True, help="comma-separated top row, e.g. 3,1")
@click.option("--mode", type=click.Choice([QUANTUM, CLASSICAL]), default=QUANTUM)
def eig(n, d, top, mode):
    """Eigenvalue of the degree-2d central element on the module with this top row."""
    from .casimir import casimir_eigenvalue, casimir_half_eigenvalue

    top_row = _parse_top(top)
    value = casimir_eigenvalue(n, d, top_row, mode)
    click.echo(json.dumps({"n": n, "d": d, "top": top, "mode": mode,
                           "eigenvalue": value.serialize()}))
    if n % 2 == 0 and 2 * d == n:
        half = casimir_half_eigenvalue(n, top_row, mode)
        click.echo(json.dumps({"square_root_eigenvalue": half.serialize()}))


@main.group()
def build():
    """Emit module matrices as JSON."""


@build.command("sqrt")
@click.option("--n", "n", type=int, required=True)
@click.option("--top", required=True)
@click.option("--q", "q", type=float, required=True)
def build_sqrt(n, top, q):
    """Numeric square-root-coefficient module (dense, complex as [re, im])."""
    from .fdmod import build_sqrt_module
    from .patterns import pattern_to_json

    rep = build_sqrt_module(n, _parse_top(top), q)
    out = {
        "n": n, "q": q, "dim": rep.dim,
        "basis": [pattern_to_json(p) for p in rep.basis],
        "generators": {
            str(gi): [[[m[r, c].real, m[r, c].imag] for c in range(rep.dim)]
                      for r in range(rep.dim)]
            for gi, m in rep.gens.items()
        },
    }
    click.echo(json.dumps(out))


@build.command("rational")
@click.option("--n", "n", type=int, required=True)
@click.option("--top", required=True)
@click.option("--mode", type=click.Choice([QUANTUM, CLASSICAL]), default=QUANTUM)
def build_rational(n, top, mode):
    """Exact rationalized module; scalars as canonical strings."""
    from .patterns import pattern_to_json
    from .ratmod import build_rat_module

    rep = build_rat_module(n, _parse_top(top), mode)
    out = {
        "n": n, "mode": mode, "dim": rep.dim,
        "basis": [pattern_to_json(p) for p in rep.basis],
        "generators": {
            str(gi): {f"{r},{c}": v.serialize() for (r, c), v in sorted(m.entries.items())}
            for gi, m in rep.gens.items()
        },
    }
    click.echo(json.dumps(out))


@main.command()
@click.option("--n", "n", type=int, required=True)
@click.option("--radius", type=int, default=1, show_default=True)
@click.option("--mode", type=click.Choice([QUANTUM, CLASSICAL]), default=QUANTUM)
def window(n, radius, mode):
    """Exact action table of the prime-reciprocal generic module on a finite window."""
    from .generic import AdmissibleBase, instantiate_window

    base = AdmissibleBase.prime_reciprocal(n, top_row=[Fraction(j + 2) for j in range(n // 2)][::-1])
    click.echo(json.dumps(instantiate_window(base, radius, mode)))


if __name__ == "__main__":
    main()
