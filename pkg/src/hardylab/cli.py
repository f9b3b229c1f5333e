"""Command-line front end.

Exit codes: 0 success, 1 a mathematical check failed, 2 usage or parse
error, 3 feasibility or resource error.

Usage:
    hardylab weights --from 1 --to 10
    hardylab verify e1
    hardylab --mode extended verify probe:N=16
    hardylab probe 64 --chain
    hardylab witness 100 0.02
    hardylab spectrum 2000 --kind kpp --perturb 100:0.02
"""
from __future__ import annotations

import csv
import io
import json
import math
import sys

import click
import gmpy2

from . import __version__
from .errors import (
    ChainViolation, ConfigurationError, ConsistencyError, FeasibilityError,
    IdentityViolation, ParseError, ResourceError, ValidationError,
)
from .forms import identity_report
from .numerics import SummationMode
from .optimality import find_witness, probe_remainder
from .sequences import (
    ground_state, read_sequence, regularized_ground_state, step, support_cap, unit,
)
from .spectral import build_form, factorization_residual, smallest_eigenvalue
from .weights import CLASSICAL, KPP, classical_weight, kpp_weight, weight_gap

__all__ = ["cli", "main", "builtin_sequence"]

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_FEASIBILITY = 0, 1, 2, 3
MAX_WEIGHT_INDEX = 10**7
MAX_SPECTRUM_SIZE = 10**5
PSD_TOLERANCE = 1e-10


def _num(x):
    """JSON-ready number keeping the full precision of the working type."""
    if isinstance(x, gmpy2.mpfr):
        return format(x, ".{}g".format(int(x.precision * math.log10(2)) + 2))
    if isinstance(x, float):
        return x
    return x


def _csv_num(x):
    x = _num(x)
    return repr(x) if isinstance(x, float) else str(x)


def envelope(command, parameters, results, mode) -> str:
    doc = {
        "command": command,
        "parameters": parameters,
        "results": results,
        "mode": mode.describe(),
        "tool_version": __version__,
    }
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False)


def _emit(ctx, command, parameters, results, fmt):
    mode = ctx.obj["mode"]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for key in sorted(results):
            val = results[key]
            if isinstance(val, (list, dict)):
                val = json.dumps(val, sort_keys=True)
            elif isinstance(val, float):
                val = repr(val)
            w.writerow([key, val])
        click.echo(buf.getvalue(), nl=False)
    else:
        click.echo(envelope(command, parameters, results, mode))


def _fail(msg, code):
    click.echo(f"error: {msg}", err=True)
    sys.exit(code)


def builtin_sequence(name: str, mode: SummationMode | None = None):
    """Resolve ``e1``, ``eK``, ``step:M``, ``sqrt:M`` or ``probe:N=...``; None if not builtin."""
    if name.startswith("probe:"):
        arg = name[len("probe:"):]
        if arg.startswith("N="):
            arg = arg[2:]
        return regularized_ground_state(int(arg), mode if mode and mode.extended else None)
    if name.startswith("step:"):
        return step(int(name[5:]))
    if name.startswith("sqrt:"):
        return ground_state(int(name[5:]))
    if len(name) > 1 and name[0] == "e" and name[1:].isdigit():
        return unit(int(name[1:]))
    return None


def _parse_perturb(value):
    if value is None:
        return None
    try:
        k, eps = value.split(":")
        k, eps = int(k), float(eps)
    except ValueError:
        raise click.BadParameter("expected K:EPSILON, e.g. 100:0.02") from None
    if k < 1 or not eps > 0:
        raise click.BadParameter("need K >= 1 and EPSILON > 0")
    return k, eps


@click.group()
@click.option("--mode", "mode_kind", type=click.Choice(["naive", "compensated", "extended"]),
              default="compensated", show_default=True, help="Summation policy.")
@click.option("--bits", type=int, default=256, show_default=True,
              help="Mantissa bits for --mode extended.")
@click.version_option(__version__, prog_name="hardylab")
@click.pass_context
def cli(ctx, mode_kind, bits):
    """Verify and explore the sharp discrete Hardy inequality."""
    try:
        mode = SummationMode(mode_kind, bits)
    except ConfigurationError as exc:
        raise click.BadParameter(str(exc), param_hint="--bits") from None
    ctx.obj = {"mode": mode}


@cli.command()
@click.option("--from", "n_from", type=int, default=1, show_default=True)
@click.option("--to", "n_to", type=int, default=10, show_default=True)
@click.option("--kind", type=click.Choice(["all", "kpp", "classical"]), default="all",
              show_default=True, help="Weight columns to emit.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
              show_default=True)
@click.pass_context
def weights(ctx, n_from, n_to, kind, fmt):
    """Tabulate the KPP weight, the classical weight and their gap."""
    if not 1 <= n_from <= n_to <= MAX_WEIGHT_INDEX:
        raise click.UsageError(
            f"need 1 <= --from <= --to <= {MAX_WEIGHT_INDEX}, got {n_from}..{n_to}")
    mode = ctx.obj["mode"]
    wmode = mode if mode.extended else None
    cols = {"all": ["kpp", "classical", "gap", "scaled_gap"],
            "kpp": ["kpp"], "classical": ["classical"]}[kind]
    rows = []
    for n in range(n_from, n_to + 1):
        gap = weight_gap(n, wmode)
        if wmode is not None:
            with mode.context():
                scaled = gap * n**4
        else:
            scaled = gap * float(n) ** 4
        row = {"n": n, "kpp": kpp_weight(n, wmode), "classical": classical_weight(n, wmode),
               "gap": gap, "scaled_gap": scaled}
        rows.append(row)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n"] + cols)
        for row in rows:
            w.writerow([row["n"]] + [_csv_num(row[c]) for c in cols])
        click.echo(buf.getvalue(), nl=False)
    else:
        results = {"rows": [{k: _num(row[k]) for k in ["n"] + cols} for row in rows]}
        click.echo(envelope("weights", {"from": n_from, "to": n_to, "kind": kind},
                            results, mode))


@cli.command()
@click.argument("source")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
              show_default=True)
@click.pass_context
def verify(ctx, source, fmt):
    """Check D = W + R for a sequence file or a builtin (e1, step:M, sqrt:M, probe:N=...)."""
    mode = ctx.obj["mode"]
    try:
        u = builtin_sequence(source, mode)
        if u is None:
            u = read_sequence(source)
    except ParseError as exc:
        _fail(str(exc), EXIT_USAGE)
    except (ValidationError, ValueError) as exc:
        _fail(str(exc), EXIT_USAGE)
    except OSError as exc:
        _fail(f"cannot read {source!r}: {exc.strerror or exc}", EXIT_USAGE)
    except ResourceError as exc:
        _fail(str(exc), EXIT_FEASIBILITY)
    report = identity_report(u, mode, check=False)
    results = {
        "dirichlet": report.dirichlet,
        "weighted": report.weighted,
        "remainder": report.remainder,
        "residual": report.residual,
        "tolerance": report.bound,
        "support_size": report.support_size,
        "passed": report.passed,
    }
    _emit(ctx, "verify", {"source": source}, results, fmt)
    if not report.passed:
        click.echo(f"identity violated: |D - W - R| = {abs(report.residual):.3e}", err=True)
        sys.exit(EXIT_CHECK)


@cli.command()
@click.argument("level", metavar="N", type=int)
@click.option("--chain", is_flag=True, help="Include the five bound-chain stages.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
              show_default=True)
@click.pass_context
def probe(ctx, level, chain, fmt):
    """Remainder of the regularised ground state u^N against 4/log N."""
    mode = ctx.obj["mode"]
    if level < 2:
        raise click.BadParameter("N must be >= 2", param_hint="N")
    try:
        res = probe_remainder(level, mode)
    except ResourceError as exc:
        _fail(str(exc), EXIT_FEASIBILITY)
    except (ConsistencyError, ChainViolation) as exc:
        _fail(str(exc), EXIT_CHECK)
    results = {
        "level": res.level,
        "remainder": res.remainder,
        "remainder_closed_form": res.remainder_closed_form,
        "bound": res.paper_bound,
        "margin": res.margin,
        "terms": res.terms,
        "within_bound": res.remainder <= res.paper_bound,
    }
    if chain:
        results["chain"] = [{"stage": label, "value": v} for label, v in res.chain]
    _emit(ctx, "probe", {"N": level, "chain": chain}, results, fmt)
    if res.remainder > res.paper_bound:
        sys.exit(EXIT_CHECK)


@cli.command()
@click.argument("k", type=int)
@click.argument("epsilon", type=float)
@click.option("--level", "level", type=int, default=None,
              help="Use this cutoff level N instead of the one derived from 4/log N.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
              show_default=True)
@click.pass_context
def witness(ctx, k, epsilon, level, fmt):
    """Show that w + EPSILON*delta_K violates the Hardy inequality."""
    mode = ctx.obj["mode"]
    if k < 1 or not epsilon > 0:
        raise click.BadParameter("need K >= 1 and EPSILON > 0")
    try:
        res = find_witness(k, epsilon, N=level, mode=mode)
    except FeasibilityError as exc:
        click.echo(f"error: {exc}", err=True)
        click.echo(f"minimum N = exp({exc.log_min_level:.6g})", err=True)
        sys.exit(EXIT_FEASIBILITY)
    except ValidationError as exc:
        raise click.BadParameter(str(exc)) from None
    except ConsistencyError as exc:
        _fail(str(exc), EXIT_CHECK)
    verdict = (f"inequality violated for w+{epsilon!r}*delta_{k}" if res.violated
               else f"no violation found at N={res.level}")
    results = {
        "k": res.site,
        "epsilon": res.epsilon,
        "N": res.level,
        "perturbed_form": res.perturbed_form,
        "dirichlet": res.dirichlet,
        "remainder": res.remainder,
        "violation_margin": res.violation_margin,
        "identity_margin": res.identity_margin,
        "verdict": verdict,
    }
    _emit(ctx, "witness", {"k": k, "epsilon": epsilon, "level": level}, results, fmt)
    if not res.violated:
        sys.exit(EXIT_CHECK)


@cli.command()
@click.argument("size", metavar="M", type=int)
@click.option("--kind", type=click.Choice(["kpp", "classical"]), default="kpp",
              show_default=True)
@click.option("--perturb", default=None, metavar="K:EPSILON",
              help="Add EPSILON to the weight at site K.")
@click.option("--tol", type=float, default=1e-12, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
              show_default=True)
@click.pass_context
def spectrum(ctx, size, kind, perturb, tol, fmt):
    """Smallest eigenvalue of the truncated form D - W on {1..M}."""
    if not 1 <= size <= MAX_SPECTRUM_SIZE:
        raise click.BadParameter(f"M must be in 1..{MAX_SPECTRUM_SIZE}", param_hint="M")
    if not tol > 0:
        raise click.BadParameter("--tol must be positive")
    pert = _parse_perturb(perturb)
    table = KPP if kind == "kpp" else CLASSICAL
    if pert is not None:
        table = table.perturb(*pert)
    lam = smallest_eigenvalue(build_form(size, table), tol)
    fres = None
    factor_ok = True
    if kind == "kpp":
        fres = factorization_residual(size, check=False)
        try:
            factorization_residual(size)
        except ChainViolation:
            factor_ok = False
    psd = lam >= -PSD_TOLERANCE
    results = {
        "lambda_min": lam,
        "factorization_residual": fres,
        "psd": psd,
        "verdict": "PSD" if psd else "not PSD",
    }
    params = {"M": size, "kind": kind, "perturb": perturb, "tol": tol}
    _emit(ctx, "spectrum", params, results, fmt)
    if not factor_ok or (pert is None and not psd):
        sys.exit(EXIT_CHECK)


def main():
    # resolve the cap eagerly so a bad HARDYLAB_SUPPORT_CAP is a usage error
    try:
        support_cap()
    except ConfigurationError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    cli(prog_name="hardylab")


if __name__ == "__main__":
    main()
