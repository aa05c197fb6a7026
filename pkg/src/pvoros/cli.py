"""``pvoros`` command line.

Exit codes: 0 on success, 2 for configuration or assumption problems,
3 for unreadable or malformed data.  ``PVOROS_THREADS`` caps the number of
worker threads used for heatmap cells.
"""

from __future__ import annotations

import functools
import sys
import warnings
from pathlib import Path

import click

from .exceptions import AssumptionError, ConfigError, DataError, DegenerateRegionError, NoFeasiblePointWarning
from .feasible_region import Constraints
from .io import ROCPOINTS, SCORES, dumps_json, fmt_float, read_scores, synth_generate
from .report import (
    SCHEMA_ID,
    RunConfig,
    describe_region,
    load_run,
    parse_grid,
    run_report,
    selection_reports,
    write_heatmap,
)
from .roc_core import DatasetProfile
from .selection import ALL_STRATEGIES, INVALID, TIE

EXIT_CONFIG = 2
EXIT_DATA = 3

__all__ = ["main", "cli", "RunConfig", "run_report"]


def _handled(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except DataError as exc:
            click.echo(f"data error: {exc}", err=True)
            sys.exit(EXIT_DATA)
        except (ConfigError, AssumptionError, DegenerateRegionError) as exc:
            kind = "assumption violated" if isinstance(exc, AssumptionError) else "config error"
            click.echo(f"{kind}: {exc}", err=True)
            sys.exit(EXIT_CONFIG)
        except ValueError as exc:
            click.echo(f"config error: {exc}", err=True)
            sys.exit(EXIT_CONFIG)

    return wrapper


def _constraint_options(fn):
    fn = click.option("--kappa-frac", type=float, help="Capacity as a fraction of |D|.")(fn)
    fn = click.option("--kappa", type=float, help="Capacity: maximum number of predicted positives.")(fn)
    fn = click.option("--alpha", type=float, required=True, help="Minimum precision.")(fn)
    return fn


def _run_options(fn):
    opts = [
        click.argument("candidates", nargs=-1, required=True, type=click.Path(dir_okay=False)),
        click.option("--format", "fmt", type=click.Choice([SCORES, ROCPOINTS]), default=SCORES, show_default=True),
        click.option("--test", multiple=True, type=click.Path(dir_okay=False), help="Test scores file, paired by stem."),
        click.option("--n-pos", type=int, help="Positive count (required for rocpoints input)."),
        click.option("--n-neg", type=int, help="Negative count (required for rocpoints input)."),
        click.option("--t-range", nargs=2, type=float, help="Uniform range of the cost parameter t."),
        click.option("--ratio-range", nargs=2, type=float, help="Uniform range of the cost ratio C0/C1."),
        click.option("--samples", type=int, default=100_000, show_default=True, help="Monte-Carlo draws."),
        click.option("--seed", type=int, default=0, show_default=True),
        click.option("--resolution", type=int, default=1025, show_default=True, help="Quadrature nodes."),
        click.option("--method", type=click.Choice(["mc", "quadrature"]), default="mc", show_default=True),
        click.option("--strategy", "strategies", multiple=True, type=click.Choice([s.value for s in ALL_STRATEGIES])),
        click.option("--alpha-grid", help="Heatmap alphas: start:stop:num or a comma list."),
        click.option("--kappa-grid", help="Heatmap capacities: start:stop:num or a comma list."),
        click.option("--kappa-grid-absolute", is_flag=True, help="Read the kappa grid as counts, not fractions."),
        click.option("--kappa-grid-log", is_flag=True, help="Space a start:stop:num kappa grid geometrically."),
        click.option("--epsilon", type=float, default=0.01, show_default=True, help="Heatmap tie threshold."),
        click.option("--area-points", type=int, default=201, show_default=True, help="Rows of area_vs_t.csv."),
        click.option("--out", "out_dir", type=click.Path(file_okay=False), default=".", show_default=True),
        click.option("--jobs", "n_jobs", type=int, help="Worker threads (capped by PVOROS_THREADS)."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return _constraint_options(fn)


def _config(kw) -> RunConfig:
    return RunConfig(
        candidates=tuple(kw["candidates"]),
        alpha=kw["alpha"],
        fmt=kw["fmt"],
        test=tuple(kw["test"]),
        n_pos=kw["n_pos"],
        n_neg=kw["n_neg"],
        kappa=kw["kappa"],
        kappa_frac=kw["kappa_frac"],
        t_range=tuple(kw["t_range"]) if kw["t_range"] else None,
        ratio_range=tuple(kw["ratio_range"]) if kw["ratio_range"] else None,
        samples=kw["samples"],
        seed=kw["seed"],
        resolution=kw["resolution"],
        method=kw["method"],
        strategies=tuple(kw["strategies"]) or tuple(s.value for s in ALL_STRATEGIES),
        alpha_grid=parse_grid(kw["alpha_grid"]) if kw["alpha_grid"] else None,
        kappa_grid=parse_grid(kw["kappa_grid"], log=kw["kappa_grid_log"]) if kw["kappa_grid"] else None,
        kappa_grid_fraction=not kw["kappa_grid_absolute"],
        epsilon=kw["epsilon"],
        area_points=kw["area_points"],
        out_dir=kw["out_dir"],
        n_jobs=kw["n_jobs"],
    )


@click.group()
@click.version_option(package_name="pvoros")
def cli():
    """Evaluate and select classifiers under precision, capacity and cost limits."""
    warnings.simplefilter("default", NoFeasiblePointWarning)


@cli.command()
@_run_options
@_handled
def report(**kw):
    """Write report.json, region.svg, area_vs_t.csv and (with grids) the heatmap."""
    for path in run_report(_config(kw)):
        click.echo(str(path))


@cli.command()
@_run_options
@_handled
def select(**kw):
    """Print the winner of each selection strategy as JSON."""
    run = load_run(_config(kw))
    out = {"schema": SCHEMA_ID, "selection": [r.to_dict() for r in selection_reports(run)]}
    click.echo(dumps_json(out), nl=False)


@cli.command()
@_run_options
@_handled
def heatmap(**kw):
    """Write heatmap.csv and heatmap.svg for an (alpha, kappa) grid."""
    run = load_run(_config(kw))
    grid, files = write_heatmap(run, kw["out_dir"])
    for name in files:
        click.echo(str(Path(kw["out_dir"]) / name))
    named = sorted(grid.winner_set())
    click.echo(f"winners: {', '.join(named) or '-'}; ties: {grid.count(TIE)}; invalid: {grid.count(INVALID)}")


@cli.command()
@_constraint_options
@click.option("--n-pos", type=int, help="Positive count.")
@click.option("--n-neg", type=int, help="Negative count.")
@click.option("--labels-from", type=click.Path(dir_okay=False), help="Scores file to take class counts from.")
@click.option("--json", "as_json", is_flag=True, help="Print JSON instead of text.")
@_handled
def region(alpha, kappa, kappa_frac, n_pos, n_neg, labels_from, as_json):
    """Print the feasible region's case, vertices and area."""
    if labels_from:
        table = read_scores(labels_from)
        table.curve()  # both classes present
        profile = DatasetProfile.from_labels(table.labels)
    elif n_pos is not None and n_neg is not None:
        profile = DatasetProfile(n_pos, n_neg)
    else:
        raise ConfigError("give --n-pos and --n-neg, or --labels-from")
    if (kappa is None) == (kappa_frac is None):
        raise ConfigError("give exactly one of --kappa or --kappa-frac")
    con = Constraints(alpha, kappa) if kappa is not None else Constraints.from_fraction(alpha, kappa_frac, profile)
    info = describe_region(profile, con)
    if as_json:
        click.echo(dumps_json(info), nl=False)
        return
    click.echo(f"case: {info['case']}")
    click.echo(f"area: {fmt_float(info['area'])}")
    click.echo("vertices:")
    for x, y in info["vertices"]:
        click.echo(f"  {fmt_float(x)},{fmt_float(y)}")


@cli.command()
@click.argument("output", type=click.Path(dir_okay=False))
@click.option("--n-pos", type=int, required=True)
@click.option("--n-neg", type=int, required=True)
@click.option("--mu1", type=float, default=1.0, show_default=True, help="Mean score of positives.")
@click.option("--sigma1", type=float, default=1.0, show_default=True)
@click.option("--mu0", type=float, default=0.0, show_default=True, help="Mean score of negatives.")
@click.option("--sigma0", type=float, default=1.0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@_handled
def synth(output, n_pos, n_neg, mu1, sigma1, mu0, sigma0, seed):
    """Write a seeded two-Gaussian scores file."""
    synth_generate(n_pos, n_neg, mu1=mu1, sigma1=sigma1, mu0=mu0, sigma0=sigma0, seed=seed, path=output)
    click.echo(output)


def main(argv=None):
    cli.main(args=argv, prog_name="pvoros")


if __name__ == "__main__":
    main()
