"""
Command line front end: `stcpivot lb|cluster|ratio|bench|oracle`.
"""

from __future__ import annotations

import csv
import functools
import logging
import pathlib
import sys
import time

import click

from stcpivot import __version__
from stcpivot.algorithms import (
    CSV_COLUMNS,
    DEFAULT_REPS,
    aposteriori_ratio,
    format_number,
    format_seconds,
    read_fractional_solution,
    registry,
)
from stcpivot.bench import DEFAULT_TIME_LIMIT, BenchConfig, BenchHarness
from stcpivot.exceptions import InfeasibleClustering, StcPivotException
from stcpivot.graph import GraphFormat, load_graph, read_clustering, write_clustering
from stcpivot.labeling import match_cd, match_ce, write_labeling
from stcpivot.oracle import DEFAULT_LABELING_CAP, Problem, solve
from stcpivot.pivot import ObjectiveKind, eval_objective

logger = logging.getLogger(__name__)

# distinct from click's usage (2) and generic error (1) codes
EXIT_INFEASIBLE = 3

OBJECTIVES = click.Choice([kind.value for kind in ObjectiveKind])
FORMATS = click.Choice([fmt.value for fmt in GraphFormat])
EXISTING_FILE = click.Path(exists=True, dir_okay=False, path_type=pathlib.Path)


def handle_errors(command):
    """
    Turns package errors into click errors: message on stderr, exit code 1.
    """

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)

        except StcPivotException as e:
            raise click.ClickException(str(e))

    return wrapper


def _load(path: pathlib.Path, file_format: str = None):
    return load_graph(path, GraphFormat(file_format) if file_format else None)


@click.group()
@click.option("-v", "--verbose", count=True, help="-v for info logs, -vv for debug logs.")
@click.version_option(__version__, prog_name="stcpivot")
def main(verbose: int):
    """
    Correlation clustering through strong triadic closure labelings.
    """
    logging.basicConfig(
        level=max(logging.WARNING - 10 * verbose, logging.DEBUG),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


@main.command()
@click.argument("graph", type=EXISTING_FILE)
@click.option("--obj", "objective", type=OBJECTIVES, default="cd", show_default=True)
@click.option("--order-seed", type=int, default=0, show_default=True, help="0 keeps centers ascending.")
@click.option("--format", "file_format", type=FORMATS, help="Guessed from the suffix by default.")
@click.option("--labeling", type=click.Path(dir_okay=False, path_type=pathlib.Path), help="Write the labeling there.")
@handle_errors
def lb(graph, objective, order_seed, file_format, labeling):
    """
    Prints the wedge matching lower bound of GRAPH.
    """
    g = _load(graph, file_format)
    start = time.perf_counter()
    matcher = match_cd if ObjectiveKind(objective) is ObjectiveKind.CLUSTER_DELETION else match_ce
    result = matcher(g, order_seed)
    seconds = time.perf_counter() - start

    if labeling is not None:
        write_labeling(result, g, labeling)

    click.echo(f"lb {result.matching_size}")
    click.echo(f"seconds {format_seconds(seconds)}")


@main.command()
@click.argument("graph", type=EXISTING_FILE)
@click.option("--alg", "algorithm", type=click.Choice(registry.names), required=True)
@click.option("--reps", type=click.IntRange(min=1), default=DEFAULT_REPS, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--order-seed", type=int, default=0, show_default=True)
@click.option("--frac-solution", type=EXISTING_FILE, help="Fractional solution for lp-* algorithms.")
@click.option("--format", "file_format", type=FORMATS)
@click.option("--out", type=click.Path(dir_okay=False, path_type=pathlib.Path), help="Write the clustering there.")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False, path_type=pathlib.Path), help="Append the report row there.")
@handle_errors
def cluster(graph, algorithm, reps, seed, order_seed, frac_solution, file_format, out, csv_path):
    """
    Clusters GRAPH and prints the report row.
    """
    g = _load(graph, file_format)
    solution = read_fractional_solution(frac_solution, g) if frac_solution else None
    result = registry.run(
        algorithm, g, reps=reps, seed=seed, order_seed=order_seed, solution=solution
    )

    if out is not None:
        write_clustering(result.clustering, out)

    row = result.report.as_row()
    writer = csv.DictWriter(click.get_text_stream("stdout"), fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerow(row)

    if csv_path is not None:
        is_new = not csv_path.exists() or csv_path.stat().st_size == 0

        with csv_path.open("a", newline="") as stream:
            writer = csv.DictWriter(stream, fieldnames=CSV_COLUMNS, lineterminator="\n")

            if is_new:
                writer.writeheader()

            writer.writerow(row)


@main.command()
@click.argument("graph", type=EXISTING_FILE)
@click.argument("clustering", type=EXISTING_FILE)
@click.option("--obj", "objective", type=OBJECTIVES, default="ce", show_default=True)
@click.option("--lb", "lower_bound", type=float, help="The wedge matching bound by default.")
@click.option("--format", "file_format", type=FORMATS)
@click.pass_context
@handle_errors
def ratio(ctx, graph, clustering, objective, lower_bound, file_format):
    """
    Scores an external CLUSTERING of GRAPH against a lower bound.
    """
    g = _load(graph, file_format)
    kind = ObjectiveKind(objective)
    c = read_clustering(clustering, n=g.n)

    if lower_bound is None:
        matcher = match_cd if kind is ObjectiveKind.CLUSTER_DELETION else match_ce
        lower_bound = matcher(g).matching_size

    try:
        value = aposteriori_ratio(g, c, kind, lower_bound)

    except InfeasibleClustering as e:
        click.echo(f"Error: {e}", err=True)
        ctx.exit(EXIT_INFEASIBLE)

    click.echo(f"ub {format_number(eval_objective(g, c, kind))}")
    click.echo(f"lb {format_number(lower_bound)}")
    click.echo(f"ratio {value:.6g}")


@main.command()
@click.argument("inputs", nargs=-1, required=True, type=click.Path(exists=True, path_type=pathlib.Path))
@click.option("--alg", "algorithms", type=click.Choice(registry.names), multiple=True, default=("mfp-cd",), show_default=True)
@click.option("--reps", type=click.IntRange(min=1), default=DEFAULT_REPS, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=pathlib.Path), help="CSV path, stdout by default.")
@click.option("--time-limit", type=click.FloatRange(min=0, min_open=True), default=DEFAULT_TIME_LIMIT, show_default=True)
@click.option("--oracle-cap", type=click.IntRange(min=0), help="Add exact optimum columns for graphs up to this size.")
@click.option("--labeling-cap", type=click.IntRange(min=0), default=DEFAULT_LABELING_CAP, show_default=True, help="Wedge candidate cap of the exact labeling column.")
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True, envvar="STCPIVOT_THREADS")
@click.option("--frac-dir", type=click.Path(file_okay=False, exists=True, path_type=pathlib.Path))
@click.option("--progress/--no-progress", default=True)
@handle_errors
def bench(inputs, algorithms, reps, seed, out, time_limit, oracle_cap, labeling_cap, workers, frac_dir, progress):
    """
    Runs algorithms over every graph of INPUTS and writes one CSV row per pair.
    """
    config = BenchConfig(
        inputs=inputs,
        algorithms=algorithms,
        reps=reps,
        seed=seed,
        out=out,
        time_limit=time_limit,
        oracle_cap=oracle_cap,
        labeling_cap=labeling_cap,
        workers=workers,
        frac_dir=frac_dir,
    )
    harness = BenchHarness(config, progress=progress)
    rows = harness.run()

    if out is None:
        harness.write_rows(rows, click.get_text_stream("stdout"))


@main.command()
@click.argument("graph", type=EXISTING_FILE)
@click.option("--problem", type=click.Choice([p.value for p in Problem]), default="ce", show_default=True)
@click.option("--cap", type=click.IntRange(min=0), help="Node cap for clusterings, candidate pair cap for labelings.")
@click.option("--format", "file_format", type=FORMATS)
@click.option("--out", type=click.Path(dir_okay=False, path_type=pathlib.Path), help="Write the optimal witness there.")
@handle_errors
def oracle(graph, problem, cap, file_format, out):
    """
    Prints the exact optimum of a small GRAPH.
    """
    g = _load(graph, file_format)
    problem = Problem(problem)
    result = solve(g, problem, cap=cap)

    if problem.objective is not None:
        witness = f"clusters {result.witness.k}"

        if out is not None:
            write_clustering(result.witness, out)

    else:
        witness = f"labeled {result.witness.size}"

        if out is not None:
            write_labeling(result.witness, g, out)

    click.echo(f"opt {result.opt_value}")
    click.echo(witness)
