"""
Benchmark harness: runs algorithms over graphs concurrently and writes one CSV
row per (graph, algorithm), in input order.

Each job runs in its own worker process, at most `workers` at a time, driven by
asyncio. A job still running when its time limit has elapsed since its process
started is killed and yields a `timeout` row, a failing job an `error:<Exception>` row, and neither stops
the run. Every row is announced through the `row_ready` event, failures through
`error_handler`.
"""

from __future__ import annotations

import asyncio
import csv
import dataclasses
import logging
import multiprocessing
import os
import pathlib
import sys
import typing

import tqdm

from stcpivot.algorithms import (
    CSV_COLUMNS,
    DEFAULT_REPS,
    approximation_ratio,
    read_fractional_solution,
    registry,
)
from stcpivot.event import Event
from stcpivot.exceptions import (
    AlgorithmNotFound,
    OracleCapExceeded,
    RatioUndefined,
    WorkerDied,
)
from stcpivot.graph import PathLike, load_graph
from stcpivot.labeling import Flavor
from stcpivot.oracle import DEFAULT_LABELING_CAP, opt_clustering, opt_labeling
from stcpivot.pivot import ObjectiveKind

logger = logging.getLogger(__name__)

DEFAULT_TIME_LIMIT = 600.0
ORACLE_COLUMNS = ("opt", "opt_labeling", "opt_gap")
GRAPH_SUFFIXES = (".txt", ".edges", ".el", ".mtx")
MISSING = "-"

# fractional solution files are looked up as `<frac_dir>/<graph stem><suffix>`
FRACTIONAL_SUFFIXES = {Flavor.STC: ".stc.frac", Flavor.STC_PLUS: ".stcplus.frac"}


def default_workers() -> int:
    """
    `STCPIVOT_THREADS` if set, else 1.
    """
    return int(os.environ.get("STCPIVOT_THREADS", "1"))


@dataclasses.dataclass
class BenchConfig:
    """
    :param inputs: Graph files, or directories scanned for graph files.
    :param algorithms: Registered algorithm ids.
    :param oracle_cap: Largest node count scored by the exact oracles, `None` disables oracle columns.
    :param labeling_cap: Largest wedge candidate count the exact labeling oracle accepts.
    :param frac_dir: Where fractional solutions for LP roundings are looked up.
    """

    inputs: typing.Sequence[PathLike]
    algorithms: typing.Sequence[str] = ("mfp-cd",)
    reps: int = DEFAULT_REPS
    seed: typing.Optional[int] = 0
    out: typing.Optional[PathLike] = None
    time_limit: float = DEFAULT_TIME_LIMIT
    oracle_cap: typing.Optional[int] = None
    labeling_cap: int = DEFAULT_LABELING_CAP
    workers: int = dataclasses.field(default_factory=default_workers)
    frac_dir: typing.Optional[PathLike] = None

    def __post_init__(self):
        if self.reps < 1:
            raise ValueError(f"reps must be at least 1, got {self.reps}.")

        if self.time_limit <= 0:
            raise ValueError(f"time_limit must be positive, got {self.time_limit}.")

        if self.labeling_cap < 0:
            raise ValueError(f"labeling_cap must be non-negative, got {self.labeling_cap}.")

        if self.workers < 1:
            raise ValueError(f"workers must be at least 1, got {self.workers}.")

        if not self.algorithms:
            raise ValueError("At least one algorithm is needed.")

        for name in self.algorithms:
            if registry.get_algorithm(name) is None:
                raise AlgorithmNotFound(name)

    @property
    def columns(self) -> typing.Tuple[str, ...]:
        return CSV_COLUMNS + (ORACLE_COLUMNS if self.oracle_cap is not None else ())

    def graph_paths(self) -> typing.List[pathlib.Path]:
        """
        Inputs in the given order, directories expanded to their graph files sorted by name.
        """
        paths: typing.List[pathlib.Path] = []

        for entry in map(pathlib.Path, self.inputs):
            if entry.is_dir():
                paths.extend(
                    sorted(p for p in entry.iterdir() if p.suffix.lower() in GRAPH_SUFFIXES)
                )
            else:
                paths.append(entry)

        return paths

    def fractional_path(self, graph_path: pathlib.Path, flavor: Flavor) -> typing.Optional[str]:
        if self.frac_dir is None:
            return None

        candidate = pathlib.Path(self.frac_dir) / f"{graph_path.stem}{FRACTIONAL_SUFFIXES[flavor]}"

        return str(candidate) if candidate.is_file() else None


class Job(typing.NamedTuple):
    index: int
    path: str
    algorithm: str
    reps: int
    seed: typing.Optional[int]
    frac_path: typing.Optional[str]
    oracle_cap: typing.Optional[int]
    labeling_cap: int = DEFAULT_LABELING_CAP


def run_job(job: Job) -> typing.Dict[str, str]:
    """
    Loads the graph, runs one algorithm and returns its CSV row.
    Runs in a worker process.
    """
    graph = load_graph(job.path)
    algorithm = registry.get_algorithm(job.algorithm)
    solution = None

    if algorithm.needs_solution is not None and job.frac_path is not None:
        solution = read_fractional_solution(job.frac_path, graph)

    result = algorithm(graph, reps=job.reps, seed=job.seed, solution=solution)
    row = result.report.as_row()

    if job.oracle_cap is not None:
        row.update(oracle_columns(
                graph, algorithm.objective, cap=job.oracle_cap, labeling_cap=job.labeling_cap
            )
        )

    return row


def oracle_columns(
    graph,
    objective: ObjectiveKind,
    *,
    cap: int,
    labeling_cap: int = DEFAULT_LABELING_CAP,
) -> typing.Dict[str, str]:
    """
    Exact optimum of the algorithm's objective, exact optimal labeling of the
    matching flavor and their ratio, or `-` where a cap is exceeded.
    """
    flavor = Flavor.STC if objective is ObjectiveKind.CLUSTER_DELETION else Flavor.STC_PLUS
    columns = dict.fromkeys(ORACLE_COLUMNS, MISSING)

    try:
        opt = opt_clustering(graph, objective, cap=cap).opt_value
        columns["opt"] = str(opt)
        labeling = opt_labeling(graph, flavor, cap=labeling_cap).opt_value
        columns["opt_labeling"] = str(labeling)
        columns["opt_gap"] = repr(round(approximation_ratio(labeling, opt), 6))

    except (OracleCapExceeded, RatioUndefined) as e:
        logger.debug("Oracle columns of %r left out: %s", graph, e)

    return columns


def _job_main(job: Job, connection):
    """
    Worker process entry point: sends `(True, row)` or `(False, exception)`.
    """
    try:
        message = (True, run_job(job))

    except Exception as e:
        message = (False, e)

    try:
        connection.send(message)

    except Exception:
        # the exception does not pickle
        connection.send((False, RuntimeError(repr(message[1]))))

    finally:
        connection.close()


class BenchHarness:
    """
    Runs a `BenchConfig`.
    """

    def __init__(self, config: BenchConfig, *, progress: bool = True):
        """
        :param progress: Show a `tqdm` progress bar on stderr.
        """
        self.config = config
        self.progress = progress
        self.context = multiprocessing.get_context()

        # Passed parameters are : the exception, the job.
        self.error_handler = Event("<error_handler>")
        self.row_ready = Event("row_ready", error_handler=self.error_handler)

        self.error_handler += self._log_error

    @staticmethod
    async def _log_error(error: Exception, job, *args):
        logger.warning("Bench job %s failed: %s", job, error)

    def jobs(self) -> typing.List[Job]:
        config = self.config
        jobs = []

        for path in config.graph_paths():
            for name in config.algorithms:
                flavor = registry.get_algorithm(name).needs_solution
                jobs.append(
                    Job(
                        index=len(jobs),
                        path=str(path),
                        algorithm=name,
                        reps=config.reps,
                        seed=config.seed,
                        frac_path=config.fractional_path(path, flavor) if flavor else None,
                        oracle_cap=config.oracle_cap,
                        labeling_cap=config.labeling_cap,
                    )
                )

        return jobs

    def failed_row(self, job: Job, status: str) -> typing.Dict[str, str]:
        row = dict.fromkeys(self.config.columns, MISSING)
        row.update(
            graph=pathlib.Path(job.path).stem,
            algorithm=job.algorithm,
            seed=MISSING if job.seed is None else str(job.seed),
            reps=str(job.reps),
            status=status,
        )

        return row

    async def _execute(self, job: Job) -> typing.Dict[str, str]:
        """
        Runs a job in its own process, killed once the time limit has elapsed
        since the process started.

        :raise asyncio.TimeoutError: If the job ran out of time.
        :raise WorkerDied: If the process exited without a result.
        """
        loop = asyncio.get_running_loop()
        receiver, sender = self.context.Pipe(duplex=False)
        process = self.context.Process(target=_job_main, args=(job, sender), daemon=True)
        readable = loop.create_future()

        process.start()
        sender.close()
        loop.add_reader(receiver.fileno(), lambda: readable.done() or readable.set_result(None))

        try:
            await asyncio.wait_for(readable, timeout=self.config.time_limit)

            try:
                succeeded, payload = receiver.recv()

            except EOFError:
                process.join()
                raise WorkerDied(exitcode=process.exitcode) from None

        finally:
            loop.remove_reader(receiver.fileno())

            if process.is_alive():
                process.kill()

            process.join()
            receiver.close()

        if not succeeded:
            raise payload

        return payload

    async def _run_one(self, slots: asyncio.Semaphore, job: Job) -> typing.Dict[str, str]:
        async with slots:
            try:
                row = await self._execute(job)

            except asyncio.TimeoutError:
                logger.warning(
                    "%s on %s exceeded %ss, killed.", job.algorithm, job.path, self.config.time_limit
                )
                row = self.failed_row(job, "timeout")

            except Exception as e:
                await self.error_handler.raise_event(e, job)
                row = self.failed_row(job, f"error:{type(e).__name__}")

        await self.row_ready(row)

        return row

    async def run_async(self) -> typing.List[typing.Dict[str, str]]:
        """
        Runs every job and writes the CSV if an output is configured.

        :return: The rows, in job order.
        """
        jobs = self.jobs()
        progress = tqdm.tqdm(total=len(jobs), disable=not self.progress, unit="job", file=sys.stderr)

        async def advance(seconds: float, row):
            logger.debug("Listeners of %s on %s took %.3fs.", row["algorithm"], row["graph"], seconds)
            progress.set_postfix_str(f"{row['graph']} {row['algorithm']}")
            progress.update(1)

        announced = self.row_ready.after(pass_extra=True)
        announced += advance
        slots = asyncio.Semaphore(self.config.workers)

        try:
            rows = await asyncio.gather(
                *(asyncio.create_task(self._run_one(slots, job)) for job in jobs)
            )

        finally:
            progress.close()
            announced -= advance

        if self.config.out is not None:
            self.write_csv(rows, self.config.out)

        return list(rows)

    def run(self) -> typing.List[typing.Dict[str, str]]:
        return asyncio.run(self.run_async())

    def write_csv(self, rows: typing.Iterable[typing.Dict[str, str]], path: PathLike):
        with pathlib.Path(path).open("w", newline="") as stream:
            self.write_rows(rows, stream)

        logger.info("Wrote bench results to %s.", path)

    def write_rows(self, rows: typing.Iterable[typing.Dict[str, str]], stream: typing.TextIO):
        writer = csv.DictWriter(stream, fieldnames=self.config.columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
