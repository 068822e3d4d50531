import pathlib
import sys
import tempfile

import networkx as nx

from stcpivot.bench import BenchConfig, BenchHarness
from stcpivot.graph import Graph, write_edge_list


def make_harness(directory: pathlib.Path) -> BenchHarness:
    config = BenchConfig(
        inputs=[directory],
        algorithms=["mfp-cd", "mfp-ce", "pivot"],
        reps=20,
        seed=1,
        workers=2,
    )
    harness = BenchHarness(config, progress=False)

    # printed as soon as each (graph, algorithm) pair is done
    @harness.row_ready.as_callback()
    async def show(row: dict):
        print(f"{row['graph']:>6} {row['algorithm']:>7} ratio={row['ratio']}")

    # failures land here instead of stopping the run
    @harness.error_handler.as_callback(priority=2)
    async def on_error(error: Exception, job, *args):
        print(f"{job} failed: {error}", file=sys.stderr)

    return harness


if __name__ == "__main__":
    # a few random graphs in a temporary directory
    directory = pathlib.Path(tempfile.mkdtemp())

    for seed in range(3):
        er = nx.gnp_random_graph(40, 0.1, seed=seed)
        write_edge_list(Graph.from_edges(40, er.edges()), directory / f"er-{seed}.txt")

    harness = make_harness(directory)
    harness.write_rows(harness.run(), sys.stdout)
