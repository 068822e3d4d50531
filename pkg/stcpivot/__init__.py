"""
Correlation clustering through strong triadic closure labelings.

A greedy matching of open wedges labels edges weak (and, for cluster editing,
adds missing edges); its size bounds the optimum from below. Flipping the
labeling and pivoting on what remains gives a clustering with a 4 (cluster
deletion) or 6 (cluster editing) approximation guarantee in expectation, or a
hard 2x-budget one with deterministic pivoting.

example :
    from stcpivot import load_graph, mfp_cd

    graph = load_graph("netscience.mtx")
    report, clustering = mfp_cd(graph, reps=100, seed=7)

    print(report.lb, report.ub, report.ratio)

"""

__author__ = "Zucchinetti Hervé"
__status__ = "In development"
__version__ = "0.1.0"

from stcpivot.graph import Clustering, Graph, load_graph
from stcpivot.labeling import Flavor, StcLabeling, match_cd, match_ce
from stcpivot.pivot import ObjectiveKind, PivotInstance, eval_objective
from stcpivot.algorithms import (
    AlgoReport,
    FractionalSolution,
    aposteriori_ratio,
    lp_round_stc,
    lp_round_stcplus,
    mfp_cd,
    mfp_cd_det,
    mfp_ce,
    mfp_ce_det,
    registry,
)
from stcpivot.oracle import opt_clustering, opt_labeling
