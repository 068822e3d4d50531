import networkx as nx

from stcpivot import Graph, match_ce, mfp_cd, mfp_ce_det, opt_clustering
from stcpivot.algorithms import mfp_instance_ce
from stcpivot.pivot import ObjectiveKind, check_pivot_conditions

# Zachary's karate club, relabeled to 0..33
karate = nx.karate_club_graph()
graph = Graph.from_edges(karate.number_of_nodes(), karate.edges(), name="karate")

# lower bound and best of 100 pivots for cluster deletion
report, clustering = mfp_cd(graph, reps=100, seed=7)
print(f"cluster deletion: lb={report.lb} ub={report.ub} ratio={report.ratio:.3f}")

# the flipped instance meets the pivoting conditions with a factor of 2
instance = mfp_instance_ce(graph, match_ce(graph))
print("conditions hold:", bool(check_pivot_conditions(instance, alpha=2)))

# deterministic rounding never spends more than twice the labeling
report, _ = mfp_ce_det(graph)
print(f"cluster editing (deterministic): lb={report.lb} ub={report.ub}")

# a graph small enough for the exact oracle
small = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 2)], name="small")
print("exact cluster editing:", opt_clustering(small, ObjectiveKind.CLUSTER_EDITING).opt_value)
