"""Finite-n frequency-bin oracle and the clustering of its relay gains into modes."""
from ltirelay.oracle.bins import BinSolution, BinOracle, oracle_optimize
from ltirelay.oracle.clusters import ClusterSummary, cluster_lambdas, lift_to_allocation
