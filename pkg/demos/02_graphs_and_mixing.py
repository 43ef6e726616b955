"""Communication graphs and the mixing matrices the solvers average with.

A mixing matrix is symmetric, nonnegative and doubly stochastic, supported
on the graph's edges, and I - W annihilates exactly the consensus line.
Its two spectral quantities drive every step-size formula: sigma_max(I - W)
enters the Lipschitz constant, and the smallest nonzero eigenvalue of I - W
(the weighted algebraic connectivity) enters the monotonicity constants.
"""

import numpy as np

from grane import (
    mixing_from_laplacian,
    mixing_metropolis,
    path_graph,
    random_tree,
    validate_mixing,
)

graph = random_tree(8, seed=4)
print("random tree edges:", graph.edges)
print("degrees:", graph.degrees())

lazy = mixing_from_laplacian(graph)          # W = I - L/(max_degree + 1)
metro = mixing_metropolis(graph)             # w_ij = 1/(1 + max(deg_i, deg_j))

for name, m in (("lazy laplacian", lazy), ("metropolis", metro)):
    print(f"\n{name} weights:")
    print(np.round(m.W, 3))
    print("sigma_max(I-W)        =", round(m.sigma_max_IW, 6))
    print("lambda_min_nz(I-W)    =", round(m.lambda_min_nz_IW, 6))
    report = validate_mixing(m)
    print("structural checks pass:", report.passed)

# The validator pinpoints what breaks when a matrix is off.
broken = lazy.W.copy()
broken[0, 1] *= 1.5
from grane import MixingMatrix  # noqa: E402

report = validate_mixing(MixingMatrix(broken, graph))
print("\ntampered matrix fails:", report.failures)

# Denser graphs mix faster: compare the spectral gap of a path and a tree.
for g, label in ((path_graph(20), "path"), (random_tree(20, 0), "random tree")):
    m = mixing_from_laplacian(g)
    print(f"{label:12s} lambda_min_nz = {m.lambda_min_nz_IW:.5f}")
