"""Communication graphs and doubly stochastic mixing matrices.

Solvers exchange estimates through a symmetric nonnegative weight matrix
``W`` whose support matches an undirected connected graph: rows and columns
sum to one, ``I - W`` is positive semidefinite, and its null space is the
consensus line ``span(1)``. Two standard constructions are provided (lazy
Laplacian weights and Metropolis weights) together with a validator for all
of these properties and the two spectral quantities every step-size formula
consumes: the largest singular value of ``I - W`` and its smallest nonzero
eigenvalue.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Graph",
    "MixingMatrix",
    "MixingValidation",
    "complete_graph",
    "mixing_from_laplacian",
    "mixing_metropolis",
    "path_graph",
    "random_tree",
    "validate_mixing",
]

# eigenvalues of I - W below this are treated as the consensus null space
_NULL_TOL = 1e-9


class Graph:
    """Undirected graph on nodes ``0..n-1`` with canonicalized edge set."""

    def __init__(self, n: int, edges):
        if n < 1:
            raise ValueError("graph needs at least one node")
        canon = set()
        for i, j in edges:
            i, j = int(i), int(j)
            if i == j:
                raise ValueError(f"self-loop at node {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i},{j}) out of range for n={n}")
            canon.add((min(i, j), max(i, j)))
        self.n = int(n)
        self.edges = tuple(sorted(canon))

    def neighbors(self, i: int) -> list[int]:
        return sorted(
            {j for e in self.edges for j in e if i in e} - {i}
        )

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=int)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        for i, j in self.edges:
            A[i, j] = A[j, i] = 1.0
        return A

    def laplacian(self) -> np.ndarray:
        return np.diag(self.degrees().astype(float)) - self.adjacency()

    def is_connected(self) -> bool:
        seen = {0}
        frontier = [0]
        adj = {i: [] for i in range(self.n)}
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        while frontier:
            u = frontier.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    frontier.append(v)
        return len(seen) == self.n

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data: dict) -> "Graph":
        return cls(int(data["n"]), data["edges"])

    def __eq__(self, other):
        return isinstance(other, Graph) and (self.n, self.edges) == (other.n, other.edges)

    def __repr__(self):
        return f"Graph(n={self.n}, edges={len(self.edges)})"


def path_graph(n: int) -> Graph:
    if n < 2:
        raise ValueError("need at least two nodes")
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> Graph:
    if n < 2:
        raise ValueError("need at least two nodes")
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def random_tree(n: int, seed: int) -> Graph:
    """Uniform-attachment random spanning tree on ``n`` nodes.

    Nodes are visited in a seeded random order and each new node is wired to
    a uniformly chosen earlier one, which yields a connected tree with
    ``n - 1`` edges, identical for identical ``(n, seed)``.
    """
    if n < 2:
        raise ValueError("need at least two nodes")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    edges = []
    for idx in range(1, n):
        parent = order[rng.integers(0, idx)]
        edges.append((int(order[idx]), int(parent)))
    return Graph(n, edges)


class MixingMatrix:
    """A mixing matrix together with its graph and cached spectral data.

    Attributes
    ----------
    W : ndarray
        The ``n x n`` weight matrix.
    graph : Graph
        The communication graph whose edges carry the off-diagonal support.
    sigma_max_IW : float
        Largest singular value of ``I - W``.
    lambda_min_nz_IW : float
        Smallest nonzero eigenvalue of ``I - W`` (algebraic connectivity of
        the weighted graph, strictly positive for connected graphs).
    """

    def __init__(self, W, graph: Graph):
        W = np.array(W, dtype=float)
        if W.shape != (graph.n, graph.n):
            raise ValueError("weight matrix shape does not match graph")
        self.W = W
        self.graph = graph
        self.n = graph.n
        IW = np.eye(self.n) - W
        self.sigma_max_IW = float(np.linalg.svd(IW, compute_uv=False).max())
        eigs = np.linalg.eigvalsh(IW)
        nonzero = eigs[np.abs(eigs) > _NULL_TOL]
        self.lambda_min_nz_IW = float(nonzero.min()) if nonzero.size else 0.0

    def to_json(self) -> dict:
        return {
            "W": self.W.tolist(),
            "sigma_max": self.sigma_max_IW,
            "lambda_min_nz": self.lambda_min_nz_IW,
        }

    def __repr__(self):
        return (
            f"MixingMatrix(n={self.n}, sigma_max={self.sigma_max_IW:.6g}, "
            f"lambda_min_nz={self.lambda_min_nz_IW:.6g})"
        )


def mixing_from_laplacian(graph: Graph, t: float | None = None) -> MixingMatrix:
    """Lazy Laplacian weights ``W = I - t*L``.

    The default ``t = 1/(max_degree + 1)`` keeps every diagonal entry
    strictly positive and all entries nonnegative. A user-supplied ``t``
    must satisfy ``0 < t <= 1/max_degree`` (nonnegativity) and
    ``t < 2/lambda_max(L)``.
    """
    if not graph.is_connected():
        raise ValueError("graph must be connected")
    L = graph.laplacian()
    max_deg = int(graph.degrees().max())
    lam_max = float(np.linalg.eigvalsh(L).max())
    if t is None:
        t = 1.0 / (max_deg + 1)
    else:
        t = float(t)
        if not 0 < t < 2.0 / lam_max:
            raise ValueError(f"t={t} outside (0, {2.0 / lam_max:.6g})")
        if t > 1.0 / max_deg:
            raise ValueError(f"t={t} exceeds 1/max_degree={1.0 / max_deg:.6g}")
    return MixingMatrix(np.eye(graph.n) - t * L, graph)


def mixing_metropolis(graph: Graph) -> MixingMatrix:
    """Metropolis weights ``w_ij = 1/(1 + max(deg_i, deg_j))`` on edges."""
    if not graph.is_connected():
        raise ValueError("graph must be connected")
    deg = graph.degrees()
    W = np.zeros((graph.n, graph.n))
    for i, j in graph.edges:
        W[i, j] = W[j, i] = 1.0 / (1.0 + max(deg[i], deg[j]))
    np.fill_diagonal(W, 1.0 - W.sum(axis=1))
    return MixingMatrix(W, graph)


@dataclass
class MixingValidation:
    """Outcome of the mixing-matrix checks; empty ``failures`` means valid."""

    failures: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures


def validate_mixing(m: MixingMatrix, tol: float = 1e-10) -> MixingValidation:
    """Check every structural property a mixing matrix must satisfy.

    Verifies symmetry, entrywise nonnegativity, unit row and column sums,
    that the spectrum of ``I - W`` lies in ``[0, 2]`` with exactly one
    (near-)zero eigenvalue, and that the off-diagonal support equals the
    graph's edge set. Each failed check contributes one entry to
    ``failures``; the numeric evidence is kept in ``details``.
    """
    W, n = m.W, m.n
    report = MixingValidation()

    def check(ok: bool, name: str, value):
        report.details[name] = value
        if not ok:
            report.failures.append(name)

    asym = float(np.abs(W - W.T).max())
    check(asym <= tol, "symmetry", asym)
    min_entry = float(W.min())
    check(min_entry >= -tol, "nonnegativity", min_entry)
    row_err = float(np.abs(W.sum(axis=1) - 1.0).max())
    check(row_err <= tol, "row_sums", row_err)
    col_err = float(np.abs(W.sum(axis=0) - 1.0).max())
    check(col_err <= tol, "column_sums", col_err)

    eigs = np.linalg.eigvalsh(np.eye(n) - W)
    check(eigs.min() >= -tol, "positive_semidefinite", float(eigs.min()))
    check(eigs.max() <= 2.0 + tol, "spectrum_upper", float(eigs.max()))
    n_null = int(np.sum(np.abs(eigs) <= tol))
    check(n_null == 1, "null_space_dimension", n_null)

    edge_set = set(m.graph.edges)
    bad = []
    for i in range(n):
        for j in range(i + 1, n):
            on_edge = (i, j) in edge_set
            if on_edge and W[i, j] <= tol:
                bad.append((i, j, "zero weight on edge"))
            if not on_edge and abs(W[i, j]) > tol:
                bad.append((i, j, "weight off the edge set"))
    check(not bad, "sparsity_pattern", bad)
    return report
