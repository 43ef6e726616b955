"""Distributed gradient play, its Nesterov acceleration, and the
centralized reference solver.

All three solvers are projected gradient iterations for a variational
inequality. The distributed ones act on ``n x n`` estimate matrices with the
augmented mapping ``F_a``:

* :func:`grane_run` iterates ``X <- P(X - step * F_a(X))`` and, with the
  step ``mu / L**2`` of the selected monotonicity path, contracts the
  squared distance to the equilibrium matrix by ``(1 - 1/gamma**2)`` per
  iteration, ``gamma = L/mu``.
* :func:`acc_grane_run` maintains the weighted averages of an estimate
  sequence (weights ``lam_0 = 1``, ``lam_{k+1} = S_k / gamma``) and reaches
  accuracy on a ``gamma`` rather than ``gamma**2`` iteration scale; it needs
  the full strong-monotonicity constant.
* :func:`centralized_gradient_play` solves the underlying ``n``-dimensional
  game directly and provides the reference equilibrium for traces.

Every run is deterministic given its inputs; traces record per-iteration
residuals and export to CSV.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .augmented import (
    AugmentedConfig,
    StrongMonotonicityUnavailableError,
    augmented_mapping,
    consensus_gap,
    is_feasible_estimate,
    project_estimates,
)
from .games import Game, project_box
from .network import MixingMatrix

__all__ = [
    "ConvergenceTrace",
    "DivergenceError",
    "SolverConfig",
    "acc_grane_run",
    "acceleration_weights",
    "centralized_gradient_play",
    "grane_player_step",
    "grane_run",
    "residual_metrics",
]

# a 10x step-norm growth over this many iterations aborts the run
_GUARD_WINDOW = 100
_GUARD_FACTOR = 10.0

TRACE_COLUMNS = ("k", "fro_residual", "relative_error", "consensus_gap", "vi_residual")


class DivergenceError(RuntimeError):
    """The iteration is growing instead of contracting (step size too large)."""


@dataclass
class SolverConfig:
    """Settings of one solver run.

    ``step='auto'`` resolves to ``mu / L**2`` with the constants of the
    selected path. ``alpha`` is a uniform value, an explicit per-player
    list, or ``'remark4'`` for the automatic restricted-path scaling;
    ``beta`` optionally overrides the balance parameter of that scaling.
    ``stop_tol`` stops the run early once the iterate movement falls below
    it (0 disables). Full residual records are kept every ``trace_stride``
    iterations; the cheap distance-to-reference history is always dense.
    """

    algorithm: str = "grane"
    step: float | str = "auto"
    max_iters: int = 1000
    stop_tol: float = 0.0
    alpha: float | str | list = 1.0
    path: str = "lemma2"
    beta: float | None = None
    trace_stride: int = 1
    name: str | None = None

    def __post_init__(self):
        if self.algorithm not in ("grane", "acc-grane", "centralized"):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.path not in ("lemma2", "lemma3"):
            raise ValueError(f"unknown monotonicity path {self.path!r}")
        if isinstance(self.step, str):
            if self.step != "auto":
                raise ValueError(f"step must be positive or 'auto', got {self.step!r}")
        elif self.step <= 0:
            raise ValueError("explicit step must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")
        if self.stop_tol < 0:
            raise ValueError("stop_tol must be nonnegative")
        if self.trace_stride < 1:
            raise ValueError("trace_stride must be positive")

    def resolve_step(self, cfg: AugmentedConfig) -> float:
        if self.step == "auto":
            return cfg.mu / cfg.L_Fa**2
        return float(self.step)


class ConvergenceTrace:
    """Residual history of a solver run.

    ``records`` holds one full metrics row per recorded iteration (strided);
    ``dense_fro`` holds the per-iteration distance to the reference matrix,
    from iteration 0 onward.
    """

    def __init__(self, stride: int = 1, metadata: dict | None = None):
        self.stride = stride
        self.metadata = dict(metadata or {})
        self.records: list[dict] = []
        self.dense_fro: list[float] = []

    # -- recording -----------------------------------------------------

    def push_dense(self, fro_to_ref: float):
        self.dense_fro.append(fro_to_ref)

    def push_record(self, k: int, metrics: dict):
        if self.records and k <= self.records[-1]["k"]:
            raise ValueError("iteration indices must be strictly increasing")
        self.records.append({"k": k, **metrics})

    # -- queries ---------------------------------------------------------

    @property
    def iterations(self) -> int:
        return len(self.dense_fro) - 1

    def normalized_residuals(self) -> np.ndarray:
        """Dense ``|X_k - X*| / |X_0 - X*|`` history."""
        dense = np.asarray(self.dense_fro, dtype=float)
        if dense.size == 0 or dense[0] == 0.0:
            return dense
        return dense / dense[0]

    def iterations_to(self, threshold: float):
        """First iteration whose normalized residual is at or below ``threshold``."""
        norm = self.normalized_residuals()
        hits = np.nonzero(norm <= threshold)[0]
        return int(hits[0]) if hits.size else None

    def final_record(self) -> dict:
        return dict(self.records[-1])

    # -- export ----------------------------------------------------------

    def to_csv(self, path):
        """Write the recorded rows, one line per record, 17 significant digits."""
        with open(path, "w") as fh:
            fh.write(",".join(TRACE_COLUMNS) + "\n")
            for rec in self.records:
                fh.write(
                    "%d,%.17g,%.17g,%.17g,%.17g\n"
                    % (
                        rec["k"],
                        rec["fro_residual"],
                        rec["relative_error"],
                        rec["consensus_gap"],
                        rec["vi_residual"],
                    )
                )


def residual_metrics(X, X_ref, X0, game: Game, mixing: MixingMatrix, alpha) -> dict:
    """The four residuals recorded per iteration.

    ``fro_residual`` is the Frobenius distance to the reference,
    ``relative_error`` the squared ratio against the distance to the start
    (``inf`` when the start coincides with the iterate but not the
    reference), ``consensus_gap`` the largest row disagreement, and
    ``vi_residual`` the fixed-point residual ``|X - P(X - F_a(X))|``.
    """
    X = np.asarray(X, dtype=float)
    num = float(np.linalg.norm(X - X_ref)) if X_ref is not None else float("nan")
    den = float(np.linalg.norm(X - X0)) if X0 is not None else float("nan")
    if X_ref is None or X0 is None:
        rel = float("nan")
    elif den == 0.0:
        rel = 0.0 if num == 0.0 else float("inf")
    else:
        rel = num**2 / den**2
    step_point = project_estimates(game.boxes, X - augmented_mapping(game, mixing, alpha, X))
    return {
        "fro_residual": num,
        "relative_error": rel,
        "consensus_gap": consensus_gap(X),
        "vi_residual": float(np.linalg.norm(X - step_point)),
    }


def _guard(step_norms: list[float], floor: float):
    k = len(step_norms) - 1
    if k >= _GUARD_WINDOW:
        old = step_norms[k - _GUARD_WINDOW]
        new = step_norms[k]
        if old > 0.0 and new > _GUARD_FACTOR * old and new > floor:
            raise DivergenceError(
                f"step norm grew from {old:.3g} to {new:.3g} within "
                f"{_GUARD_WINDOW} iterations; reduce the step size"
            )


def grane_run(
    game: Game,
    mixing: MixingMatrix,
    cfg: AugmentedConfig,
    sc: SolverConfig,
    X0=None,
    reference=None,
):
    """Run distributed gradient play on the estimate matrix.

    ``X0`` defaults to the zero matrix with a clamped diagonal and must have
    a feasible diagonal if supplied. ``reference`` is the equilibrium matrix
    used for residuals (rows all equal to the reference Nash equilibrium).
    Returns the final matrix and the trace.
    """
    n = game.n
    X = (
        project_estimates(game.boxes, np.zeros((n, n)))
        if X0 is None
        else np.array(X0, dtype=float)
    )
    if not is_feasible_estimate(game.boxes, X):
        raise ValueError("X0 has an infeasible diagonal")
    lam = sc.resolve_step(cfg)
    X_ref = None if reference is None else np.asarray(reference, dtype=float)
    X_start = X.copy()

    trace = ConvergenceTrace(
        stride=sc.trace_stride,
        metadata={"algorithm": "grane", "step": lam, "path": cfg.path},
    )
    t0 = time.perf_counter()

    def dense(Xc):
        trace.push_dense(
            float(np.linalg.norm(Xc - X_ref)) if X_ref is not None else float("nan")
        )

    def record(k, Xc):
        trace.push_record(k, residual_metrics(Xc, X_ref, X_start, game, mixing, cfg.alpha))

    dense(X)
    record(0, X)
    # hot loop: the update is P(X - lam*F_a(X)) with F_a and the projection
    # inlined (identical arithmetic to augmented_mapping/project_estimates)
    W = mixing.W
    alpha = np.broadcast_to(np.asarray(cfg.alpha, dtype=float), (n,))
    idx = np.arange(n)
    lo = np.array([b.lo for b in game.boxes])
    hi = np.array([b.hi for b in game.boxes])
    step_norms: list[float] = []
    floor = 0.0
    k = 0
    while k < sc.max_iters:
        Fa = X - W @ X
        Fa[idx, idx] += alpha * game.local_gradients(X)
        X_new = X - lam * Fa
        X_new[idx, idx] = np.clip(X_new[idx, idx], lo, hi)
        k += 1
        move = float(np.linalg.norm(X_new - X))
        step_norms.append(move)
        if floor == 0.0 and move > 0.0:
            floor = 1e-8 * move
        X = X_new
        dense(X)
        if k % sc.trace_stride == 0 or k == sc.max_iters:
            record(k, X)
        _guard(step_norms, floor)
        if sc.stop_tol > 0.0 and move <= sc.stop_tol:
            if trace.records[-1]["k"] != k:
                record(k, X)
            break
    trace.metadata["wall_time"] = time.perf_counter() - t0
    trace.metadata["iterations"] = k
    return X, trace


def grane_player_step(game: Game, mixing: MixingMatrix, alpha, lam: float, X) -> np.ndarray:
    """One gradient-play iteration written as each player's local update.

    Player ``i`` first mixes every coordinate of its estimate with the
    neighbors' estimates,

        X_il <- (1 - lam + lam*w_ii) * X_il + lam * sum_j w_ij * X_jl,

    then the own coordinate additionally takes the gradient step and is
    clamped to the action interval:

        X_ii <- clamp(mixed X_ii - lam * alpha_i * dJ_i(row_i)).

    This is the row-wise form of ``P(X - lam * F_a(X))`` and agrees with the
    matrix update to rounding error; it exists for exposition and as a
    cross-check of the matrix form.
    """
    X = np.asarray(X, dtype=float)
    n = game.n
    alpha = np.broadcast_to(np.asarray(alpha, dtype=float), (n,))
    W = mixing.W
    out = np.empty_like(X)
    for i in range(n):
        grad_i = game.partial_gradient(i, X[i])
        for l in range(n):
            mixed = sum(W[i, j] * X[j, l] for j in mixing.graph.neighbors(i))
            out[i, l] = (1.0 - lam + lam * W[i, i]) * X[i, l] + lam * mixed
            if l == i:
                out[i, l] = game.boxes[i].clamp(out[i, l] - lam * alpha[i] * grad_i)
    return out


def acceleration_weights(gamma: float, count: int):
    """The weight sequence ``lam`` and its prefix sums ``S``.

    ``lam_0 = 1`` and ``lam_{k+1} = S_k / gamma``; e.g. ``gamma=2`` yields
    ``lam = (1, 0.5, 0.75, 1.125, ...)`` and ``S = (1, 1.5, 2.25, 3.375, ...)``.
    """
    lams = [1.0]
    sums = [1.0]
    for _ in range(count - 1):
        lams.append(sums[-1] / gamma)
        sums.append(sums[-1] + lams[-1])
    return np.array(lams), np.array(sums)


def acc_grane_run(
    game: Game,
    mixing: MixingMatrix,
    cfg: AugmentedConfig,
    sc: SolverConfig,
    Y0=None,
    reference=None,
):
    """Run the accelerated gradient play; returns the averaged output.

    Iteration ``k`` forms ``X_k`` by projecting the weighted average of
    ``Y_t - F_a(Y_t)/mu`` over ``t <= k`` and takes ``Y_{k+1}`` as a
    ``1/L`` gradient step from ``X_k``; the reported output is the weighted
    average of the ``Y_t`` themselves. The running sums make each iteration
    O(n^2) instead of re-averaging the whole history; they are jointly
    rescaled when the geometrically growing weights approach overflow,
    which leaves every iterate unchanged. Requires the strong-monotonicity
    constant (``cfg.mu_Fa``).
    """
    if cfg.mu_Fa is None:
        raise StrongMonotonicityUnavailableError(
            "acceleration needs the strong-monotonicity constant; it is "
            "undefined for this configuration"
        )
    mu, L = cfg.mu_Fa, cfg.L_Fa
    gamma = L / mu
    n = game.n
    Y = (
        project_estimates(game.boxes, np.zeros((n, n)))
        if Y0 is None
        else np.array(Y0, dtype=float)
    )
    if not is_feasible_estimate(game.boxes, Y):
        raise ValueError("Y0 has an infeasible diagonal")
    X_ref = None if reference is None else np.asarray(reference, dtype=float)
    Y_start = Y.copy()

    trace = ConvergenceTrace(
        stride=sc.trace_stride,
        metadata={
            "algorithm": "acc-grane",
            "gamma": gamma,
            "path": cfg.path,
            "step": {"averaging": 1.0 / mu, "gradient": 1.0 / L},
        },
    )
    t0 = time.perf_counter()

    A = np.zeros((n, n))  # sum of lam_t * Y_t
    B = np.zeros((n, n))  # sum of lam_t * (Y_t - F_a(Y_t)/mu)
    S = 0.0
    lam_t = 1.0
    y_tilde_prev = None
    step_norms: list[float] = []
    floor = 0.0
    k = 0
    while k < sc.max_iters:
        Fa_Y = augmented_mapping(game, mixing, cfg.alpha, Y)
        A += lam_t * Y
        B += lam_t * (Y - Fa_Y / mu)
        S += lam_t
        X_k = project_estimates(game.boxes, B / S)
        Y = project_estimates(
            game.boxes, X_k - augmented_mapping(game, mixing, cfg.alpha, X_k) / L
        )
        y_tilde = A / S
        trace.push_dense(
            float(np.linalg.norm(y_tilde - X_ref)) if X_ref is not None else float("nan")
        )
        if k % sc.trace_stride == 0 or k == sc.max_iters - 1:
            trace.push_record(
                k, residual_metrics(y_tilde, X_ref, Y_start, game, mixing, cfg.alpha)
            )
        if y_tilde_prev is not None:
            move = float(np.linalg.norm(y_tilde - y_tilde_prev))
            step_norms.append(move)
            if floor == 0.0 and move > 0.0:
                floor = 1e-8 * move
            _guard(step_norms, floor)
            if sc.stop_tol > 0.0 and move <= sc.stop_tol:
                if trace.records[-1]["k"] != k:
                    trace.push_record(
                        k, residual_metrics(y_tilde, X_ref, Y_start, game, mixing, cfg.alpha)
                    )
                k += 1
                break
        y_tilde_prev = y_tilde
        lam_t = S / gamma
        if S > 1e100:  # rescale the running sums; ratios are unaffected
            A /= S
            B /= S
            lam_t /= S
            S = 1.0
        k += 1
    trace.metadata["wall_time"] = time.perf_counter() - t0
    trace.metadata["iterations"] = k
    return y_tilde, trace


def centralized_gradient_play(
    game: Game,
    step: float | str = "auto",
    max_iters: int = 20000,
    tol: float = 1e-12,
    x0=None,
):
    """Projected gradient play on the joint action space.

    Serves as the ground-truth oracle for the distributed runs. The
    automatic step is ``mu_F / (sqrt(n) * max_i L_(i))**2``, a conservative
    bound on the mapping's Lipschitz constant; it requires ``mu_F > 0``.
    Stops when the iterate moves by at most ``tol``.
    """
    constants = game.constants
    if step == "auto":
        if constants.mu_F <= 0:
            raise ValueError("auto step needs mu_F > 0; supply an explicit step")
        L = np.sqrt(game.n) * constants.mapping_lipschitz
        step = constants.mu_F / L**2
    elif not isinstance(step, (int, float)) or step <= 0:
        raise ValueError("step must be positive or 'auto'")

    x = project_box(game.boxes, np.zeros(game.n) if x0 is None else np.asarray(x0, float))
    step_norms: list[float] = []
    floor = 0.0
    for _ in range(max_iters):
        x_new = project_box(game.boxes, x - step * game.mapping(x))
        move = float(np.linalg.norm(x_new - x))
        step_norms.append(move)
        if floor == 0.0 and move > 0.0:
            floor = 1e-8 * move
        x = x_new
        _guard(step_norms, floor)
        if move <= tol:
            break
    return x
