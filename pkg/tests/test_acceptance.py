"""Acceptance gate: every stated performance and correctness criterion.

Each test prints one ``ACCEPTANCE <n> PASS/FAIL`` line (visible with
``pytest -s``; the per-test PASSED/FAILED verdicts in ``pytest -v`` carry
the same information). The noisy Monte Carlo criteria run at desk scale
(M = N = 64); the ratio checks they perform are scale-free because the
bound values scale identically. Sweeps run at sdp.tol = 1e-4, which was
verified to shift per-trial MSE by well under 1% relative to the 1e-5
default while halving runtime.
"""

import os

import numpy as np
import pytest

from seqanm.bounds import fisher_crlb, sequential_bound, universal_bound
from seqanm.estimator import estimate_channel
from seqanm.harness import ExperimentConfig, run_sweep
from seqanm.model import (
    SamplingPattern,
    SystemConfig,
    draw_paths,
    draw_pattern,
    observe,
    steering,
    synth_channel,
    wrap_distance,
)
from seqanm.sdp import MmvSdpProblem, SolverOptions, solve_mmv_anm

WORKERS = 2 if (os.cpu_count() or 1) >= 2 else 1


def report(criterion, ok, detail):
    print(f"ACCEPTANCE {criterion} {'PASS' if ok else 'FAIL'}: {detail}")
    return ok


def median_mse(table, estimator, sweep_value=None):
    rows = [r for r in table.results
            if sweep_value is None or r.sweep_value == sweep_value]
    vals = np.array([r.mse[estimator] for r in rows])
    return float(np.median(vals[np.isfinite(vals)]))


@pytest.fixture(scope="module")
def pilot_anchor_sweep():
    """Criteria 1-2: M = N = M_p = 64, sigma2 = 0.1, L = 3, N_p = 8, 50 trials."""
    cfg = ExperimentConfig(M=64, N=64, Mp=64, Np=8, L=3, sigma2=0.1,
                           trials=50, master_seed=20240811, sweep="pilots",
                           sweep_values=(8,), estimators=("proposed",),
                           sdp_tol=1e-4, workers=WORKERS)
    return run_sweep(cfg)


@pytest.fixture(scope="module")
def path_sweep():
    """Criteria 3-4: full observations, L in {2, 4, 8}, 30 trials per point."""
    cfg = ExperimentConfig(M=64, N=64, Mp=64, Np=64, L=2, sigma2=0.1,
                           trials=30, master_seed=20240812, sweep="paths",
                           sweep_values=(2, 4, 8), estimators=("proposed",),
                           sdp_tol=1e-4, workers=WORKERS)
    return run_sweep(cfg)


def test_criterion_1_universal_bound_tracking(pilot_anchor_sweep):
    med = median_mse(pilot_anchor_sweep, "proposed")
    bound = universal_bound(3, 0.1, 64, 8)
    ratio = med / bound
    ok = 1.0 <= ratio <= 6.0
    assert report(1, ok, f"median MSE {med:.3e} = {ratio:.2f} x universal bound "
                         f"{bound:.3e}; required factor within [1, 6]")


def test_criterion_2_noise_floor(pilot_anchor_sweep):
    med = median_mse(pilot_anchor_sweep, "proposed")
    ok = med <= 0.1 / 10
    assert report(2, ok, f"median MSE {med:.3e} <= sigma2/10 = 1.0e-02 "
                         f"at 12.5% pilot overhead")


def test_criterion_3_sequential_bound_tightness(path_sweep):
    details = []
    ok = True
    for L in (2, 4, 8):
        med = median_mse(path_sweep, "proposed", sweep_value=L)
        bound = L**2 * 0.1 / (64 * 64)
        ratio = med / bound
        ok &= 0.5 <= ratio <= 2.5
        details.append(f"L={L}: {ratio:.2f}x")
    assert report(3, ok, "median/sequential-bound ratios " + ", ".join(details)
                         + "; required within [0.5, 2.5]")


def test_criterion_4_quadratic_path_scaling(path_sweep):
    r = median_mse(path_sweep, "proposed", 8) / median_mse(path_sweep, "proposed", 2)
    ok = 8.0 <= r <= 32.0
    assert report(4, ok, f"median MSE(L=8)/MSE(L=2) = {r:.1f}; required within [8, 32]")


def test_criterion_5_crlb_identity():
    rng = np.random.default_rng(5)
    cfg = SystemConfig(M=12, N=10, M_p=12, N_p=10, sigma2=0.2)
    pattern = SamplingPattern(np.arange(12), np.arange(10), 12, 10)
    worst = 0.0
    for _ in range(20):
        L = int(rng.integers(1, 5))
        crlb = fisher_crlb(draw_paths(L, rng), pattern, cfg)
        worst = max(worst, abs(crlb / universal_bound(L, 0.2, 12, 10) - 1.0))
    ok = worst <= 1e-9
    assert report(5, ok, f"full-observation CRLB vs universal bound: worst relative "
                         f"deviation {worst:.2e} over 20 random path sets (tol 1e-9)")


def test_criterion_6_noiseless_recovery():
    rng = np.random.default_rng(20240806)
    opts = SolverOptions(tol=1e-7, max_iter=60000)
    hits = 0
    trials = 50
    for _ in range(trials):
        while True:
            paths = draw_paths(2, rng, delay_max=0.25)
            if (wrap_distance(paths.aoas[0], paths.aoas[1]) >= 0.125
                    and wrap_distance(paths.delays[0], paths.delays[1]) >= 0.125):
                break
        H = synth_channel(paths, 32, 32)
        pattern = draw_pattern(32, 32, 32, 12, rng)
        obs = observe(H, pattern, 0.0, rng)
        err = np.linalg.norm(estimate_channel(obs, 2, opts).H_hat - H) ** 2 / H.size
        hits += err <= 1e-8
    ok = hits >= 0.95 * trials
    assert report(6, ok, f"noiseless separated recovery: {hits}/{trials} trials with "
                         f"per-element squared error <= 1e-8 (need >= 95%)")


def test_criterion_7_solver_oracle_equivalence():
    pytest.importorskip("cvxpy")
    from oracle_utils import mmv_sdp_objective

    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(20):
        K = int(rng.integers(4, 9))
        J = int(rng.integers(2, min(5, 13 - K)))
        n_obs = int(rng.integers(max(2, K // 2), K + 1))
        rows = np.sort(rng.choice(K, size=n_obs, replace=False))
        X0 = sum(rng.normal() * np.outer(steering(K, rng.uniform()),
                                         rng.normal(size=J) + 1j * rng.normal(size=J))
                 for _ in range(2))
        D = np.asarray(X0)[rows] + 0.05 * (rng.normal(size=(n_obs, J))
                                           + 1j * rng.normal(size=(n_obs, J)))
        mine = solve_mmv_anm(MmvSdpProblem(D, "rows", rows, K, J),
                             SolverOptions(tol=1e-9, max_iter=200000)).objective
        ref = mmv_sdp_objective(D, rows, K, J)
        worst = max(worst, abs(mine - ref) / abs(ref))
    oracle_ok = worst <= 1e-4

    gain, M, J = 1.7, 16, 4
    b = rng.normal(size=J) + 1j * rng.normal(size=J)
    b /= np.linalg.norm(b)
    X0 = gain * np.outer(steering(M, 0.3), b.conj())
    obj = solve_mmv_anm(MmvSdpProblem(X0, "rows", np.arange(M), M, J),
                        SolverOptions(tol=1e-8, max_iter=100000)).objective
    rank_one_ok = abs(obj - gain * np.sqrt(M)) <= 1e-3 * gain * np.sqrt(M)
    ok = oracle_ok and rank_one_ok
    assert report(7, ok, f"objective vs generic SDP solver: worst rel {worst:.2e} over "
                         f"20 instances (tol 1e-4); rank-one |c|*sqrt(M): "
                         f"{obj:.5f} vs {gain * np.sqrt(M):.5f} (tol 1e-3)")


def test_criterion_8_bpdn_comparison():
    sparse_cfg = ExperimentConfig(M=64, N=64, Mp=64, Np=10, L=3, sigma2=0.1,
                                  trials=16, master_seed=20240813, sweep="pilots",
                                  sweep_values=(10,),
                                  estimators=("proposed", "bpdn"),
                                  sdp_tol=1e-4, workers=WORKERS)
    sparse = run_sweep(sparse_cfg)
    p_sparse = median_mse(sparse, "proposed")
    b_sparse = median_mse(sparse, "bpdn")
    sparse_ok = p_sparse < b_sparse

    def dense_medians(L):
        cfg = ExperimentConfig(M=64, N=64, Mp=64, Np=64, L=L, sigma2=0.1,
                               trials=12, master_seed=20240814, sweep="paths",
                               sweep_values=(L,), estimators=("proposed", "bpdn"),
                               sdp_tol=1e-4, workers=WORKERS)
        t = run_sweep(cfg)
        return median_mse(t, "proposed", L), median_mse(t, "bpdn", L)

    p20, b20 = dense_medians(20)
    crossover_note = f"L=20: proposed {p20:.3e} vs bpdn {b20:.3e}"
    dense_ok = b20 < p20
    if not dense_ok:
        # crossover may sit anywhere in [12, 26]; probe the upper tolerance
        p26, b26 = dense_medians(26)
        crossover_note += f"; L=26: proposed {p26:.3e} vs bpdn {b26:.3e}"
        dense_ok = b26 < p26
    ok = sparse_ok and dense_ok
    assert report(8, ok, f"sparse regime (L=3, Np/N=0.156): proposed {p_sparse:.3e} "
                         f"< bpdn {b_sparse:.3e} is {sparse_ok}; dense regime "
                         f"{crossover_note}")


def test_criterion_9_bound_arithmetic():
    u = universal_bound(3, 0.1, 100, 12)
    arithmetic_ok = abs(u - 5.0e-4) <= 1e-12
    ratio_ok = True
    for L, s2, M, Mp, Np in [(2, 0.1, 64, 64, 8), (7, 0.35, 100, 50, 12)]:
        _, approx = sequential_bound(L, s2, M, Mp, Np)
        ratio_ok &= abs(approx / universal_bound(L, s2, Mp, Np) - L / 2) <= 1e-12
    ok = arithmetic_ok and ratio_ok
    assert report(9, ok, f"universal_bound(3, 0.1, 100, 12) = {u:.17g} (= 5.0e-4); "
                         f"sequential approx / universal = L/2 exactly: {ratio_ok}")
