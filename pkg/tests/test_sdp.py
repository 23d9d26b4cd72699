import numpy as np
import pytest

from seqanm.model import steering
from seqanm.sdp import (
    MmvSdpProblem,
    MmvSdpSolution,
    SolverOptions,
    solve_mmv_anm,
    toeplitz_adjoint,
    toeplitz_from_first_row,
)


class TestToeplitzFromFirstRow:
    def test_identity(self):
        np.testing.assert_array_equal(toeplitz_from_first_row([1, 0, 0]), np.eye(3))

    def test_hermitian_fill(self):
        T = toeplitz_from_first_row([2, 1j])
        np.testing.assert_array_equal(T, np.array([[2, 1j], [-1j, 2]]))

    def test_rank_one_steering_row(self):
        f = steering(8, 0.3)
        R = np.outer(f, f.conj())
        T = toeplitz_from_first_row(R[0])
        np.testing.assert_allclose(T, R, atol=1e-14)

    def test_exactly_hermitian(self):
        rng = np.random.default_rng(0)
        u = rng.normal(size=6) + 1j * rng.normal(size=6)
        u[0] = u[0].real
        T = toeplitz_from_first_row(u)
        np.testing.assert_array_equal(T, T.conj().T)

    def test_nonreal_leading_entry_rejected(self):
        with pytest.raises(ValueError):
            toeplitz_from_first_row([1 + 0.5j, 2.0])


class TestToeplitzAdjoint:
    def test_identity_input(self):
        np.testing.assert_allclose(toeplitz_adjoint(np.eye(3)), [3, 0, 0], atol=1e-15)

    def test_adjoint_identity_random_pairs(self):
        # Re<T(u), A> == Re<u, adj(A)> (the Toeplitz embedding is real-linear)
        rng = np.random.default_rng(1)
        for _ in range(100):
            K = int(rng.integers(1, 12))
            u = rng.normal(size=K) + 1j * rng.normal(size=K)
            u[0] = u[0].real
            A = rng.normal(size=(K, K)) + 1j * rng.normal(size=(K, K))
            lhs = np.vdot(toeplitz_from_first_row(u), A).real
            rhs = np.vdot(u, toeplitz_adjoint(A)).real
            assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))

    def test_diagonal_counts_on_toeplitz_input(self):
        # adj(T(u)) = [K*u0, 2(K-1)u1, 2(K-2)u2, ...]
        rng = np.random.default_rng(2)
        K = 7
        u = rng.normal(size=K) + 1j * rng.normal(size=K)
        u[0] = u[0].real
        adj = toeplitz_adjoint(toeplitz_from_first_row(u))
        counts = np.concatenate([[K], 2.0 * (K - np.arange(1, K))])
        np.testing.assert_allclose(adj, counts * u, atol=1e-12)

    def test_rejects_nonsquare(self):
        with pytest.raises(ValueError):
            toeplitz_adjoint(np.zeros((2, 3)))


def rank_one_problem(M=16, J=4, gain=1.0, phi=0.3, seed=0):
    rng = np.random.default_rng(seed)
    b = rng.normal(size=J) + 1j * rng.normal(size=J)
    b /= np.linalg.norm(b)
    X0 = gain * np.outer(steering(M, phi), b.conj())
    return MmvSdpProblem(X0, "rows", np.arange(M), M, J)


class TestSolveMmvAnm:
    def test_zero_data(self):
        prob = MmvSdpProblem(np.zeros((3, 2)), "rows", [0, 2, 3], 5, 2)
        sol = solve_mmv_anm(prob)
        assert sol.objective == 0.0
        np.testing.assert_array_equal(sol.u, np.zeros(5))
        np.testing.assert_array_equal(sol.W, np.zeros((2, 2)))
        np.testing.assert_array_equal(sol.X, np.zeros((5, 2)))

    def test_rank_one_closed_form(self):
        # single atom c*f_M(phi)b^H has optimum |c|*sqrt(M)
        sol = solve_mmv_anm(rank_one_problem(M=16), SolverOptions(tol=1e-7, max_iter=30000))
        assert sol.objective == pytest.approx(4.0, rel=1e-3)

    def test_rank_one_scaled_gain(self):
        sol = solve_mmv_anm(rank_one_problem(M=9, gain=2.5),
                            SolverOptions(tol=1e-7, max_iter=30000))
        assert sol.objective == pytest.approx(2.5 * 3.0, rel=1e-3)

    def test_positive_homogeneity(self):
        rng = np.random.default_rng(3)
        rows = np.array([0, 1, 3, 4])
        D = rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3))
        opts = SolverOptions(tol=1e-8, max_iter=50000)
        base = solve_mmv_anm(MmvSdpProblem(D, "rows", rows, 6, 3), opts)
        scaled = solve_mmv_anm(MmvSdpProblem(2.0 * D, "rows", rows, 6, 3), opts)
        assert scaled.objective == pytest.approx(2.0 * base.objective, rel=2e-6)

    def test_fixed_rows_clamped_bit_exact(self):
        rng = np.random.default_rng(4)
        rows = np.array([1, 2, 5])
        D = rng.normal(size=(3, 4)) + 1j * rng.normal(size=(3, 4))
        sol = solve_mmv_anm(MmvSdpProblem(D, "rows", rows, 7, 4),
                            SolverOptions(max_iter=200))
        np.testing.assert_array_equal(sol.X[rows], D)

    def test_fixed_cols_clamped_bit_exact(self):
        rng = np.random.default_rng(5)
        cols = np.array([0, 3])
        D = rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2))
        sol = solve_mmv_anm(MmvSdpProblem(D, "cols", cols, 6, 4),
                            SolverOptions(max_iter=200))
        assert sol.X.shape == (4, 6)
        np.testing.assert_array_equal(sol.X[:, cols], D)

    def test_cols_axis_matches_transposed_rows_axis(self):
        rng = np.random.default_rng(6)
        cols = np.array([1, 2, 4])
        D = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        opts = SolverOptions(tol=1e-8, max_iter=50000)
        via_cols = solve_mmv_anm(MmvSdpProblem(D, "cols", cols, 5, 3), opts)
        via_rows = solve_mmv_anm(MmvSdpProblem(D.conj().T, "rows", cols, 5, 3), opts)
        assert via_cols.objective == pytest.approx(via_rows.objective, rel=1e-9)
        np.testing.assert_allclose(via_cols.X, via_rows.X.conj().T, atol=1e-12)
        np.testing.assert_allclose(via_cols.u, via_rows.u, atol=1e-12)

    def test_solution_invariants(self):
        rng = np.random.default_rng(7)
        rows = np.array([0, 2, 3, 6])
        th = rng.uniform(size=2)
        X0 = sum(np.outer(steering(8, t), rng.normal(size=3) + 1j * rng.normal(size=3))
                 for t in th)
        D = np.asarray(X0)[rows] + 0.01 * (rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3)))
        sol = solve_mmv_anm(MmvSdpProblem(D, "rows", rows, 8, 3),
                            SolverOptions(tol=1e-7, max_iter=50000))
        assert isinstance(sol, MmvSdpSolution)
        assert abs(sol.u[0].imag) <= 1e-9 * max(1.0, abs(sol.u[0]))
        assert sol.u[0].real >= -1e-8
        # PSD residual of the block matrix, relative to the objective scale
        assert sol.diagnostics.min_eigenvalue >= -1e-3 * (1.0 + sol.objective)
        # W block Hermitian
        np.testing.assert_allclose(sol.W, sol.W.conj().T, atol=1e-12)

    def test_best_objective_monotone(self):
        rng = np.random.default_rng(8)
        rows = np.arange(6)
        D = rng.normal(size=(6, 2)) + 1j * rng.normal(size=(6, 2))
        sol = solve_mmv_anm(MmvSdpProblem(D, "rows", rows, 6, 2),
                            SolverOptions(tol=1e-7, max_iter=20000))
        best = np.minimum.accumulate(sol.diagnostics.objective_history)
        assert np.all(np.diff(best) <= 1e-12)
        assert sol.diagnostics.converged

    def test_iteration_budget_flags_nonconverged(self):
        rng = np.random.default_rng(9)
        rows = np.array([0, 1, 4])
        D = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
        sol = solve_mmv_anm(MmvSdpProblem(D, "rows", rows, 6, 2),
                            SolverOptions(tol=1e-12, max_iter=5))
        assert not sol.diagnostics.converged
        assert sol.diagnostics.iterations == 5
        np.testing.assert_array_equal(sol.X[rows], D)  # clamp survives regardless

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            MmvSdpProblem(np.zeros((3, 2)), "rows", [0, 1], 5, 2)
        with pytest.raises(ValueError):
            MmvSdpProblem(np.zeros((3, 2)), "cols", [0, 1, 2], 5, 2)
        with pytest.raises(ValueError):
            MmvSdpProblem(np.zeros((2, 2)), "sideways", [0, 1], 5, 2)
        with pytest.raises(ValueError):
            MmvSdpProblem(np.zeros((2, 2)), "rows", [3, 1], 5, 2)


class TestOracleAgreement:
    """Small instances against an independent convex solver."""

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_matches_generic_sdp_solver(self, seed):
        pytest.importorskip("cvxpy")
        from oracle_utils import mmv_sdp_objective

        rng = np.random.default_rng(seed)
        K = int(rng.integers(5, 9))
        J = int(rng.integers(2, 5))
        n_obs = int(rng.integers(max(2, K // 2), K + 1))
        rows = np.sort(rng.choice(K, size=n_obs, replace=False))
        th = rng.uniform(size=2)
        X0 = sum(rng.normal() * np.outer(steering(K, t),
                                         rng.normal(size=J) + 1j * rng.normal(size=J))
                 for t in th)
        D = np.asarray(X0)[rows] + 0.05 * (rng.normal(size=(n_obs, J))
                                           + 1j * rng.normal(size=(n_obs, J)))
        mine = solve_mmv_anm(MmvSdpProblem(D, "rows", rows, K, J),
                             SolverOptions(tol=1e-9, max_iter=100000))
        ref = mmv_sdp_objective(D, rows, K, J)
        assert mine.objective == pytest.approx(ref, rel=1e-4)
