"""Toeplitz-structured MMV atomic-norm semidefinite program and its solver.

The program computed here is

    minimize   (1/2) (tr T(u) + tr W)
    over       u in C^K, W Hermitian J x J, X in C^{K x J}
    subject to [[T(u), X], [X^H, W]] >= 0  (PSD)
               X restricted to a fixed row set equals the given data,

where T(u) is the Hermitian Toeplitz matrix with first row u. The optimal
objective is the MMV atomic norm of the best completion of the data. A
column-fixed variant (data pinned along columns instead of rows) is handled
by solving the row-fixed program on the conjugate transpose.

The solver is an operator-splitting (ADMM) iteration on the consensus form
Z = [[T(u), X], [X^H, W]], Z >= 0: the structured update is closed form
(diagonal averaging for the Toeplitz block, trace-penalized shifts of the
diagonal, clamping of the fixed entries of X), and the cone update is a
Hermitian eigendecomposition projection. Interior-point methods are not
practical at the block sizes this library targets (K + J around 200).
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh as dense_eigh
from scipy.linalg import toeplitz as build_toeplitz
from threadpoolctl import threadpool_limits

_REAL_TOL = 1e-9


def toeplitz_from_first_row(u: np.ndarray) -> np.ndarray:
    """Hermitian Toeplitz matrix with first row u; u[0] must be real."""
    u = np.asarray(u, dtype=complex)
    if u.ndim != 1 or u.size < 1:
        raise ValueError("u must be a nonempty vector")
    if abs(u[0].imag) > _REAL_TOL * max(1.0, abs(u[0])):
        raise ValueError(f"u[0] must be real, got {u[0]}")
    c = np.conj(u)
    c[0] = u[0].real
    return build_toeplitz(c, u)


@lru_cache(maxsize=32)
def _diag_index(K: int) -> np.ndarray:
    j, k = np.indices((K, K))
    return (k - j + K - 1).ravel()


def _diag_sums(A: np.ndarray) -> np.ndarray:
    """Sums of all 2K-1 diagonals of A, ordered from lowest subdiagonal up."""
    K = A.shape[0]
    idx = _diag_index(K)
    return (np.bincount(idx, weights=A.real.ravel(), minlength=2 * K - 1)
            + 1j * np.bincount(idx, weights=A.imag.ravel(), minlength=2 * K - 1))


def toeplitz_adjoint(A: np.ndarray) -> np.ndarray:
    """Adjoint of the Toeplitz embedding u -> T(u).

    Component d sums the d-th superdiagonal of A plus the conjugate of the
    d-th subdiagonal sum; component 0 is the plain diagonal sum. Satisfies
    Re<T(u), A> = Re<u, toeplitz_adjoint(A)> for every u with real u[0].
    """
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("A must be square")
    K = A.shape[0]
    s = _diag_sums(A)
    out = np.empty(K, dtype=complex)
    out[0] = s[K - 1]
    out[1:] = s[K:] + np.conj(s[K - 2::-1])
    return out


@dataclass
class MmvSdpProblem:
    """Data and shape of one MMV atomic-norm SDP.

    ``data`` holds the fixed entries of the completion variable X. With
    ``constraint_axis="rows"`` the rows of X indexed by ``fixed_index_set``
    are pinned to ``data`` (shape n_fixed x mmv_dim); with ``"cols"`` the
    columns are pinned (data shape mmv_dim x n_fixed). ``free_dim`` is the
    Toeplitz block size, ``mmv_dim`` the size of the W block.
    """

    data: np.ndarray
    constraint_axis: str
    fixed_index_set: np.ndarray
    free_dim: int
    mmv_dim: int

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=complex)
        self.fixed_index_set = np.asarray(self.fixed_index_set, dtype=int)
        if self.constraint_axis not in ("rows", "cols"):
            raise ValueError("constraint_axis must be 'rows' or 'cols'")
        idx = self.fixed_index_set
        if idx.ndim != 1 or idx.size < 1:
            raise ValueError("fixed_index_set must be a nonempty 1-d index list")
        if np.any(np.diff(idx) <= 0) or idx[0] < 0 or idx[-1] >= self.free_dim:
            raise ValueError("fixed_index_set must be sorted, unique and within range")
        expect = ((idx.size, self.mmv_dim) if self.constraint_axis == "rows"
                  else (self.mmv_dim, idx.size))
        if self.data.shape != expect:
            raise ValueError(f"data has shape {self.data.shape}, expected {expect}")


@dataclass
class SolverOptions:
    """Stopping tolerance, iteration budget, and penalty controls.

    ``rho`` is the initial penalty, adapted by residual balancing while
    ``adapt_rho`` is set. ``over_relax`` in (0, 2) is the standard ADMM
    relaxation factor; values near 1.8 roughly halve the iteration count on
    these problems.
    """

    tol: float = 1e-5
    max_iter: int = 5000
    rho: float = 1.0
    adapt_rho: bool = True
    over_relax: float = 1.8

    def __post_init__(self):
        if self.tol <= 0 or self.max_iter <= 0 or self.rho <= 0:
            raise ValueError("tol, max_iter and rho must be positive")
        if not 0 < self.over_relax < 2:
            raise ValueError("over_relax must lie in (0, 2)")


@dataclass
class SolveDiagnostics:
    iterations: int
    primal_residual: float
    dual_residual: float
    min_eigenvalue: float
    converged: bool
    rho: float
    objective_history: np.ndarray = field(repr=False)


@dataclass
class MmvSdpSolution:
    """Solver output: Toeplitz first row u, W block, completed X, objective."""

    u: np.ndarray
    W: np.ndarray
    X: np.ndarray
    objective: float
    diagnostics: SolveDiagnostics


def _zero_solution(problem: MmvSdpProblem) -> MmvSdpSolution:
    K, J = problem.free_dim, problem.mmv_dim
    shape = (K, J) if problem.constraint_axis == "rows" else (J, K)
    diag = SolveDiagnostics(0, 0.0, 0.0, 0.0, True, 0.0, np.zeros(1))
    return MmvSdpSolution(np.zeros(K, dtype=complex), np.zeros((J, J), dtype=complex),
                          np.zeros(shape, dtype=complex), 0.0, diag)


def solve_mmv_anm(problem: MmvSdpProblem, opts: SolverOptions | None = None) -> MmvSdpSolution:
    """Solve the MMV atomic-norm SDP by operator splitting.

    Returns the best iterate flagged non-converged if the iteration budget is
    exhausted before the primal and dual residuals drop below ``opts.tol``;
    fixed entries of X are clamped, so the affine constraint holds exactly in
    every case.
    """
    if opts is None:
        opts = SolverOptions()
    if not np.any(problem.data):
        return _zero_solution(problem)

    transposed = problem.constraint_axis == "cols"
    D = problem.data.conj().T if transposed else problem.data
    rows = problem.fixed_index_set
    K, J = problem.free_dim, problem.mmv_dim
    n = K + J
    rho = opts.rho

    X = np.zeros((K, J), dtype=complex)
    X[rows] = D
    sig = np.linalg.svd(X, compute_uv=False)[0]
    Z = np.zeros((n, n), dtype=complex)
    Z[:K, :K] = sig * np.eye(K)
    Z[K:, K:] = sig * np.eye(J)
    Z[:K, K:] = X
    Z[K:, :K] = X.conj().T
    U = np.zeros_like(Z)
    S = np.empty_like(Z)

    denom = 2.0 * (K - np.arange(K, dtype=float))
    free_rows = np.setdiff1d(np.arange(K), rows)
    history = np.empty(opts.max_iter)

    # BLAS threading is counterproductive at these block sizes; the solve is
    # documented single-threaded, so pin it
    with threadpool_limits(limits=1):
        converged, it, pr, dr, rho = _iterate(
            opts, K, J, rho, X, D, rows, free_rows, denom, S, Z, U, history)

    objective = 0.5 * (K * S[0, 0].real + np.trace(S[K:, K:]).real)
    min_eig = float(np.linalg.eigvalsh(S).min())
    u_out = S[0, :K].copy()
    W_out = S[K:, K:].copy()
    X_out = X.conj().T if transposed else X
    diag = SolveDiagnostics(it, float(pr), float(dr), min_eig, converged,
                            rho, history[:it].copy())
    return MmvSdpSolution(u_out, W_out, X_out, float(objective), diag)


def _iterate(opts, K, J, rho, X, D, rows, free_rows, denom, S, Z, U, history):
    """ADMM main loop; mutates X, S, Z, U and the history buffer in place."""
    pr = dr = np.inf
    converged = False
    it = 0
    for it in range(1, opts.max_iter + 1):
        G = Z - U

        # structured update: Toeplitz block by diagonal averaging with a
        # trace shift, W by Hermitian averaging with a trace shift, X free
        # entries by cross-block averaging, fixed entries clamped
        adj = toeplitz_adjoint(G[:K, :K])
        u = adj / denom
        u[0] = adj[0].real / K - 0.5 / rho
        G22 = G[K:, K:]
        W = 0.5 * (G22 + G22.conj().T)
        W.flat[:: J + 1] -= 0.5 / rho
        if free_rows.size:
            X[free_rows] = 0.5 * (G[:K, K:][free_rows]
                                  + G[K:, :K].conj().T[free_rows])

        S[:K, :K] = toeplitz_from_first_row(u)
        S[:K, K:] = X
        S[K:, :K] = X.conj().T
        S[K:, K:] = W

        history[it - 1] = 0.5 * (K * u[0].real + np.trace(W).real)

        alpha = opts.over_relax
        B = alpha * S + (1.0 - alpha) * Z if alpha != 1.0 else S.copy()
        B += U
        B += B.conj().T
        B *= 0.5
        w, V = dense_eigh(B, driver="evd", check_finite=False, overwrite_a=True)
        np.clip(w, 0.0, None, out=w)
        Z_prev = Z
        Z = (V * w) @ V.conj().T
        dZ = Z - Z_prev

        R = S - Z
        U += alpha * S + (1.0 - alpha) * Z_prev - Z

        pr = np.linalg.norm(R) / max(np.linalg.norm(S), np.linalg.norm(Z), 1.0)
        dr = rho * np.linalg.norm(dZ) / max(rho * np.linalg.norm(U), 1.0)
        if pr <= opts.tol and dr <= opts.tol:
            converged = True
            break

        if opts.adapt_rho and it % 10 == 0:
            if pr > 10.0 * dr:
                rho *= 2.0
                U *= 0.5
            elif dr > 10.0 * pr:
                rho *= 0.5
                U *= 2.0

    return converged, it, pr, dr, rho
