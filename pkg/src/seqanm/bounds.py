"""MSE lower bounds: closed forms and the exact fixed-pattern CRLB.

Two closed-form per-element MSE bounds are provided: a universal bound for
any unbiased estimator under random subsampling, and a tighter pair of
bounds (a detailed form and its large-system simplification) for estimators
that process the channel sequentially as multiple measurement vectors over
the two domains. The exact Cramer-Rao bound for a *fixed* sampling pattern
is computed from the Fisher information of the 4L-real-parameter path model
(AoA, delay, gain modulus, gain angle per path).
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve as linalg_solve

from .model import PathSet, SamplingPattern, SystemConfig


class UnidentifiableModelError(ValueError):
    """The Fisher information matrix is singular for this path/pattern pair."""


def _check_positive(**kwargs):
    for name, value in kwargs.items():
        if value <= 0:
            raise ValueError(f"{name} must be positive, got {value}")


def universal_bound(L: int, sigma2: float, M_p: int, N_p: int) -> float:
    """Per-element MSE floor for any unbiased estimator: 2 L sigma^2 / (M_p N_p)."""
    _check_positive(L=L, sigma2=sigma2, M_p=M_p, N_p=N_p)
    return 2.0 * L * sigma2 / (M_p * N_p)


def sequential_bound(L: int, sigma2: float, M: int, M_p: int, N_p: int):
    """MSE floor for sequential MMV processing: (detailed, approximate).

    The detailed form is L^2 sigma^2 (1+2N_p)(1+2M) / (4 M M_p N_p^2); the
    approximation L^2 sigma^2 / (M_p N_p) is its limit for large M and N_p
    and sits exactly L/2 above the universal bound.
    """
    _check_positive(L=L, sigma2=sigma2, M=M, M_p=M_p, N_p=N_p)
    detailed = L**2 * sigma2 * (1 + 2 * N_p) * (1 + 2 * M) / (4.0 * M * M_p * N_p**2)
    approx = L**2 * sigma2 / (M_p * N_p)
    return detailed, approx


def trace_harmonic_lower_bound(values) -> float:
    """Cauchy-Schwarz floor on a positive sum: sum a_k >= L^2 / sum(1/a_k)."""
    a = np.asarray(values, dtype=float)
    if a.size == 0 or np.any(a <= 0):
        raise ValueError("values must be a nonempty strictly positive sequence")
    return a.size**2 / float(np.sum(1.0 / a))


@dataclass
class FisherModel:
    """Real-stacked Jacobian of vec(H), observation mask, and noise level.

    The Jacobian has 2MN rows (real parts of vec(H) stacked over imaginary
    parts) and 4L columns ordered (aoa, delay, gain modulus, gain angle) per
    path; the mask selects both real coordinates of every observed entry.
    """

    jacobian: np.ndarray
    sample_mask: np.ndarray
    sigma2: float
    M: int
    N: int


def build_fisher_model(paths: PathSet, pattern: SamplingPattern,
                       config: SystemConfig) -> FisherModel:
    """Assemble the Fisher model for a path set under a fixed pattern."""
    M, N = config.M, config.N
    m = np.arange(M)[:, None]
    n = np.arange(N)[None, :]
    cols = []
    for c, th, ta in zip(paths.gains, paths.aoas, paths.delays):
        E = np.exp(-2j * np.pi * th * m) * np.exp(2j * np.pi * ta * n)
        r, psi = np.abs(c), np.angle(c)
        d_aoa = (c * (-2j * np.pi * m) * E).ravel()
        d_delay = (c * (2j * np.pi * n) * E).ravel()
        d_mod = (np.exp(1j * psi) * E).ravel()
        d_ang = (1j * c * E).ravel()
        cols.extend([d_aoa, d_delay, d_mod, d_ang])
    Jc = np.column_stack(cols)
    J = np.vstack([Jc.real, Jc.imag])

    mask = np.zeros(M * N, dtype=bool)
    grid = np.ix_(pattern.antenna_set, pattern.pilot_set)
    sel = np.zeros((M, N), dtype=bool)
    sel[grid] = True
    mask = np.concatenate([sel.ravel(), sel.ravel()])
    return FisherModel(J, mask, config.sigma2, M, N)


def fisher_crlb(paths: PathSet, pattern: SamplingPattern,
                config: SystemConfig) -> float:
    """Exact per-element CRLB for the fixed pattern.

    Evaluates (sigma^2 / (2MN)) tr{J (J^T D J)^{-1} J^T} with D the 0/1
    selection induced by the pattern; at full observation this collapses to
    the universal bound because the trace is the Jacobian rank 4L.
    """
    _check_positive(sigma2=config.sigma2)
    fm = build_fisher_model(paths, pattern, config)
    J = fm.jacobian
    # joint column scaling leaves the trace invariant but tames conditioning
    norms = np.linalg.norm(J, axis=0)
    if np.any(norms == 0):
        raise UnidentifiableModelError("a Jacobian column vanishes (zero-gain path?)")
    J = J / norms
    G = J[fm.sample_mask].T @ J[fm.sample_mask]
    eig = np.linalg.eigvalsh(G)
    if eig[0] <= 1e-10 * eig[-1]:
        raise UnidentifiableModelError(
            f"Fisher information is singular: eigenvalue ratio {eig[0] / eig[-1]:.2e}")
    A = J.T @ J
    trace = float(np.trace(linalg_solve(G, A, assume_a="pos")))
    return config.sigma2 / (2.0 * fm.M * fm.N) * trace
