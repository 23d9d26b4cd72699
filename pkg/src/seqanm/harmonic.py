"""Dominant-harmonic extraction from Hermitian Toeplitz matrices and LS refits.

A PSD Hermitian Toeplitz matrix admits a decomposition into nonnegative
combinations of steering outer products f(phi) f(phi)^H. This module
recovers the L dominant components of that decomposition (frequencies via
shift invariance of the top-L eigenvector block, weights via nonnegative
least squares against the first row) and provides the least-squares
coefficient refit used to rebuild a channel block from estimated
frequencies.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lstsq
from scipy.optimize import nnls

from .model import steering, wrap_distance

_GAP_TOL = 1e-9
_DISTINCT_TOL = 1e-9
_PINV_RCOND = 1e-10


class DegenerateSubspaceError(RuntimeError):
    """Top-L eigenvalues are indistinguishable from the rest: no usable subspace."""


@dataclass
class HarmonicModel:
    """L harmonic frequencies in [0, 1) with nonnegative weights."""

    frequencies: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.frequencies = np.atleast_1d(np.asarray(self.frequencies, dtype=float))
        self.weights = np.atleast_1d(np.asarray(self.weights, dtype=float))
        if self.frequencies.size != self.weights.size or self.frequencies.size < 1:
            raise ValueError("frequencies and weights must be nonempty, equal-length lists")
        if np.any(self.weights < 0):
            raise ValueError("weights must be nonnegative")
        f = self.frequencies
        for i in range(f.size):
            d = wrap_distance(f[i + 1:], f[i])
            if d.size and d.min() < _DISTINCT_TOL:
                raise DegenerateSubspaceError(
                    f"frequencies {f[i]} and a neighbour coincide within {_DISTINCT_TOL}")

    @property
    def L(self) -> int:
        return self.frequencies.size

    def toeplitz_first_row(self, K: int) -> np.ndarray:
        """First row of sum_k d_k f_K(phi_k) f_K(phi_k)^H."""
        E = np.exp(2j * np.pi * np.outer(np.arange(K), self.frequencies))
        return E @ self.weights.astype(complex)


def vandermonde_decompose(u: np.ndarray, L: int, psd_tol: float = 1e-3) -> HarmonicModel:
    """Extract the L dominant harmonics of the Hermitian Toeplitz matrix T(u).

    Frequencies come from the rotational invariance of the dominant
    eigenvector block of T(u) at model order L; weights are the nonnegative
    least-squares fit of the first row of T(u) against the recovered
    steering moments. For an exactly rank-L PSD Toeplitz input this
    reproduces the decomposition to machine precision.

    Args:
        u: first row of the Toeplitz matrix (u[0] real).
        L: number of harmonics, 1 <= L < len(u).
        psd_tol: tolerated relative negativity of T(u)'s spectrum.

    Raises:
        DegenerateSubspaceError: flat spectrum, the top-L block is not
            separated from the remainder.
        ValueError: invalid model order or T(u) indefinite beyond tolerance.
    """
    from .sdp import toeplitz_from_first_row

    u = np.asarray(u, dtype=complex)
    K = u.size
    if not 1 <= L < K:
        raise ValueError(f"model order must satisfy 1 <= L < {K}, got {L}")
    T = toeplitz_from_first_row(u)
    w, V = np.linalg.eigh(T)
    w = w[::-1]
    V = V[:, ::-1]
    scale = max(float(np.linalg.norm(u)), np.finfo(float).tiny)
    if w[-1] < -psd_tol * scale:
        raise ValueError(
            f"T(u) is indefinite beyond tolerance: min eigenvalue {w[-1]:.3e} "
            f"with scale {scale:.3e}")
    if w[L - 1] - w[L] <= _GAP_TOL * max(abs(w[0]), np.finfo(float).tiny):
        raise DegenerateSubspaceError(
            f"eigenvalues {L - 1} and {L} coincide within relative {_GAP_TOL}")

    Us = V[:, :L]
    shift, *_ = lstsq(Us[:-1], Us[1:], check_finite=False)
    z = np.linalg.eigvals(shift)
    freqs = np.mod(-np.angle(z) / (2 * np.pi), 1.0)
    order = np.argsort(freqs)
    freqs = freqs[order]

    E = np.exp(2j * np.pi * np.outer(np.arange(K), freqs))
    A = np.vstack([E.real, E.imag])
    b = np.concatenate([u.real, u.imag])
    weights, _ = nnls(A, b)
    return HarmonicModel(freqs, weights)


def ls_refit(data: np.ndarray, frequencies, K: int, row_selector=None):
    """Least-squares coefficient fit of data onto selected steering rows.

    Finds the L x J coefficient matrix C minimizing
    ||data - F[row_selector] @ C||_F, where F is the K x L steering matrix
    with columns f_K(phi_l), and returns (C, F @ C): the coefficients and the
    full-dimension reconstruction sum_l f_K(phi_l) c_l^T. Row l of C plays
    the role of the conjugated multiple-measurement vector of harmonic l.

    The fit uses a pseudoinverse with singular values below 1e-10 of the
    largest treated as zero, so near-duplicate frequencies cannot blow up
    the coefficients.
    """
    frequencies = np.atleast_1d(np.asarray(frequencies, dtype=float))
    if frequencies.size == 0:
        raise ValueError("frequency list must not be empty")
    data = np.asarray(data, dtype=complex)
    F = np.column_stack([steering(K, phi) for phi in frequencies])
    A = F if row_selector is None else F[np.asarray(row_selector, dtype=int)]
    if A.shape[0] != data.shape[0]:
        raise ValueError(f"data has {data.shape[0]} rows, selector yields {A.shape[0]}")
    coeffs = np.linalg.pinv(A, rcond=_PINV_RCOND) @ data
    return coeffs, F @ coeffs
