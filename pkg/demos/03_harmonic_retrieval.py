"""Vandermonde decomposition of a PSD Toeplitz matrix and LS refitting.

Run: python demos/03_harmonic_retrieval.py
"""

import numpy as np

from seqanm import ls_refit, steering, vandermonde_decompose

# compose a Toeplitz matrix from three harmonics with known weights
K = 24
freqs = np.array([0.12, 0.40, 0.73])
weights = np.array([2.0, 0.7, 1.3])
E = np.exp(2j * np.pi * np.outer(np.arange(K), freqs))
u = E @ weights.astype(complex)  # first row of sum_k d_k f(phi_k) f(phi_k)^H

model = vandermonde_decompose(u, 3)
print("true frequencies     :", freqs)
print("recovered frequencies:", np.round(model.frequencies, 6))
print("true weights         :", weights)
print("recovered weights    :", np.round(model.weights, 6))

# the same machinery refits coefficients once frequencies are known: build
# a matrix from the harmonics, keep half the rows, fit and reconstruct
rng = np.random.default_rng(0)
C_true = rng.normal(size=(3, 5)) + 1j * rng.normal(size=(3, 5))
F = np.column_stack([steering(K, f) for f in freqs])
D_full = F @ C_true
kept = np.arange(0, K, 2)
coeffs, recon = ls_refit(D_full[kept], model.frequencies, K, row_selector=kept)
print("\ncoefficients recovered from half the rows, max error:",
      f"{np.max(np.abs(coeffs - C_true)):.2e}")
print("full reconstruction error:",
      f"{np.linalg.norm(recon - D_full) / np.linalg.norm(D_full):.2e}")
