"""Build a sparse multipath channel and look at its structure.

Run: python demos/01_channel_model.py
"""

import numpy as np

from seqanm import (draw_paths, draw_pattern, observe, separation,
                    steering, synth_channel)

rng = np.random.default_rng(7)

# Three propagation paths: complex gains with total expected power 1,
# angles of arrival anywhere on the circle, delays within a quarter of the
# symbol duration.
paths = draw_paths(3, rng, delay_max=0.25)
print("gains  :", np.round(paths.gains, 3))
print("aoas   :", np.round(paths.aoas, 3))
print("delays :", np.round(paths.delays, 3))
print("worst pair separation on the AoA-delay torus:", round(separation(paths), 4))

# The channel matrix is a sum of rank-one steering outer products, so its
# rank never exceeds the number of paths.
M, N = 64, 64
H = synth_channel(paths, M, N)
sv = np.linalg.svd(H, compute_uv=False)
print(f"\nchannel is {M} x {N}; singular values:", np.round(sv[:5], 2), "...")
print("per-element power (should fluctuate around 1):",
      round(float(np.linalg.norm(H) ** 2 / (M * N)), 3))

# A steering vector is a unit-modulus complex exponential; the first entry
# is always 1 and the squared norm is exactly its length.
f = steering(8, paths.aoas[0])
print("\nsteering(8, aoa_0):", np.round(f[:4], 3), "...")
print("squared norm:", round(float(np.linalg.norm(f) ** 2), 12))

# Observations: keep every antenna, sound 8 of 64 subcarriers with pilots,
# add complex Gaussian noise at 10 dB per-subcarrier SNR.
pattern = draw_pattern(M, N, M_p=M, N_p=8, rng=rng)
obs = observe(H, pattern, sigma2=0.1, rng=rng)
print("\npilot subcarriers:", pattern.pilot_set)
print("observation shape:", obs.Y.shape)
print("noise energy vs M_p*N_p*sigma2:",
      round(float(np.linalg.norm(obs.Y - H[:, pattern.pilot_set]) ** 2), 2),
      "vs", M * 8 * 0.1)
