"""The three MSE reference curves: universal, sequential, exact CRLB.

Run: python demos/05_mse_bounds.py
"""

import numpy as np

from seqanm import (SystemConfig, draw_paths, draw_pattern, fisher_crlb,
                    sequential_bound, universal_bound)
from seqanm.model import SamplingPattern

sigma2 = 0.1
M = Mp = 100

print("bounds vs pilot count (M = M_p = 100, L = 3, sigma2 = 0.1):")
print(f"{'N_p':>5} {'universal':>12} {'seq detailed':>13} {'seq approx':>12}")
for Np in (8, 12, 16, 25, 50, 100):
    u = universal_bound(3, sigma2, Mp, Np)
    det, app = sequential_bound(3, sigma2, M, Mp, Np)
    print(f"{Np:>5} {u:>12.3e} {det:>13.3e} {app:>12.3e}")

print("\nthe sequential approximation sits exactly L/2 above the universal bound:")
for L in (2, 4, 8):
    _, app = sequential_bound(L, sigma2, M, Mp, 12)
    print(f"  L={L}: ratio = {app / universal_bound(L, sigma2, Mp, 12):.1f}")

# exact CRLB for a fixed pattern; at full observation it collapses onto the
# universal bound, under subsampling it is computed from the Fisher
# information of the 4L-parameter path model
rng = np.random.default_rng(3)
paths = draw_paths(3, rng)
cfg_full = SystemConfig(M=32, N=32, M_p=32, N_p=32, sigma2=sigma2)
full = SamplingPattern(np.arange(32), np.arange(32), 32, 32)
print("\nfull observation: CRLB", f"{fisher_crlb(paths, full, cfg_full):.6e}",
      "universal", f"{universal_bound(3, sigma2, 32, 32):.6e}")

cfg_sub = SystemConfig(M=32, N=32, M_p=16, N_p=8, sigma2=sigma2)
vals = [fisher_crlb(paths, draw_pattern(32, 32, 16, 8, rng), cfg_sub)
        for _ in range(25)]
print("subsampled (16 x 8): CRLB averaged over 25 patterns",
      f"{np.mean(vals):.6e}", "universal", f"{universal_bound(3, sigma2, 16, 8):.6e}")
