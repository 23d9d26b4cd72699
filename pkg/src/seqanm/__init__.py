"""Sequential MMV atomic-norm channel estimation for wideband massive MIMO.

Library layout:

- ``model``: parametric channel synthesis, random path/pattern draws, noisy
  observations.
- ``sdp``: the Toeplitz-structured MMV atomic-norm semidefinite program and
  its operator-splitting solver.
- ``harmonic``: Vandermonde decomposition of Hermitian Toeplitz matrices and
  least-squares coefficient refits.
- ``estimator``: the two-step sequential estimator (spatial step, then
  frequency step).
- ``bounds``: closed-form MSE lower bounds and the exact fixed-pattern CRLB.
- ``baselines``: gridded basis-pursuit-denoising and LMMSE estimators.
- ``harness``: seeded Monte Carlo benchmark runner with CSV output.
- ``cli``: command-line front end for the harness.
"""

from .model import (
    Observation,
    PathSet,
    SamplingPattern,
    SystemConfig,
    draw_paths,
    draw_pattern,
    observe,
    separation,
    steering,
    synth_channel,
    wrap_distance,
)
from .sdp import MmvSdpProblem, MmvSdpSolution, SolverOptions, solve_mmv_anm
from .harmonic import HarmonicModel, ls_refit, vandermonde_decompose
from .estimator import EstimateReport, estimate_channel, estimate_h1
from .bounds import fisher_crlb, sequential_bound, universal_bound
from .baselines import DictionaryGrid, bpdn_estimate, lmmse_estimate

__version__ = "0.1.0"
