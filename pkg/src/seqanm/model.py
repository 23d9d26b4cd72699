"""Parametric wideband MIMO channel model and random observation generation.

The channel between a single-antenna user and an M-antenna uniform linear
array over N OFDM subcarriers is a superposition of L propagation paths,
each contributing a rank-one outer product of complex-exponential steering
vectors in the spatial (angle-of-arrival) and frequency (delay) domains.
Observations are a random row/column subsample of the channel matrix plus
complex Gaussian noise.
"""

from dataclasses import dataclass

import numpy as np


def steering(K: int, phi: float) -> np.ndarray:
    """Length-K complex exponential sequence [1, e^{-i2*pi*phi}, ...].

    Args:
        K: sequence length, >= 1.
        phi: normalized frequency in [0, 1).

    Returns:
        Complex vector of length K with entry j equal to exp(-i*2*pi*phi*j).
    """
    if K < 1:
        raise ValueError(f"steering length must be >= 1, got K={K}")
    return np.exp(-2j * np.pi * phi * np.arange(K))


def wrap_distance(a, b=0.0):
    """Wraparound distance on the unit circle: min(|d| mod 1, 1 - |d| mod 1)."""
    d = np.abs(np.asarray(a, dtype=float) - b) % 1.0
    return np.minimum(d, 1.0 - d)


@dataclass
class PathSet:
    """The L channel paths: complex gains, AoAs, and delays.

    AoAs and delays are normalized frequencies in [0, 1). Two paths may not
    share the same (aoa, delay) pair, their superposition being a single path.
    """

    gains: np.ndarray
    aoas: np.ndarray
    delays: np.ndarray

    def __post_init__(self):
        self.gains = np.atleast_1d(np.asarray(self.gains, dtype=complex))
        self.aoas = np.atleast_1d(np.asarray(self.aoas, dtype=float))
        self.delays = np.atleast_1d(np.asarray(self.delays, dtype=float))
        L = self.gains.size
        if L < 1:
            raise ValueError("a PathSet needs at least one path")
        if self.aoas.size != L or self.delays.size != L:
            raise ValueError("gains, aoas and delays must have equal length")
        if np.any(self.aoas < 0) or np.any(self.aoas >= 1):
            raise ValueError("every aoa must lie in [0, 1)")
        if np.any(self.delays < 0) or np.any(self.delays >= 1):
            raise ValueError("every delay must lie in [0, 1)")
        pairs = set(zip(self.aoas.tolist(), self.delays.tolist()))
        if len(pairs) != L:
            raise ValueError("two paths share the same (aoa, delay) pair")

    @property
    def L(self) -> int:
        return self.gains.size


@dataclass
class SystemConfig:
    """Dimensions and noise level of the pilot observation setup."""

    M: int
    N: int
    M_p: int
    N_p: int
    sigma2: float = 0.1
    delay_max: float = 0.25

    def __post_init__(self):
        if self.M < 1 or self.N < 1:
            raise ValueError("M and N must be positive")
        if not (1 <= self.M_p <= self.M):
            raise ValueError(f"M_p must satisfy 1 <= M_p <= M, got M_p={self.M_p}")
        if not (1 <= self.N_p <= self.N):
            raise ValueError(f"N_p must satisfy 1 <= N_p <= N, got N_p={self.N_p}")
        if self.sigma2 < 0:
            raise ValueError("sigma2 must be nonnegative")
        if not (0 < self.delay_max <= 1):
            raise ValueError("delay_max must lie in (0, 1]")


@dataclass
class SamplingPattern:
    """Observed antenna rows and pilot subcarrier columns as sorted index sets.

    Realizes the 0/1 row-selection matrices of the observation model; M and N
    record the full dimensions the indices refer to.
    """

    antenna_set: np.ndarray
    pilot_set: np.ndarray
    M: int
    N: int

    def __post_init__(self):
        self.antenna_set = np.asarray(self.antenna_set, dtype=int)
        self.pilot_set = np.asarray(self.pilot_set, dtype=int)
        for name, idx, limit in (
            ("antenna_set", self.antenna_set, self.M),
            ("pilot_set", self.pilot_set, self.N),
        ):
            if idx.ndim != 1 or idx.size < 1:
                raise ValueError(f"{name} must be a nonempty 1-d index list")
            if np.any(np.diff(idx) <= 0):
                raise ValueError(f"{name} must be strictly increasing")
            if idx[0] < 0 or idx[-1] >= limit:
                raise ValueError(f"{name} indices out of range [0, {limit})")

    @property
    def M_p(self) -> int:
        return self.antenna_set.size

    @property
    def N_p(self) -> int:
        return self.pilot_set.size


@dataclass
class Observation:
    """Noisy space-frequency observation matrix and the pattern that produced it."""

    Y: np.ndarray
    pattern: SamplingPattern
    sigma2: float

    def __post_init__(self):
        self.Y = np.asarray(self.Y, dtype=complex)
        if self.Y.shape != (self.pattern.M_p, self.pattern.N_p):
            raise ValueError(
                f"Y has shape {self.Y.shape}, pattern implies "
                f"{(self.pattern.M_p, self.pattern.N_p)}"
            )


def synth_channel(paths: PathSet, M: int, N: int) -> np.ndarray:
    """Synthesize the M x N channel matrix from a path set.

    Entry (m, n) is sum_l c_l * exp(-i2*pi*aoa_l*m) * exp(+i2*pi*delay_l*n);
    the positive sign on the delay term comes from the Hermitian transpose on
    the frequency-domain steering vector.
    """
    if M < 1 or N < 1:
        raise ValueError("channel dimensions must be positive")
    A = np.exp(-2j * np.pi * np.outer(paths.aoas, np.arange(M)))     # L x M
    B = np.exp(+2j * np.pi * np.outer(paths.delays, np.arange(N)))   # L x N
    return (A * paths.gains[:, None]).T @ B


def draw_paths(L: int, rng: np.random.Generator, delay_max: float = 0.25) -> PathSet:
    """Draw L random paths: CN(0, 1/L) gains, uniform AoAs and delays.

    Gains are i.i.d. circularly symmetric complex Gaussian with variance 1/L,
    so the expected total path power is 1. AoAs are uniform on [0, 1) and
    delays uniform on [0, delay_max). A path that duplicates another's
    (aoa, delay) pair to machine precision is redrawn.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    if not (0 < delay_max <= 1):
        raise ValueError("delay_max must lie in (0, 1]")
    scale = np.sqrt(0.5 / L)
    gains = rng.normal(scale=scale, size=L) + 1j * rng.normal(scale=scale, size=L)
    aoas = rng.uniform(0.0, 1.0, size=L)
    delays = rng.uniform(0.0, delay_max, size=L)
    seen = set(zip(aoas[: L - 1].tolist(), delays[: L - 1].tolist()))
    for l in range(1, L):
        while (aoas[l], delays[l]) in seen:
            aoas[l] = rng.uniform(0.0, 1.0)
            delays[l] = rng.uniform(0.0, delay_max)
        seen.add((aoas[l], delays[l]))
    return PathSet(gains, aoas, delays)


def draw_pattern(M: int, N: int, M_p: int, N_p: int,
                 rng: np.random.Generator) -> SamplingPattern:
    """Draw uniform random antenna and pilot subsets without replacement."""
    if M_p > M or N_p > N:
        raise ValueError(f"subset sizes M_p={M_p}, N_p={N_p} exceed M={M}, N={N}")
    antenna_set = np.sort(rng.choice(M, size=M_p, replace=False))
    pilot_set = np.sort(rng.choice(N, size=N_p, replace=False))
    return SamplingPattern(antenna_set, pilot_set, M, N)


def observe(H: np.ndarray, pattern: SamplingPattern, sigma2: float,
            rng: np.random.Generator) -> Observation:
    """Subsample H at the pattern and add complex Gaussian noise.

    Noise entries are i.i.d. CN(0, sigma2): variance sigma2/2 per real
    component.
    """
    H = np.asarray(H, dtype=complex)
    if H.shape != (pattern.M, pattern.N):
        raise ValueError(f"H has shape {H.shape}, pattern expects {(pattern.M, pattern.N)}")
    Y = H[np.ix_(pattern.antenna_set, pattern.pilot_set)].copy()
    if sigma2 > 0:
        scale = np.sqrt(sigma2 / 2)
        Y += rng.normal(scale=scale, size=Y.shape) + 1j * rng.normal(scale=scale, size=Y.shape)
    return Observation(Y, pattern, sigma2)


def separation(paths: PathSet):
    """Worst-case closeness of path pairs on the AoA-delay torus.

    Returns min over distinct pairs of max(wrap(aoa_l - aoa_l'),
    wrap(delay_l - delay_l')), or None for a single path.
    """
    L = paths.L
    if L == 1:
        return None
    best = np.inf
    for l in range(L):
        da = wrap_distance(paths.aoas[l + 1:], paths.aoas[l])
        dt = wrap_distance(paths.delays[l + 1:], paths.delays[l])
        pairwise = np.maximum(da, dt)
        if pairwise.size:
            best = min(best, pairwise.min())
    return float(best)
