"""Seeded Monte Carlo benchmark harness.

Runs independent estimation trials over a sweep axis (pilot count or path
count), records per-element MSE for every enabled estimator next to the
closed-form bound values, and writes plot-ready CSV tables with a JSON
metadata sidecar. Every trial's randomness derives from
(master_seed, sweep index, trial index) through a counter-based generator,
so results are reproducible and independent of execution order or
parallelism.
"""

import hashlib
import json
import os
import subprocess
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace

import numpy as np

from . import __version__
from .baselines import DictionaryGrid, bpdn_estimate, lmmse_estimate
from .bounds import sequential_bound, universal_bound
from .estimator import estimate_channel
from .model import (SystemConfig, draw_paths, draw_pattern, observe,
                    separation, synth_channel)
from .sdp import SolverOptions

CSV_COLUMNS = ("sweep_value", "trial", "estimator", "mse", "bound_universal",
               "bound_seq_detailed", "bound_seq_approx", "separation",
               "converged", "wall_ms", "version", "config_hash")

KNOWN_ESTIMATORS = ("proposed", "bpdn", "lmmse")


class ConfigError(ValueError):
    """Invalid or unknown experiment configuration key/value."""


@dataclass
class ExperimentConfig:
    """Everything a sweep needs: system, estimators, seeding, solver knobs.

    ``sweep`` is "pilots" (values are N_p counts) or "paths" (values are L
    counts); a single-point run uses one sweep value. Defaults follow the
    desk-scale setup of 64 antennas/subcarriers; larger systems (e.g. 100)
    are reachable through overrides.
    """

    M: int = 64
    N: int = 64
    Mp: int = 64
    Np: int = 8
    sigma2: float = 0.1
    delay_max: float = 0.25
    L: int = 3
    trials: int = 50
    master_seed: int = 20240901
    sweep: str = "pilots"
    sweep_values: tuple = ()
    estimators: tuple = ("proposed",)
    workers: int = 1
    sdp_tol: float = 1e-5
    sdp_max_iter: int = 5000
    sdp_rho: float = 1.0
    bpdn_grid_aoa: int = 256
    bpdn_grid_delay: int = 256
    bpdn_epsilon_scale: float = 1.0

    def __post_init__(self):
        self.sweep_values = tuple(self.sweep_values) or ((self.Np,) if self.sweep == "pilots"
                                                         else (self.L,))
        self.estimators = tuple(self.estimators)
        if self.sweep not in ("pilots", "paths"):
            raise ConfigError(f"sweep must be 'pilots' or 'paths', got {self.sweep!r}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        for name in self.estimators:
            if name not in KNOWN_ESTIMATORS:
                raise ConfigError(f"unknown estimator {name!r} in estimators")
        # system-level validation reuses the model-side checks
        try:
            SystemConfig(self.M, self.N, self.Mp, self.Np, self.sigma2, self.delay_max)
        except ValueError as exc:
            raise ConfigError(f"invalid system setting (M/N/Mp/Np/sigma2/delay_max): {exc}")
        for v in self.sweep_values:
            if self.sweep == "pilots" and not 1 <= v <= self.N:
                raise ConfigError(f"sweep value Np={v} out of range [1, N={self.N}]")
            if self.sweep == "paths" and not 1 <= v < min(self.M, self.N):
                raise ConfigError(f"sweep value L={v} out of range [1, min(M,N))")
        if self.L < 1:
            raise ConfigError("L must be >= 1")
        if self.sdp_tol <= 0 or self.sdp_max_iter < 1 or self.sdp_rho <= 0:
            raise ConfigError("sdp.tol, sdp.max_iter, sdp.rho must be positive")
        if self.bpdn_grid_aoa < 1 or self.bpdn_grid_delay < 1:
            raise ConfigError("bpdn grid sizes must be >= 1")
        if self.bpdn_epsilon_scale < 0:
            raise ConfigError("bpdn.epsilon_scale must be >= 0")


# config-file/CLI key names mapped to dataclass fields and parsers
def _int_list(text):
    return tuple(int(v) for v in str(text).replace(",", " ").split())


def _str_list(text):
    return tuple(v for v in str(text).replace(",", " ").split())


CONFIG_KEYS = {
    "M": ("M", int), "N": ("N", int), "Mp": ("Mp", int), "Np": ("Np", int),
    "sigma2": ("sigma2", float), "delay_max": ("delay_max", float),
    "L": ("L", int), "trials": ("trials", int),
    "master_seed": ("master_seed", int), "sweep": ("sweep", str),
    "sweep_values": ("sweep_values", _int_list),
    "estimators": ("estimators", _str_list), "workers": ("workers", int),
    "sdp.tol": ("sdp_tol", float), "sdp.max_iter": ("sdp_max_iter", int),
    "sdp.rho": ("sdp_rho", float),
    "bpdn.grid_aoa": ("bpdn_grid_aoa", int),
    "bpdn.grid_delay": ("bpdn_grid_delay", int),
    "bpdn.epsilon_scale": ("bpdn_epsilon_scale", float),
}


def parse_config_text(text: str) -> dict:
    """Parse flat key=value lines into constructor kwargs; unknown keys error."""
    kwargs = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"unknown config key {key!r} (line {lineno})")
        attr, cast = CONFIG_KEYS[key]
        try:
            kwargs[attr] = cast(value)
        except ValueError as exc:
            raise ConfigError(f"config key {key!r}: cannot parse {value!r}: {exc}")
    return kwargs


def load_config(path: str, overrides: dict | None = None) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        kwargs = parse_config_text(fh.read())
    if overrides:
        kwargs.update(overrides)
    return ExperimentConfig(**kwargs)


def config_hash(config: ExperimentConfig) -> str:
    blob = json.dumps({f.name: getattr(config, f.name) for f in fields(config)},
                      sort_keys=True, default=list)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def artifact_version() -> str:
    """Git-describable version when running from a checkout, else the package version."""
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            cwd=os.path.dirname(os.path.abspath(__file__)),
            capture_output=True, text=True, timeout=5)
        if out.returncode == 0 and out.stdout.strip():
            return out.stdout.strip()
    except OSError:
        pass
    return f"seqanm-{__version__}"


@dataclass
class TrialResult:
    sweep_value: int
    trial_index: int
    seed_key: tuple
    mse: dict
    bounds: dict
    separation: float
    converged: dict
    wall_ms: dict
    diagnostics: dict = field(default_factory=dict)


def _point_config(config: ExperimentConfig, sweep_value: int) -> ExperimentConfig:
    if config.sweep == "pilots":
        return replace(config, Np=int(sweep_value), sweep_values=(int(sweep_value),))
    return replace(config, L=int(sweep_value), sweep_values=(int(sweep_value),))


def run_trial(config: ExperimentConfig, trial_index: int,
              sweep_index: int = 0, sweep_value: int | None = None) -> TrialResult:
    """One seeded trial: draw, observe, run every enabled estimator.

    Estimator failures are recorded in the result (mse NaN, message in
    diagnostics) rather than raised, so a sweep never dies mid-run.
    """
    if sweep_value is None:
        sweep_value = config.sweep_values[sweep_index]
    cfg = _point_config(config, sweep_value)
    ss = np.random.SeedSequence(entropy=cfg.master_seed,
                                spawn_key=(sweep_index, trial_index))
    paths_rng, pattern_rng, noise_rng = (
        np.random.Generator(np.random.Philox(child)) for child in ss.spawn(3))

    paths = draw_paths(cfg.L, paths_rng, cfg.delay_max)
    H = synth_channel(paths, cfg.M, cfg.N)
    pattern = draw_pattern(cfg.M, cfg.N, cfg.Mp, cfg.Np, pattern_rng)
    obs = observe(H, pattern, cfg.sigma2, noise_rng)
    scale = 1.0 / (cfg.M * cfg.N)

    if cfg.sigma2 > 0:
        b_uni = universal_bound(cfg.L, cfg.sigma2, cfg.Mp, cfg.Np)
        b_det, b_app = sequential_bound(cfg.L, cfg.sigma2, cfg.M, cfg.Mp, cfg.Np)
    else:
        b_uni = b_det = b_app = 0.0  # noiseless floor: every bound degenerates to 0

    mse = {"zero": scale * float(np.linalg.norm(H) ** 2)}
    converged = {"zero": True}
    wall_ms = {"zero": 0.0}
    diagnostics = {}

    def record(name, fn):
        t0 = time.perf_counter()
        try:
            H_hat, ok, extra = fn()
            mse[name] = scale * float(np.linalg.norm(H_hat - H) ** 2)
            converged[name] = bool(ok)
            if extra:
                diagnostics[name] = extra
        except Exception as exc:  # failed estimator = lost trial, not lost sweep
            mse[name] = float("nan")
            converged[name] = False
            diagnostics[name] = {"error": f"{type(exc).__name__}: {exc}"}
        wall_ms[name] = 1e3 * (time.perf_counter() - t0)

    if "proposed" in cfg.estimators:
        def run_proposed():
            opts = SolverOptions(tol=cfg.sdp_tol, max_iter=cfg.sdp_max_iter,
                                 rho=cfg.sdp_rho)
            report = estimate_channel(obs, cfg.L, opts)
            extra = {
                step: {"iterations": d.iterations, "primal": d.primal_residual,
                       "dual": d.dual_residual}
                for step, d in report.diagnostics.items() if d is not None}
            return report.H_hat, report.converged, extra
        record("proposed", run_proposed)

    if "bpdn" in cfg.estimators:
        def run_bpdn():
            grid = DictionaryGrid(cfg.bpdn_grid_aoa, cfg.bpdn_grid_delay, cfg.delay_max)
            eps = cfg.bpdn_epsilon_scale * np.sqrt(cfg.Np * cfg.Mp * cfg.sigma2)
            H_hat, info = bpdn_estimate(obs, grid, epsilon=float(eps), return_info=True)
            return H_hat, info["feasible"], {"l1_norm": info["l1_norm"]}
        record("bpdn", run_bpdn)

    if "lmmse" in cfg.estimators:
        def run_lmmse():
            prior = SystemConfig(cfg.M, cfg.N, cfg.Mp, cfg.Np, cfg.sigma2, cfg.delay_max)
            return lmmse_estimate(obs, prior), True, None
        record("lmmse", run_lmmse)

    sep = separation(paths)
    return TrialResult(
        sweep_value=int(sweep_value), trial_index=trial_index,
        seed_key=(cfg.master_seed, sweep_index, trial_index),
        mse=mse,
        bounds={"universal": b_uni, "seq_detailed": b_det, "seq_approx": b_app},
        separation=float("nan") if sep is None else sep,
        converged=converged, wall_ms=wall_ms, diagnostics=diagnostics)


def _run_indexed(args):
    config, sweep_index, trial_index = args
    return run_trial(config, trial_index, sweep_index=sweep_index)


@dataclass
class SweepTable:
    config: ExperimentConfig
    results: list

    def summary(self) -> list:
        """Per (sweep value, estimator): mean and median MSE over finite trials."""
        out = []
        for value in self.config.sweep_values:
            rows = [r for r in self.results if r.sweep_value == value]
            names = sorted({name for r in rows for name in r.mse})
            for name in names:
                vals = np.array([r.mse[name] for r in rows if name in r.mse])
                finite = vals[np.isfinite(vals)]
                out.append({
                    "sweep_value": value, "estimator": name,
                    "trials": len(vals), "failures": int(len(vals) - len(finite)),
                    "mean_mse": float(np.mean(finite)) if len(finite) else float("nan"),
                    "median_mse": float(np.median(finite)) if len(finite) else float("nan"),
                    "bound_universal": rows[0].bounds["universal"],
                    "bound_seq_detailed": rows[0].bounds["seq_detailed"],
                    "bound_seq_approx": rows[0].bounds["seq_approx"],
                })
        return out


def run_sweep(config: ExperimentConfig) -> SweepTable:
    """Run trials at every sweep value; order-independent and parallel-safe."""
    jobs = [(config, si, ti)
            for si in range(len(config.sweep_values))
            for ti in range(config.trials)]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_run_indexed, jobs, chunksize=1))
    else:
        results = [_run_indexed(job) for job in jobs]
    results.sort(key=lambda r: (config.sweep_values.index(r.sweep_value), r.trial_index))
    return SweepTable(config=config, results=results)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_csv(table: SweepTable, path: str) -> str:
    """Write the long-format trial table plus a JSON metadata sidecar.

    Returns the sidecar path. Floats carry 17 significant digits so the files
    round-trip bit-exactly; no timestamps are embedded, so identical runs
    produce identical files.
    """
    version = artifact_version()
    chash = config_hash(table.config)
    lines = [",".join(CSV_COLUMNS)]
    for r in table.results:
        for name in sorted(r.mse):
            lines.append(",".join(_fmt(v) for v in (
                r.sweep_value, r.trial_index, name, r.mse[name],
                r.bounds["universal"], r.bounds["seq_detailed"],
                r.bounds["seq_approx"], r.separation, r.converged[name],
                r.wall_ms[name], version, chash)))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")

    sidecar = os.path.splitext(path)[0] + ".meta.json"
    meta = {
        "version": version,
        "config_hash": chash,
        "config": {f.name: getattr(table.config, f.name) for f in fields(table.config)},
        "columns": list(CSV_COLUMNS),
        "rows": len(lines) - 1,
        "summary": table.summary(),
    }
    with open(sidecar, "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, default=list, sort_keys=True)
        fh.write("\n")
    return sidecar
