"""Batched Monte-Carlo experiments: convergence-curve runs, initialization
quality tables, and success-rate sweeps over the oversampling ratio m/n.

Every trial draws a fresh ground truth and measurement set from seeds derived
with :func:`subwf.seeds.derive_trial_seed`, so results are identical whether
trials run serially or on a worker pool.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DivergenceError
from .flow import RunTrace, SolverConfig, relative_error, run_wf
from .instance import NoiseSpec, generate_signal, synthesize
from .seeds import derive_trial_seed
from .spectral import InitResult, spectral_initialize
from .ensembles import get_ensemble

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: ensemble, sizes, noise, solver settings, trial budget.

    Exactly one of ``m`` (single problem size) and ``m_over_n`` (sweep ratios)
    must be set.  ``beta1``/``beta2`` override the ensemble's stored moments
    when given (the initializers treat them as known inputs).
    """

    ensemble: str
    n: int
    master_seed: int
    m: int | None = None
    m_over_n: tuple[float, ...] | None = None
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    solver: SolverConfig = field(default_factory=SolverConfig)
    trials: int = 100
    success_threshold: float = 0.1
    beta1: float | None = None
    beta2: float | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.success_threshold <= 0:
            raise ValueError("success_threshold must be positive")
        if (self.m is None) == (self.m_over_n is None):
            raise ValueError("exactly one of m and m_over_n must be set")

    def describe(self) -> str:
        """Flat key=value rendering used in output-file comment headers."""
        parts = [f"ensemble={self.ensemble}", f"n={self.n}"]
        if self.m is not None:
            parts.append(f"m={self.m}")
        else:
            parts.append("m_over_n=" + ",".join(f"{r:g}" for r in self.m_over_n))
        parts.append(f"noise={self.noise.kind}")
        if self.noise.kind == "gaussian":
            parts.append(f"sigma_rel={self.noise.sigma_rel:g}")
        s = self.solver
        parts += [
            f"algorithm={s.algorithm}", f"eta0={s.eta0:g}", f"eta_mode={s.eta_mode}",
            f"max_iters={s.max_iters}", f"grad_tol={s.grad_tol:g}",
            f"record_every={s.record_every}", f"trials={self.trials}",
            f"success_threshold={self.success_threshold:g}",
        ]
        if self.beta1 is not None:
            parts.append(f"beta1={self.beta1:g}")
        if self.beta2 is not None:
            parts.append(f"beta2={self.beta2:g}")
        parts.append(f"seed={self.master_seed}")
        return " ".join(parts)


@dataclass
class TrialResult:
    """Per-trial outcome; ``trace`` is kept only by convergence runs."""

    trial: int
    seed: int
    m: int
    n: int
    final_relerr: float  # inf when the trial diverged
    success: bool
    iters: int
    wall_ms: float
    init: InitResult | None = None
    init_relerr: float | None = None
    diverged: bool = False
    trace: RunTrace | None = None


@dataclass
class ConvergenceResult:
    config: ExperimentConfig
    trials: list[TrialResult]

    @property
    def final_errors(self) -> np.ndarray:
        return np.array([t.final_relerr for t in self.trials])

    def summary(self) -> dict[str, float]:
        errs = self.final_errors
        finite = errs[np.isfinite(errs)]
        return {
            "median_final_relerr": float(np.median(finite)) if finite.size else float("inf"),
            "min_final_relerr": float(finite.min()) if finite.size else float("inf"),
            "max_final_relerr": float(errs.max()),
            "diverged": float(np.sum(~np.isfinite(errs))),
        }


@dataclass(frozen=True)
class SweepRow:
    m_over_n: float
    trials: int
    successes: int
    success_rate: float
    mean_final_relerr: float


@dataclass
class SweepResult:
    config: ExperimentConfig
    rows: list[SweepRow]
    trial_results: list[TrialResult]


def _run_one_trial(
    cfg: ExperimentConfig,
    m: int,
    trial: int,
    keep_trace: bool,
    seed_tag: str,
    init_only: bool = False,
) -> TrialResult:
    ens = get_ensemble(cfg.ensemble)
    t0 = time.perf_counter()
    signal_rng = np.random.default_rng(
        derive_trial_seed(cfg.master_seed, trial, f"signal-{seed_tag}"))
    z_star = generate_signal("gaussian", cfg.n, signal_rng, field=ens.field)

    inst_seed = derive_trial_seed(cfg.master_seed, trial, f"trial-{seed_tag}")
    inst = synthesize(ens, z_star, cfg.noise, m, seed=inst_seed)

    init_rng = np.random.default_rng(
        derive_trial_seed(cfg.master_seed, trial, f"init-{seed_tag}"))
    alg = None if cfg.solver.algorithm == "auto" else cfg.solver.algorithm
    init = spectral_initialize(inst, alg=alg, beta1=cfg.beta1, beta2=cfg.beta2, rng=init_rng)
    init_relerr = relative_error(inst, init.z0)

    diverged = False
    trace = None
    if init_only:
        final_relerr = init_relerr
        iters = 0
    else:
        try:
            trace = run_wf(inst, init.z0, cfg.solver, init.gamma, keep_iterates=False)
            final_relerr = trace.final_relative_error()
            iters = int(trace.iters[-1])
        except DivergenceError as err:
            diverged = True
            final_relerr = float("inf")
            iters = err.iteration
    wall_ms = (time.perf_counter() - t0) * 1e3
    return TrialResult(
        trial=trial,
        seed=inst_seed,
        m=m,
        n=cfg.n,
        final_relerr=float("inf") if final_relerr is None else float(final_relerr),
        success=bool(final_relerr is not None and final_relerr < cfg.success_threshold),
        iters=iters,
        wall_ms=wall_ms,
        init=init,
        init_relerr=init_relerr,
        diverged=diverged,
        trace=trace if keep_trace else None,
    )


def _map_trials(fn, trials: int, threads: int):
    """Run fn(0..trials-1), optionally on a bounded pool; output order fixed."""
    if threads <= 1:
        return [fn(i) for i in range(trials)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(trials)))


def run_convergence(cfg: ExperimentConfig, threads: int = 1) -> ConvergenceResult:
    """Full traces for a single-m configuration, one per trial."""
    if cfg.m is None:
        raise ValueError("run_convergence needs a single-m config")
    results = _map_trials(
        lambda i: _run_one_trial(cfg, cfg.m, i, keep_trace=True, seed_tag=f"m{cfg.m}"),
        cfg.trials, threads,
    )
    return ConvergenceResult(config=cfg, trials=results)


def run_success_sweep(cfg: ExperimentConfig, threads: int = 1) -> SweepResult:
    """Success-rate table over the m/n ratios; divergence counts as failure.

    ``mean_final_relerr`` averages the finite final errors (diverged trials
    are excluded from the mean but still counted as failures).
    """
    if cfg.m_over_n is None:
        raise ValueError("run_success_sweep needs an m_over_n config")
    rows: list[SweepRow] = []
    all_trials: list[TrialResult] = []
    for ratio in cfg.m_over_n:
        m = int(round(ratio * cfg.n))
        results = _map_trials(
            lambda i: _run_one_trial(cfg, m, i, keep_trace=False, seed_tag=f"m{m}"),
            cfg.trials, threads,
        )
        errs = np.array([t.final_relerr for t in results])
        finite = errs[np.isfinite(errs)]
        successes = int(sum(t.success for t in results))
        rows.append(SweepRow(
            m_over_n=float(ratio),
            trials=cfg.trials,
            successes=successes,
            success_rate=successes / cfg.trials,
            mean_final_relerr=float(finite.mean()) if finite.size else float("inf"),
        ))
        all_trials.extend(results)
        logger.info("sweep m/n=%g: %d/%d successes", ratio, successes, cfg.trials)
    return SweepResult(config=cfg, rows=rows, trial_results=all_trials)


def run_init_quality(cfg: ExperimentConfig, threads: int = 1) -> list[TrialResult]:
    """Initialization-only trials: spectral init quality without refinement."""
    if cfg.m is None:
        raise ValueError("run_init_quality needs a single-m config")
    return _map_trials(
        lambda i: _run_one_trial(cfg, cfg.m, i, keep_trace=False,
                                 seed_tag=f"m{cfg.m}", init_only=True),
        cfg.trials, threads,
    )
