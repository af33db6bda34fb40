"""Command-line front end.

Subcommands:
    run     convergence traces for a single-m config (per-trial trace CSVs)
    sweep   success-rate sweep over m/n ratios
    init    spectral-initialization quality table
    verify  Monte-Carlo checks of the population identities

Exit status: 0 success, 1 failed verify check, 2 configuration error,
3 output I/O error.  Every output file starts with a comment line recording
the resolved configuration and master seed.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from .config import parse_config, read_config_text
from .diagnostics import mc_expected_gradient_check, mc_expected_m_check
from .ensembles import get_ensemble
from .exceptions import ConfigError, SubwfError
from .harness import (
    ConvergenceResult,
    ExperimentConfig,
    SweepResult,
    TrialResult,
    run_convergence,
    run_init_quality,
    run_success_sweep,
)
from .seeds import mix_seed

logger = logging.getLogger(__name__)

TRIAL_HEADER = "trial,seed,m,n,final_relerr,success,iters,wall_ms"


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_csv(path: Path, comment: str, header: str, rows: list[str]) -> None:
    path.write_text("\n".join([f"# {comment}", header, *rows]) + "\n")


def _trial_row(t: TrialResult) -> str:
    return ",".join([
        _fmt(t.trial), _fmt(t.seed), _fmt(t.m), _fmt(t.n),
        _fmt(t.final_relerr), _fmt(t.success), _fmt(t.iters),
        _fmt(round(t.wall_ms, 3)),
    ])


def _write_run_outputs(res: ConvergenceResult, out: Path, comment: str) -> None:
    for t in res.trials:
        rows = []
        if t.trace is not None:
            err = t.trace.relative_error
            for k in range(t.trace.iters.size):
                rows.append(",".join([
                    _fmt(int(t.trace.iters[k])),
                    _fmt(float(err[k])) if err is not None else "",
                    _fmt(float(t.trace.loss[k])),
                ]))
        _write_csv(out / f"trace_{t.trial:03d}.csv", comment, "iter,relative_error,loss", rows)
    _write_csv(out / "trials.csv", comment, TRIAL_HEADER,
               [_trial_row(t) for t in res.trials])


def _write_sweep_outputs(res: SweepResult, out: Path, comment: str) -> None:
    rows = [
        ",".join([
            _fmt(r.m_over_n), _fmt(r.trials), _fmt(r.successes),
            _fmt(r.success_rate), _fmt(r.mean_final_relerr),
        ])
        for r in res.rows
    ]
    _write_csv(out / "sweep.csv", comment,
               "m_over_n,trials,successes,success_rate,mean_final_relerr", rows)
    _write_csv(out / "trials.csv", comment, TRIAL_HEADER,
               [_trial_row(t) for t in res.trial_results])


def _write_init_outputs(trials: list[TrialResult], out: Path, comment: str) -> None:
    rows = [
        ",".join([
            _fmt(t.trial), _fmt(t.init_relerr), _fmt(t.init.gamma),
            _fmt(t.init.m_top_eigenvalue), _fmt(t.init.power_iters),
        ])
        for t in trials
    ]
    _write_csv(out / "init.csv", comment,
               "trial,init_relerr,gamma,top_eigenvalue,power_iters", rows)


def _standard_verify_checks(seed: int, samples: int, n: int = 10, n_grad: int = 6):
    """The seven population-identity checks the verify subcommand runs."""

    def unit_signal(field: str, tag: str) -> np.ndarray:
        rng = np.random.default_rng(mix_seed(seed, tag))
        if field == "complex":
            z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        else:
            z = rng.standard_normal(n)
        return z / np.linalg.norm(z)

    reports = []
    pairings = [
        ("A", "complex_gaussian"),
        ("B", "complex_discrete4"),
        ("C", "real_gaussian"),
        ("D", "real_bernoulli"),
    ]
    for alg, name in pairings:
        ens = get_ensemble(name)
        if alg == "D":
            z_star = np.ones(n) / np.sqrt(n)  # flat signal: the variant's regime
        else:
            z_star = unit_signal(ens.field, f"zstar-{alg}")
        reports.append(mc_expected_m_check(
            ens, alg, z_star, samples=samples, rng_seed=mix_seed(seed, f"M-{alg}")))

    for name in ("complex_gaussian", "complex_uniform", "complex_discrete4"):
        ens = get_ensemble(name)
        rng = np.random.default_rng(mix_seed(seed, f"grad-{name}"))
        z = (rng.standard_normal(n_grad) + 1j * rng.standard_normal(n_grad)) / np.sqrt(2)
        z_star = (rng.standard_normal(n_grad) + 1j * rng.standard_normal(n_grad)) / np.sqrt(2)
        reports.append(mc_expected_gradient_check(
            ens, z, z_star, samples=samples, rng_seed=mix_seed(seed, f"G-{name}")))
    return reports


def _cmd_verify(raw: dict, out: Path | None) -> int:
    if "seed" not in raw:
        raise ConfigError("missing required key 'seed'", key="seed")
    seed = raw["seed"]
    samples = raw.get("samples", 200_000)
    reports = _standard_verify_checks(seed, samples)
    lines = [r.csv_line() for r in reports]
    print("check_name,samples,deviation,tolerance,pass")
    for line in lines:
        print(line)
    if out is not None:
        _write_csv(out / "verify.csv", f"subwf verify seed={seed} samples={samples}",
                   "check_name,samples,deviation,tolerance,pass", lines)
    return 0 if all(r.passed for r in reports) else 1


def _require(cfg: ExperimentConfig, command: str, want_single_m: bool) -> None:
    if want_single_m and cfg.m is None:
        raise ConfigError(f"{command} needs a single-m config (set m, not m_over_n)", key="m")
    if not want_single_m and cfg.m_over_n is None:
        raise ConfigError(f"{command} needs an m_over_n config", key="m_over_n")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subwf",
        description="Phase retrieval from subgaussian measurements: "
                    "Wirtinger-flow experiments and diagnostics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("run", "convergence traces for a single problem size"),
        ("sweep", "success-rate sweep over m/n ratios"),
        ("init", "spectral-initialization quality table"),
        ("verify", "Monte-Carlo checks of the population identities"),
    ]:
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--config", required=True, help="path to a key=value config file")
        sp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config key (repeatable)")
        sp.add_argument("--out", default="subwf_out", help="output directory")
        sp.add_argument("--threads", type=int, default=1,
                        help="worker threads for trial-level parallelism")
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            try:
                text = Path(args.config).read_text()
            except OSError as err:
                raise ConfigError(f"cannot read config file {args.config}: {err}") from err
            raw = read_config_text(text, args.set)
            out = _prepare_out_dir(args.out)
            return _cmd_verify(raw, out)

        cfg = parse_config(args.config, args.set)
        out = _prepare_out_dir(args.out)
        comment = f"subwf {args.command} {cfg.describe()}"
        if args.command == "run":
            _require(cfg, "run", want_single_m=True)
            res = run_convergence(cfg, threads=args.threads)
            _write_run_outputs(res, out, comment)
            for key, value in res.summary().items():
                print(f"{key}: {value:.6g}")
        elif args.command == "sweep":
            _require(cfg, "sweep", want_single_m=False)
            sweep = run_success_sweep(cfg, threads=args.threads)
            _write_sweep_outputs(sweep, out, comment)
            for row in sweep.rows:
                print(f"m/n={row.m_over_n:g}: success_rate={row.success_rate:.3f} "
                      f"({row.successes}/{row.trials})")
        elif args.command == "init":
            _require(cfg, "init", want_single_m=True)
            trials = run_init_quality(cfg, threads=args.threads)
            _write_init_outputs(trials, out, comment)
            errs = np.array([t.init_relerr for t in trials])
            print(f"median init relative error: {np.median(errs):.6g}")
        return 0
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"I/O error: {err}", file=sys.stderr)
        return 3
    except SubwfError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


def _prepare_out_dir(out: str) -> Path:
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    probe = path / ".write_probe"
    probe.write_text("")  # fail fast (exit 3) before any computation
    probe.unlink()
    return path


if __name__ == "__main__":
    sys.exit(main())
