"""Flat key-value experiment configs.

Grammar (one assignment per line):

    # comment lines and blank lines are ignored
    key = value

Values are typed by shape: integers, floats, the booleans true/false, comma
separated numeric lists (for m_over_n), or bare strings.  Keys:

    ensemble            one of the six ensemble names           (required)
    n                   signal dimension                        (required)
    m                   number of measurements     } exactly one of the two
    m_over_n            list of ratios, e.g. 5,6,7 }            (required)
    seed                master seed                             (required)
    noise               none | gaussian                 (default none)
    sigma_rel           noise std as multiple of ||z*||^2 (default 0.05)
    algorithm           A | B | C | D | auto            (default auto)
    beta1, beta2        moment-parameter overrides      (default: ensemble's)
    eta0                step-size numerator   (default 0.2 noise-free, 0.1 noisy)
    eta_mode            gamma_scaled | fixed            (default gamma_scaled)
    max_iters           gradient-update budget          (default 1000)
    grad_tol            gradient-norm stop, 0 disables  (default 0)
    record_every        trace recording stride          (default 1)
    trials              Monte-Carlo trials              (default 100)
    success_threshold   relative-error success cut      (default 0.1)
    samples             MC sample count, verify only    (default 200000)

Overrides (--set key=value) are applied after the file is read and before
validation.
"""

from __future__ import annotations

from pathlib import Path

from .ensembles import get_ensemble
from .exceptions import ConfigError
from .flow import SolverConfig
from .harness import ExperimentConfig
from .instance import NoiseSpec
from .spectral import auto_select_algorithm, validate_algorithm

_STRING_KEYS = {"ensemble", "noise", "algorithm", "eta_mode"}
_INT_KEYS = {"n", "m", "seed", "max_iters", "record_every", "trials", "samples"}
_FLOAT_KEYS = {"sigma_rel", "beta1", "beta2", "eta0", "grad_tol", "success_threshold"}
_LIST_KEYS = {"m_over_n"}
_ALL_KEYS = _STRING_KEYS | _INT_KEYS | _FLOAT_KEYS | _LIST_KEYS


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _LIST_KEYS:
            return tuple(float(p) for p in raw.split(",") if p.strip())
        return raw
    except ValueError:
        raise ConfigError(f"key {key!r}: cannot parse {raw!r}", key=key) from None


def read_config_text(text: str, overrides: list[str] | None = None) -> dict:
    """Parse the key-value grammar plus --set overrides into a raw dict."""
    values: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = line.split("=", 1)
        key = key.strip()
        if key not in _ALL_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}", key=key)
        values[key] = _parse_value(key, raw)
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError(f"override {item!r}: expected key=value")
        key, raw = item.split("=", 1)
        key = key.strip()
        if key not in _ALL_KEYS:
            raise ConfigError(f"override: unknown key {key!r}", key=key)
        values[key] = _parse_value(key, raw)
    return values


def build_experiment_config(values: dict) -> ExperimentConfig:
    """Apply defaults, validate, and assemble an ExperimentConfig."""
    for required in ("ensemble", "n", "seed"):
        if required not in values:
            raise ConfigError(f"missing required key {required!r}", key=required)
    ensemble = get_ensemble(values["ensemble"])

    noise_kind = values.get("noise", "none")
    if noise_kind not in ("none", "gaussian"):
        raise ConfigError(f"noise must be 'none' or 'gaussian', got {noise_kind!r}", key="noise")
    sigma_rel = values.get("sigma_rel", 0.05 if noise_kind == "gaussian" else 0.0)
    if sigma_rel < 0:
        raise ConfigError("sigma_rel must be >= 0", key="sigma_rel")
    noise = NoiseSpec(kind=noise_kind, sigma_rel=sigma_rel if noise_kind == "gaussian" else 0.0)

    algorithm = values.get("algorithm", "auto")
    beta1 = values.get("beta1", None)
    beta2 = values.get("beta2", None)
    eff_beta1 = ensemble.beta1 if beta1 is None else beta1
    eff_beta2 = ensemble.beta2 if beta2 is None else beta2
    resolved_alg = algorithm
    if algorithm == "auto":
        resolved_alg = auto_select_algorithm(ensemble)
    validate_algorithm(resolved_alg, ensemble.field, eff_beta1, eff_beta2)

    eta0 = values.get("eta0", 0.2 if noise_kind == "none" else 0.1)
    try:
        solver = SolverConfig(
            algorithm=algorithm,
            eta0=eta0,
            eta_mode=values.get("eta_mode", "gamma_scaled"),
            max_iters=values.get("max_iters", 1000),
            grad_tol=values.get("grad_tol", 0.0),
            record_every=values.get("record_every", 1),
        )
        return ExperimentConfig(
            ensemble=ensemble.name,
            n=values["n"],
            master_seed=values["seed"],
            m=values.get("m"),
            m_over_n=values.get("m_over_n"),
            noise=noise,
            solver=solver,
            trials=values.get("trials", 100),
            success_threshold=values.get("success_threshold", 0.1),
            beta1=beta1,
            beta2=beta2,
        )
    except ValueError as err:
        raise ConfigError(str(err)) from err


def parse_config(path: str | Path, overrides: list[str] | None = None) -> ExperimentConfig:
    """Read, override, default-fill, and validate an experiment config file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as err:
        raise ConfigError(f"cannot read config file {path}: {err}") from err
    return build_experiment_config(read_config_text(text, overrides))
