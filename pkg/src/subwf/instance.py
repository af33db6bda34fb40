"""Problem synthesis: ground-truth signals, sensing matrices, observations
y_j = |a_j^H z*|^2 + xi_j, noise, and the noise-admissibility report.

The sensing matrix A stores a_j^H in row j, so ``A @ z`` evaluates all inner
products a_j^H z at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ensembles import MeasurementEnsemble, get_ensemble
from .exceptions import DimensionError
from .seeds import mix_seed


@dataclass(frozen=True)
class NoiseSpec:
    """Additive observation noise: none, or i.i.d. N(0, (sigma_rel ||z*||^2)^2)."""

    kind: str = "none"  # "none" or "gaussian"
    sigma_rel: float = 0.0

    def __post_init__(self):
        if self.kind not in ("none", "gaussian"):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.sigma_rel < 0:
            raise ValueError("sigma_rel must be >= 0")


@dataclass
class Instance:
    """One phase-retrieval problem.

    ``xi`` and ``z_star`` are None for instances loaded from disk (the file
    format carries only A and y).
    """

    A: np.ndarray  # (m, n), rows a_j^H
    y: np.ndarray  # (m,) real observations
    xi: np.ndarray | None
    z_star: np.ndarray | None
    ensemble_name: str
    seed: int

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.A)

    def ensemble(self) -> MeasurementEnsemble:
        return get_ensemble(self.ensemble_name)


def generate_signal(
    kind: str,
    n: int,
    rng: np.random.Generator | int | None = None,
    *,
    field: str = "complex",
    payload: np.ndarray | None = None,
) -> np.ndarray:
    """Ground-truth signal: i.i.d. Gaussian entries, or a caller-supplied vector.

    Complex Gaussian entries are (N + iN)/sqrt(2) so E |z_k|^2 = 1.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if kind == "given":
        if payload is None:
            raise ValueError("kind='given' requires a payload vector")
        payload = np.asarray(payload)
        if payload.shape != (n,):
            raise DimensionError(f"payload has shape {payload.shape}, expected ({n},)")
        return payload
    if kind != "gaussian":
        raise ValueError(f"unknown signal kind {kind!r}")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    if field == "complex":
        return (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2.0)
    if field == "real":
        return rng.standard_normal(n)
    raise ValueError(f"unknown field {field!r}")


def synthesize(
    ensemble: MeasurementEnsemble,
    z_star: np.ndarray,
    noise: NoiseSpec,
    m: int,
    seed: int,
) -> Instance:
    """Draw m sensing rows and observations for a known signal.

    The sensing matrix and the noise come from disjoint sub-streams derived
    from ``seed`` (tags "matrix" and "noise"), so either can be varied while
    the other is held fixed.  Noise is drawn after, and independently of, A.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    z_star = np.asarray(z_star)
    n = z_star.shape[0]

    rng_a = np.random.default_rng(mix_seed(seed, "matrix"))
    rows = ensemble.sample_rows(m, n, rng_a)  # row j = a_j
    A = np.conj(rows)  # row j = a_j^H

    clean = np.abs(A @ z_star) ** 2
    if noise.kind == "gaussian" and noise.sigma_rel > 0:
        rng_xi = np.random.default_rng(mix_seed(seed, "noise"))
        sigma = noise.sigma_rel * float(np.linalg.norm(z_star) ** 2)
        xi = sigma * rng_xi.standard_normal(m)
    else:
        xi = np.zeros(m)
    return Instance(
        A=A,
        y=clean + xi,
        xi=xi,
        z_star=z_star,
        ensemble_name=ensemble.name,
        seed=seed,
    )


def mu_flatness(z: np.ndarray) -> float:
    """Peak-to-average power ratio ||z||_inf^2 / ||z||^2, in [1/n, 1]."""
    z = np.asarray(z)
    nrm_sq = float(np.linalg.norm(z) ** 2)
    if nrm_sq == 0.0:
        raise ValueError("mu_flatness requires a nonzero vector")
    return float(np.abs(z).max() ** 2) / nrm_sq


@dataclass(frozen=True)
class NoiseAdmissibility:
    """The three noise ratios the recovery guarantees assume, with flags.

    Advisory only: a flagged ratio means the corresponding assumption is not
    met at the configured threshold, never that a solve is refused.
    """

    sum_abs: float  # |1^T xi| / (m ||z*||^2)
    l2_ratio: float  # ||xi|| / (sqrt(m) ||z*||^2)
    inf_ratio: float  # ||xi||_inf / (log(m) ||z*||^2)
    flags: tuple[bool, bool, bool]

    @property
    def any_flagged(self) -> bool:
        return any(self.flags)


def noise_admissibility(
    xi: np.ndarray,
    z_norm_sq: float,
    thresholds: tuple[float, float, float] = (0.05, 1.0, 1.0),
) -> NoiseAdmissibility:
    """Check a noise vector against the admissibility ratios."""
    xi = np.asarray(xi, dtype=float)
    m = xi.shape[0]
    if m < 1:
        raise DimensionError("xi must be a nonempty vector")
    if z_norm_sq <= 0:
        raise ValueError("z_norm_sq must be positive")
    sum_abs = float(abs(xi.sum())) / (m * z_norm_sq)
    l2_ratio = float(np.linalg.norm(xi)) / (math.sqrt(m) * z_norm_sq)
    inf_abs = float(np.abs(xi).max())
    log_m = math.log(m)
    if log_m > 0.0:
        inf_ratio = inf_abs / (log_m * z_norm_sq)
    else:
        inf_ratio = 0.0 if inf_abs == 0.0 else math.inf  # m = 1 edge case
    flags = (
        sum_abs > thresholds[0],
        l2_ratio > thresholds[1],
        inf_ratio > thresholds[2],
    )
    return NoiseAdmissibility(sum_abs, l2_ratio, inf_ratio, flags)


# --- persistence ------------------------------------------------------------
#
# Self-describing text format: one header line
#   # subwf-instance field=<f> m=<m> n=<n> ensemble=<name> seed=<s>
# then one line per measurement holding row j of A followed by y_j, as
# %.17g decimals (exact float64 round trip).  Complex entries are written as
# re/im column pairs.  Ground truth and noise are not persisted.


def save_instance(inst: Instance, path: str | Path) -> None:
    path = Path(path)
    field = "complex" if inst.is_complex else "real"
    lines = [
        f"# subwf-instance field={field} m={inst.m} n={inst.n} "
        f"ensemble={inst.ensemble_name} seed={inst.seed}"
    ]
    for j in range(inst.m):
        cells: list[str] = []
        for v in inst.A[j]:
            if inst.is_complex:
                cells.append(f"{v.real:.17g}")
                cells.append(f"{v.imag:.17g}")
            else:
                cells.append(f"{v:.17g}")
        cells.append(f"{inst.y[j]:.17g}")
        lines.append(" ".join(cells))
    path.write_text("\n".join(lines) + "\n")


def load_instance(path: str | Path) -> Instance:
    path = Path(path)
    with path.open() as fh:
        header = fh.readline().strip()
        if not header.startswith("# subwf-instance "):
            raise ValueError(f"{path}: not a subwf instance file")
        meta = dict(kv.split("=", 1) for kv in header.split()[2:])
        field = meta["field"]
        m, n = int(meta["m"]), int(meta["n"])
        is_complex = field == "complex"
        A = np.zeros((m, n), dtype=complex if is_complex else float)
        y = np.zeros(m)
        for j in range(m):
            parts = fh.readline().split()
            expected = (2 * n if is_complex else n) + 1
            if len(parts) != expected:
                raise ValueError(f"{path}: row {j} has {len(parts)} fields, expected {expected}")
            vals = np.array([float(p) for p in parts])
            if is_complex:
                A[j] = vals[0:-1:2] + 1j * vals[1:-1:2]
            else:
                A[j] = vals[:-1]
            y[j] = vals[-1]
    return Instance(
        A=A, y=y, xi=None, z_star=None,
        ensemble_name=meta["ensemble"], seed=int(meta["seed"]),
    )
