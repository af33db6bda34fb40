"""Spectral initialization: the four data-matrix constructions (one per
measurement assumption) and extraction of the scaled leading eigenvector.

Variants (selected by algorithm id):
  A  complex field, beta1 > 0, beta2 in (0, 1]
  B  complex field, beta1 = 0 (fourth moment equals second), beta2 in (0, 1]
  C  real field, beta1 > 0
  D  real field (no moment correction; needs non-peaky signals)

All four start from M0 = (1/m) sum_j y_j a_j a_j^H and gamma = mean(y), then
apply algorithm-specific diagonal / real-part / identity corrections so that
the population matrix becomes ||z*||^2 I + z* z*^H (+ noise shift) up to the
residual diagonal term in the B/D variants.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .ensembles import MeasurementEnsemble
from .exceptions import ConfigError, InitializationError
from .instance import Instance
from .linalg import hermitize, leading_eigenpair

logger = logging.getLogger(__name__)

ALGORITHM_IDS = ("A", "B", "C", "D")


@dataclass(frozen=True)
class InitResult:
    """Starting point z0 = sqrt(gamma) * (unit leading eigenvector of M)."""

    z0: np.ndarray
    gamma: float
    m_top_eigenvalue: float
    power_iters: int


def auto_select_algorithm(ensemble: MeasurementEnsemble) -> str:
    """Pick the initialization variant matching the ensemble's field and beta1."""
    if ensemble.is_complex:
        return "A" if ensemble.beta1 > 0 else "B"
    return "C" if ensemble.beta1 > 0 else "D"


def validate_algorithm(alg: str, field: str, beta1: float, beta2: float | None) -> None:
    """Raise ConfigError on parameter combinations the formulas cannot support."""
    if alg not in ALGORITHM_IDS:
        raise ConfigError(f"unknown algorithm {alg!r}", key="algorithm")
    if alg in ("A", "B") and field != "complex":
        raise ConfigError(f"algorithm {alg} requires a complex ensemble", key="algorithm")
    if alg in ("C", "D") and field != "real":
        raise ConfigError(f"algorithm {alg} requires a real ensemble", key="algorithm")
    if alg in ("A", "C") and not beta1 > 0:
        raise ConfigError(f"algorithm {alg} requires beta1 > 0", key="algorithm")
    if alg in ("A", "B"):
        if beta2 is None or not 0 < beta2 <= 1:
            raise ConfigError(f"algorithm {alg} requires beta2 in (0, 1]", key="algorithm")


def m_correction_coefficients(
    alg: str, beta1: float, beta2: float | None
) -> tuple[float, float, float, float]:
    """Coefficients (c_m0, c_diag, c_re, c_gamma) such that

        M = c_m0 M0 + c_diag diag(M0) - c_re Re(M0) + c_gamma gamma I.

    Exposed separately so the cancellation identities (e.g. c_re = 0 whenever
    beta2 = 1) can be asserted symbolically in tests.
    """
    if alg == "A":
        assert beta2 is not None
        return (
            1.0 / beta2,
            (2.0 - beta1 - beta2) / (beta1 * (2.0 - beta2)),
            (2.0 - 2.0 * beta2) / (beta2 * (2.0 - beta2)),
            (beta1 - 1.0) / beta1,
        )
    if alg == "B":
        assert beta2 is not None
        return (
            1.0 / beta2,
            0.0,
            (2.0 - 2.0 * beta2) / (beta2 * (2.0 - beta2)),
            (1.0 - beta2) / (2.0 - beta2),
        )
    if alg == "C":
        return 1.0, (2.0 - beta1) / beta1, 0.0, (beta1 - 2.0) / beta1
    if alg == "D":
        return 1.0, 0.0, 0.0, 0.0
    raise ConfigError(f"unknown algorithm {alg!r}", key="algorithm")


def build_m0_and_gamma(inst: Instance) -> tuple[np.ndarray, float]:
    """M0 = (1/m) sum_j y_j a_j a_j^H (re-symmetrized) and gamma = mean(y)."""
    A = inst.A  # rows a_j^H, so a_j = conj(A[j])
    m0 = (A.conj().T @ (inst.y[:, None] * A)) / inst.m
    return hermitize(m0), float(inst.y.mean())


def build_m(
    m0: np.ndarray,
    gamma: float,
    alg: str,
    beta1: float,
    beta2: float | None,
) -> np.ndarray:
    """Assemble the initialization matrix for one algorithm variant.

    diag(M0) keeps only the diagonal; for Hermitian M0 those entries are real
    up to round-off and the imaginary residue is dropped.  The result is
    re-symmetrized so downstream eigen-extraction sees an exactly Hermitian
    matrix.
    """
    field = "complex" if np.iscomplexobj(m0) else "real"
    validate_algorithm(alg, field, beta1, beta2)
    c_m0, c_diag, c_re, c_gamma = m_correction_coefficients(alg, beta1, beta2)
    n = m0.shape[0]
    m = c_m0 * m0.astype(complex if field == "complex" else float)
    if c_diag != 0.0:
        m += c_diag * np.diag(np.diag(m0).real)
    if c_re != 0.0:
        m -= c_re * m0.real
    if c_gamma != 0.0:
        m += c_gamma * gamma * np.eye(n)
    return hermitize(m)


def _rough_top_eigenvalue(m: np.ndarray, rng: np.random.Generator, iters: int = 200) -> float:
    """Budgeted power-iteration estimate of the largest algebraic eigenvalue.

    A Rayleigh quotient, so always a lower bound; used only for the
    indefiniteness diagnostic where the eigenvalue at the other end of the
    spectrum sits in a near-degenerate bulk that the strict solver cannot
    resolve cheaply.
    """
    n = m.shape[0]
    shift = float(np.abs(m).sum(axis=1).max())
    if np.iscomplexobj(m):
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    else:
        v = rng.standard_normal(n)
    v = v / np.linalg.norm(v)
    for _ in range(iters):
        w = m @ v + shift * v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            break
        v = w / nw
    return float(np.real(np.vdot(v, m @ v)))


def spectral_initialize(
    inst: Instance,
    alg: str | None = None,
    beta1: float | None = None,
    beta2: float | None = None,
    rng: np.random.Generator | int | None = None,
) -> InitResult:
    """Build M from the data and return z0 = sqrt(gamma) * leading eigenvector.

    beta1/beta2 default to the instance ensemble's stored moments; alg=None
    auto-selects.  gamma <= 0 (possible only under pathological noise) aborts
    with InitializationError since sqrt(gamma) scaling is then meaningless.
    """
    ens = inst.ensemble()
    if alg is None:
        alg = auto_select_algorithm(ens)
    if beta1 is None:
        beta1 = ens.beta1
    if beta2 is None:
        beta2 = ens.beta2

    m0, gamma = build_m0_and_gamma(inst)
    if gamma <= 0.0:
        raise InitializationError(
            f"gamma = mean(y) = {gamma:.6g} is not positive; cannot scale the initializer"
        )
    m = build_m(m0, gamma, alg, beta1, beta2)

    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    lam, v, iters = leading_eigenpair(m, rng=rng)

    # The variants target the leading singular vector; for an indefinite M the
    # largest |eigenvalue| can sit at the negative end.  We keep the algebraic
    # maximum (the population matrix is positive definite under admissible
    # noise) and surface the discrepancy when it shows up on concrete data.
    lam_neg = _rough_top_eigenvalue(-m, rng)
    if lam_neg > lam:
        logger.warning(
            "initialization matrix is indefinite with |lambda_min| >= %.6g > "
            "lambda_max = %.6g; using the algebraically largest eigenvalue",
            lam_neg, lam,
        )

    z0 = np.sqrt(gamma) * v
    return InitResult(z0=z0, gamma=gamma, m_top_eigenvalue=lam, power_iters=iters)
