"""Monte-Carlo verification of the closed-form population identities behind
the spectral initializers and the gradient, plus an empirical probe of the
smoothness / restricted-convexity bounds near the ground truth.

The closed forms live here (including the diagonal helper matrices
D1(v) = diag(|v_k|^2) and D2(v) = diag(v_k^2)); the checks draw fresh
measurement rows and compare sample averages against them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ensembles import MeasurementEnsemble
from .flow import wirtinger_gradient, wirtinger_hessian
from .instance import Instance, NoiseSpec, synthesize
from .linalg import align_phase, spectral_norm
from .seeds import mix_seed
from .spectral import build_m, build_m0_and_gamma

DEFAULT_MC_SAMPLES = 200_000


@dataclass(frozen=True)
class ExpectationReport:
    """Outcome of one empirical-vs-closed-form comparison."""

    target: str
    deviation: float
    samples: int
    tolerance: float
    passed: bool

    def csv_line(self) -> str:
        return (
            f"{self.target},{self.samples},{self.deviation!r},"
            f"{self.tolerance!r},{'pass' if self.passed else 'fail'}"
        )


def _d1(v: np.ndarray) -> np.ndarray:
    return np.diag(np.abs(v) ** 2)


def _d2(v: np.ndarray) -> np.ndarray:
    return np.diag(v.astype(complex) ** 2)


def closed_form_expected_gradient(
    z: np.ndarray,
    z_star: np.ndarray,
    beta1: float,
    beta2: float,
    mean_xi: float = 0.0,
) -> np.ndarray:
    """Population Wirtinger gradient for complex measurements.

    E grad(z) = (2||z||^2 - ||z*||^2) z - (z*^H z) z*
                + (1 - beta2) ((zbar z^T) - (z*bar z*^T)) z
                - (2 - beta1 - beta2) (D1(z) - D1(z*)) z
                - mean_xi z,

    where mean_xi is the average noise (1^T xi)/m baked into the observations.
    """
    z = np.asarray(z, dtype=complex)
    zs = np.asarray(z_star, dtype=complex)
    out = (2.0 * np.vdot(z, z).real - np.vdot(zs, zs).real) * z
    out = out - np.vdot(zs, z) * zs
    if beta2 != 1.0:
        out = out + (1.0 - beta2) * (np.conj(z) * (z @ z) - np.conj(zs) * (zs @ z))
    coef = 2.0 - beta1 - beta2
    if coef != 0.0:
        out = out - coef * (np.abs(z) ** 2 - np.abs(zs) ** 2) * z
    if mean_xi != 0.0:
        out = out - mean_xi * z
    return out


def closed_form_expected_hessian(
    z: np.ndarray,
    z_star: np.ndarray,
    beta1: float,
    beta2: float,
    mean_xi: float = 0.0,
) -> np.ndarray:
    """Population 2n x 2n Hessian [[A, B], [B^H, conj(A)]].

    A = (2||z||^2 - ||z*||^2) I + 2 z z^H - z* z*^H
        + (1 - beta2)(2 zbar z^T - z*bar z*^T)
        - (2 - beta1 - beta2)(2 D1(z) - D1(z*)) - mean_xi I
    B = 2 z z^T + (1 - beta2)(z^T z) I - (2 - beta1 - beta2) D2(z)

    (The z z^H coefficient is 2: differentiating the expected gradient above
    requires it, and the Monte-Carlo check below confirms it.)
    """
    z = np.asarray(z, dtype=complex)
    zs = np.asarray(z_star, dtype=complex)
    n = z.shape[0]
    eye = np.eye(n)
    a = (2.0 * np.vdot(z, z).real - np.vdot(zs, zs).real - mean_xi) * eye
    a = a + 2.0 * np.outer(z, z.conj()) - np.outer(zs, zs.conj())
    b = 2.0 * np.outer(z, z)
    if beta2 != 1.0:
        a = a + (1.0 - beta2) * (2.0 * np.outer(z.conj(), z) - np.outer(zs.conj(), zs))
        b = b + (1.0 - beta2) * (z @ z) * eye
    coef = 2.0 - beta1 - beta2
    if coef != 0.0:
        a = a - coef * (2.0 * _d1(z) - _d1(zs))
        b = b - coef * _d2(z)
    top = np.hstack([a, b])
    bottom = np.hstack([b.conj().T, a.conj()])
    return np.vstack([top, bottom])


def population_m_target(alg: str, z_star: np.ndarray) -> np.ndarray:
    """Expected initialization matrix for a unit, noise-free ground truth.

    A: I + z z^H      B: I + z z^H - D1(z)
    C: I + 2 z z^T    D: I + 2 z z^T - 2 D1(z)

    The B/D residual diagonal is what the non-peakiness assumption keeps small.
    """
    z = np.asarray(z_star)
    n = z.shape[0]
    if alg == "A":
        return np.eye(n) + np.outer(z, z.conj())
    if alg == "B":
        return np.eye(n) + np.outer(z, z.conj()) - _d1(z)
    if alg == "C":
        return np.eye(n) + 2.0 * np.outer(z, z.conj()).real
    if alg == "D":
        return np.eye(n) + 2.0 * np.outer(z, z.conj()).real - 2.0 * _d1(z)
    raise ValueError(f"unknown algorithm {alg!r}")


def mc_expected_gradient_check(
    ensemble: MeasurementEnsemble,
    z: np.ndarray,
    z_star: np.ndarray,
    samples: int = DEFAULT_MC_SAMPLES,
    rng_seed: int = 0,
    tolerance: float | None = None,
) -> ExpectationReport:
    """Average the noise-free empirical gradient over fresh single-measurement
    draws and compare to the closed form (Euclidean norm deviation).

    Default tolerance 0.05 (1 + ||z||^3) is an acceptance threshold calibrated
    for n <= 10 at 2e5 samples, not a confidence interval.
    """
    if samples < 10_000:
        raise ValueError("samples must be >= 10^4")
    if not ensemble.is_complex:
        raise ValueError("the expected-gradient closed form covers complex ensembles only")
    z = np.asarray(z)
    z_star = np.asarray(z_star)
    inst = synthesize(ensemble, z_star, NoiseSpec("none"), m=samples,
                      seed=mix_seed(rng_seed, "mc-gradient"))
    empirical = wirtinger_gradient(inst, z.astype(inst.A.dtype))
    expected = closed_form_expected_gradient(z, z_star, ensemble.beta1, ensemble.beta2)
    deviation = float(np.linalg.norm(empirical - expected))
    if tolerance is None:
        tolerance = 0.05 * (1.0 + float(np.linalg.norm(z)) ** 3)
    return ExpectationReport(
        target=f"expected_gradient[{ensemble.name}]",
        deviation=deviation,
        samples=samples,
        tolerance=tolerance,
        passed=deviation <= tolerance,
    )


def mc_expected_m_check(
    ensemble: MeasurementEnsemble,
    alg: str,
    z_star: np.ndarray,
    samples: int = DEFAULT_MC_SAMPLES,
    rng_seed: int = 0,
    tolerance: float = 0.05,
) -> ExpectationReport:
    """Build the initialization matrix from fresh rows (noise-free, unit z*)
    and compare to its population target in spectral norm."""
    if samples < 100_000:
        raise ValueError("samples must be >= 10^5")
    z_star = np.asarray(z_star)
    nrm = float(np.linalg.norm(z_star))
    if abs(nrm - 1.0) > 1e-9:
        raise ValueError("mc_expected_m_check requires a unit-norm ground truth")
    inst = synthesize(ensemble, z_star, NoiseSpec("none"), m=samples,
                      seed=mix_seed(rng_seed, "mc-matrix"))
    m0, gamma = build_m0_and_gamma(inst)
    m = build_m(m0, gamma, alg, ensemble.beta1, ensemble.beta2)
    target = population_m_target(alg, z_star)
    deviation = spectral_norm(m - target.astype(m.dtype), rng=np.random.default_rng(rng_seed))
    return ExpectationReport(
        target=f"expected_M[{alg}/{ensemble.name}]",
        deviation=float(deviation),
        samples=samples,
        tolerance=tolerance,
        passed=deviation <= tolerance,
    )


@dataclass(frozen=True)
class RicProbeReport:
    """Empirical extremes of the Hessian near z* against the claimed bounds.

    The bounds are high-probability statements in the m >> n regime, so the
    report is advisory: ``violation_fraction`` says how often a probe point
    broke either bound, and nothing is asserted here.
    """

    max_specnorm: float
    min_quadform: float
    bound_hi: float
    bound_lo: float
    violation_fraction: float


def ric_probe(
    inst: Instance,
    z_star: np.ndarray,
    num_points: int,
    radius: float,
    rng: np.random.Generator | int | None = None,
) -> RicProbeReport:
    """Sample points in the radius-ball around z*, evaluate the Hessian there,
    and compare its spectral norm and its quadratic form on aligned-difference
    directions against the smoothness / restricted-convexity bounds.

    Directions are u = (z1 - z2, conj(z1 - z2)) with z1, z2 in the ball and z1
    phase-aligned to z2 (the restriction under which the convexity bound is
    claimed); reported quadform values are u^H H u / ||u||^2.  In the real
    field the same quantity is w^T H w / ||w||^2 with the sign-aligned
    difference w and the n x n Hessian.
    """
    z_star = np.asarray(z_star)
    nrm = float(np.linalg.norm(z_star))
    if radius > 0.1 * nrm:
        raise ValueError("probe radius must be <= 0.1 ||z*||")
    if num_points < 1:
        raise ValueError("num_points must be >= 1")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)

    ens = inst.ensemble()
    beta1 = ens.beta1
    # Effective convexity constant: min(beta1, beta2) under the fourth-moment
    # assumptions, beta2 alone (complex) or 1 (real) in the beta1 = 0 variants.
    if ens.is_complex:
        beta_tilde = min(beta1, ens.beta2) if beta1 > 0 else ens.beta2
    else:
        beta_tilde = min(beta1, 2.0) if beta1 > 0 else 1.0
    bound_hi = 12.0 + 3.0 * beta1
    bound_lo = beta_tilde / 4.0

    def ball_point() -> np.ndarray:
        if inst.is_complex:
            u = rng.standard_normal(inst.n) + 1j * rng.standard_normal(inst.n)
        else:
            u = rng.standard_normal(inst.n)
        u = u / np.linalg.norm(u)
        return z_star + radius * rng.uniform() * u

    max_specnorm = 0.0
    min_quadform = np.inf
    violations = 0
    for _ in range(num_points):
        z = ball_point()
        h = wirtinger_hessian(inst, z)
        spec = spectral_norm(h, rng=rng)

        z1 = ball_point()
        z2 = ball_point()
        if inst.is_complex:
            z1 = align_phase(z1, z2) * z1
            w = z1 - z2
            u = np.concatenate([w, np.conj(w)])
            quad = float(np.real(np.vdot(u, h @ u))) / float(np.vdot(u, u).real)
        else:
            if np.linalg.norm(z1 - z2) > np.linalg.norm(z1 + z2):
                z1 = -z1
            w = z1 - z2
            quad = float(w @ (h @ w)) / float(w @ w)

        max_specnorm = max(max_specnorm, spec)
        min_quadform = min(min_quadform, quad)
        if spec > bound_hi or quad < bound_lo:
            violations += 1

    return RicProbeReport(
        max_specnorm=max_specnorm,
        min_quadform=float(min_quadform),
        bound_hi=bound_hi,
        bound_lo=bound_lo,
        violation_fraction=violations / num_points,
    )
