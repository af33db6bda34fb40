"""Field-generic dense linear algebra: phase-invariant distances and the
shifted power iteration used to extract leading eigenpairs of Hermitian
matrices.

Vectors and matrices are plain numpy arrays (float64 for the real field,
complex128 for the complex field).  All functions are pure.
"""

from __future__ import annotations

import numpy as np

from .exceptions import ConvergenceError, DimensionError

EIGEN_RESIDUAL_TOL = 1e-9
EIGEN_MAX_ITERS = 20000


def _check_same_length(z1: np.ndarray, z2: np.ndarray) -> None:
    if z1.shape != z2.shape or z1.ndim != 1:
        raise DimensionError(
            f"expected two vectors of equal length, got shapes {z1.shape} and {z2.shape}"
        )


def phase_aligned_distance(z1: np.ndarray, z2: np.ndarray) -> float:
    """min over phi of ||e^{i phi} z1 - z2||.

    Uses the closed form sqrt(||z1||^2 + ||z2||^2 - 2 |z2^H z1|); the max(0, .)
    clamp guards against tiny negative round-off when the vectors coincide up
    to a global phase.
    """
    z1 = np.asarray(z1)
    z2 = np.asarray(z2)
    _check_same_length(z1, z2)
    inner = np.vdot(z2, z1)  # z2^H z1
    sq = np.linalg.norm(z1) ** 2 + np.linalg.norm(z2) ** 2 - 2.0 * abs(inner)
    return float(np.sqrt(max(0.0, sq)))


def align_phase(z1: np.ndarray, z2: np.ndarray) -> complex:
    """Unit-modulus scalar c minimizing ||c z1 - z2||.

    c = conj(z2^H z1) / |z2^H z1|; returns 1 when the inner product vanishes
    (every phase is then a minimizer).
    """
    z1 = np.asarray(z1)
    z2 = np.asarray(z2)
    _check_same_length(z1, z2)
    inner = np.vdot(z2, z1)
    if inner == 0:
        return 1.0 + 0.0j
    return complex(np.conj(inner) / abs(inner))


def sign_distance(z1: np.ndarray, z2: np.ndarray) -> float:
    """min(||z1 - z2||, ||z1 + z2||) for real vectors (sign ambiguity)."""
    z1 = np.asarray(z1, dtype=float)
    z2 = np.asarray(z2, dtype=float)
    _check_same_length(z1, z2)
    return float(min(np.linalg.norm(z1 - z2), np.linalg.norm(z1 + z2)))


def hermitize(m: np.ndarray) -> np.ndarray:
    """(M + M^H)/2 — make a nearly-Hermitian matrix exactly Hermitian."""
    m = np.asarray(m)
    return 0.5 * (m + m.conj().T)


def is_hermitian(m: np.ndarray, tol: float = 1e-12) -> bool:
    m = np.asarray(m)
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    return bool(np.abs(m - m.conj().T).max(initial=0.0) <= tol * scale)


def leading_eigenpair(
    m: np.ndarray,
    rng: np.random.Generator | int | None = None,
    tol: float = EIGEN_RESIDUAL_TOL,
    max_iters: int = EIGEN_MAX_ITERS,
) -> tuple[float, np.ndarray, int]:
    """Eigenpair of the algebraically largest eigenvalue of a Hermitian matrix.

    Power iteration on M + cI with shift c = max row sum of |M| (an upper
    bound on the spectral radius), so the dominant eigenvalue of the shifted
    matrix is the largest algebraic eigenvalue of M.  The start vector is a
    pseudo-random unit vector drawn from ``rng`` (seed 0 when omitted), which
    makes the returned eigenvector deterministic up to sign/phase.

    Returns (eigenvalue, unit eigenvector, iterations).  Converged when the
    relative residual ||Mv - lambda v|| / max(1, |lambda|) drops below ``tol``;
    raises ConvergenceError (carrying the last residual) otherwise.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionError(f"expected a nonempty square matrix, got shape {m.shape}")
    n = m.shape[0]
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(0 if rng is None else rng)

    shift = float(np.abs(m).sum(axis=1).max())  # infinity-norm bound on ||M||

    if np.iscomplexobj(m):
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    else:
        v = rng.standard_normal(n)
    v = v / np.linalg.norm(v)

    residual = np.inf
    for it in range(1, max_iters + 1):
        mv = m @ v
        lam = float(np.real(np.vdot(v, mv)))  # Rayleigh quotient, real for Hermitian M
        residual = float(np.linalg.norm(mv - lam * v)) / max(1.0, abs(lam))
        if residual <= tol:
            return lam, v / np.linalg.norm(v), it
        w = mv + shift * v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            # v sits in the kernel of M + cI; restart from a fresh direction
            w = rng.standard_normal(n) + (1j * rng.standard_normal(n) if np.iscomplexobj(m) else 0.0)
            nw = np.linalg.norm(w)
        v = w / nw
    raise ConvergenceError(
        f"power iteration did not reach residual {tol:g} in {max_iters} iterations "
        f"(last residual {residual:.3e})",
        residual=residual,
        iterations=max_iters,
    )


def spectral_norm(
    m: np.ndarray,
    rng: np.random.Generator | int | None = None,
    tol: float = EIGEN_RESIDUAL_TOL,
    max_iters: int = EIGEN_MAX_ITERS,
) -> float:
    """max |lambda_j(M)| for Hermitian M, via leading_eigenpair on M and -M."""
    m = np.asarray(m)
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(0 if rng is None else rng)
    lam_hi, _, _ = leading_eigenpair(m, rng=rng, tol=tol, max_iters=max_iters)
    lam_lo, _, _ = leading_eigenpair(-m, rng=rng, tol=tol, max_iters=max_iters)
    return max(lam_hi, lam_lo)
