"""The empirical loss, its Wirtinger gradient and Hessian, and the plain
gradient-descent refinement loop shared by all initialization variants.

Loss: f(z) = (1/2m) sum_j (|a_j^H z|^2 - y_j)^2.

Gradient: grad(z) = (1/m) sum_j (|a_j^H z|^2 - y_j) a_j a_j^H z.  The same
formula is used verbatim in the real field, i.e. (1/m) sum ((a^T z)^2 - y)
(a^T z) a, which is half the plain calculus gradient of f; step sizes in this
library are calibrated to that convention for both fields.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionError, DivergenceError
from .instance import Instance
from .linalg import hermitize, phase_aligned_distance, sign_distance


@dataclass(frozen=True)
class SolverConfig:
    """Gradient-descent settings.

    eta_mode "gamma_scaled" uses the practical step eta0 / gamma; "fixed"
    takes eta0 verbatim (for theory-style runs with eta ~ c / ||z*||^2).
    grad_tol = 0 disables the gradient stopping test.
    """

    algorithm: str = "auto"  # "A"/"B"/"C"/"D" or "auto"
    eta0: float = 0.2
    eta_mode: str = "gamma_scaled"
    max_iters: int = 1000
    grad_tol: float = 0.0
    record_every: int = 1

    def __post_init__(self):
        if self.eta0 <= 0:
            raise ValueError("eta0 must be positive")
        if self.eta_mode not in ("gamma_scaled", "fixed"):
            raise ValueError(f"unknown eta_mode {self.eta_mode!r}")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.grad_tol < 0:
            raise ValueError("grad_tol must be >= 0")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")


@dataclass
class RunTrace:
    """Per-iteration record of one solver run.

    ``relative_error`` is None when the instance carries no ground truth.
    ``iterates`` holds copies of z at the recorded iterations only when the
    run was asked to keep them (used by equivariance tests).
    """

    iters: np.ndarray
    loss: np.ndarray
    relative_error: np.ndarray | None
    final_z: np.ndarray
    converged_reason: str  # "max_iters" or "grad_tol"
    iterates: list[np.ndarray] | None = field(default=None, repr=False)

    def final_relative_error(self) -> float | None:
        if self.relative_error is None:
            return None
        return float(self.relative_error[-1])


def _check_dim(inst: Instance, z: np.ndarray) -> np.ndarray:
    z = np.asarray(z)
    if z.shape != (inst.n,):
        raise DimensionError(f"z has shape {z.shape}, expected ({inst.n},)")
    return z


def loss(inst: Instance, z: np.ndarray) -> float:
    z = _check_dim(inst, z)
    r = np.abs(inst.A @ z) ** 2 - inst.y
    return float(r @ r) / (2.0 * inst.m)


def wirtinger_gradient(inst: Instance, z: np.ndarray) -> np.ndarray:
    z = _check_dim(inst, z)
    az = inst.A @ z
    r = np.abs(az) ** 2 - inst.y
    return inst.A.conj().T @ (r * az) / inst.m


def wirtinger_hessian(inst: Instance, z: np.ndarray) -> np.ndarray:
    """Second-derivative matrix of the loss at z.

    Complex field: the 2n x 2n Hermitian block matrix

        [ H11  H12 ]      H11 = (1/m) sum (2|a^H z|^2 - y) a a^H
        [ H12^H conj(H11) ]  H12 = (1/m) sum (a^H z)^2 a a^T

    acting on directions u = (w, conj(w)); u^H H u is the second derivative
    of t -> f(z + t w) at t = 0.

    Real field: the n x n matrix (1/m) sum (3 (a^T z)^2 - y) a a^T (the sum of
    the two blocks), for which d^2/dt^2 f(z + t w) = 2 w^T H w, matching the
    complex convention where ||u||^2 = 2 ||w||^2.
    """
    z = _check_dim(inst, z)
    A = inst.A
    az = A @ z
    if not inst.is_complex:
        w = 3.0 * az**2 - inst.y
        return hermitize(A.T @ (w[:, None] * A) / inst.m)
    w = 2.0 * np.abs(az) ** 2 - inst.y
    h11 = A.conj().T @ (w[:, None] * A) / inst.m
    h12 = A.conj().T @ ((az**2)[:, None] * A.conj()) / inst.m
    top = np.hstack([h11, h12])
    bottom = np.hstack([h12.conj().T, h11.conj()])
    return hermitize(np.vstack([top, bottom]))


def relative_error(inst: Instance, z: np.ndarray) -> float | None:
    """dist(z, z*) / ||z*|| with the field-appropriate distance, or None."""
    if inst.z_star is None:
        return None
    nrm = float(np.linalg.norm(inst.z_star))
    if inst.is_complex:
        return phase_aligned_distance(z, inst.z_star) / nrm
    return sign_distance(np.real(z), inst.z_star) / nrm


def run_wf(
    inst: Instance,
    z0: np.ndarray,
    cfg: SolverConfig,
    gamma: float,
    keep_iterates: bool = False,
) -> RunTrace:
    """Iterate z <- z - eta * grad(z) from z0 and record the trajectory.

    Records (iteration, loss, relative error when ground truth is known) at
    iteration 0, every ``record_every`` steps, and at the final state.  Stops
    after max_iters updates or when ||grad|| <= grad_tol (if enabled); a
    non-finite loss or gradient raises DivergenceError with the iteration.
    """
    z = np.array(_check_dim(inst, z0))
    if np.linalg.norm(z) == 0.0:
        raise ValueError("z0 must be nonzero")
    if cfg.eta_mode == "gamma_scaled":
        if gamma <= 0:
            raise ValueError("gamma_scaled stepping requires gamma > 0")
        eta = cfg.eta0 / gamma
    else:
        eta = cfg.eta0

    A = inst.A
    y = inst.y
    m = inst.m
    track_error = inst.z_star is not None

    iters: list[int] = []
    losses: list[float] = []
    errors: list[float] = []
    iterates: list[np.ndarray] | None = [] if keep_iterates else None

    reason = "max_iters"
    for t in range(cfg.max_iters + 1):
        with np.errstate(over="ignore", invalid="ignore"):  # divergence handled below
            az = A @ z
            r = np.abs(az) ** 2 - y
            fval = float(r @ r) / (2.0 * m)
            grad = A.conj().T @ (r * az) / m
        if not np.isfinite(fval) or not np.all(np.isfinite(grad)):
            raise DivergenceError(
                f"non-finite loss or gradient at iteration {t} (eta = {eta:.3g})",
                iteration=t,
            )
        stop = t == cfg.max_iters
        if cfg.grad_tol > 0.0 and float(np.linalg.norm(grad)) <= cfg.grad_tol:
            stop = True
            reason = "grad_tol"
        if t % cfg.record_every == 0 or stop:
            iters.append(t)
            losses.append(fval)
            if track_error:
                errors.append(relative_error(inst, z))  # type: ignore[arg-type]
            if iterates is not None:
                iterates.append(z.copy())
        if stop:
            break
        z = z - eta * grad

    return RunTrace(
        iters=np.array(iters, dtype=int),
        loss=np.array(losses),
        relative_error=np.array(errors) if track_error else None,
        final_z=z,
        converged_reason=reason,
        iterates=iterates,
    )
