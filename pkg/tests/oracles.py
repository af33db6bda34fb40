"""Independent oracles used by the test suite.

These are deliberately written from first principles (dense Jacobi sweeps,
brute-force grids, central differences) so the library's fast paths are
checked against something that shares no code with them.
"""

from __future__ import annotations

import numpy as np


def jacobi_eigh(mat: np.ndarray, tol: float = 1e-13, max_sweeps: int = 100):
    """Full eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.

    Each rotation zeroes one off-diagonal pair: the complex phase of A[p, q]
    is absorbed first, then a real Givens rotation diagonalizes the 2x2 block.
    Returns (eigenvalues ascending, eigenvector columns).
    """
    a = np.array(mat, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.abs(a).max()))
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(a - np.diag(np.diag(a))) ** 2))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p, q]
                if abs(b) <= 1e-300:
                    continue
                phase = b / abs(b)
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * abs(b))
                if tau >= 0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # columns (p, q) of the rotation D(phase) * G(c, s)
                r = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                # guard the convention: the rotated 2x2 block must be diagonal
                a[:, [p, q]] = a[:, [p, q]] @ r
                a[[p, q], :] = r.conj().T @ a[[p, q], :]
                v[:, [p, q]] = v[:, [p, q]] @ r
                a[p, q] = 0.0
                a[q, p] = 0.0
    order = np.argsort(np.diag(a).real)
    return np.diag(a).real[order], v[:, order]


def jacobi_leading(mat: np.ndarray):
    """(largest eigenvalue, its eigenvector) from the Jacobi decomposition."""
    evals, evecs = jacobi_eigh(mat)
    return float(evals[-1]), evecs[:, -1]


def grid_phase_distance(z1: np.ndarray, z2: np.ndarray, num_phases: int = 100_000) -> float:
    """min over a phase grid of ||e^{i phi} z1 - z2||, by direct evaluation."""
    phases = np.exp(1j * np.linspace(0.0, 2.0 * np.pi, num_phases, endpoint=False))
    diffs = phases[:, None] * z1[None, :] - z2[None, :]
    return float(np.min(np.linalg.norm(diffs, axis=1)))


def fd_loss_gradient(loss_fn, z: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Central differences of a real loss along each real/imag coordinate.

    Returns the vector whose entries are (d/dRe z_k) + i (d/dIm z_k) of the
    loss; for the Wirtinger convention this equals 2 Re(grad) + 2i Im(grad),
    i.e. twice the Wirtinger gradient.  Real inputs get a real vector.
    """
    complex_input = np.iscomplexobj(z)
    out = np.zeros(z.shape, dtype=complex if complex_input else float)
    for k in range(z.shape[0]):
        step = np.zeros_like(z)
        step[k] = h
        d_re = (loss_fn(z + step) - loss_fn(z - step)) / (2.0 * h)
        if complex_input:
            step[k] = 1j * h
            d_im = (loss_fn(z + step) - loss_fn(z - step)) / (2.0 * h)
            out[k] = d_re + 1j * d_im
        else:
            out[k] = d_re
    return out


def fd_second_directional(loss_fn, z: np.ndarray, w: np.ndarray, h: float = 1e-4) -> float:
    """Second derivative of t -> loss(z + t w) at t = 0 by central differences."""
    return (loss_fn(z + h * w) - 2.0 * loss_fn(z) + loss_fn(z - h * w)) / (h * h)
