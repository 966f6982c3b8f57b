"""Dense linear algebra for the 4x4 / 16x16 matrices used throughout.

Thin, checked wrappers over numpy/scipy plus a Dormand-Prince 5(4)
integrator for linear systems of ODEs.
"""
from __future__ import annotations

import math

import numpy as np
import scipy.linalg

from .errors import ContractViolation, StiffnessError

HERMITIAN_TOL = 1e-10


def _as_square(m):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ContractViolation(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ContractViolation("matrix has non-finite entries")
    return m


def dagger(m):
    return np.conj(np.swapaxes(m, -1, -2))


def hermitian_eigen(m, tol=HERMITIAN_TOL):
    """Eigen-decomposition of a Hermitian matrix.

    Returns
    -------
    eigenvalues : ndarray of float, ascending
    eigenvectors : ndarray, orthonormal columns
    """
    m = _as_square(m)
    dev = np.max(np.abs(m - dagger(m)))
    if dev > tol:
        raise ContractViolation(f"matrix is not Hermitian (max |m - m^H| = {dev:.3g})")
    w, v = np.linalg.eigh(0.5 * (m + dagger(m)))
    return w, v


def general_eigenvalues(m):
    """Eigenvalues of an arbitrary finite square matrix (complex, unordered)."""
    return np.linalg.eigvals(_as_square(m))


def expm(m):
    """Matrix exponential (scaling and squaring with a Pade core)."""
    m = _as_square(m)
    with np.errstate(over="ignore", invalid="ignore"):
        out = scipy.linalg.expm(m)
    if not np.all(np.isfinite(out)):
        raise OverflowError("matrix exponential overflowed")
    return out


def vectorize(rho):
    """Column-stacking vectorization: vec(A rho B) = (B^T kron A) vec(rho)."""
    rho = np.asarray(rho)
    return rho.reshape(-1, order="F").copy()


def devectorize(vec, n=None):
    vec = np.asarray(vec)
    if n is None:
        n = math.isqrt(vec.shape[-1])
    return vec.reshape(n, n, order="F").copy()


def spre(a):
    """Superoperator rho -> a @ rho in the column-stacking convention."""
    a = np.asarray(a)
    return np.kron(np.eye(a.shape[0]), a)


def spost(b):
    """Superoperator rho -> rho @ b."""
    b = np.asarray(b)
    return np.kron(b.T, np.eye(b.shape[0]))


def sprepost(a, b):
    """Superoperator rho -> a @ rho @ b."""
    return np.kron(np.asarray(b).T, np.asarray(a))


# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4


def dopri_linear(generator, y0, times, rtol=1e-10, atol=1e-12, first_step=None,
                 max_steps=1_000_000):
    """Integrate ``dy/dt = generator @ y`` with an adaptive Dormand-Prince 5(4) pair.

    The step is clipped so that every requested time is hit exactly; no
    interpolation is involved. ``times`` must be non-decreasing and the
    integration starts at ``times[0]`` with ``y0``.

    Returns an array of shape ``(len(times), len(y0))``.
    """
    gen = np.asarray(generator, dtype=complex)
    y = np.asarray(y0, dtype=complex).copy()
    times = np.asarray(times, dtype=float)
    out = np.empty((len(times), y.size), dtype=complex)
    if len(times) == 0:
        return out
    if np.any(np.diff(times) < 0):
        raise ContractViolation("sample times must be non-decreasing")

    t = times[0]
    out[0] = y
    scale = np.max(np.abs(gen)) if gen.size else 0.0
    if first_step is not None:
        h = first_step
    elif scale > 0:
        h = 0.01 / scale
    else:
        h = max(times[-1] - t, 1.0)
    k = np.empty((7, y.size), dtype=complex)
    k[0] = gen @ y
    steps = 0

    for idx in range(1, len(times)):
        target = times[idx]
        while t < target:
            last = h >= target - t
            step = target - t if last else h
            if step < 1e-14 * max(1.0, abs(t)):
                raise StiffnessError(f"step size underflow at t={t:.6g}")
            for s in range(1, 7):
                k[s] = gen @ (y + step * (np.asarray(_A[s]) @ k[:s]))
            y_new = y + step * (_B5 @ k)
            err = step * (_E @ k)
            sc = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
            err_norm = math.sqrt(np.mean(np.abs(err / sc) ** 2))
            if err_norm <= 1.0:
                t = target if last else t + step
                y = y_new
                k[0] = k[6]  # first-same-as-last
                factor = 5.0 if err_norm == 0 else min(5.0, 0.9 * err_norm ** -0.2)
                # a step clipped to hit a sample time says little about h
                h = max(h, step * factor) if step < h else step * factor
            else:
                h = step * max(0.2, 0.9 * err_norm ** -0.2)
            steps += 1
            if steps > max_steps:
                raise StiffnessError(f"exceeded {max_steps} steps before t={target:.6g}")
        out[idx] = y
    return out
