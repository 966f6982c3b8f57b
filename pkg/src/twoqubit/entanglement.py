"""Wootters concurrence of two-qubit states."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import build_liouvillian, steady_state
from .errors import ContractViolation, NumericalValidityError
from .model import COMPUTATIONAL, SIGMA_Y, DensityMatrix, SystemParams, to_computational

SPIN_FLIP = np.kron(SIGMA_Y, SIGMA_Y)

CLAMP_TOL = 1e-10
ERROR_TOL = 1e-8


@dataclass(frozen=True)
class ConcurrenceResult:
    value: float
    lambdas: np.ndarray  # descending square roots of the spectrum of rho @ rho_tilde

    def __float__(self):
        return self.value


def _sqrtm_psd(rho):
    w, v = np.linalg.eigh(rho)
    worst = np.min(w, axis=-1)
    if np.any(worst < -ERROR_TOL):
        raise NumericalValidityError(
            f"state has a negative eigenvalue {np.min(worst):.3g}; concurrence undefined")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))


def wootters_lambdas(rho):
    """Descending square roots of the eigenvalues of ``rho @ rho_tilde``.

    Computed as the singular values of ``sqrt(rho) @ sqrt(rho_tilde)``,
    whose squares are the eigenvalues of the Hermitian matrix
    ``sqrt(rho) rho_tilde sqrt(rho)`` (similar to ``rho @ rho_tilde``).
    Unlike a general eigen-solve this stays accurate when the product is
    defective, as it is for every pure product state.
    """
    rho = np.asarray(rho, dtype=complex)
    rho = 0.5 * (rho + np.conj(np.swapaxes(rho, -1, -2)))
    root = _sqrtm_psd(rho)
    root_tilde = SPIN_FLIP @ np.conj(root) @ SPIN_FLIP
    return np.linalg.svd(root @ root_tilde, compute_uv=False)


def concurrence_values(rho):
    """Concurrence for a single 4x4 state or a stack of them (no validation)."""
    lam = wootters_lambdas(rho)
    value = lam[..., 0] - lam[..., 1] - lam[..., 2] - lam[..., 3]
    return np.clip(value, 0.0, 1.0)


def concurrence(rho) -> ConcurrenceResult:
    """Concurrence of a computational-basis density matrix."""
    if isinstance(rho, DensityMatrix):
        if rho.basis != COMPUTATIONAL:
            raise ContractViolation("concurrence needs a computational-basis state")
        rho = rho.data
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ContractViolation(f"expected a 4x4 density matrix, got {rho.shape}")
    lam = wootters_lambdas(rho)
    value = float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))
    return ConcurrenceResult(min(value, 1.0), lam)


def concurrence_pure(ket, tol=1e-10):
    """``2 |c00 c11 - c01 c10|`` for a normalized two-qubit ket."""
    ket = np.asarray(ket, dtype=complex)
    if ket.shape != (4,):
        raise ContractViolation(f"expected 4 amplitudes, got shape {ket.shape}")
    norm = np.vdot(ket, ket).real
    if abs(norm - 1.0) > tol:
        raise ContractViolation(f"ket is not normalized (norm^2 = {norm:.12g})")
    return float(2.0 * abs(ket[0] * ket[3] - ket[1] * ket[2]))


def stationary_concurrence(p: SystemParams) -> float:
    """Concurrence of the long-time state, from the closed-form populations."""
    L = build_liouvillian(p)
    rho = to_computational(steady_state(L), L.eigensystem)
    return concurrence(rho).value
