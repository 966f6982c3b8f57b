"""Two coupled qubits: parameters, Hamiltonian, closed-form eigensystem.

Units: angular frequencies in rad/ns, temperatures in mK. Computational
basis order is |00>, |01>, |10>, |11> with the first digit labelling qubit 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BasisError, DegenerateSpectrumError, ValidationError
from .numerics import dagger

HBAR = 1.0545718e-34  # J s
K_B = 1.380649e-23  # J / K

#: hbar * (1 rad/ns) / k_B expressed in mK.
THERMAL_CONSTANT = HBAR * 1e9 / K_B * 1e3

FULL = "full"
RWA = "rwa"
VARIANTS = (FULL, RWA)

COMPUTATIONAL = "computational"
EIGENBASIS = "eigenbasis"

SIGMA_PLUS = np.array([[0, 0], [1, 0]], dtype=complex)  # |1><0|
SIGMA_MINUS = SIGMA_PLUS.T.copy()
SIGMA_X = SIGMA_PLUS + SIGMA_MINUS
SIGMA_Y = np.array([[0, -1j], [1j, 0]])
ID2 = np.eye(2, dtype=complex)


def on_qubit(op, qubit):
    """Embed a single-qubit operator acting on qubit 1 or 2."""
    return np.kron(op, ID2) if qubit == 1 else np.kron(ID2, op)


SX1 = on_qubit(SIGMA_X, 1)
SX2 = on_qubit(SIGMA_X, 2)


@dataclass(frozen=True)
class SystemParams:
    """Physical inputs of the two-qubit / two-bath model."""

    omega1: float
    omega2: float
    coupling: float
    alpha1: float = 0.0
    alpha2: float = 0.0
    t1_mk: float = 0.0
    t2_mk: float = 0.0
    variant: str = FULL

    def __post_init__(self):
        for name in ("omega1", "omega2", "coupling", "alpha1", "alpha2", "t1_mk", "t2_mk"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValidationError(f"{name} must be finite, got {value!r}")
        if self.omega1 <= 0 or self.omega2 <= 0:
            raise ValidationError("qubit frequencies must be positive")
        if self.alpha1 < 0 or self.alpha2 < 0:
            raise ValidationError("coupling strengths alpha must be non-negative")
        if self.t1_mk < 0 or self.t2_mk < 0:
            raise ValidationError("temperatures must be non-negative")
        if self.variant not in VARIANTS:
            raise ValidationError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.coupling == 0 and self.omega1 == self.omega2:
            raise DegenerateSpectrumError(
                "coupling = 0 with omega1 = omega2 gives a degenerate spectrum")
        if self.variant == RWA and self.coupling ** 2 >= 4 * self.omega1 * self.omega2:
            # beyond this |00> is no longer the ground state
            raise ValidationError("rwa variant requires coupling^2 < 4 omega1 omega2")

    @classmethod
    def preset(cls, **overrides):
        """omega1 = omega2 = coupling = 5 rad/ns, alpha1 = alpha2 = 1e-3 omega1, T = 0."""
        base = dict(omega1=5.0, omega2=5.0, coupling=5.0, t1_mk=0.0, t2_mk=0.0)
        base.update(overrides)
        base.setdefault("alpha1", 1e-3 * base["omega1"])
        base.setdefault("alpha2", 1e-3 * base["omega1"])
        return cls(**base)


@dataclass(frozen=True)
class EigenSystem:
    """Energies ``E_a < E_b < E_c < E_d`` and eigenkets (columns of ``kets``)."""

    energies: np.ndarray
    theta_I: float
    theta_II: float
    kets: np.ndarray
    variant: str = FULL

    @property
    def omega_I(self):
        return self.energies[1] - self.energies[0]

    @property
    def omega_II(self):
        return self.energies[2] - self.energies[0]

    def ket(self, label):
        return self.kets[:, "abcd".index(label)]


@dataclass(frozen=True)
class DensityMatrix:
    """A 4x4 density matrix tagged with the basis it is written in."""

    data: np.ndarray
    basis: str = COMPUTATIONAL

    def __post_init__(self):
        if self.basis not in (COMPUTATIONAL, EIGENBASIS):
            raise BasisError(f"unknown basis tag {self.basis!r}")
        arr = np.asarray(self.data, dtype=complex)
        if arr.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got {arr.shape}")
        object.__setattr__(self, "data", arr)

    @classmethod
    def from_ket(cls, ket, basis=COMPUTATIONAL):
        ket = np.asarray(ket, dtype=complex)
        return cls(np.outer(ket, ket.conj()), basis)

    def trace(self):
        return np.trace(self.data)

    def populations(self):
        return self.data.diagonal().real.copy()


def build_hamiltonian(p: SystemParams):
    """System Hamiltonian in the computational basis."""
    h = p.omega1 * on_qubit(SIGMA_PLUS @ SIGMA_MINUS, 1) \
        + p.omega2 * on_qubit(SIGMA_PLUS @ SIGMA_MINUS, 2)
    if p.variant == FULL:
        h = h + 0.5 * p.coupling * (SX1 @ SX2)
    else:
        sp1, sm1 = on_qubit(SIGMA_PLUS, 1), on_qubit(SIGMA_MINUS, 1)
        sp2, sm2 = on_qubit(SIGMA_PLUS, 2), on_qubit(SIGMA_MINUS, 2)
        h = h + 0.5 * p.coupling * (sp1 @ sm2 + sm1 @ sp2)
    return h


def eigensystem(p: SystemParams) -> EigenSystem:
    """Closed-form eigenvalues, mixing angles and eigenkets.

    The two-argument arctangent keeps the mixing-angle formulas valid for
    either ordering of the qubit frequencies. A negative coupling is
    absorbed by the local rotation Z on qubit 1, which flips the sign of
    sigma_x^(1) and leaves every rate unchanged.
    """
    w1, w2, lam = p.omega1, p.omega2, p.coupling
    total, diff = w1 + w2, w2 - w1
    r_odd = math.hypot(diff, lam)
    theta_II = math.atan2(abs(lam), diff)
    if p.variant == FULL:
        r_even = math.hypot(total, lam)
        theta_I = math.atan2(abs(lam), total)
        e_a, e_d = 0.5 * (total - r_even), 0.5 * (total + r_even)
    else:
        theta_I = 0.0
        e_a, e_d = 0.0, total
    energies = np.array([e_a, 0.5 * (total - r_odd), 0.5 * (total + r_odd), e_d])

    c1, s1 = math.cos(theta_I / 2), math.sin(theta_I / 2)
    c2, s2 = math.cos(theta_II / 2), math.sin(theta_II / 2)
    # rows: |00>, |01>, |10>, |11>; columns: a, b, c, d
    kets = np.array([
        [c1, 0.0, 0.0, s1],
        [0.0, -s2, c2, 0.0],
        [0.0, c2, s2, 0.0],
        [-s1, 0.0, 0.0, c1],
    ], dtype=complex)
    if lam < 0:
        kets = np.diag([1.0, 1.0, -1.0, -1.0]) @ kets
    return EigenSystem(energies, theta_I, theta_II, kets, p.variant)


def to_eigenbasis(rho: DensityMatrix, es: EigenSystem) -> DensityMatrix:
    if rho.basis != COMPUTATIONAL:
        raise BasisError(f"expected a computational-basis state, got {rho.basis}")
    u = es.kets
    return DensityMatrix(dagger(u) @ rho.data @ u, EIGENBASIS)


def to_computational(rho: DensityMatrix, es: EigenSystem) -> DensityMatrix:
    if rho.basis != EIGENBASIS:
        raise BasisError(f"expected an eigenbasis state, got {rho.basis}")
    u = es.kets
    return DensityMatrix(u @ rho.data @ dagger(u), COMPUTATIONAL)
