"""Secular Markovian generator, time evolution and stationary state.

The generator is assembled in the eigenbasis from the eigenoperators of
sigma_x^(1) and sigma_x^(2) at the two transition frequencies, each with
its thermal decay and excitation rate. Vectorization is column stacking.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .bath import RateSet, rate_set
from .errors import ContractViolation, IntegrationError
from .model import (
    COMPUTATIONAL, EIGENBASIS, SX1, SX2, DensityMatrix, EigenSystem, SystemParams,
    eigensystem, to_eigenbasis,
)
from .numerics import dagger, devectorize, dopri_linear, spost, spre, sprepost, vectorize

#: (lower, upper) eigenstate index pairs sharing each transition frequency.
CHANNEL_PAIRS = {
    "I": ((0, 1), (2, 3)),  # b->a, d->c
    "II": ((0, 2), (1, 3)),  # c->a, d->b
}
_DIAG = np.array([5 * k for k in range(4)])  # vec indices of rho_kk


class SecularityWarning(UserWarning):
    """Rates are not small compared with the Bohr-frequency spacings."""


def dissipator(a):
    """Superoperator of ``a rho a^+ - {a^+ a, rho}/2``."""
    ada = dagger(a) @ a
    return sprepost(a, dagger(a)) - 0.5 * spre(ada) - 0.5 * spost(ada)


def eigenoperator(x, pairs):
    """Lowering part of ``x`` (eigenbasis) restricted to the given transitions."""
    a = np.zeros((4, 4), dtype=complex)
    for lo, hi in pairs:
        a[lo, hi] = x[lo, hi]
    return a


@dataclass(frozen=True)
class Liouvillian:
    """16x16 generator in the eigenbasis plus the 4x4 population rate matrix."""

    params: SystemParams
    eigensystem: EigenSystem
    rates: RateSet
    hamiltonian_part: np.ndarray
    dissipative_part: np.ndarray

    @cached_property
    def matrix(self):
        return self.hamiltonian_part + self.dissipative_part

    @cached_property
    def rate_matrix(self):
        """Population block: ``d/dt rho_kk = sum_j M[k, j] rho_jj``."""
        return self.matrix[np.ix_(_DIAG, _DIAG)].real.copy()

    @cached_property
    def commutes(self):
        """True when the dissipator commutes with the Hamiltonian superoperator."""
        h, d = self.hamiltonian_part, self.dissipative_part
        comm = h @ d - d @ h
        scale = max(1.0, np.max(np.abs(h))) * max(1e-300, np.max(np.abs(d)))
        return bool(np.max(np.abs(comm)) <= 1e-12 * scale)

    def apply(self, rho):
        """Action on a 4x4 eigenbasis matrix."""
        return devectorize(self.matrix @ vectorize(rho))


def secular_ratio(rates: RateSet, es: EigenSystem):
    """Largest total rate divided by the smallest Bohr-frequency spacing."""
    spacing = min(es.omega_I, es.omega_II - es.omega_I)
    total = max(rates.c_I + rates.cbar_I, rates.c_II + rates.cbar_II)
    return total / spacing


def build_liouvillian(p: SystemParams) -> Liouvillian:
    es = eigensystem(p)
    rates = rate_set(p, es)
    u = es.kets
    h = np.diag(es.energies).astype(complex)
    l_h = -1j * (spre(h) - spost(h))

    d = np.zeros((16, 16), dtype=complex)
    for l_idx, sx in enumerate((SX1, SX2)):
        x = dagger(u) @ sx @ u
        for i_idx, pairs in enumerate(CHANNEL_PAIRS.values()):
            a = eigenoperator(x, pairs)
            down, up = rates.gamma[i_idx, l_idx], rates.gamma_bar[i_idx, l_idx]
            if down:
                d += down * dissipator(a)
            if up:
                d += up * dissipator(dagger(a))

    if secular_ratio(rates, es) > 0.1:
        warnings.warn(
            "decay rates exceed 10% of the smallest Bohr-frequency spacing; "
            "the secular approximation is questionable",
            SecularityWarning, stacklevel=2)
    return Liouvillian(p, es, rates, l_h, d)


def population_rate_matrix(r: RateSet):
    """Population rate matrix written directly from the aggregate rates (order a, b, c, d)."""
    c1, c2, b1, b2 = r.c_I, r.c_II, r.cbar_I, r.cbar_II
    return np.array([
        [-(b1 + b2), c1, c2, 0.0],
        [b1, -(c1 + b2), 0.0, c2],
        [b2, 0.0, -(b1 + c2), c1],
        [0.0, b2, b1, -(c1 + c2)],
    ])


def _denominators(r: RateSet):
    k1, k2 = r.c_I + r.cbar_I, r.c_II + r.cbar_II
    if k1 <= 0 or k2 <= 0:
        raise ContractViolation("populations do not relax: a channel has zero total rate")
    return k1, k2


def stationary_populations(r: RateSet):
    k1, k2 = _denominators(r)
    c1, c2, b1, b2 = r.c_I, r.c_II, r.cbar_I, r.cbar_II
    return np.array([c1 * c2, b1 * c2, c1 * b2, b1 * b2]) / (k1 * k2)


def propagate_populations_analytic(r: RateSet, pops0, t):
    """Closed-form eigenbasis populations at time(s) ``t`` from ``pops0``.

    Returns shape ``(4,)`` for scalar ``t`` and ``(len(t), 4)`` otherwise.
    """
    k1, k2 = _denominators(r)
    c1, c2, b1, b2 = r.c_I, r.c_II, r.cbar_I, r.cbar_II
    pa, pb, pc, pd = (float(x) for x in pops0)
    t = np.asarray(t, dtype=float)
    den = k1 * k2
    e12 = np.exp(-(c1 + c2 + b1 + b2) * t)
    e2 = np.exp(-(c2 + b2) * t)
    e1 = np.exp(-(c1 + b1) * t)

    mix = b1 * b2 * pa - c1 * b2 * pb - b1 * c2 * pc + c1 * c2 * pd
    rho_aa = (c1 * c2
              + mix * e12
              + (c1 * b2 * (pa + pb) - c1 * c2 * (pc + pd)) * e2
              + (b1 * c2 * (pa + pc) - c1 * c2 * (pb + pd)) * e1) / den
    rho_bb = (b1 * c2
              - mix * e12
              + (b1 * b2 * (pa + pb) - b1 * c2 * (pc + pd)) * e2
              + (-b1 * c2 * (pa + pc) + c1 * c2 * (pb + pd)) * e1) / den
    rho_cc = (c1 * b2
              - mix * e12
              + (-c1 * b2 * (pa + pb) + c1 * c2 * (pc + pd)) * e2
              + (b1 * b2 * (pa + pc) - c1 * b2 * (pb + pd)) * e1) / den
    rho_dd = (b1 * b2
              + mix * e12
              + (-b1 * b2 * (pa + pb) + b1 * c2 * (pc + pd)) * e2
              + (-b1 * b2 * (pa + pc) + c1 * b2 * (pb + pd)) * e1) / den
    return np.stack([rho_aa, rho_bb, rho_cc, rho_dd], axis=-1)


def steady_state(L: Liouvillian, tol=1e-10) -> DensityMatrix:
    """Stationary state (eigenbasis), diagonal with the long-time populations."""
    rho = np.diag(stationary_populations(L.rates)).astype(complex)
    residual = np.max(np.abs(L.apply(rho)))
    scale = max(1.0, np.max(np.abs(L.rate_matrix)))
    if residual > tol * scale:
        raise IntegrationError(f"stationary state not annihilated by generator ({residual:.3g})")
    return DensityMatrix(rho, EIGENBASIS)


def state_defects(rho):
    """``(|tr - 1|, max |rho - rho^+|, min eigenvalue)`` for one or many states."""
    rho = np.asarray(rho)
    trace_err = np.abs(np.trace(rho, axis1=-2, axis2=-1) - 1.0)
    herm_err = np.max(np.abs(rho - dagger(rho)), axis=(-2, -1))
    min_eig = np.linalg.eigvalsh(0.5 * (rho + dagger(rho)))[..., 0]
    return trace_err, herm_err, min_eig


def _check_valid(rho, tol, what, exc):
    trace_err, herm_err, min_eig = (np.max(v) if i < 2 else np.min(v)
                                    for i, v in enumerate(state_defects(rho)))
    if trace_err > tol or herm_err > tol or min_eig < -tol:
        raise exc(f"{what} is not a valid density matrix: |tr-1|={trace_err:.3g}, "
                  f"hermiticity={herm_err:.3g}, min eigenvalue={min_eig:.3g}")


@dataclass(frozen=True)
class Trajectory:
    """Sampled evolution; ``states`` are eigenbasis density matrices, shape (n, 4, 4)."""

    times: np.ndarray
    states: np.ndarray
    eigensystem: EigenSystem

    def __len__(self):
        return len(self.times)

    @cached_property
    def populations(self):
        return np.real(np.diagonal(self.states, axis1=-2, axis2=-1)).copy()

    @cached_property
    def computational_states(self):
        u = self.eigensystem.kets
        return u @ self.states @ dagger(u)

    @cached_property
    def concurrence(self):
        from .entanglement import concurrence_values
        return concurrence_values(self.computational_states)

    def state(self, k, basis=COMPUTATIONAL):
        if basis == EIGENBASIS:
            return DensityMatrix(self.states[k], EIGENBASIS)
        return DensityMatrix(self.computational_states[k], COMPUTATIONAL)


def evolve(L: Liouvillian, rho0: DensityMatrix, times, rtol=1e-10, atol=1e-12,
           check_tol=1e-8) -> Trajectory:
    """Propagate ``rho0`` (taken at t = 0) and sample it at ``times`` (ns).

    Integration runs in the frame rotating with the system Hamiltonian:
    the secular dissipator commutes with it, so the rotating-frame
    generator is constant and free of the fast Bohr oscillations. Output
    states are checked, never rescaled.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1:
        raise ContractViolation("times must be a one-dimensional sequence")
    if len(times) and (times[0] < 0 or np.any(np.diff(times) <= 0)):
        raise ContractViolation("times must be strictly increasing and non-negative")
    es = L.eigensystem
    if rho0.basis == COMPUTATIONAL:
        rho0 = to_eigenbasis(rho0, es)
    _check_valid(rho0.data, 1e-10, "initial state", ContractViolation)
    if len(times) == 0:
        return Trajectory(times, np.empty((0, 4, 4), dtype=complex), es)

    grid = times if times[0] == 0 else np.concatenate([[0.0], times])
    y0 = vectorize(rho0.data)
    if L.commutes:
        ys = dopri_linear(L.dissipative_part, y0, grid, rtol=rtol, atol=atol)
        states = np.stack([devectorize(y) for y in ys])
        e = es.energies
        bohr = e[:, None] - e[None, :]
        states = states * np.exp(-1j * bohr[None, :, :] * grid[:, None, None])
    else:
        ys = dopri_linear(L.matrix, y0, grid, rtol=rtol, atol=atol)
        states = np.stack([devectorize(y) for y in ys])
    if grid is not times:
        states = states[1:]
    _check_valid(states, check_tol, "propagated state", IntegrationError)
    return Trajectory(times.copy(), states, es)
