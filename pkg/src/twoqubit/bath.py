"""Thermal reservoirs: spectral densities, occupations and transition rates.

Reservoir ``l`` couples to qubit ``l`` through sigma_x^(l). Transition
frequency I (``omega_I = E_b - E_a = E_d - E_c``) drives the channels
b->a and d->c; frequency II (``omega_II = E_c - E_a = E_d - E_b``) drives
c->a and d->b.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import THERMAL_CONSTANT, EigenSystem, SystemParams

CHANNELS = ("I", "II")


@dataclass(frozen=True)
class SpectralDensity:
    """Ohmic zero-temperature spectral density ``J(omega) = alpha * omega``."""

    alpha: float
    kind: str = "ohmic"

    def __call__(self, omega):
        if omega < 0:
            raise ValueError("spectral density is only defined for omega >= 0")
        return self.alpha * omega


def boltzmann_exponent(omega, t_mk):
    """``hbar omega / k_B T`` (infinite at T = 0)."""
    if t_mk == 0:
        return math.inf
    return THERMAL_CONSTANT * omega / t_mk


def bose_occupation(omega, t_mk):
    """Mean thermal photon number of a mode at ``omega`` (rad/ns), ``t_mk`` (mK)."""
    if not omega > 0:
        raise ValueError(f"mode frequency must be positive, got {omega!r}")
    if t_mk < 0:
        raise ValueError(f"temperature must be non-negative, got {t_mk!r}")
    if t_mk == 0:
        return 0.0
    x = boltzmann_exponent(omega, t_mk)
    # exp(-x) / (1 - exp(-x)) stays finite for large x
    return math.exp(-x) / -math.expm1(-x)


def _channel_frequency(i, es):
    if i == "I":
        return es.omega_I
    if i == "II":
        return es.omega_II
    raise ValueError(f"channel must be 'I' or 'II', got {i!r}")


def gamma(i, l, p: SystemParams, es: EigenSystem, density=None):
    """Decay and excitation rates ``(gamma_{i,ll}, gamma_bar_{i,ll})``.

    The excitation rate is the decay rate times the Boltzmann factor of
    bath ``l`` at the channel frequency, so their ratio is exact.
    """
    omega = _channel_frequency(i, es)
    if l == 1:
        alpha, t_mk = p.alpha1, p.t1_mk
    elif l == 2:
        alpha, t_mk = p.alpha2, p.t2_mk
    else:
        raise ValueError(f"reservoir index must be 1 or 2, got {l!r}")
    j = (density or SpectralDensity(alpha))(omega)
    down = j * (1.0 + bose_occupation(omega, t_mk))
    up = down * math.exp(-boltzmann_exponent(omega, t_mk))
    return down, up


@dataclass(frozen=True)
class RateSet:
    """Aggregate decay (c), excitation (cbar) and cross-term rates, in rad/ns.

    ``gamma[i, l]`` / ``gamma_bar[i, l]`` hold the microscopic rates with
    ``i`` = 0 for channel I, 1 for channel II and ``l`` = reservoir - 1.
    """

    c_I: float
    c_II: float
    cbar_I: float
    cbar_II: float
    ccr_I: float
    ccr_II: float
    cbarcr_I: float
    cbarcr_II: float
    gamma: np.ndarray
    gamma_bar: np.ndarray

    def as_dict(self):
        return {
            "c_I": self.c_I, "c_II": self.c_II,
            "cbar_I": self.cbar_I, "cbar_II": self.cbar_II,
            "ccr_I": self.ccr_I, "ccr_II": self.ccr_II,
            "cbarcr_I": self.cbarcr_I, "cbarcr_II": self.cbarcr_II,
        }


def _weights(es: EigenSystem):
    """Squared half-angle overlaps weighting each reservoir in each channel."""
    c1, s1 = math.cos(es.theta_I / 2), math.sin(es.theta_I / 2)
    c2, s2 = math.cos(es.theta_II / 2), math.sin(es.theta_II / 2)
    w_I = ((c1 * c2 + s1 * s2) ** 2, (c1 * s2 + s1 * c2) ** 2)
    w_II = ((c1 * s2 - s1 * c2) ** 2, (c1 * c2 - s1 * s2) ** 2)
    return w_I, w_II


def rate_set(p: SystemParams, es: EigenSystem) -> RateSet:
    g = np.empty((2, 2))
    gb = np.empty((2, 2))
    for i_idx, i in enumerate(CHANNELS):
        for l in (1, 2):
            g[i_idx, l - 1], gb[i_idx, l - 1] = gamma(i, l, p, es)
    (a11, a22), (b11, b22) = _weights(es)

    def combine(rates):
        return (
            rates[0, 0] * a11 + rates[0, 1] * a22,
            rates[1, 0] * b11 + rates[1, 1] * b22,
            rates[0, 0] * a11 - rates[0, 1] * a22,
            -rates[1, 0] * b11 + rates[1, 1] * b22,
        )

    c_I, c_II, ccr_I, ccr_II = combine(g)
    cbar_I, cbar_II, cbarcr_I, cbarcr_II = combine(gb)
    return RateSet(c_I, c_II, cbar_I, cbar_II, ccr_I, ccr_II, cbarcr_I, cbarcr_II, g, gb)
