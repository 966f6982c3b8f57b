"""Parameter sweeps producing concurrence grids."""
from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dynamics import build_liouvillian, evolve
from .entanglement import stationary_concurrence
from .errors import StateSpecError
from .model import COMPUTATIONAL, DensityMatrix, EigenSystem, SystemParams

FAMILIES = ("onebit", "twobit", "basis", "eigen", "ket")
BASIS_INDEX = {"00": 0, "01": 1, "10": 2, "11": 3}


@dataclass(frozen=True)
class InitialStateSpec:
    """A pure initial state.

    ``onebit``: sqrt(p)|01> + sqrt(1-p)|10>; ``twobit``: sqrt(p)|00> + sqrt(1-p)|11>;
    ``basis``: a computational basis ket ("00".."11"); ``eigen``: an
    eigenket ("a".."d"); ``ket``: explicit amplitudes, normalized on creation.
    """

    family: str
    p: float | None = None
    label: str | None = None
    amplitudes: tuple | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise StateSpecError(f"unknown family {self.family!r}", self.family, 0)
        if self.family in ("onebit", "twobit"):
            if self.p is None or not 0.0 <= self.p <= 1.0:
                raise StateSpecError(f"weight p must lie in [0, 1], got {self.p!r}")
        elif self.family == "basis" and self.label not in BASIS_INDEX:
            raise StateSpecError(f"basis label must be one of {list(BASIS_INDEX)}")
        elif self.family == "eigen" and (self.label is None or self.label not in "abcd"
                                         or len(self.label) != 1):
            raise StateSpecError("eigen label must be one of a, b, c, d")
        elif self.family == "ket":
            amps = np.asarray(self.amplitudes, dtype=complex)
            if amps.shape != (4,):
                raise StateSpecError("ket needs exactly 4 amplitudes")
            norm = float(np.linalg.norm(amps))
            if not norm >= 1e-12:
                raise StateSpecError("ket has (near) zero norm")
            object.__setattr__(self, "amplitudes", tuple(amps / norm))

    def ket(self, es: EigenSystem | None = None):
        """Computational-basis amplitudes (``es`` is needed for ``eigen``)."""
        out = np.zeros(4, dtype=complex)
        if self.family == "onebit":
            out[1], out[2] = math.sqrt(self.p), math.sqrt(1.0 - self.p)
        elif self.family == "twobit":
            out[0], out[3] = math.sqrt(self.p), math.sqrt(1.0 - self.p)
        elif self.family == "basis":
            out[BASIS_INDEX[self.label]] = 1.0
        elif self.family == "eigen":
            if es is None:
                raise ValueError("an eigensystem is required for eigen:<k> states")
            out = es.ket(self.label).copy()
        else:
            out = np.array(self.amplitudes, dtype=complex)
        return out

    def density(self, es: EigenSystem | None = None) -> DensityMatrix:
        return DensityMatrix.from_ket(self.ket(es), COMPUTATIONAL)


@dataclass(frozen=True)
class Axis:
    name: str
    unit: str
    values: np.ndarray


@dataclass(frozen=True)
class SweepGrid:
    """Concurrence values over a tensor grid, ``values.shape == [len(a) for a in axes]``."""

    axes: tuple
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        shape = tuple(len(a.values) for a in self.axes)
        if self.values.shape != shape:
            raise ValueError(f"values shape {self.values.shape} does not match axes {shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("sweep produced non-finite values")
        if np.any((self.values < 0) | (self.values > 1)):
            raise ValueError("concurrence outside [0, 1]")

    def rows(self):
        """Yield ``(*axis_values, value)`` in row-major order."""
        for idx in np.ndindex(*self.values.shape):
            yield tuple(a.values[i] for a, i in zip(self.axes, idx)) + (self.values[idx],)


def default_horizon(params: SystemParams, multiple=10.0):
    """Time (ns) after which the time sweeps have settled: ``multiple / (c_I + cbar_I)``."""
    r = build_liouvillian(params).rates
    return multiple / (r.c_I + r.cbar_I)


def _check_grid(values, name):
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or len(values) == 0:
        raise ValueError(f"{name} grid must be a non-empty 1-d sequence")
    if np.any(np.diff(values) <= 0):
        raise ValueError(f"{name} grid must be strictly increasing")
    return values


def _map(func, items, workers):
    if workers is None or workers <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def _time_row(args):
    family, weight, times, params = args
    L = build_liouvillian(params)
    rho0 = InitialStateSpec(family, p=float(weight)).density(L.eigensystem)
    return evolve(L, rho0, times).concurrence


def sweep_time_weight(family, p_grid, t_grid, params: SystemParams, workers=1) -> SweepGrid:
    """Concurrence over (p, t) for the ``onebit`` or ``twobit`` state family."""
    if family not in ("onebit", "twobit"):
        raise ValueError(f"family must be 'onebit' or 'twobit', got {family!r}")
    p_grid = _check_grid(p_grid, "p")
    t_grid = np.asarray(t_grid, dtype=float)
    if len(t_grid):
        t_grid = _check_grid(t_grid, "t")
    tasks = [(family, w, t_grid, params) for w in p_grid]
    rows = _map(_time_row, tasks, workers)
    values = np.array(rows).reshape(len(p_grid), len(t_grid))
    return SweepGrid(
        (Axis("p", "", p_grid), Axis("t_ns", "ns", t_grid)), values,
        {"params": params, "family": family})


def _stationary_row(args):
    params, fixed, inner_names, inner = args
    out = []
    for v in inner:
        changes = dict(fixed, **{name: float(v) for name in inner_names})
        out.append(stationary_concurrence(dataclasses.replace(params, **changes)))
    return out


def sweep_T_lambda(T_grid, lambda_grid, params: SystemParams, workers=1) -> SweepGrid:
    """Stationary concurrence over equal bath temperatures and the coupling."""
    T_grid = _check_grid(T_grid, "T")
    lambda_grid = _check_grid(lambda_grid, "lambda")
    tasks = [(params, {"t1_mk": float(T), "t2_mk": float(T)}, ("coupling",), lambda_grid)
             for T in T_grid]
    values = np.array(_map(_stationary_row, tasks, workers))
    return SweepGrid(
        (Axis("T_mK", "mK", T_grid), Axis("lambda", "rad/ns", lambda_grid)), values,
        {"params": params})


def sweep_T1_T2(T1_grid, T2_grid, params: SystemParams, workers=1) -> SweepGrid:
    """Stationary concurrence over the two bath temperatures."""
    T1_grid = _check_grid(T1_grid, "T1")
    T2_grid = _check_grid(T2_grid, "T2")
    tasks = [(params, {"t1_mk": float(t1)}, ("t2_mk",), T2_grid) for t1 in T1_grid]
    values = np.array(_map(_stationary_row, tasks, workers))
    return SweepGrid(
        (Axis("T1_mK", "mK", T1_grid), Axis("T2_mK", "mK", T2_grid)), values,
        {"params": params})
