"""Command-line front end.

Frequencies are angular, in rad/ns; temperatures are in mK.

    twoqubit spectrum --omega1 5 --omega2 5 --lambda 5
    twoqubit evolve --initial onebit:p=0.5 --t1-mk 10 --t2-mk 10 --out traj.csv
    twoqubit sweep --vary tlambda --grid T=0:30:31 --grid lambda=0.5:50:100
"""
from __future__ import annotations

import argparse
import csv
import math
import re
import sys
from dataclasses import dataclass, field

import numpy as np

from .bath import rate_set
from .dynamics import Trajectory, build_liouvillian, evolve, secular_ratio, steady_state
from .entanglement import concurrence
from .errors import (
    ContractViolation, IntegrationError, NumericalValidityError, StateSpecError,
    ValidationError,
)
from .experiments import (
    InitialStateSpec, SweepGrid, default_horizon, sweep_T1_T2, sweep_T_lambda,
    sweep_time_weight,
)
from .model import SystemParams, eigensystem, to_computational

NUMBER = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(rf"({NUMBER})(?:([+-])((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)i)?")
_WEIGHT_RE = re.compile(rf"p=({NUMBER})")

SWEEP_AXES = {
    "p": ("p", "t"),
    "tlambda": ("T", "lambda"),
    "t1t2": ("T1", "T2"),
}
DEFAULT_GRIDS = {
    "p": "0:1:21",
    "T": "0:30:31",
    "lambda": "0.5:50:100",
    "T1": "0:30:31",
    "T2": "0:30:31",
}


def parse_initial_state(text: str) -> InitialStateSpec:
    """Parse ``basis:01``, ``eigen:a``, ``onebit:p=0.3``, ``twobit:p=1`` or ``ket:1,0,0,1+0.5i``."""
    family, sep, body = text.partition(":")
    if not sep:
        raise StateSpecError("expected '<family>:<argument>'", text, len(text))
    start = len(family) + 1
    if family in ("onebit", "twobit"):
        m = _WEIGHT_RE.fullmatch(body)
        if not m:
            raise StateSpecError("expected p=<float>", text, start)
        p = float(m.group(1))
        if not 0.0 <= p <= 1.0:
            raise StateSpecError(f"weight p={p} outside [0, 1]", text, start + 2)
        return InitialStateSpec(family, p=p)
    if family == "basis":
        if body not in ("00", "01", "10", "11"):
            raise StateSpecError("basis label must be 00, 01, 10 or 11", text, start)
        return InitialStateSpec("basis", label=body)
    if family == "eigen":
        if body not in ("a", "b", "c", "d"):
            raise StateSpecError("eigen label must be a, b, c or d", text, start)
        return InitialStateSpec("eigen", label=body)
    if family == "ket":
        amps = []
        pos = start
        for part in body.split(","):
            m = _COMPLEX_RE.fullmatch(part)
            if not m:
                raise StateSpecError(f"malformed complex literal {part!r}", text, pos)
            re_part = float(m.group(1))
            im_part = 0.0
            if m.group(2):
                im_part = float(m.group(3)) * (-1.0 if m.group(2) == "-" else 1.0)
            amps.append(complex(re_part, im_part))
            pos += len(part) + 1
        if len(amps) != 4:
            raise StateSpecError(f"ket needs 4 amplitudes, got {len(amps)}", text, start)
        if np.linalg.norm(amps) < 1e-12:
            raise StateSpecError("ket has zero norm", text, start)
        return InitialStateSpec("ket", amplitudes=tuple(amps))
    raise StateSpecError(f"unknown state family {family!r}", text, 0)


def parse_grid(text: str):
    """``<axis>=<start>:<stop>:<count>`` -> (axis, linspace)."""
    axis, sep, spec = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected <axis>=<start>:<stop>:<count>, got {text!r}")
    return axis, _parse_range(spec)


def _parse_range(spec):
    parts = spec.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected <start>:<stop>:<count>, got {spec!r}")
    try:
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed grid {spec!r}") from None
    if not (math.isfinite(start) and math.isfinite(stop)) or count < 1:
        raise argparse.ArgumentTypeError(f"grid needs finite bounds and count >= 1: {spec!r}")
    return np.linspace(start, stop, count)


def finite_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return value


def positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text!r}")
    return value


@dataclass
class RunConfig:
    command: str
    omega1: float = 5.0
    omega2: float = 5.0
    coupling: float = 5.0
    alpha1: float | None = None
    alpha2: float | None = None
    t1_mk: float = 0.0
    t2_mk: float = 0.0
    variant: str = "full"
    initial: str = "eigen:d"
    t_max: float | None = None
    samples: int = 201
    out: str | None = None
    grids: dict = field(default_factory=dict)
    vary: str | None = None
    family: str = "onebit"
    full_state: bool = False
    rtol: float = 1e-10
    atol: float = 1e-12
    workers: int = 1

    def system_params(self) -> SystemParams:
        default_alpha = 1e-3 * self.omega1
        return SystemParams(
            omega1=self.omega1, omega2=self.omega2, coupling=self.coupling,
            alpha1=default_alpha if self.alpha1 is None else self.alpha1,
            alpha2=default_alpha if self.alpha2 is None else self.alpha2,
            t1_mk=self.t1_mk, t2_mk=self.t2_mk, variant=self.variant)


def _common_parser():
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("model")
    g.add_argument("--config", help="file of 'key = value' lines; flags override it")
    g.add_argument("--omega1", type=finite_float, default=5.0, help="rad/ns")
    g.add_argument("--omega2", type=finite_float, default=5.0, help="rad/ns")
    g.add_argument("--lambda", dest="coupling", type=finite_float, default=5.0,
                   help="qubit-qubit coupling, rad/ns")
    g.add_argument("--alpha1", type=finite_float, default=None,
                   help="Ohmic strength of bath 1 (default 1e-3 * omega1)")
    g.add_argument("--alpha2", type=finite_float, default=None,
                   help="Ohmic strength of bath 2 (default 1e-3 * omega1)")
    g.add_argument("--t1-mk", type=finite_float, default=0.0, help="bath 1 temperature, mK")
    g.add_argument("--t2-mk", type=finite_float, default=0.0, help="bath 2 temperature, mK")
    g.add_argument("--variant", choices=("full", "rwa"), default="full")
    g.add_argument("--out", default=None, help="output path (default: stdout)")
    return common


def build_parser():
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="twoqubit",
        description="Two coupled qubits in independent thermal baths (rad/ns, mK).")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common], help="energies, mixing angles, frequencies")
    sub.add_parser("rates", parents=[common], help="decay/excitation/cross rates")
    sub.add_parser("steady", parents=[common], help="stationary populations and concurrence")

    ev = sub.add_parser("evolve", parents=[common], help="time evolution to CSV")
    ev.add_argument("--initial", default="eigen:d", help="initial state spec")
    ev.add_argument("--t-max", type=finite_float, default=None,
                    help="final time in ns (default 10 / (c_I + cbar_I))")
    ev.add_argument("--samples", type=positive_int, default=201)
    ev.add_argument("--full-state", action="store_true",
                    help="also write the upper triangle of rho (computational basis)")
    ev.add_argument("--rtol", type=finite_float, default=1e-10)
    ev.add_argument("--atol", type=finite_float, default=1e-12)

    sw = sub.add_parser("sweep", parents=[common], help="concurrence over a parameter grid")
    sw.add_argument("--vary", choices=tuple(SWEEP_AXES), required=True)
    sw.add_argument("--family", choices=("onebit", "twobit"), default="onebit",
                    help="initial-state family for --vary p")
    sw.add_argument("--grid", action="append", type=parse_grid, default=[],
                    metavar="AXIS=START:STOP:COUNT")
    sw.add_argument("--t-max", type=finite_float, default=None)
    sw.add_argument("--samples", type=positive_int, default=201)
    sw.add_argument("--workers", type=positive_int, default=1)
    return parser


def _read_config(path):
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            values[key.strip()] = value.strip()
    return values


def _config_argv(values, subparser):
    known = subparser._option_string_actions
    argv = []
    for key, value in values.items():
        flag = f"--{key}"
        if flag not in known:
            if key in _ALL_KEYS:
                continue  # belongs to another subcommand
            raise ValueError(f"unknown config key {key!r}")
        if key == "full-state":
            if value.lower() in ("1", "true", "yes"):
                argv.append(flag)
        elif key == "grid":
            for g in value.split():
                argv += [flag, g]
        else:
            argv += [flag, value]
    return argv


_ALL_KEYS = {"omega1", "omega2", "lambda", "alpha1", "alpha2", "t1-mk", "t2-mk", "variant",
             "out", "initial", "t-max", "samples", "full-state", "rtol", "atol", "vary",
             "family", "grid", "workers"}


def parse_args(argv=None) -> RunConfig:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    ns = parser.parse_args(argv)
    if ns.config:
        subparser = parser._subparsers._group_actions[0].choices[ns.command]
        try:
            extra = _config_argv(_read_config(ns.config), subparser)
        except (OSError, ValueError) as exc:
            parser.error(f"cannot use config: {exc}")
        # config first, command line second: later flags win
        ns = parser.parse_args([ns.command] + extra + argv[argv.index(ns.command) + 1:])

    cfg = RunConfig(command=ns.command)
    for name in ("omega1", "omega2", "coupling", "alpha1", "alpha2", "t1_mk", "t2_mk",
                 "variant", "out"):
        setattr(cfg, name, getattr(ns, name))
    for name in ("initial", "t_max", "samples", "full_state", "rtol", "atol",
                 "vary", "family", "workers"):
        if hasattr(ns, name):
            setattr(cfg, name, getattr(ns, name))
    if ns.command == "sweep":
        allowed = SWEEP_AXES[ns.vary]
        for axis, values in ns.grid:
            if axis not in allowed:
                parser.error(f"--grid axis {axis!r} not valid for --vary {ns.vary}; "
                             f"use {' / '.join(allowed)}")
            cfg.grids[axis] = values
    return cfg


def fmt(x):
    return "%.12g" % x


class _Sink:
    def __init__(self, destination):
        self.destination = destination

    def __enter__(self):
        if self.destination in (None, "-"):
            self.fh, self.close = sys.stdout, False
        elif hasattr(self.destination, "write"):
            self.fh, self.close = self.destination, False
        else:
            self.fh = open(self.destination, "w", encoding="utf-8", newline="")
            self.close = True
        return csv.writer(self.fh, lineterminator="\n")

    def __exit__(self, *exc):
        if self.close:
            self.fh.close()
        else:
            self.fh.flush()


def trajectory_header(full_state=False):
    header = ["t_ns", "pop_a", "pop_b", "pop_c", "pop_d", "concurrence"]
    if full_state:
        for j in range(4):
            for k in range(j, 4):
                header += [f"re_rho_{j}{k}", f"im_rho_{j}{k}"]
    return header


def write_csv(data, destination=None, full_state=False):
    """Write a Trajectory, SweepGrid, or (header, rows) pair as CSV.

    Numbers use ``%.12g``; line endings are LF. ``destination`` is a path,
    a writable file object, or None / "-" for stdout.
    """
    if isinstance(data, Trajectory):
        header = trajectory_header(full_state)
        rows = []
        comp = data.computational_states if full_state else None
        for n, t in enumerate(data.times):
            row = [t, *data.populations[n], data.concurrence[n]]
            if full_state:
                for j in range(4):
                    for k in range(j, 4):
                        row += [comp[n, j, k].real, comp[n, j, k].imag]
            rows.append(row)
    elif isinstance(data, SweepGrid):
        header = [a.name for a in data.axes] + ["concurrence"]
        rows = list(data.rows())
    else:
        header, rows = data
    with _Sink(destination) as writer:
        writer.writerow(header)
        for row in rows:
            writer.writerow([v if isinstance(v, str) else fmt(v) for v in row])


def _spectrum_rows(params):
    es = eigensystem(params)
    return ["quantity", "value"], [
        ("E_a", es.energies[0]), ("E_b", es.energies[1]),
        ("E_c", es.energies[2]), ("E_d", es.energies[3]),
        ("theta_I", es.theta_I), ("theta_II", es.theta_II),
        ("sin_theta_I", math.sin(es.theta_I)), ("sin_theta_II", math.sin(es.theta_II)),
        ("omega_I", es.omega_I), ("omega_II", es.omega_II),
    ]


def _rates_rows(params):
    es = eigensystem(params)
    r = rate_set(params, es)
    rows = [(k, v) for k, v in r.as_dict().items()]
    for i_idx, i in enumerate(("I", "II")):
        for l in (1, 2):
            rows.append((f"gamma_{i}_{l}{l}", r.gamma[i_idx, l - 1]))
            rows.append((f"gammabar_{i}_{l}{l}", r.gamma_bar[i_idx, l - 1]))
    rows.append(("secular_ratio", secular_ratio(r, es)))
    # d->b / d->c labelling: the generator built here pairs each channel with
    # the rate of its own transition frequency; the alternative assignment
    # swaps the two rates on the channels leaving |d>.
    for channel, used, swapped in (
            ("b->a", "c_I", "c_I"), ("c->a", "c_II", "c_II"),
            ("d->c", "c_I", "c_II"), ("d->b", "c_II", "c_I")):
        rows.append((f"channel {channel} used={used}", getattr(r, used)))
        rows.append((f"channel {channel} swapped={swapped}", getattr(r, swapped)))
    return ["quantity", "value"], rows


def _steady_rows(params):
    L = build_liouvillian(params)
    rho = steady_state(L)
    c = concurrence(to_computational(rho, L.eigensystem)).value
    return ["pop_a", "pop_b", "pop_c", "pop_d", "concurrence"], [
        [*rho.populations(), c]]


def _time_grid(cfg, params):
    t_max = cfg.t_max if cfg.t_max is not None else default_horizon(params)
    if cfg.samples == 0:
        return np.empty(0)
    if cfg.samples == 1:
        return np.array([t_max])
    return np.linspace(0.0, t_max, cfg.samples)


def run(cfg: RunConfig):
    params = cfg.system_params()
    if cfg.command == "spectrum":
        write_csv(_spectrum_rows(params), cfg.out)
    elif cfg.command == "rates":
        write_csv(_rates_rows(params), cfg.out)
    elif cfg.command == "steady":
        write_csv(_steady_rows(params), cfg.out)
    elif cfg.command == "evolve":
        spec = parse_initial_state(cfg.initial)
        L = build_liouvillian(params)
        times = _time_grid(cfg, params)
        traj = evolve(L, spec.density(L.eigensystem), times, rtol=cfg.rtol, atol=cfg.atol)
        write_csv(traj, cfg.out, full_state=cfg.full_state)
    elif cfg.command == "sweep":
        first, second = SWEEP_AXES[cfg.vary]
        if cfg.vary == "p":
            p_grid = cfg.grids.get("p", _parse_range(DEFAULT_GRIDS["p"]))
            t_grid = cfg.grids.get("t")
            if t_grid is None:
                t_grid = _time_grid(cfg, params)
            grid = sweep_time_weight(cfg.family, p_grid, t_grid, params, workers=cfg.workers)
        else:
            a = cfg.grids.get(first, _parse_range(DEFAULT_GRIDS[first]))
            b = cfg.grids.get(second, _parse_range(DEFAULT_GRIDS[second]))
            sweep = sweep_T_lambda if cfg.vary == "tlambda" else sweep_T1_T2
            grid = sweep(a, b, params, workers=cfg.workers)
        write_csv(grid, cfg.out)
    else:  # pragma: no cover - argparse restricts the choices
        raise ValueError(cfg.command)


def main(argv=None):
    cfg = parse_args(argv)
    try:
        run(cfg)
    except (ValidationError, ContractViolation, StateSpecError, IntegrationError,
            NumericalValidityError, ValueError, OSError) as exc:
        print(f"twoqubit: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
