"""``cqed`` command-line front end.

Exit status: 0 on success, 1 on bad input (usage, config, netlist, missing
file), 2 on numerical failure (divergence, singular system, unresolvable
peaks). Failures print one ``cqed: error: ...`` line to stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from .accircuit import parse_netlist, transmission_sweep
from .config import ScenarioConfig, default_config, load_config
from .core import TWO_PI, derive_lc, derive_rms, dispersive_pull, dressed_modes, table1
from .errors import InputError, InvalidParameterError, NumericalError
from .rbe import EXCITED_SEED, PROBE_SEED, TimeSeries, integrate
from .spectra import (
    RbeFftSettings,
    anticrossing_sweep,
    default_grid,
    lamb_shift_curve,
    periodogram,
    qnd_pull,
)

ROUTE_FLAGS = {"rbe": "rbe-fft", "circuit": "circuit-ac", "oracle": "oracle"}


class UsageError(InputError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # argparse exits with 2 by default; usage errors are input errors here
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _finite(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {text!r}")
    return value


def _lambda3(text: str) -> float:
    value = _finite(text)
    if value not in (-1.0, 1.0):
        raise argparse.ArgumentTypeError(f"expected -1 or +1, got {text!r}")
    return value


def _build_parser() -> _Parser:
    parser = _Parser(prog="cqed", description="Resonator-qubit dynamics, circuits and spectra.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def command(name, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--config", type=Path, help="TOML scenario file")
        p.add_argument("--out", type=Path, help="output file (default: <output.dir>/<command>.csv|json)")
        return p

    def delta(p, default=None):
        p.add_argument("--delta", type=_finite, default=default, help="detuning f_q - f_r in MHz")

    p = command("params", "Print resonator LC, RMS scales and equivalent-circuit values as JSON.")
    delta(p)
    p.add_argument("--lambda3", type=_lambda3, help="inversion -1 or +1")

    p = command("rbe", "Integrate the resonator-Bloch equations; write a time-series CSV.")
    delta(p)
    p.add_argument("--lambda3", type=_lambda3, help="seed inversion: -1 ground (default), +1 excited")

    p = command("spectrum", "Periodogram of a time-series CSV.")
    p.add_argument("input", type=Path, help="time-series CSV written by 'cqed rbe'")
    p.add_argument("--channel", choices=("lambda1", "lambda2", "lambda3", "v", "i"))

    p = command("ac", "AC transmission sweep of a netlist file.")
    p.add_argument("--netlist", type=Path, required=True)
    p.add_argument("--port", help="port name (default: the first declared)")
    p.add_argument("--fmin", type=_finite, help="GHz")
    p.add_argument("--fmax", type=_finite, help="GHz")
    p.add_argument("--points", type=int)

    for name, help_text, lo, hi, n in (
        ("anticrossing", "Dressed peak frequencies versus detuning.", -600.0, 600.0, 25),
        ("lambshift", "Qubit Lamb shift versus detuning.", 100.0, 600.0, 11),
    ):
        p = command(name, help_text)
        p.add_argument("--delta-min", type=_finite, default=lo, help="MHz")
        p.add_argument("--delta-max", type=_finite, default=hi, help="MHz")
        p.add_argument("--delta-steps", type=int, default=n)
        p.add_argument("--route", choices=tuple(ROUTE_FLAGS), default="oracle")

    p = command("qnd", "Ground/excited cavity spectra and the state-dependent pull.")
    delta(p, default=1000.0)

    p = command("oracle", "Dressed-mode frequencies from the quartic, plus the cavity pull.")
    delta(p)
    p.add_argument("--lambda3", type=_lambda3)
    return parser


def _config(args) -> ScenarioConfig:
    cfg = load_config(args.config) if args.config is not None else default_config()
    if getattr(args, "delta", None) is not None:
        cfg = cfg.with_delta(args.delta)
    if getattr(args, "lambda3", None) is not None:
        cfg = cfg.with_lambda3(args.lambda3)
    return cfg


def _out(args, cfg: ScenarioConfig, suffix: str) -> Path:
    path = args.out if args.out is not None else Path(cfg.output.dir) / f"{args.command}{suffix}"
    if not path.parent.is_dir():
        raise InvalidParameterError(f"output directory does not exist: {path.parent}")
    return path


def _write_json(path: Optional[Path], payload) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
        return
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    tmp.replace(path)


def _cmd_params(args, cfg):
    p = cfg.physical_params()
    lc = derive_rms(derive_lc(p.z0, p.omega_r), p.omega_r)
    payload = {
        "omega_r": p.omega_r, "omega_q": p.omega_q, "g": p.g, "gamma": p.gamma,
        "t1": p.t1, "t2": p.t2, "z0": p.z0, "lambda3_0": p.lambda3_0,
        "c_r": lc.c_r, "l_r": lc.l_r, "v_rms": lc.v_rms, "i_rms": lc.i_rms,
    }
    for kind in ("electric", "magnetic"):
        cp = table1(p, kind)
        payload[kind] = {k: getattr(cp, k) for k in ("rq1", "rq2", "lq", "cq", "rr", "lr", "cr", "coupling")}
    _write_json(args.out, payload)


def _cmd_rbe(args, cfg):
    p = cfg.physical_params()
    seed = EXCITED_SEED if args.lambda3 == 1.0 else PROBE_SEED
    sim = cfg.simulation
    series = integrate(seed, p, cfg.dt, cfg.t_final, mode=sim.mode,
                       decimation=sim.decimation or 1, method=sim.method)
    series.to_csv(_out(args, cfg, ".csv"))


def _cmd_spectrum(args, cfg):
    if not args.input.is_file():
        raise InvalidParameterError(f"time-series file not found: {args.input}")
    series = TimeSeries.from_csv(args.input)
    sim = cfg.simulation
    spec = periodogram(series, args.channel or sim.channel, sim.window, sim.pad_factor)
    spec.to_csv(_out(args, cfg, ".csv"))


def _cmd_ac(args, cfg):
    try:
        text = args.netlist.read_text()
    except FileNotFoundError:
        raise InvalidParameterError(f"netlist file not found: {args.netlist}") from None
    except OSError as exc:
        raise InvalidParameterError(f"cannot read netlist {args.netlist}: {exc.strerror}") from None
    net = parse_netlist(text)
    if not net.ports:
        raise InvalidParameterError(f"{args.netlist}: no .port declared")
    port = args.port or next(iter(net.ports))
    sim = cfg.simulation
    points = args.points if args.points is not None else sim.points
    if points < 2:
        raise InvalidParameterError(f"--points must be at least 2, got {points}")
    fmin = args.fmin if args.fmin is not None else sim.fmin_ghz
    fmax = args.fmax if args.fmax is not None else sim.fmax_ghz
    if fmin is None and fmax is None:
        grid = default_grid(cfg.physical_params(), points)
    elif fmin is None or fmax is None:
        raise InvalidParameterError("give both --fmin and --fmax, or neither")
    else:
        if not 0 < fmin < fmax:
            raise InvalidParameterError(f"need 0 < fmin < fmax, got {fmin} and {fmax} GHz")
        grid = np.linspace(fmin * 1e9, fmax * 1e9, points)
    transmission_sweep(net, port, grid).to_csv(_out(args, cfg, ".csv"))


def _sweep_deltas(args) -> np.ndarray:
    if args.delta_steps < 1:
        raise InvalidParameterError(f"--delta-steps must be positive, got {args.delta_steps}")
    if args.delta_steps > 1 and not args.delta_min < args.delta_max:
        raise InvalidParameterError("--delta-min must be below --delta-max")
    return np.linspace(args.delta_min, args.delta_max, args.delta_steps) * 1e6


def _rbe_settings(cfg) -> RbeFftSettings:
    sim = cfg.simulation
    return RbeFftSettings(dt=cfg.dt, t_final=cfg.t_final, window=sim.window,
                          pad_factor=sim.pad_factor, decimation=sim.decimation, method=sim.method)


def _cmd_sweep(args, cfg):
    fn = anticrossing_sweep if args.command == "anticrossing" else lamb_shift_curve
    result = fn(cfg.physical_params(), _sweep_deltas(args), ROUTE_FLAGS[args.route],
                rbe=_rbe_settings(cfg))
    result.to_csv(_out(args, cfg, ".csv"))


def _cmd_qnd(args, cfg):
    p = cfg.physical_params()
    sim = cfg.simulation
    settings = RbeFftSettings(dt=cfg.dt, window="rectangular", pad_factor=sim.pad_factor,
                              decimation=sim.decimation, method=sim.method)
    result = qnd_pull(p, args.delta * 1e6, p.t1, cfg.t_final, settings)
    out = _out(args, cfg, "")
    result.write(out.with_suffix("") if out.suffix else out)
    _write_json(None, result.summary())


def _cmd_oracle(args, cfg):
    p = cfg.physical_params()
    modes = dressed_modes(p)
    payload = {
        "delta_hz": cfg.f_q_hz - cfg.physical.f_r_ghz * 1e9,
        "lambda3_0": p.lambda3_0,
        "peaks_hz": [float(w) / TWO_PI for w in modes.frequencies],
        "splitting_hz": float(modes.splitting) / TWO_PI,
        "unstable": modes.unstable,
    }
    delta = p.omega_q - p.omega_r
    if abs(delta) > p.g:
        pull = dispersive_pull(p, delta)
        payload["pull_minus_hz"] = float(pull.pull_minus) / TWO_PI
        payload["pull_plus_hz"] = float(pull.pull_plus) / TWO_PI
        payload["pull_hz"] = float(pull.difference) / TWO_PI
    _write_json(args.out, payload)


COMMANDS = {
    "params": _cmd_params, "rbe": _cmd_rbe, "spectrum": _cmd_spectrum, "ac": _cmd_ac,
    "anticrossing": _cmd_sweep, "lambshift": _cmd_sweep, "qnd": _cmd_qnd, "oracle": _cmd_oracle,
}


def _one_line(exc: BaseException) -> str:
    return " ".join(str(exc).split()) or type(exc).__name__


def run(argv: Optional[List[str]] = None) -> int:
    """Parse ``argv``, dispatch, and map failures to exit codes."""
    try:
        args = _build_parser().parse_args(argv)
        COMMANDS[args.command](args, _config(args))
    except InputError as exc:
        print(f"cqed: error: {_one_line(exc)}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"cqed: numerical failure: {_one_line(exc)}", file=sys.stderr)
        return 2
    except OSError as exc:
        name = f" {exc.filename}" if exc.filename else ""
        print(f"cqed: error: {exc.strerror or exc}{name}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
