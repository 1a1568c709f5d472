"""Scenario configuration in laboratory units.

A TOML file holds three flat tables::

    [physical]
    f_r_ghz = 6.44
    delta_mhz = 0.0          # or f_q_ghz, exactly one of the two
    g_mhz = 266.0
    gamma_mhz = 1.6
    t2_us = 1.0
    # t1_us = 20.0           # absent t1_us / t2_us: no relaxation / dephasing
    z0_ohm = 50.0
    lambda3_0 = -1.0

    [simulation]
    dt_ps = 1.0
    t_final_us = 4.0
    window = "hann"
    pad_factor = 4
    method = "gauss4"

    [output]
    dir = "out"

Frequencies are ordinary (not angular) in the unit named by the key; the
conversion to rad/s happens only in :meth:`ScenarioConfig.physical_params`.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Mapping, Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .core import TWO_PI, PhysicalParams
from .errors import InvalidParameterError


@dataclass(frozen=True)
class PhysicalSection:
    f_r_ghz: float = 6.44
    f_q_ghz: Optional[float] = None
    delta_mhz: Optional[float] = None
    g_mhz: float = 266.0
    gamma_mhz: float = 1.6
    t1_us: Optional[float] = None
    t2_us: Optional[float] = None
    z0_ohm: float = 50.0
    lambda3_0: float = -1.0


@dataclass(frozen=True)
class SimulationSection:
    dt_ps: float = 1.0
    t_final_us: float = 4.0
    window: str = "hann"
    pad_factor: int = 4
    decimation: Optional[int] = None
    method: str = "gauss4"
    mode: str = "full"
    channel: str = "v"
    fmin_ghz: Optional[float] = None
    fmax_ghz: Optional[float] = None
    points: int = 2001


@dataclass(frozen=True)
class OutputSection:
    dir: str = "."


_CHOICES = {
    "window": ("rectangular", "hann"),
    "method": ("gauss4", "rk4"),
    "mode": ("full", "linearized"),
    "channel": ("lambda1", "lambda2", "lambda3", "v", "i"),
}


def _fail(name: str, message: str):
    raise InvalidParameterError(f"config field {name}: {message}")


def _check_number(name: str, value: Any, *, positive=False, integer=False, optional=False):
    if value is None:
        if optional:
            return
        _fail(name, "is required")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(name, f"expected a number, got {value!r}")
    if integer and not isinstance(value, int):
        _fail(name, f"expected an integer, got {value!r}")
    if not math.isfinite(value):
        _fail(name, f"must be finite, got {value!r}")
    if positive and not value > 0:
        _fail(name, f"must be positive, got {value!r}")


@dataclass(frozen=True)
class ScenarioConfig:
    physical: PhysicalSection = field(default_factory=PhysicalSection)
    simulation: SimulationSection = field(default_factory=SimulationSection)
    output: OutputSection = field(default_factory=OutputSection)

    def __post_init__(self):
        ph, sim = self.physical, self.simulation
        for name in ("f_r_ghz", "g_mhz", "z0_ohm"):
            _check_number(f"physical.{name}", getattr(ph, name), positive=True)
        _check_number("physical.gamma_mhz", ph.gamma_mhz)
        if ph.gamma_mhz < 0:
            _fail("physical.gamma_mhz", f"must be >= 0, got {ph.gamma_mhz!r}")
        for name in ("f_q_ghz", "t1_us", "t2_us"):
            _check_number(f"physical.{name}", getattr(ph, name), positive=True, optional=True)
        _check_number("physical.delta_mhz", ph.delta_mhz, optional=True)
        _check_number("physical.lambda3_0", ph.lambda3_0)
        if not -1.0 <= ph.lambda3_0 <= 1.0:
            _fail("physical.lambda3_0", f"must lie in [-1, 1], got {ph.lambda3_0!r}")
        if (ph.f_q_ghz is None) == (ph.delta_mhz is None):
            _fail("physical.f_q_ghz/delta_mhz", "exactly one of the two must be given")
        if ph.delta_mhz is not None and ph.f_r_ghz * 1e3 + ph.delta_mhz <= 0:
            _fail("physical.delta_mhz", "qubit frequency f_r + delta must be positive")

        for name in ("dt_ps", "t_final_us"):
            _check_number(f"simulation.{name}", getattr(sim, name), positive=True)
        for name in ("pad_factor", "points"):
            _check_number(f"simulation.{name}", getattr(sim, name), positive=True, integer=True)
        _check_number("simulation.decimation", sim.decimation, positive=True, integer=True, optional=True)
        if sim.points < 2:
            _fail("simulation.points", "needs at least 2 points")
        for name in ("fmin_ghz", "fmax_ghz"):
            _check_number(f"simulation.{name}", getattr(sim, name), positive=True, optional=True)
        if None not in (sim.fmin_ghz, sim.fmax_ghz) and not sim.fmin_ghz < sim.fmax_ghz:
            _fail("simulation.fmin_ghz", "must be below fmax_ghz")
        for name, allowed in _CHOICES.items():
            value = getattr(sim, name)
            if value not in allowed:
                _fail(f"simulation.{name}", f"expected one of {', '.join(allowed)}, got {value!r}")
        if not isinstance(self.output.dir, str) or not self.output.dir:
            _fail("output.dir", "expected a non-empty string")

    @property
    def f_q_hz(self) -> float:
        ph = self.physical
        if ph.f_q_ghz is not None:
            return ph.f_q_ghz * 1e9
        return ph.f_r_ghz * 1e9 + ph.delta_mhz * 1e6

    def with_delta(self, delta_mhz: float) -> "ScenarioConfig":
        return replace(self, physical=replace(self.physical, f_q_ghz=None, delta_mhz=delta_mhz))

    def with_lambda3(self, lambda3_0: float) -> "ScenarioConfig":
        return replace(self, physical=replace(self.physical, lambda3_0=lambda3_0))

    def physical_params(self) -> PhysicalParams:
        ph = self.physical
        return PhysicalParams(
            omega_r=TWO_PI * ph.f_r_ghz * 1e9,
            omega_q=TWO_PI * self.f_q_hz,
            g=TWO_PI * ph.g_mhz * 1e6,
            gamma=TWO_PI * ph.gamma_mhz * 1e6,
            t1=None if ph.t1_us is None else ph.t1_us * 1e-6,
            t2=None if ph.t2_us is None else ph.t2_us * 1e-6,
            z0=ph.z0_ohm,
            lambda3_0=ph.lambda3_0,
        )

    @property
    def dt(self) -> float:
        return self.simulation.dt_ps * 1e-12

    @property
    def t_final(self) -> float:
        return self.simulation.t_final_us * 1e-6


_INTEGER_KEYS = {"pad_factor", "points", "decimation"}
_SECTIONS = {"physical": PhysicalSection, "simulation": SimulationSection, "output": OutputSection}


def _section(name: str, cls, table: Any):
    if not isinstance(table, Mapping):
        _fail(name, "expected a table")
    known = {f.name for f in fields(cls)}
    for key in table:
        if key not in known:
            _fail(f"{name}.{key}", "unknown key")
    values = dict(table)
    for key, value in values.items():
        # TOML integers are valid floats
        if key not in _INTEGER_KEYS and isinstance(value, int) and not isinstance(value, bool):
            values[key] = float(value)
    return cls(**values)


def config_from_mapping(data: Mapping[str, Any]) -> ScenarioConfig:
    """Build and validate a config from parsed TOML tables."""
    for key in data:
        if key not in _SECTIONS:
            _fail(key, "unknown table")
    sections = {name: _section(name, cls, data.get(name, {})) for name, cls in _SECTIONS.items()}
    return ScenarioConfig(**sections)


def load_config(path) -> ScenarioConfig:
    """Read a TOML scenario file. Raises ``InvalidParameterError`` on any defect."""
    path = Path(path)
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise InvalidParameterError(f"config file not found: {path}") from None
    except OSError as exc:
        raise InvalidParameterError(f"cannot read config file {path}: {exc.strerror}") from None
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise InvalidParameterError(f"{path}: invalid TOML ({exc})") from None
    return config_from_mapping(data)


def default_config() -> ScenarioConfig:
    """Device parameters at zero detuning."""
    return ScenarioConfig(physical=PhysicalSection(delta_mhz=0.0, t2_us=1.0))
