"""Resonator-Bloch equations: time integration, linearization, invariants.

State vector ordering is ``[lambda1, lambda2, lambda3, v, i]`` with ``v`` and
``i`` the resonator voltage and current in units of their vacuum RMS values.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Literal, Optional, Sequence

import numpy as np

from . import _kernels
from .core import HBAR, PhysicalParams
from .errors import DivergenceError, InvalidParameterError, StepSizeError

CHANNELS = ("lambda1", "lambda2", "lambda3", "v", "i")
CSV_COLUMNS = {"lambda1": "lambda1", "lambda2": "lambda2", "lambda3": "lambda3",
               "v": "v_norm", "i": "i_norm"}

Mode = Literal["full", "linearized"]
Method = Literal["gauss4", "rk4"]
_METHODS = {"rk4": _kernels.RK4, "gauss4": _kernels.GAUSS4}

STABILITY_LIMIT = 0.5


@dataclass(frozen=True)
class RbeState:
    lambda1: float
    lambda2: float
    lambda3: float
    v: float
    i: float

    def as_array(self) -> np.ndarray:
        return np.array([self.lambda1, self.lambda2, self.lambda3, self.v, self.i], dtype=float)

    @classmethod
    def from_array(cls, values) -> "RbeState":
        return cls(*(float(x) for x in values))


GROUND = RbeState(0.0, 0.0, -1.0, 0.0, 0.0)
#: weak-excitation start used in place of an explicit probe drive
PROBE_SEED = RbeState(0.04, 0.0, -0.999, 0.0, 0.0)
#: inversion-mirrored seed for the excited qubit
EXCITED_SEED = RbeState(0.04, 0.0, 0.999, 0.0, 0.0)


def _param_vector(params: PhysicalParams, linear: bool, lambda3_0: float) -> np.ndarray:
    return np.array([
        params.omega_r,
        params.omega_q,
        params.g,
        params.gamma,
        0.0 if params.t1 is None else 1.0 / params.t1,
        0.0 if params.t2 is None else 1.0 / params.t2,
        1.0 if linear else 0.0,
        lambda3_0,
    ])


def rbe_derivative(state: RbeState, params: PhysicalParams) -> RbeState:
    """Right-hand side of the nonlinear resonator-Bloch equations."""
    l1, l2, l3, v, i = state.as_array()
    r1 = 0.0 if params.t1 is None else 1.0 / params.t1
    r2 = 0.0 if params.t2 is None else 1.0 / params.t2
    w_r, w_q, g = params.omega_r, params.omega_q, params.g
    return RbeState(
        -w_q * l2 - r2 * l1,
        w_q * l1 - g * l3 * v - r2 * l2,
        g * l2 * v - r1 * (l3 + 1.0),
        w_r * i - params.gamma * v,
        -w_r * v - g * l1,
    )


def bloch_norm(state) -> float:
    """Length of the coherence vector."""
    if isinstance(state, RbeState):
        return math.sqrt(state.lambda1**2 + state.lambda2**2 + state.lambda3**2)
    arr = np.asarray(state)
    return np.sqrt(np.sum(arr[..., :3] ** 2, axis=-1))


def conserved_energy(state, params: PhysicalParams):
    """Mean-field energy (J): resonator + interaction + two-level system.

    Accepts an :class:`RbeState` or an array whose last axis is the state.
    """
    arr = state.as_array() if isinstance(state, RbeState) else np.asarray(state, dtype=float)
    l1, l3, v, i = arr[..., 0], arr[..., 2], arr[..., 3], arr[..., 4]
    e = (HBAR * params.omega_r / 4.0) * (v * v + i * i) \
        + (HBAR * params.g / 2.0) * l1 * v \
        + (HBAR * params.omega_q / 2.0) * l3
    return float(e) if np.ndim(e) == 0 else e


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled trajectory.

    ``samples`` has one row per time point and one column per entry of
    ``channels``.
    """

    dt: float
    t0: float
    samples: np.ndarray
    channels: tuple = CHANNELS

    def __len__(self):
        return self.samples.shape[0]

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self))

    def channel(self, name: str) -> np.ndarray:
        try:
            return self.samples[:, self.channels.index(name)]
        except ValueError:
            raise InvalidParameterError(
                f"channel {name!r} not recorded (have {', '.join(self.channels)})"
            ) from None

    def state(self, k: int = -1) -> RbeState:
        if self.channels != CHANNELS:
            raise InvalidParameterError("full state needs all five channels")
        return RbeState.from_array(self.samples[k])

    def select(self, channels: Sequence[str]) -> "TimeSeries":
        cols = [self.channels.index(c) for c in channels]
        return TimeSeries(self.dt, self.t0, self.samples[:, cols].copy(), tuple(channels))

    def to_csv(self, path) -> None:
        header = ["t"] + [CSV_COLUMNS[c] for c in self.channels]
        t = self.times
        _atomic_write(path, lambda fh: _write_rows(fh, header, np.column_stack([t, self.samples])))

    @classmethod
    def from_csv(cls, path) -> "TimeSeries":
        path = Path(path)
        with path.open(newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            rows = [[float(x) for x in row] for row in reader if row]
        inverse = {v: k for k, v in CSV_COLUMNS.items()}
        if not header or header[0] != "t" or any(h not in inverse for h in header[1:]):
            raise InvalidParameterError(f"{path}: unexpected time-series header {header!r}")
        data = np.array(rows, dtype=float)
        if data.ndim != 2 or data.shape[0] < 2:
            raise InvalidParameterError(f"{path}: need at least two samples")
        t = data[:, 0]
        return cls(_recover_step(t), float(t[0]), data[:, 1:].copy(),
                   tuple(inverse[h] for h in header[1:]))


def _recover_step(t: np.ndarray) -> float:
    # t was written as t0 + k*dt; search a few ulps for the dt reproducing it
    k = np.arange(len(t))
    fallback = (t[-1] - t[0]) / (len(t) - 1)
    for base in (t[1] - t[0], fallback):
        for direction in (np.inf, -np.inf):
            cand = base
            for _ in range(8):
                if np.array_equal(t[0] + cand * k, t):
                    return float(cand)
                cand = np.nextafter(cand, direction)
    return float(fallback)


def _write_rows(fh, header, data):
    fh.write(",".join(header) + "\n")
    for row in data:
        fh.write(",".join(f"{x:.17g}" for x in row) + "\n")


def _atomic_write(path, writer):
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with tmp.open("w", newline="") as fh:
        writer(fh)
    tmp.replace(path)


def step_count(t_final: float, dt: float) -> int:
    # guard against t_final/dt landing a hair below an integer
    return int(math.floor(t_final / dt * (1.0 + 1e-12)))


def integrate(
    state0: RbeState,
    params: PhysicalParams,
    dt: float = 1e-12,
    t_final: float = 1e-6,
    mode: Mode = "full",
    lambda3_0: Optional[float] = None,
    decimation: int = 1,
    method: Method = "gauss4",
    channels: Sequence[str] = CHANNELS,
) -> TimeSeries:
    """Fixed-step fourth-order Runge-Kutta trajectory.

    Parameters
    ----------
    state0 : RbeState
        Initial state at ``t = 0``.
    params : PhysicalParams
    dt : float
        Step size in seconds; ``dt * max(omega_r, omega_q)`` must stay below 0.5.
    t_final : float
        End time in seconds.
    mode : {"full", "linearized"}
        ``"linearized"`` pins the inversion to ``lambda3_0`` (default
        ``params.lambda3_0``) and drops its equation of motion.
    decimation : int
        Record every ``decimation``-th step. The recorded sample rate must
        remain above twice the highest mode frequency.
    method : {"gauss4", "rk4"}
        ``"gauss4"`` is the two-stage Gauss-Legendre scheme, which keeps the
        Bloch norm and energy of lossless runs at round-off level;
        ``"rk4"`` is the classic explicit scheme.
    channels : sequence of str
        Subset of ``CHANNELS`` to keep.

    Returns
    -------
    TimeSeries
        ``step_count(t_final, dt) // decimation + 1`` samples.

    Raises
    ------
    StepSizeError
        Step too large for the stability guard.
    DivergenceError
        The state became non-finite (runaway growth).
    """
    if not dt > 0:
        raise StepSizeError(f"dt must be positive, got {dt!r}")
    if not t_final > 0:
        raise InvalidParameterError(f"t_final must be positive, got {t_final!r}")
    w_max = max(params.omega_r, params.omega_q)
    if dt * w_max >= STABILITY_LIMIT:
        raise StepSizeError(
            f"dt*omega_max = {dt * w_max:.3g} exceeds the stability limit {STABILITY_LIMIT}"
        )
    decimation = int(decimation)
    if decimation < 1:
        raise InvalidParameterError("decimation must be >= 1")
    f_max = (w_max + params.g) / (2 * math.pi)
    if 1.0 / (dt * decimation) <= 2.0 * f_max:
        raise InvalidParameterError(
            f"decimation {decimation} drops the sample rate below 2 x {f_max:.4g} Hz"
        )
    if mode not in ("full", "linearized"):
        raise InvalidParameterError(f"unknown mode {mode!r}")
    if method not in _METHODS:
        raise InvalidParameterError(f"unknown method {method!r}")
    channels = tuple(channels)
    cols = [CHANNELS.index(c) for c in channels]

    linear = mode == "linearized"
    lam0 = params.lambda3_0 if lambda3_0 is None else float(lambda3_0)
    p = _param_vector(params, linear, lam0)
    n_steps = step_count(t_final, dt)
    out = np.empty((n_steps // decimation + 1, 5))
    status = _kernels.integrate_fixed(
        state0.as_array(), p, float(dt), n_steps, decimation, _METHODS[method], out
    )
    if status >= 0:
        raise DivergenceError(
            f"state diverged at t = {status * dt:.6g} s ({mode} mode, lambda3_0 = {lam0:+g})",
            time=status * dt,
        )
    samples = out if cols == list(range(5)) else out[:, cols].copy()
    return TimeSeries(dt * decimation, 0.0, samples, channels)


@dataclass(frozen=True)
class LinearSystem:
    """Generator of the linearized dynamics over ``[lambda1, lambda2, v, i]``."""

    matrix: np.ndarray
    lambda3_0: float


def linearized_matrix(params: PhysicalParams, lambda3_0: Optional[float] = None) -> LinearSystem:
    lam = params.lambda3_0 if lambda3_0 is None else float(lambda3_0)
    if not -1.0 <= lam <= 1.0:
        raise InvalidParameterError(f"lambda3_0 must lie in [-1, 1], got {lam!r}")
    r2 = 0.0 if params.t2 is None else 1.0 / params.t2
    w_r, w_q, g = params.omega_r, params.omega_q, params.g
    m = np.array([
        [-r2, -w_q, 0.0, 0.0],
        [w_q, -r2, -g * lam, 0.0],
        [0.0, 0.0, -params.gamma, w_r],
        [-g, 0.0, -w_r, 0.0],
    ])
    return LinearSystem(m, lam)


def eigenfrequencies(system: LinearSystem) -> np.ndarray:
    """Eigenvalues ``s`` of the linear generator, ordered by ``Im(s)``.

    ``Im(s)`` is the mode angular frequency, ``Re(s)`` its amplitude decay
    (negative) or growth (positive) rate.
    """
    eig = np.linalg.eigvals(system.matrix)
    return eig[np.lexsort((eig.real, eig.imag))]
