"""Detuning sweeps and state-dependent cavity pull.

Three independent routes produce the dressed peak frequencies:

``rbe-fft``     integrate the nonlinear resonator-Bloch equations from a weak
                seed and Fourier-transform the resonator voltage;
``circuit-ac``  AC-sweep the linear electric equivalent circuit;
``oracle``      closed-form roots of the dressed-mode quartic.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, List, Optional, Sequence

import numpy as np

from ..accircuit import PORT, DriveAttachment, build_electric_model, transmission_sweep
from ..core import TWO_PI, PhysicalParams, dressed_modes, table1
from ..errors import ExtractionError, InvalidParameterError
from ..rbe import EXCITED_SEED, PROBE_SEED, RbeState, integrate
from ..spectrum import Spectrum
from .fft import Window, periodogram
from .peaks import Peak, PeakSet, find_peaks

ROUTES = ("rbe-fft", "circuit-ac", "oracle")


@dataclass(frozen=True)
class RbeFftSettings:
    dt: float = 1e-12
    t_final: float = 4e-6
    window: Window = "hann"
    pad_factor: int = 4
    decimation: Optional[int] = None  # None: keep >= 4 samples per fastest period
    method: str = "gauss4"
    min_prominence: float = 1e-3

    def decimation_for(self, params: PhysicalParams) -> int:
        if self.decimation is not None:
            return self.decimation
        f_max = (max(params.omega_r, params.omega_q) + params.g) / TWO_PI
        return max(1, int(1.0 / (self.dt * 4.0 * f_max)))


@dataclass(frozen=True)
class CircuitSettings:
    drive: DriveAttachment = field(default_factory=DriveAttachment)
    step_hz: float = 0.5e6
    refine_points: int = 401
    min_prominence: float = 1e-3


def default_grid(params: PhysicalParams, points: int = 2001) -> np.ndarray:
    """Linear grid centred on the resonator, span ``max(4 g, 20 gamma)``."""
    span = max(4.0 * params.g, 20.0 * params.gamma) / TWO_PI
    f_r = params.omega_r / TWO_PI
    return np.linspace(f_r - span / 2, f_r + span / 2, points)


def _mode_band(params: PhysicalParams):
    lo = min(params.omega_r, params.omega_q) - 2.0 * params.g - 20.0 * params.gamma
    hi = max(params.omega_r, params.omega_q) + 2.0 * params.g + 20.0 * params.gamma
    return max(lo, 0.0) / TWO_PI, hi / TWO_PI


def rbe_spectrum(params: PhysicalParams, settings: RbeFftSettings = RbeFftSettings(),
                 seed: RbeState = PROBE_SEED, channel: str = "v") -> Spectrum:
    series = integrate(seed, params, settings.dt, settings.t_final, mode="full",
                       decimation=settings.decimation_for(params), method=settings.method,
                       channels=(channel,))
    return periodogram(series, channel, settings.window, settings.pad_factor)


def rbe_fft_peaks(params: PhysicalParams, settings: RbeFftSettings = RbeFftSettings()) -> PeakSet:
    spec = rbe_spectrum(params, settings).band(*_mode_band(params))
    return find_peaks(spec, settings.min_prominence).strongest(2)


def circuit_peaks(params: PhysicalParams, settings: CircuitSettings = CircuitSettings()) -> PeakSet:
    """Two strongest transmission peaks of the electric model, grid-refined."""
    net = build_electric_model(table1(params, "electric"), settings.drive)
    lo, hi = _mode_band(params)
    grid = np.arange(lo, hi + settings.step_hz, settings.step_hz)
    coarse = find_peaks(transmission_sweep(net, PORT, grid), settings.min_prominence).strongest(2)
    refined = []
    for peak in coarse:
        half = max(4.0 * peak.fwhm, 4.0 * settings.step_hz)
        fine = np.linspace(peak.center - half, peak.center + half, settings.refine_points)
        found = find_peaks(transmission_sweep(net, PORT, fine), settings.min_prominence)
        refined.append(found.nearest(peak.center) if len(found) else peak)
    return PeakSet(sorted(refined, key=lambda p: p.center))


def oracle_peaks(params: PhysicalParams) -> PeakSet:
    modes = dressed_modes(params)
    return PeakSet([Peak(float(w / TWO_PI), 1.0, 0.0) for w in modes.frequencies])


def _route_fn(route: str, rbe: RbeFftSettings, circuit: CircuitSettings) -> Callable:
    if route == "rbe-fft":
        return lambda p: rbe_fft_peaks(p, rbe)
    if route == "circuit-ac":
        return lambda p: circuit_peaks(p, circuit)
    if route == "oracle":
        return oracle_peaks
    raise InvalidParameterError(f"unknown route {route!r} (choose from {', '.join(ROUTES)})")


def worker_count() -> int:
    """Sweep parallelism from ``CQED_THREADS`` (0 or unset: sequential)."""
    raw = os.environ.get("CQED_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise InvalidParameterError(f"CQED_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise InvalidParameterError("CQED_THREADS must be >= 0")
    return n


def _map(fn, items):
    n = worker_count()
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class SweepRow:
    delta: float  # Hz
    peak_low: Optional[float]
    peak_high: Optional[float]
    lamb_shift: Optional[float]
    route: str


@dataclass
class SweepResult:
    rows: List[SweepRow]

    CSV_HEADER = ("delta_hz", "peak_low_hz", "peak_high_hz", "lamb_shift_hz", "route")

    def column(self, name: str) -> np.ndarray:
        return np.array([np.nan if getattr(r, name) is None else getattr(r, name) for r in self.rows])

    def to_csv(self, path) -> None:
        def fmt(x):
            return "" if x is None else f"{x:.17g}"

        path = Path(path)
        tmp = path.with_name(path.name + ".tmp")
        with tmp.open("w", newline="") as fh:
            fh.write(",".join(self.CSV_HEADER) + "\n")
            for r in self.rows:
                fh.write(",".join([fmt(r.delta), fmt(r.peak_low), fmt(r.peak_high),
                                   fmt(r.lamb_shift), r.route]) + "\n")
        tmp.replace(path)


def _qubit_side(delta_hz: float, low, high):
    return high if delta_hz >= 0 else low


def anticrossing_sweep(
    params: PhysicalParams,
    deltas: Sequence[float],
    route: str = "oracle",
    rbe: RbeFftSettings = RbeFftSettings(),
    circuit: CircuitSettings = CircuitSettings(),
) -> SweepResult:
    """Dressed peak frequencies versus detuning (Hz) at fixed resonator.

    The qubit is swept via ``omega_q = omega_r + 2 pi delta`` with the
    ground-state inversion. When only one peak is resolved it is assigned to
    the branch it continues from the previous detuning.
    """
    fn = _route_fn(route, rbe, circuit)
    f_r = params.omega_r / TWO_PI
    points = [params.with_detuning(TWO_PI * d).replace(lambda3_0=-1.0) for d in deltas]
    found = _map(fn, points)
    rows = []
    prev = None
    for d, p, peaks in zip(deltas, points, found):
        centers = list(peaks.centers)
        low = high = None
        if len(centers) >= 2:
            low, high = centers[0], centers[-1]
        elif len(centers) == 1:
            ref = prev if prev is not None else tuple(dressed_modes(p).frequencies / TWO_PI)
            c = centers[0]
            if abs(c - ref[0]) <= abs(c - ref[1]):
                low = c
            else:
                high = c
        if low is not None and high is not None:
            prev = (low, high)
        qubit = _qubit_side(d, low, high)
        lamb = None if qubit is None else qubit - (f_r + d)
        rows.append(SweepRow(float(d), low, high, lamb, route))
    return SweepResult(rows)


def lamb_shift_curve(
    params: PhysicalParams,
    deltas: Sequence[float],
    route: str = "oracle",
    rbe: RbeFftSettings = RbeFftSettings(),
    circuit: CircuitSettings = CircuitSettings(),
) -> SweepResult:
    """Qubit-like peak minus the bare qubit frequency, per detuning (Hz).

    Raises
    ------
    ExtractionError
        If the two peaks are not resolved at some detuning.
    """
    result = anticrossing_sweep(params, deltas, route, rbe, circuit)
    for row in result.rows:
        if row.peak_low is None or row.peak_high is None:
            raise ExtractionError(f"qubit peak not resolved at delta = {row.delta:.6g} Hz")
    return result


@dataclass
class QndResult:
    spectrum_minus: Spectrum
    spectrum_plus: Spectrum
    peak_minus: Peak
    peak_plus: Peak

    @property
    def pull(self) -> float:
        """Excited minus ground cavity-peak frequency (Hz)."""
        return self.peak_plus.center - self.peak_minus.center

    @property
    def linewidths(self):
        return self.peak_minus.fwhm, self.peak_plus.fwhm

    def summary(self) -> dict:
        return {"pull_hz": self.pull, "fwhm_minus_hz": self.peak_minus.fwhm,
                "fwhm_plus_hz": self.peak_plus.fwhm}

    def write(self, stem) -> None:
        """``<stem>_minus.csv``, ``<stem>_plus.csv`` and ``<stem>.json``."""
        stem = Path(stem)
        self.spectrum_minus.to_csv(stem.with_name(stem.name + "_minus.csv"))
        self.spectrum_plus.to_csv(stem.with_name(stem.name + "_plus.csv"))
        out = stem.with_name(stem.name + ".json")
        tmp = out.with_name(out.name + ".tmp")
        tmp.write_text(json.dumps(self.summary(), indent=2, sort_keys=True) + "\n")
        tmp.replace(out)


QND_SETTINGS = RbeFftSettings(window="rectangular")


def _cavity_peak(spec: Spectrum, f_r: float, delta_hz: float, min_prominence: float) -> Peak:
    half = 0.5 * abs(delta_hz)
    peaks = find_peaks(spec.band(f_r - half, f_r + half), min_prominence)
    if not len(peaks):
        raise ExtractionError(f"no cavity peak within {half:.4g} Hz of {f_r:.6g} Hz")
    return peaks.strongest(1)[0]


def qnd_pull(
    params: PhysicalParams,
    delta: float,
    t1: Optional[float],
    sim_window: float = 4e-6,
    settings: RbeFftSettings = QND_SETTINGS,
) -> QndResult:
    """Cavity spectra for the qubit prepared near ground and near excited.

    Runs the full equations twice from the weak seed with inversion -0.999
    and +0.999 and extracts the cavity-like peak of each resonator-voltage
    spectrum. ``delta`` is in Hz and should be well outside the coupling.
    The default window is rectangular: the signals are ring-downs starting
    at t = 0 and a tapered window would distort their linewidths.
    """
    if abs(TWO_PI * delta) <= params.g:
        raise InvalidParameterError("qnd_pull needs |2 pi delta| > g (dispersive regime)")
    p = params.with_detuning(TWO_PI * delta).replace(t1=t1)
    run = RbeFftSettings(dt=settings.dt, t_final=sim_window, window=settings.window,
                         pad_factor=settings.pad_factor, decimation=settings.decimation,
                         method=settings.method, min_prominence=settings.min_prominence)
    f_r = params.omega_r / TWO_PI
    spectra = _map(lambda seed: rbe_spectrum(p, run, seed), [PROBE_SEED, EXCITED_SEED])
    peaks = [_cavity_peak(s, f_r, delta, settings.min_prominence) for s in spectra]
    return QndResult(spectra[0], spectra[1], peaks[0], peaks[1])
