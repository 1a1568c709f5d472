"""Spectral estimation and the detuning / cavity-pull experiments."""

from .experiments import (
    ROUTES,
    CircuitSettings,
    QndResult,
    RbeFftSettings,
    SweepResult,
    SweepRow,
    anticrossing_sweep,
    circuit_peaks,
    default_grid,
    lamb_shift_curve,
    oracle_peaks,
    qnd_pull,
    rbe_fft_peaks,
    rbe_spectrum,
)
from .fft import amplitude_spectrum, periodogram, window_function
from .peaks import Peak, PeakSet, find_peaks

__all__ = [
    "ROUTES", "CircuitSettings", "QndResult", "RbeFftSettings", "SweepResult", "SweepRow",
    "anticrossing_sweep", "circuit_peaks", "default_grid", "lamb_shift_curve", "oracle_peaks",
    "qnd_pull", "rbe_fft_peaks", "rbe_spectrum", "amplitude_spectrum", "periodogram",
    "window_function", "Peak", "PeakSet", "find_peaks",
]
