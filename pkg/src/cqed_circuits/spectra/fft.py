"""Windowed, zero-padded amplitude spectra of uniformly sampled trajectories."""

from __future__ import annotations

from typing import Literal

import numpy as np

from ..errors import InvalidParameterError, SeriesTooShortError
from ..rbe import TimeSeries
from ..spectrum import Spectrum

Window = Literal["rectangular", "hann"]

MIN_SAMPLES = 16


def window_function(kind: Window, n: int) -> np.ndarray:
    if kind == "rectangular":
        return np.ones(n)
    if kind == "hann":
        # periodic form; exact zero only at the first sample
        return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)
    raise InvalidParameterError(f"unknown window {kind!r}")


def periodogram(
    series: TimeSeries,
    channel: str = "v",
    window: Window = "hann",
    pad_factor: int = 4,
) -> Spectrum:
    """Amplitude spectrum of one channel of ``series``.

    The transform is zero-padded to ``pad_factor * N`` points, giving a bin
    spacing of ``1 / (pad_factor * N * dt)``. Magnitudes are scaled by
    ``2 / sum(window)`` so a unit sinusoid sitting on a bin reads ~1.
    """
    x = np.asarray(series.channel(channel), dtype=float)
    return amplitude_spectrum(x, series.dt, window, pad_factor)


def amplitude_spectrum(x: np.ndarray, dt: float, window: Window = "hann", pad_factor: int = 4) -> Spectrum:
    n = x.size
    if n < MIN_SAMPLES:
        raise SeriesTooShortError(f"need at least {MIN_SAMPLES} samples, got {n}")
    pad_factor = int(pad_factor)
    if pad_factor < 1:
        raise InvalidParameterError("pad_factor must be >= 1")
    w = window_function(window, n)
    nfft = pad_factor * n
    spec = np.fft.rfft(x * w, n=nfft)
    mag = np.abs(spec) * (2.0 / w.sum())
    return Spectrum(np.fft.rfftfreq(nfft, dt), mag, np.angle(spec))
