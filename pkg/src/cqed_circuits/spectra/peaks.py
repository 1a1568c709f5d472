"""Peak detection, parabolic centre refinement and half-power linewidths."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List

import numpy as np
from scipy import signal

from ..spectrum import Spectrum

HALF_POWER = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class Peak:
    """One spectral line.

    ``fwhm`` is the full width at half *power*, i.e. where the magnitude
    falls to ``height / sqrt(2)``. For a ring-down ``exp(-a t)`` this equals
    ``a / pi`` Hz, the Lorentzian linewidth. ``edge`` marks maxima on the
    first or last grid point, which are reported without interpolation.
    """

    center: float
    height: float
    fwhm: float
    prominence: float = 0.0
    edge: bool = False


@dataclass(frozen=True)
class PeakSet:
    peaks: List[Peak] = field(default_factory=list)

    def __len__(self):
        return len(self.peaks)

    def __iter__(self):
        return iter(self.peaks)

    def __getitem__(self, k):
        return self.peaks[k]

    @property
    def centers(self) -> np.ndarray:
        return np.array([p.center for p in self.peaks])

    def strongest(self, n: int) -> "PeakSet":
        """The ``n`` most prominent peaks, re-sorted by centre."""
        top = sorted(self.peaks, key=lambda p: p.prominence, reverse=True)[:n]
        return PeakSet(sorted(top, key=lambda p: p.center))

    def nearest(self, frequency: float) -> Peak:
        return min(self.peaks, key=lambda p: abs(p.center - frequency))


def _parabolic(f, mag, k):
    a, b, c = mag[k - 1], mag[k], mag[k + 1]
    if min(a, b, c) > 0:
        a, b, c = math.log(a), math.log(b), math.log(c)
        log_scale = True
    else:
        log_scale = False
    denom = a - 2.0 * b + c
    p = 0.0 if denom == 0 else 0.5 * (a - c) / denom
    p = min(max(p, -0.5), 0.5)
    step = f[k + 1] - f[k] if p >= 0 else f[k] - f[k - 1]
    center = f[k] + p * step
    peak = b - 0.25 * (a - c) * p
    return center, (math.exp(peak) if log_scale else peak)


def _crossing(f, mag, k, level, direction):
    n = mag.size
    j = k
    while 0 <= j + direction < n and mag[j + direction] >= level:
        j += direction
    nxt = j + direction
    if not 0 <= nxt < n:
        return None
    # linear interpolation between j (above) and nxt (below)
    m0, m1 = mag[j], mag[nxt]
    t = 0.0 if m0 == m1 else (m0 - level) / (m0 - m1)
    return f[j] + t * (f[nxt] - f[j])


def _fwhm(f, mag, k, center, height):
    level = height * HALF_POWER
    lo = _crossing(f, mag, k, level, -1)
    hi = _crossing(f, mag, k, level, +1)
    if lo is not None and hi is not None:
        width = hi - lo
    elif lo is not None:
        width = 2.0 * (center - lo)
    elif hi is not None:
        width = 2.0 * (hi - center)
    else:
        width = f[-1] - f[0]
    if not width > 0:
        width = f[min(k + 1, f.size - 1)] - f[max(k - 1, 0)]
    return width


def _edge_prominence(mag, k, direction):
    # drop from the edge maximum to the lowest point before higher ground
    n = mag.size
    j = k
    lowest = mag[k]
    while 0 <= j + direction < n and mag[j + direction] <= mag[k]:
        j += direction
        lowest = min(lowest, mag[j])
    return mag[k] - lowest


def find_peaks(spec: Spectrum, min_prominence: float = 0.01) -> PeakSet:
    """Local maxima whose prominence exceeds ``min_prominence * max(|X|)``.

    Interior peak centres are refined by a three-point parabola through the
    log-magnitudes around the maximum bin. A maximum on the first or last
    point counts as an (edge) peak only when the slope flattens toward the
    boundary, so monotone ramps yield no peaks.
    """
    f = spec.frequencies
    mag = spec.magnitude
    top = float(mag.max()) if mag.size else 0.0
    if mag.size < 3 or top <= 0:
        return PeakSet([])
    threshold = min_prominence * top
    idx, props = signal.find_peaks(mag, prominence=threshold if threshold > 0 else None)
    peaks = []
    for k, prom in zip(idx, props.get("prominences", np.zeros(len(idx)))):
        center, height = _parabolic(f, mag, k)
        peaks.append(Peak(center, height, _fwhm(f, mag, k, center, height), float(prom)))
    for k, direction in ((0, 1), (mag.size - 1, -1)):
        # a line top flattens toward its maximum; a ramp does not
        near = mag[k] - mag[k + direction]
        far = mag[k + direction] - mag[k + 2 * direction]
        if 0 < near < far * (1.0 - 1e-9):
            prom = _edge_prominence(mag, k, direction)
            if prom >= threshold and prom > 0:
                peaks.append(Peak(float(f[k]), float(mag[k]),
                                  _fwhm(f, mag, k, f[k], mag[k]), float(prom), edge=True))
    return PeakSet(sorted(peaks, key=lambda p: p.center))
