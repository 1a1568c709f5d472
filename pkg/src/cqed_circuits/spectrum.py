"""Magnitude/phase spectra shared by the FFT and AC-sweep routes."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidParameterError

CSV_HEADER = ("freq_hz", "magnitude", "phase_rad")


@dataclass(frozen=True)
class Spectrum:
    frequencies: np.ndarray  # Hz, strictly increasing
    magnitude: np.ndarray
    phase: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.frequencies, dtype=float)
        m = np.asarray(self.magnitude, dtype=float)
        ph = np.asarray(self.phase, dtype=float)
        if not (f.shape == m.shape == ph.shape) or f.ndim != 1 or f.size == 0:
            raise InvalidParameterError("spectrum arrays must be equal-length, non-empty 1-D")
        if f.size > 1 and not np.all(np.diff(f) > 0):
            raise InvalidParameterError("spectrum frequency grid must be strictly increasing")
        if np.any(m < 0):
            raise InvalidParameterError("spectrum magnitude must be non-negative")
        object.__setattr__(self, "frequencies", f)
        object.__setattr__(self, "magnitude", m)
        object.__setattr__(self, "phase", ph)

    def __len__(self):
        return self.frequencies.size

    @property
    def step(self) -> float:
        """Mean grid spacing (Hz)."""
        f = self.frequencies
        return float((f[-1] - f[0]) / (f.size - 1)) if f.size > 1 else 0.0

    def band(self, fmin: float, fmax: float) -> "Spectrum":
        sel = (self.frequencies >= fmin) & (self.frequencies <= fmax)
        return Spectrum(self.frequencies[sel], self.magnitude[sel], self.phase[sel])

    def to_csv(self, path) -> None:
        path = Path(path)
        tmp = path.with_name(path.name + ".tmp")
        with tmp.open("w", newline="") as fh:
            fh.write(",".join(CSV_HEADER) + "\n")
            for row in zip(self.frequencies, self.magnitude, self.phase):
                fh.write(",".join(f"{x:.17g}" for x in row) + "\n")
        tmp.replace(path)

    @classmethod
    def from_csv(cls, path) -> "Spectrum":
        path = Path(path)
        with path.open(newline="") as fh:
            reader = csv.reader(fh)
            header = tuple(next(reader))
            if header != CSV_HEADER:
                raise InvalidParameterError(f"{path}: unexpected spectrum header {header!r}")
            data = np.array([[float(x) for x in row] for row in reader if row], dtype=float)
        return cls(data[:, 0], data[:, 1], data[:, 2])
