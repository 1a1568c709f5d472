"""Physical parameters, lumped element values and the dressed-mode oracle.

All frequencies are angular (rad/s). The detuning convention is
``delta = omega_q - omega_r``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Literal, Optional

import numpy as np

from .errors import DegenerateInversionError, InstabilityError, InvalidParameterError

HBAR = 1.054571817e-34  # J s

TWO_PI = 2.0 * math.pi

Kind = Literal["electric", "magnetic"]


def _positive(name, value):
    if not (value > 0 and math.isfinite(value)):
        raise InvalidParameterError(f"{name} must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class PhysicalParams:
    """Description of a resonator coupled to a two-level system.

    ``t1``/``t2`` of ``None`` mean no relaxation/dephasing (infinite times).
    """

    omega_r: float
    omega_q: float
    g: float
    gamma: float = 0.0
    t1: Optional[float] = None
    t2: Optional[float] = None
    z0: float = 50.0
    lambda3_0: float = -1.0

    def __post_init__(self):
        _positive("omega_r", self.omega_r)
        _positive("omega_q", self.omega_q)
        _positive("z0", self.z0)
        for name in ("g", "gamma"):
            value = getattr(self, name)
            if not (value >= 0 and math.isfinite(value)):
                raise InvalidParameterError(f"{name} must be >= 0, got {value!r}")
        for name in ("t1", "t2"):
            value = getattr(self, name)
            if value is not None:
                _positive(name, value)
        if not -1.0 <= self.lambda3_0 <= 1.0:
            raise InvalidParameterError(
                f"lambda3_0 must lie in [-1, 1], got {self.lambda3_0!r}"
            )

    @property
    def delta(self) -> float:
        return self.omega_q - self.omega_r

    def with_detuning(self, delta: float) -> "PhysicalParams":
        """Copy with ``omega_q = omega_r + delta`` (resonator held fixed)."""
        return replace(self, omega_q=self.omega_r + delta)

    def replace(self, **changes) -> "PhysicalParams":
        return replace(self, **changes)


def transmon_device(delta_hz: float = 0.0, **overrides) -> PhysicalParams:
    """Parameters of the 6.44 GHz resonator / transmon device.

    f_r = 6.44 GHz, Z0 = 50 Ohm, g/2pi = 266 MHz, gamma/2pi = 1.6 MHz,
    T2 = 1 us, T1 infinite, ground-state inversion.
    """
    omega_r = TWO_PI * 6.44e9
    values = dict(
        omega_r=omega_r,
        omega_q=omega_r + TWO_PI * delta_hz,
        g=TWO_PI * 266e6,
        gamma=TWO_PI * 1.6e6,
        t1=None,
        t2=1e-6,
        z0=50.0,
        lambda3_0=-1.0,
    )
    values.update(overrides)
    return PhysicalParams(**values)


@dataclass(frozen=True)
class ResonatorLC:
    c_r: float
    l_r: float
    v_rms: Optional[float] = None
    i_rms: Optional[float] = None


def derive_lc(z0: float, omega_r: float) -> ResonatorLC:
    """Lumped LC values of an ideal resonator with impedance ``z0``."""
    _positive("z0", z0)
    _positive("omega_r", omega_r)
    return ResonatorLC(c_r=1.0 / (z0 * omega_r), l_r=z0 / omega_r)


def derive_rms(lc: ResonatorLC, omega_r: float) -> ResonatorLC:
    """Fill in the vacuum (zero-point) RMS voltage and current."""
    _positive("omega_r", omega_r)
    v_rms = math.sqrt(HBAR * omega_r / (2.0 * lc.c_r))
    i_rms = math.sqrt(HBAR * omega_r / (2.0 * lc.l_r))
    return replace(lc, v_rms=v_rms, i_rms=i_rms)


def loaded_q(r_load: float, c1: float, omega_r: float) -> float:
    """Loaded quality factor estimate ``1 / (r_load * c1 * omega_r)``."""
    _positive("r_load", r_load)
    _positive("c1", c1)
    _positive("omega_r", omega_r)
    return 1.0 / (r_load * c1 * omega_r)


@dataclass(frozen=True)
class CircuitParams:
    """Element values of the linear equivalent circuit.

    Resistors set to ``None`` are absent from the network: a missing shunt
    resistor is an open circuit, a missing series resistor a short.
    ``coupling`` is C_rq (F) for the electric kind and L_rq (H) for the
    magnetic kind.
    """

    kind: Kind
    rq1: Optional[float]
    rq2: Optional[float]
    lq: float
    cq: float
    rr: Optional[float]
    lr: float
    cr: float
    coupling: float


def table1(params: PhysicalParams, kind: Kind = "electric") -> CircuitParams:
    """Equivalent-circuit element values for frozen inversion ``lambda3_0``.

    Raises
    ------
    DegenerateInversionError
        If ``params.lambda3_0 == 0``; every element diverges there.
    """
    w_r, w_q, g, z0 = params.omega_r, params.omega_q, params.g, params.z0
    m = -params.lambda3_0
    if m == 0.0:
        raise DegenerateInversionError("lambda3_0 = 0 makes the circuit elements diverge")
    t2 = params.t2
    gamma = params.gamma

    if kind == "electric":
        crq = g / (w_r * w_q * z0)
        return CircuitParams(
            kind="electric",
            rq1=None if t2 is None else w_r * t2 * m * z0,
            rq2=None if t2 is None else m * z0 * w_r / (t2 * w_q**2),
            lq=m * z0 * w_r / w_q**2,
            cq=1.0 / (z0 * w_r * m) - crq,
            rr=None if gamma == 0 else z0 * w_q / gamma,
            lr=w_q * z0 / w_r**2,
            cr=1.0 / (z0 * w_q) - crq,
            coupling=crq,
        )
    if kind == "magnetic":
        lrq = g * z0 / (w_r * w_q)
        return CircuitParams(
            kind="magnetic",
            rq1=None if t2 is None else w_q**2 * t2 * z0 / (m * w_r),
            rq2=None if t2 is None else z0 / (w_r * t2 * m),
            lq=z0 / (w_r * m) - lrq,
            cq=m * w_r / (z0 * w_q**2),
            rr=None if gamma == 0 else z0 * gamma / w_q,
            lr=z0 / w_q - lrq,
            cr=w_q / (z0 * w_r**2),
            coupling=lrq,
        )
    raise InvalidParameterError(f"unknown interaction kind {kind!r}")


@dataclass(frozen=True)
class DressedModes:
    """Roots of the lossless dressed-mode quartic.

    ``roots`` holds all four angular frequencies sorted by ``|Re|`` (then by
    ``Re``), so the order is ``-w_low, +w_low, -w_high, +w_high`` for a
    stable system. ``unstable`` is set when any root has a non-zero
    imaginary part.
    """

    roots: np.ndarray
    unstable: bool = False

    @property
    def positive(self) -> np.ndarray:
        """The two roots with positive real part, ascending."""
        r = self.roots[self.roots.real > 0]
        if len(r) < 2:
            # purely imaginary pair(s): keep the upper-half-plane members
            r = np.concatenate([r, self.roots[(self.roots.real == 0) & (self.roots.imag > 0)]])
        return np.sort_complex(r)[:2]

    @property
    def frequencies(self) -> np.ndarray:
        """Real parts of :attr:`positive` (rad/s)."""
        return self.positive.real

    @property
    def splitting(self) -> float:
        lo, hi = self.frequencies
        return hi - lo


def quartic_residual(params: PhysicalParams, omega) -> np.ndarray:
    """``(w^2 - wq^2)(w^2 - wr^2) - (-lambda3_0) g^2 wr wq`` at ``omega``."""
    w2 = np.asarray(omega) ** 2
    return (w2 - params.omega_q**2) * (w2 - params.omega_r**2) - (
        -params.lambda3_0 * params.g**2 * params.omega_r * params.omega_q
    )


def dressed_modes(params: PhysicalParams) -> DressedModes:
    """Normal-mode frequencies of the linearized, lossless coupled system.

    Solves ``(w^2 - wq^2)(w^2 - wr^2) = (-lambda3_0) g^2 wr wq`` as a
    quadratic in ``x = w^2``. The larger-magnitude root of the quadratic is
    taken from the formula and the other from Vieta's product, which avoids
    cancellation when the coupling is weak.
    """
    a = params.omega_q**2
    b = params.omega_r**2
    c = -params.lambda3_0 * params.g**2 * params.omega_r * params.omega_q
    if c == 0.0:
        w = np.array(sorted([params.omega_q, params.omega_r]), dtype=complex)
    else:
        s = a + b
        disc = (a - b) ** 2 + 4.0 * c
        sq = np.sqrt(complex(disc))
        x1 = 0.5 * (s + sq)
        x2 = (a * b - c) / x1
        w = np.sqrt(np.array([x2, x1], dtype=complex))
    roots = np.concatenate([-w, w])
    order = np.lexsort((roots.real, np.abs(roots.real)))
    roots = roots[order]
    unstable = bool(np.any(np.abs(roots.imag) > 0.0))
    return DressedModes(roots=roots, unstable=unstable)


def cavity_branch(params: PhysicalParams, modes: Optional[DressedModes] = None) -> float:
    """Frequency of the resonator-like dressed mode.

    The resonator-like branch is the lower one when the qubit sits above the
    resonator and the upper one otherwise.
    """
    modes = modes or dressed_modes(params)
    lo, hi = modes.frequencies
    return lo if params.delta >= 0 else hi


def qubit_branch(params: PhysicalParams, modes: Optional[DressedModes] = None) -> float:
    modes = modes or dressed_modes(params)
    lo, hi = modes.frequencies
    return hi if params.delta >= 0 else lo


@dataclass(frozen=True)
class DispersivePull:
    """Cavity shifts (rad/s) for ground (``minus``) and excited (``plus``) qubit."""

    pull_minus: float
    pull_plus: float

    @property
    def difference(self) -> float:
        """``pull_plus - pull_minus``; positive when the qubit lies above."""
        return self.pull_plus - self.pull_minus


def dispersive_pull(params: PhysicalParams, delta: float) -> DispersivePull:
    """State-dependent cavity pull from the exact quartic roots.

    Parameters
    ----------
    params : PhysicalParams
        Only ``omega_r``, ``g`` and ``z0`` matter; ``omega_q`` is replaced.
    delta : float
        Qubit-resonator detuning, rad/s.

    Raises
    ------
    InstabilityError
        If ``|delta| <= g`` (the excited-state quartic has complex roots
        near resonance) or the roots are otherwise unstable.
    """
    if params.g == 0.0:
        return DispersivePull(0.0, 0.0)
    if abs(delta) <= params.g:
        raise InstabilityError(
            f"|delta| = {abs(delta):.6g} rad/s must exceed g = {params.g:.6g} rad/s"
        )
    pulls = []
    for lam in (-1.0, 1.0):
        p = replace(params, omega_q=params.omega_r + delta, lambda3_0=lam)
        modes = dressed_modes(p)
        if modes.unstable:
            raise InstabilityError(f"complex dressed modes for lambda3_0 = {lam:+g}")
        pulls.append(cavity_branch(p, modes) - params.omega_r)
    return DispersivePull(*pulls)
