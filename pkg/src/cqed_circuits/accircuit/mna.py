"""Complex modified nodal analysis.

Unknowns are the non-ground node voltages followed by one branch current for
every inductor and every voltage source. The system matrix is affine in
``s = j*omega``::

    (G + s D) x = b

with capacitors stamped into ``D`` and inductor branch rows carrying ``-L``
(and ``-M`` for coupled pairs). Both matrices are stamped once per netlist,
so a frequency sweep costs one dense LU solve per point.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np
import scipy.linalg

from ..errors import InvalidParameterError, TopologyError
from ..spectrum import Spectrum
from .netlist import GROUND, Element, Netlist


@dataclass(frozen=True)
class AcSolution:
    frequency: float  # rad/s
    node_voltages: Dict[str, complex]
    branch_currents: Dict[str, complex]
    netlist: Netlist

    def voltage(self, plus: str, minus: str = GROUND) -> complex:
        return self.node_voltages[plus] - self.node_voltages[minus]

    def element_currents(self) -> Dict[str, complex]:
        """Current through every two-terminal element and source, n+ to n-."""
        s = 1j * self.frequency
        out = dict(self.branch_currents)
        for e in self.netlist.elements:
            if e.kind == "R":
                out[e.name] = self.voltage(*e.nodes) / e.value
            elif e.kind == "C":
                out[e.name] = self.voltage(*e.nodes) * s * e.value
        return out

    def kcl_residual(self) -> float:
        """Largest node current imbalance relative to the largest branch current."""
        currents = self.element_currents()
        balance = {n: 0j for n in self.netlist.nodes}
        for e in self.netlist.elements:
            if e.kind == "K":
                continue
            a, b = e.nodes
            balance[a] += currents[e.name]
            balance[b] -= currents[e.name]
        for src in self.netlist.sources:
            a, b = src.nodes
            balance[a] += currents[src.name]
            balance[b] -= currents[src.name]
        scale = max((abs(c) for c in currents.values()), default=0.0)
        worst = max(abs(v) for n, v in balance.items() if n != GROUND) if len(balance) > 1 else 0.0
        return worst / scale if scale > 0 else worst


def _check_connected(net: Netlist):
    parent = {n: n for n in net.nodes}

    def find(n):
        while parent[n] != n:
            parent[n] = parent[parent[n]]
            n = parent[n]
        return n

    links = [e.nodes for e in net.elements if e.kind != "K"] + [s.nodes for s in net.sources]
    for a, b in links:
        parent[find(a)] = find(b)
    floating = sorted(n for n in net.nodes if find(n) != find(GROUND))
    if floating:
        raise TopologyError(f"nodes not connected to ground: {', '.join(floating)}")


class MnaSystem:
    """Stamped nodal matrices for one netlist."""

    def __init__(self, net: Netlist):
        _check_connected(net)
        self.netlist = net
        self.node_index = {n: k for k, n in enumerate(x for x in net.nodes if x != GROUND)}
        nv = len(self.node_index)
        inductors = [e for e in net.elements if e.kind == "L"]
        self.branch_names = [e.name for e in inductors] + [s.name for s in net.sources]
        size = nv + len(self.branch_names)
        self.size = size
        self.G = np.zeros((size, size), dtype=complex)
        self.D = np.zeros((size, size), dtype=complex)
        self.b = np.zeros(size, dtype=complex)
        branch = {name.upper(): nv + k for k, name in enumerate(self.branch_names)}

        def stamp(mat, a, c, value):
            ia, ic = self.node_index.get(a), self.node_index.get(c)
            if ia is not None:
                mat[ia, ia] += value
            if ic is not None:
                mat[ic, ic] += value
            if ia is not None and ic is not None:
                mat[ia, ic] -= value
                mat[ic, ia] -= value

        def incidence(row, a, c):
            ia, ic = self.node_index.get(a), self.node_index.get(c)
            if ia is not None:
                self.G[ia, row] += 1.0
                self.G[row, ia] += 1.0
            if ic is not None:
                self.G[ic, row] -= 1.0
                self.G[row, ic] -= 1.0

        for e in net.elements:
            if e.kind == "R":
                stamp(self.G, *e.nodes, 1.0 / e.value)
            elif e.kind == "C":
                stamp(self.D, *e.nodes, e.value)
            elif e.kind == "L":
                row = branch[e.name.upper()]
                incidence(row, *e.nodes)
                self.D[row, row] -= e.value
        values = {e.name.upper(): e.value for e in inductors}
        for e in net.elements:
            if e.kind == "K":
                l1, l2 = (x.upper() for x in e.inductors)
                mutual = e.value * math.sqrt(abs(values[l1] * values[l2]))
                if values[l1] * values[l2] < 0:
                    raise InvalidParameterError(f"{e.name}: cannot couple inductors of opposite sign")
                mutual *= math.copysign(1.0, values[l1])
                r1, r2 = branch[l1], branch[l2]
                self.D[r1, r2] -= mutual
                self.D[r2, r1] -= mutual
        for src in net.sources:
            row = branch[src.name.upper()]
            incidence(row, *src.nodes)
            self.G[row, row] -= src.resistance
            self.b[row] = src.amplitude

    def matrix(self, omega: float) -> np.ndarray:
        return self.G + 1j * omega * self.D

    def solve_vector(self, omega: float, rhs: Optional[np.ndarray] = None) -> np.ndarray:
        a = self.matrix(omega)
        rhs = self.b if rhs is None else rhs
        with warnings.catch_warnings():
            # a zero pivot is reported below as a TopologyError
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            lu, piv = scipy.linalg.lu_factor(a, check_finite=True)
        diag = np.abs(np.diag(lu))
        if diag.min() <= np.finfo(float).eps * max(diag.max(), 1e-300) * 1e-3:
            raise TopologyError(f"singular nodal system at omega = {omega:.6g} rad/s")
        x = scipy.linalg.lu_solve((lu, piv), rhs)
        if not np.all(np.isfinite(x)):
            raise TopologyError(f"singular nodal system at omega = {omega:.6g} rad/s")
        return x

    def unpack(self, omega: float, x: np.ndarray) -> AcSolution:
        volts = {GROUND: 0j}
        volts.update({n: complex(x[k]) for n, k in self.node_index.items()})
        nv = len(self.node_index)
        currents = {name: complex(x[nv + k]) for k, name in enumerate(self.branch_names)}
        return AcSolution(float(omega), volts, currents, self.netlist)


def ac_solve(netlist: Netlist, omega: float) -> AcSolution:
    """Phasor solution of ``netlist`` at angular frequency ``omega``.

    Raises
    ------
    TopologyError
        Floating nodes or an otherwise singular system.
    """
    if not netlist.sources:
        raise InvalidParameterError("netlist has no source")
    if not omega > 0:
        raise InvalidParameterError(f"omega must be positive, got {omega!r}")
    system = MnaSystem(netlist)
    return system.unpack(omega, system.solve_vector(omega))


def transmission_sweep(
    netlist: Netlist,
    port: str,
    grid: Sequence[float],
    source: Optional[str] = None,
) -> Spectrum:
    """``V(port) / amplitude`` over a grid of frequencies in Hz."""
    if port not in netlist.ports:
        raise InvalidParameterError(f"unknown port {port!r}")
    if not netlist.sources:
        raise InvalidParameterError("netlist has no source")
    src = netlist.sources[0] if source is None else next(
        (s for s in netlist.sources if s.name.upper() == source.upper()), None)
    if src is None:
        raise InvalidParameterError(f"unknown source {source!r}")
    freqs = np.asarray(grid, dtype=float)
    if freqs.size == 0:
        raise InvalidParameterError("frequency grid is empty")
    system = MnaSystem(netlist)
    plus, minus = netlist.ports[port]
    ip, im = system.node_index.get(plus), system.node_index.get(minus)
    out = np.empty(freqs.size, dtype=complex)
    for k, f in enumerate(freqs):
        omega = 2.0 * math.pi * f
        try:
            x = system.solve_vector(omega)
        except TopologyError as exc:
            raise TopologyError(f"{exc} (f = {f:.9g} Hz)") from None
        vp = x[ip] if ip is not None else 0.0
        vm = x[im] if im is not None else 0.0
        out[k] = (vp - vm) / src.amplitude
    return Spectrum(freqs, np.abs(out), np.angle(out))


def natural_frequencies(netlist: Netlist) -> np.ndarray:
    """Finite roots ``s`` of ``det(G + s D) = 0`` with sources zeroed.

    Voltage sources are replaced by their internal resistance (shorted if
    ideal). Roots are returned ordered by imaginary part.
    """
    passive = Netlist(list(netlist.nodes), list(netlist.elements), [], dict(netlist.ports))
    for src in netlist.sources:
        # zero-amplitude source: its internal resistance, or a near-short if ideal
        r = src.resistance if src.resistance > 0 else 1e-12
        passive.elements.append(Element("R", f"{src.name}_int", src.nodes, r))
    system = MnaSystem(passive)
    eig = scipy.linalg.eigvals(system.G, -system.D)
    eig = eig[np.isfinite(eig)]
    return eig[np.lexsort((eig.real, eig.imag))]
