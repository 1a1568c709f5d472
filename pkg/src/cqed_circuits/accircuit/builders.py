"""Netlists for the bare resonator and the two linear interaction models.

Node names used by the builders:

``res``   resonator tank (electric) / resonator capacitor top (magnetic)
``qb``    qubit tank (electric) / qubit capacitor top (magnetic)
``in``, ``out``  probe source and load side of the outcoupling capacitors
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..core import CircuitParams, ResonatorLC, _positive
from ..errors import InvalidParameterError
from .netlist import GROUND, Element, Netlist

PORT = "out"


@dataclass(frozen=True)
class DriveAttachment:
    """Probe source and load coupled to the resonator through small capacitors.

    With ``absorb=True`` the outcoupling capacitance is subtracted from the
    resonator capacitor so the loaded tank keeps its unloaded resonance. The
    subtraction is exact to order ``(omega * c * r_load)**2``.
    """

    c_in: float = 0.1e-15
    c_out: float = 0.1e-15
    r_load: float = 50.0
    amplitude: float = 1.0
    absorb: bool = True

    def __post_init__(self):
        _positive("c_in", self.c_in)
        _positive("c_out", self.c_out)
        _positive("r_load", self.r_load)


def _attach(net: Netlist, node: str, drive: DriveAttachment):
    net.add_source("V1", "in", GROUND, drive.amplitude, drive.r_load)
    net.add("C", "C1", "in", node, drive.c_in)
    net.add("C", "C2", node, "out", drive.c_out)
    net.add("R", "Rload", "out", GROUND, drive.r_load)
    net.add_port(PORT, "out", GROUND)


def build_resonator_network(lc: ResonatorLC, c1: float, c2: float, r_load: float = 50.0) -> Netlist:
    """Source, outcoupling capacitors and loads around an ideal LC tank."""
    for name, value in (("c_r", lc.c_r), ("l_r", lc.l_r), ("c1", c1), ("c2", c2), ("r_load", r_load)):
        _positive(name, value)
    net = Netlist()
    net.add("L", "Lr", "res", GROUND, lc.l_r)
    net.add("C", "Cr", "res", GROUND, lc.c_r)
    _attach(net, "res", DriveAttachment(c1, c2, r_load, absorb=False))
    return net


def _resonator_cap(cr: float, drive: Optional[DriveAttachment]) -> float:
    if drive is not None and drive.absorb:
        cr = cr - drive.c_in - drive.c_out
    return cr


def build_electric_model(cp: CircuitParams, drive: Optional[DriveAttachment] = DriveAttachment()) -> Netlist:
    """Capacitively coupled resonator and qubit tanks.

    Resonator node: ``Cr || Lr || Rr``. Qubit node: ``Cq || Rq1`` in parallel
    with the series branch ``Lq - Rq2``. ``Crq`` bridges the two nodes.
    Absent resistors are left out (open shunt, shorted series). For an
    inverted qubit (``lambda3_0 > 0``) the whole qubit tank is sign-flipped,
    resistors included.
    """
    if cp.kind != "electric":
        raise InvalidParameterError(f"expected electric circuit parameters, got {cp.kind}")
    net = Netlist()
    net.add("C", "Cr", "res", GROUND, _resonator_cap(cp.cr, drive))
    net.add("L", "Lr", "res", GROUND, cp.lr)
    if cp.rr is not None:
        net.add("R", "Rr", "res", GROUND, cp.rr)
    net.add("C", "Cq", "qb", GROUND, cp.cq)
    if cp.rq1 is not None:
        net.add("R", "Rq1", "qb", GROUND, cp.rq1, mirrored=cp.cq < 0)
    if cp.rq2 is not None:
        net.add("L", "Lq", "qb", "qL", cp.lq)
        net.add("R", "Rq2", "qL", GROUND, cp.rq2, mirrored=cp.lq < 0)
    else:
        net.add("L", "Lq", "qb", GROUND, cp.lq)
    if cp.coupling != 0:
        net.add("C", "Crq", "res", "qb", cp.coupling)
    if drive is not None:
        _attach(net, "res", drive)
    return net


def build_magnetic_model(cp: CircuitParams, drive: Optional[DriveAttachment] = DriveAttachment()) -> Netlist:
    """Series-resonant loops sharing the coupling inductor ``Lrq``.

    Resonator loop: ``Cr`` (node ``res`` to ground), ``Rr``, ``Lr`` into the
    shared node ``m``; qubit loop: ``Cq || Rq1``, ``Rq2``, ``Lq`` into ``m``;
    ``Lrq`` from ``m`` to ground forms the T-network.
    """
    if cp.kind != "magnetic":
        raise InvalidParameterError(f"expected magnetic circuit parameters, got {cp.kind}")
    net = Netlist()
    net.add("C", "Cr", "res", GROUND, _resonator_cap(cp.cr, drive))
    tail = "res"
    if cp.rr is not None:
        net.add("R", "Rr", "res", "rL", cp.rr)
        tail = "rL"
    net.add("L", "Lr", tail, "m", cp.lr)
    net.add("C", "Cq", "qb", GROUND, cp.cq)
    if cp.rq1 is not None:
        net.add("R", "Rq1", "qb", GROUND, cp.rq1, mirrored=cp.cq < 0)
    tail = "qb"
    if cp.rq2 is not None:
        net.add("R", "Rq2", "qb", "qL", cp.rq2, mirrored=cp.cq < 0)
        tail = "qL"
    net.add("L", "Lq", tail, "m", cp.lq)
    if cp.coupling != 0:
        net.add("L", "Lrq", "m", GROUND, cp.coupling)
    else:
        # uncoupled: both loops close straight to ground
        net = _short_node(net, "m")
    if drive is not None:
        _attach(net, "res", drive)
    return net


def _short_node(net: Netlist, node: str) -> Netlist:
    elements = [
        Element(e.kind, e.name, tuple(GROUND if n == node else n for n in e.nodes), e.value, e.inductors)
        for e in net.elements
    ]
    return Netlist([n for n in net.nodes if n != node], elements, list(net.sources), dict(net.ports))
