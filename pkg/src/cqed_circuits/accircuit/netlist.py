"""Netlist model and a small SPICE-like text format.

Grammar, one statement per line::

    R<name> <n+> <n-> <value>
    C<name> <n+> <n-> <value>
    L<name> <n+> <n-> <value>
    K<name> L<a> L<b> <k>
    V<name> <n+> <n-> AC <amplitude> [<source_R>]
    .port <name> <n+> <n->
    * comment

Node ``0`` is ground. Element prefixes are case-insensitive. Values are
plain decimals or carry one engineering suffix (f p n u m k meg g).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from ..errors import NetlistError

GROUND = "0"

SUFFIXES = {
    "meg": 1e6,
    "f": 1e-15,
    "p": 1e-12,
    "n": 1e-9,
    "u": 1e-6,
    "m": 1e-3,
    "k": 1e3,
    "g": 1e9,
}

_NUMBER = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(meg|[fpnumkg])?$", re.IGNORECASE)


def parse_value(text: str) -> float:
    """Parse ``"494.3f"``-style values. Raises ``ValueError`` when malformed."""
    m = _NUMBER.match(text.strip())
    if not m:
        raise ValueError(f"malformed number {text!r}")
    value = float(m.group(1))
    suffix = m.group(2)
    if suffix:
        value *= SUFFIXES[suffix.lower()]
    if not math.isfinite(value):
        raise ValueError(f"non-finite number {text!r}")
    return value


@dataclass(frozen=True)
class Element:
    """Two-terminal R/L/C, or a K coupling between two named inductors."""

    kind: str  # "R", "L", "C" or "K"
    name: str
    nodes: Tuple[str, ...]
    value: float
    inductors: Tuple[str, ...] = ()


@dataclass(frozen=True)
class Source:
    """AC voltage source with optional series (Thevenin) resistance."""

    name: str
    nodes: Tuple[str, str]
    amplitude: float
    resistance: float = 0.0


@dataclass
class Netlist:
    nodes: List[str] = field(default_factory=lambda: [GROUND])
    elements: List[Element] = field(default_factory=list)
    sources: List[Source] = field(default_factory=list)
    ports: Dict[str, Tuple[str, str]] = field(default_factory=dict)

    def _touch(self, *nodes):
        for n in nodes:
            if n not in self.nodes:
                self.nodes.append(n)

    def _names(self):
        return {e.name.upper() for e in self.elements} | {s.name.upper() for s in self.sources}

    def add(self, kind: str, name: str, n1: str, n2: str, value: float,
            mirrored: bool = False) -> "Netlist":
        """Append a two-terminal element.

        ``mirrored=True`` admits a negative resistor. It is meant for branches
        whose every element is sign-flipped (an inverted two-level system),
        where the RC and L/R time constants stay positive and nothing is gain.
        """
        kind = kind.upper()
        _check_element(kind, name, -value if mirrored and kind == "R" else value)
        if name.upper() in self._names():
            raise NetlistError(f"duplicate element name {name}")
        self._touch(n1, n2)
        self.elements.append(Element(kind, name, (n1, n2), float(value)))
        return self

    def add_coupling(self, name: str, l1: str, l2: str, k: float) -> "Netlist":
        _check_element("K", name, k)
        if name.upper() in self._names():
            raise NetlistError(f"duplicate element name {name}")
        found = {e.name.upper() for e in self.elements if e.kind == "L"}
        for ind in (l1, l2):
            if ind.upper() not in found:
                raise NetlistError(f"{name} references undeclared inductor {ind}")
        self.elements.append(Element("K", name, (), float(k), (l1, l2)))
        return self

    def add_source(self, name: str, n1: str, n2: str, amplitude: float, resistance: float = 0.0) -> "Netlist":
        if name.upper() in self._names():
            raise NetlistError(f"duplicate element name {name}")
        if resistance < 0:
            raise NetlistError(f"{name}: source resistance must be >= 0")
        self._touch(n1, n2)
        self.sources.append(Source(name, (n1, n2), float(amplitude), float(resistance)))
        return self

    def add_port(self, name: str, plus: str, minus: str = GROUND) -> "Netlist":
        if name in self.ports:
            raise NetlistError(f"duplicate port {name}")
        self._touch(plus, minus)
        self.ports[name] = (plus, minus)
        return self

    def element(self, name: str) -> Element:
        for e in self.elements:
            if e.name.upper() == name.upper():
                return e
        raise KeyError(name)

    def without(self, name: str) -> "Netlist":
        """Copy with one element (and any K referencing it) removed."""
        drop = name.upper()
        elements = [e for e in self.elements
                    if e.name.upper() != drop and drop not in {i.upper() for i in e.inductors}]
        return Netlist(list(self.nodes), elements, list(self.sources), dict(self.ports))


def _check_element(kind, name, value):
    if kind == "R" and not value > 0:
        raise NetlistError(f"{name}: resistance must be positive, got {value:g}")
    if kind in ("L", "C") and value == 0:
        raise NetlistError(f"{name}: {'inductance' if kind == 'L' else 'capacitance'} must be non-zero")
    if kind == "K" and not abs(value) < 1:
        raise NetlistError(f"{name}: coupling coefficient must satisfy |k| < 1, got {value:g}")


_ARITY = {"R": 4, "C": 4, "L": 4, "K": 4}


def parse_netlist(text: str) -> Netlist:
    """Parse netlist text; every error carries the offending line number."""
    net = Netlist()
    pending_k = []
    names = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("*"):
            continue
        fields = line.split()
        head = fields[0]
        try:
            if head.startswith("."):
                _parse_directive(net, fields, lineno)
                continue
            kind = head[0].upper()
            if kind not in ("R", "C", "L", "K", "V"):
                raise NetlistError(f"unknown element kind {head[0]!r} in {head}", lineno)
            if len(head) < 2:
                raise NetlistError(f"element {head} needs a name after the prefix", lineno)
            key = head.upper()
            if key in names:
                raise NetlistError(f"duplicate element name {head} (first on line {names[key]})", lineno)
            names[key] = lineno
            if kind == "V":
                _parse_source(net, fields, lineno)
                continue
            if len(fields) != _ARITY[kind]:
                raise NetlistError(
                    f"{head} expects {_ARITY[kind] - 1} fields, got {len(fields) - 1}", lineno
                )
            value = _value(fields[3], lineno)
            if kind == "K":
                pending_k.append((lineno, head, fields[1], fields[2], value))
                _check_line(lambda: _check_element("K", head, value), lineno)
                continue
            _check_line(lambda: net.add(kind, head, fields[1], fields[2], value), lineno)
        except NetlistError as exc:
            if exc.line is None:
                raise NetlistError(exc.reason, lineno) from None
            raise
    for lineno, name, l1, l2, k in pending_k:
        _check_line(lambda: net.add_coupling(name, l1, l2, k), lineno)
    return net


def _check_line(action, lineno):
    try:
        return action()
    except NetlistError as exc:
        raise NetlistError(exc.reason, lineno) from None


def _value(text, lineno):
    try:
        return parse_value(text)
    except ValueError as exc:
        raise NetlistError(str(exc), lineno) from None


def _parse_source(net, fields, lineno):
    head = fields[0]
    if len(fields) not in (5, 6):
        raise NetlistError(f"{head} expects '<n+> <n-> AC <amplitude> [<source_R>]'", lineno)
    if fields[3].upper() != "AC":
        raise NetlistError(f"{head}: expected keyword AC, got {fields[3]!r}", lineno)
    amplitude = _value(fields[4], lineno)
    resistance = _value(fields[5], lineno) if len(fields) == 6 else 0.0
    _check_line(lambda: net.add_source(head, fields[1], fields[2], amplitude, resistance), lineno)


def _parse_directive(net, fields, lineno):
    directive = fields[0].lower()
    if directive != ".port":
        raise NetlistError(f"unknown directive {fields[0]}", lineno)
    if len(fields) != 4:
        raise NetlistError(".port expects '<name> <n+> <n->'", lineno)
    _check_line(lambda: net.add_port(fields[1], fields[2], fields[3]), lineno)


def _fmt(x: float) -> str:
    return repr(float(x))


def serialize(net: Netlist) -> str:
    """Inverse of :func:`parse_netlist` (values written at full precision)."""
    lines = []
    for e in net.elements:
        if e.kind == "K":
            lines.append(f"{e.name} {e.inductors[0]} {e.inductors[1]} {_fmt(e.value)}")
        else:
            lines.append(f"{e.name} {e.nodes[0]} {e.nodes[1]} {_fmt(e.value)}")
    for s in net.sources:
        lines.append(f"{s.name} {s.nodes[0]} {s.nodes[1]} AC {_fmt(s.amplitude)} {_fmt(s.resistance)}")
    for name, (p, m) in net.ports.items():
        lines.append(f".port {name} {p} {m}")
    return "\n".join(lines) + "\n"


def equivalent(a: Netlist, b: Netlist) -> bool:
    """Structural equality ignoring node declaration order."""
    return (
        set(a.nodes) == set(b.nodes)
        and a.elements == b.elements
        and a.sources == b.sources
        and a.ports == b.ports
    )
