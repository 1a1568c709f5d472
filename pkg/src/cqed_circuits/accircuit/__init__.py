"""Linear frequency-domain circuit engine."""

from .builders import (
    PORT,
    DriveAttachment,
    build_electric_model,
    build_magnetic_model,
    build_resonator_network,
)
from .mna import AcSolution, MnaSystem, ac_solve, natural_frequencies, transmission_sweep
from .netlist import GROUND, Element, Netlist, Source, equivalent, parse_netlist, parse_value, serialize
from ..spectrum import Spectrum

__all__ = [
    "PORT", "DriveAttachment", "build_electric_model", "build_magnetic_model",
    "build_resonator_network", "AcSolution", "MnaSystem", "ac_solve",
    "natural_frequencies", "transmission_sweep", "GROUND", "Element", "Netlist",
    "Source", "equivalent", "parse_netlist", "parse_value", "serialize", "Spectrum",
]
