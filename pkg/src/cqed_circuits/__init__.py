"""Circuit-QED resonator-qubit models: mean-field dynamics, equivalent circuits, spectra."""

from .core import (
    HBAR,
    CircuitParams,
    DispersivePull,
    DressedModes,
    PhysicalParams,
    ResonatorLC,
    cavity_branch,
    derive_lc,
    derive_rms,
    dispersive_pull,
    dressed_modes,
    loaded_q,
    quartic_residual,
    qubit_branch,
    table1,
    transmon_device,
)
from .errors import (
    CqedError,
    DegenerateInversionError,
    DivergenceError,
    ExtractionError,
    InputError,
    InstabilityError,
    InvalidParameterError,
    NetlistError,
    NumericalError,
    SeriesTooShortError,
    StepSizeError,
    TopologyError,
)
from .rbe import (
    CHANNELS,
    EXCITED_SEED,
    GROUND,
    PROBE_SEED,
    LinearSystem,
    RbeState,
    TimeSeries,
    bloch_norm,
    conserved_energy,
    eigenfrequencies,
    integrate,
    linearized_matrix,
    rbe_derivative,
)
from .spectrum import Spectrum

__version__ = "0.1.0"
