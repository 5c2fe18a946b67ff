"""
Two-point correlators pulled back along detector worldlines.
"""
from .spectra import (
    SpectralDensity,
    DiscreteSpectrum,
    ThermalSpectrum,
    ModeSpectrum
)
from .abstract import (
    StateKind,
    Normalization,
    FieldState,
    CorrelatorSpec,
    AbstractCorrelator,
    StationaryCorrelator,
    TwoPointFunction
)
from .closed import (
    ClosedFormCorrelator,
    InertialVacuumCorrelator,
    AcceleratedVacuumCorrelator,
    ThermalImageCorrelator,
    closed_form_pullback
)
from .modes import (
    ModeIntegralCorrelator,
    density_of_states,
    spectral_weight,
    massive_vacuum_reference,
    mode_integral_correlator
)
from .toy import (
    SingleModeCorrelator,
    ConstantCorrelator,
    single_mode_correlator,
    constant_correlator,
    rank_one_correlator
)
from .spectrum import adiabatic_rate, commutator_spectrum, symmetric_spectrum

__all__ = (
    "SpectralDensity",
    "DiscreteSpectrum",
    "ThermalSpectrum",
    "ModeSpectrum",
    "StateKind",
    "Normalization",
    "FieldState",
    "CorrelatorSpec",
    "AbstractCorrelator",
    "StationaryCorrelator",
    "TwoPointFunction",
    "ClosedFormCorrelator",
    "InertialVacuumCorrelator",
    "AcceleratedVacuumCorrelator",
    "ThermalImageCorrelator",
    "closed_form_pullback",
    "ModeIntegralCorrelator",
    "density_of_states",
    "spectral_weight",
    "massive_vacuum_reference",
    "mode_integral_correlator",
    "SingleModeCorrelator",
    "ConstantCorrelator",
    "single_mode_correlator",
    "constant_correlator",
    "rank_one_correlator",
    "adiabatic_rate",
    "commutator_spectrum",
    "symmetric_spectrum",
)
