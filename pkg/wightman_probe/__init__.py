"""
  Wightman Probe.

  Unruh-DeWitt detectors switched by combs of fast pulses, and the protocol that
  reads a field's two-point function off their excitation probabilities.
"""
from .version import __author__, __description__, __title__, __version__, get_version

from .switching import GAUSSIAN, ToothShape, NascentDelta, Comb
from .trajectories import Worldline
from .correlators import (
    CorrelatorSpec,
    FieldState,
    closed_form_pullback,
    mode_integral_correlator,
    single_mode_correlator,
    adiabatic_rate
)
from .response import Detector, QuadratureOptions, functional_W, excitation_probability
from .delta_limit import EtaSchedule, eta_sweep, nonlocal_delta_limit, scaling_experiment
from .protocol import ProtocolConfig, reconstruct_wightman, reconstruction_sweep


__all__ = (
    "GAUSSIAN",
    "ToothShape",
    "NascentDelta",
    "Comb",
    "Worldline",
    "CorrelatorSpec",
    "FieldState",
    "closed_form_pullback",
    "mode_integral_correlator",
    "single_mode_correlator",
    "adiabatic_rate",
    "Detector",
    "QuadratureOptions",
    "functional_W",
    "excitation_probability",
    "EtaSchedule",
    "eta_sweep",
    "nonlocal_delta_limit",
    "scaling_experiment",
    "ProtocolConfig",
    "reconstruct_wightman",
    "reconstruction_sweep",
)
