"""
Bounded toy correlators.

They satisfy the boundedness condition of the delta limit exactly, so every
protocol identity can be checked against closed forms without regulators.
"""
from collections.abc import Callable
from typing import Optional
import numpy as np
from ..exceptions import InvalidParameter
from .abstract import AbstractCorrelator, StationaryCorrelator, TwoPointFunction
from .spectra import DiscreteSpectrum, SpectralDensity


class SingleModeCorrelator(StationaryCorrelator):
    """One field mode of frequency ω with occupation n: W(s) = (n+1)e^{-iωs} + n e^{iωs}."""
    bounded = True

    def __init__(self, omega: float, occupation: int = 0):
        if not omega > 0:
            raise InvalidParameter(f"mode frequency must be positive, got {omega}")
        if int(occupation) != occupation or occupation < 0:
            raise InvalidParameter(f"occupation must be a non-negative integer, got {occupation}")
        super().__init__()
        self.omega = float(omega)
        self.occupation = int(occupation)

    @property
    def spectrum(self) -> SpectralDensity:
        return DiscreteSpectrum([(self.omega, self.occupation + 1), (-self.omega, self.occupation)])

    @property
    def has_reference(self) -> bool:
        return True

    def lapse(self, s, epsilon: Optional[float] = None) -> np.ndarray:
        phase = self.omega * np.asarray(s, dtype=float)
        n = self.occupation
        return (n + 1) * np.exp(-1j * phase) + n * np.exp(1j * phase)

    def reference_lapse(self, s: float) -> complex:
        return complex(self.lapse(s))

    def __repr__(self) -> str:
        return f"<SingleModeCorrelator: omega={self.omega}, n={self.occupation}>"


class ConstantCorrelator(StationaryCorrelator):
    """W ≡ c (c >= 0 keeps the kernel positive)."""
    bounded = True

    def __init__(self, value: float = 1.0):
        if not (np.isreal(value) and value >= 0):
            raise InvalidParameter(f"constant correlator needs a real c >= 0, got {value}")
        super().__init__()
        self.value = float(value)

    @property
    def spectrum(self) -> SpectralDensity:
        return DiscreteSpectrum([(0.0, self.value)])

    @property
    def has_reference(self) -> bool:
        return True

    def lapse(self, s, epsilon: Optional[float] = None) -> np.ndarray:
        return np.full(np.shape(s), self.value, dtype=complex)

    def reference_lapse(self, s: float) -> complex:
        return complex(self.value)


def single_mode_correlator(omega: float, n: int = 0) -> SingleModeCorrelator:
    return SingleModeCorrelator(omega, n)


def constant_correlator(value: float = 1.0) -> ConstantCorrelator:
    return ConstantCorrelator(value)


def rank_one_correlator(mode: Callable[[np.ndarray], np.ndarray]) -> AbstractCorrelator:
    """Non-stationary positive kernel W(τ, τ') = u(τ)·conj(u(τ'))."""
    return TwoPointFunction(
        lambda tau, tau_p: np.asarray(mode(tau)) * np.conj(np.asarray(mode(tau_p))),
        bounded=True
    )
