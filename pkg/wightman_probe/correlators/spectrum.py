"""
Long-time (adiabatic) response spectra.

W̃(Ω) is the Fourier transform of the stationary pullback, observed through a
Gaussian window of width T:

    W̃_T(Ω) = ∫ds e^{-iΩs} W(s) e^{-s²/(2T²)} = ∫dω ρ(ω) √(2π) T e^{-T²(ω+Ω)²/2},

which tends to 2πρ(-Ω) as T grows.
"""
from typing import Optional
import math
import numpy as np
from ..conf import ADIABATIC_WINDOW, EPSILON_LADDER, QUAD_RTOL, logging
from ..exceptions import ContractViolation, InvalidParameter, NotSupported, QuadratureError
from ..libs.quadrature import adaptive_quad, extrapolate_to_zero, graded_breakpoints
from .abstract import AbstractCorrelator


logger = logging.getLogger("WProbe.Spectrum")

# window tails beyond this many widths are below 1e-17.
_WINDOW_REACH = 9.2


def _check(corr: AbstractCorrelator, window: float) -> None:
    if not corr.stationary:
        raise ContractViolation(
            f"{corr.__class__.__name__} is not stationary; the adiabatic rate needs W(τ - τ')"
        )
    if not window > 0:
        raise InvalidParameter(f"observation window must be positive, got {window}")


def _spectral_rate(corr, omega: float, window: float) -> complex:
    spectrum = corr.spectrum
    norm = math.sqrt(2.0 * math.pi) * window

    def gaussian(w: np.ndarray) -> np.ndarray:
        x = window * (np.asarray(w) + omega)
        return norm * np.exp(-0.5 * x * x)

    reach = _WINDOW_REACH / window
    result = spectrum.integrate(
        gaussian,
        -omega - reach,
        -omega + reach,
        breaks=(-omega,),
        max_width=1.0 / window,
        rtol=QUAD_RTOL
    )
    if not result.converged:
        raise QuadratureError(
            f"spectral adiabatic rate did not converge at gap {omega}",
            estimate=result.value,
            residual=result.error
        )
    return result.value


def _time_rate_at(corr, omega: float, window: float, eps: Optional[float]) -> complex:
    reach = _WINDOW_REACH * window
    breaks = [0.0, reach]
    if eps is not None:
        breaks = graded_breakpoints(0.0, 0.25 * eps, 0.0, reach)
    max_width = min(window, math.pi / (4.0 * abs(omega))) if omega else window

    def integrand(s: np.ndarray) -> np.ndarray:
        values = corr.lapse(s, eps)
        return np.exp(-1j * omega * s - 0.5 * (s / window) ** 2) * values

    result = adaptive_quad(integrand, breaks, rtol=QUAD_RTOL, max_width=max_width)
    if not result.converged:
        raise QuadratureError(
            f"time-domain adiabatic rate did not converge at gap {omega}",
            estimate=2.0 * result.value.real,
            residual=2.0 * result.error
        )
    # W(-s) = conj W(s) folds the negative half-line onto the positive one.
    return complex(2.0 * result.value.real, 0.0)


def _time_rate(corr, omega: float, window: float) -> complex:
    if not corr.regulated:
        return _time_rate_at(corr, omega, window, None)
    scale = 1.0 / max(abs(omega), 1.0 / window)
    ladder = [c * scale for c in EPSILON_LADDER]
    values = [_time_rate_at(corr, omega, window, eps) for eps in ladder]
    return extrapolate_to_zero(ladder, values, power=1.0).value


def adiabatic_rate(
    corr: AbstractCorrelator,
    omega: float,
    *,
    window: Optional[float] = None,
    method: str = "auto"
) -> float:
    """W̃(Ω) of a stationary correlator (long-time excitation rate per unit λ²)."""
    window = ADIABATIC_WINDOW if window is None else window
    _check(corr, window)
    if method == "auto":
        method = "spectral" if corr.spectrum is not None else "time"
    if method == "spectral":
        if corr.spectrum is None:
            raise NotSupported(f"{corr.__class__.__name__} exposes no spectral density")
        value = _spectral_rate(corr, omega, window)
    elif method == "time":
        value = _time_rate(corr, omega, window)
    else:
        raise InvalidParameter(f"Unknown method {method!r}, expected auto, spectral or time")
    if abs(value.imag) > 1e-8 * max(1.0, abs(value.real)):
        logger.warning(f"adiabatic rate at {omega} has imaginary residue {value.imag:.3g}")
    logger.debug(f"adiabatic rate ({method}, T={window}) at {omega}: {value.real!r}")
    return float(value.real)


def commutator_spectrum(corr: AbstractCorrelator, omega: float, **kwargs) -> float:
    """C(Ω) = W̃(Ω) - W̃(-Ω); state independent for free fields."""
    return adiabatic_rate(corr, omega, **kwargs) - adiabatic_rate(corr, -omega, **kwargs)


def symmetric_spectrum(corr: AbstractCorrelator, omega: float, **kwargs) -> float:
    """W̃(Ω) + W̃(-Ω), the state-dependent counterpart of the commutator spectrum."""
    return adiabatic_rate(corr, omega, **kwargs) + adiabatic_rate(corr, -omega, **kwargs)
