"""
Mode-integral Wightman function of a free scalar field in the vacuum.

W(s) = ∫dω ρ_d(ω) e^{-iω(s - iε)}, with the density of states
D_d(ω, m) = 2^{1-d}π^{d/2}/Γ(d/2)·ω·(ω² - m²)^{(d-2)/2}·Θ(ω - m) and the
spectral weight ρ_d = D_d/(2ω)·N_d. The integral runs in momentum
p = sqrt(ω² - m²), which keeps the integrand smooth at the mass threshold.
"""
from typing import Optional
import math
import warnings
import numpy as np
from scipy import special
from ..conf import QUAD_RTOL, QUAD_MAX_DEPTH
from ..exceptions import (
    EndpointSingularityWarning,
    InvalidParameter,
    NotSupported,
    QuadratureError
)
from ..libs.quadrature import adaptive_quad
from ..trajectories import WorldlineKind, lapse_interval
from .abstract import CorrelatorSpec, StateKind, StationaryCorrelator
from .spectra import (
    BOLTZMANN_CUTOFF,
    ModeSpectrum,
    SpectralDensity,
    dos_prefactor,
    normalization_factor
)


def density_of_states(d: int, m: float, omega):
    """D_d(ω, m); the d=1 threshold ω = m returns inf (integrable singularity)."""
    if d not in (1, 2, 3):
        raise InvalidParameter(f"spatial dimension must be 1, 2 or 3, got {d}")
    if not m >= 0:
        raise InvalidParameter(f"field mass must be >= 0, got {m}")
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise InvalidParameter("density of states needs omega >= 0")
    p2 = omega * omega - m * m
    with np.errstate(divide="ignore", invalid="ignore"):
        values = dos_prefactor(d) * omega * np.where(p2 >= 0, p2, 1.0) ** ((d - 2) / 2)
    values = np.where(p2 >= 0, values, 0.0)
    if d == 1 and np.any(p2 == 0):
        values = np.where(p2 == 0, np.inf, values)
        warnings.warn(
            "d=1 density of states is singular at omega = m (integrable endpoint singularity)",
            EndpointSingularityWarning,
            stacklevel=2
        )
    return float(values) if values.ndim == 0 else values


def spectral_weight(d: int, m: float, omega, normalization: str = "canonical"):
    """ρ_d(ω) = D_d(ω, m)/(2ω)·N_d."""
    omega = np.asarray(omega, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.asarray(density_of_states(d, m, omega)) / (2.0 * omega)
    values = values * normalization_factor(d, normalization)
    return float(values) if values.ndim == 0 else values


def massive_vacuum_reference(d: int, m: float, s: float, normalization: str = "canonical") -> complex:
    """ε → 0 vacuum Wightman function at timelike lapse s != 0 (Bessel closed forms)."""
    if s == 0:
        raise InvalidParameter("vacuum Wightman function diverges at coincidence")
    t = abs(s)
    scale = normalization_factor(d, normalization) / normalization_factor(d, "canonical")
    if d == 3:
        if m == 0:
            value = -1.0 / (4.0 * math.pi ** 2 * t * t)
        else:
            value = m / (8.0 * math.pi * t) * (special.y1(m * t) + 1j * special.j1(m * t))
    elif d == 2:
        value = -1j * np.exp(-1j * m * t) / (4.0 * math.pi * t)
    else:
        if m == 0:
            raise NotSupported("d=1 massless vacuum has no finite Wightman function")
        value = -0.25 * (special.y0(m * t) + 1j * special.j0(m * t))
    value = complex(value) * scale
    return value if s > 0 else value.conjugate()


class ModeIntegralCorrelator(StationaryCorrelator):
    """Vacuum mode integral pulled back along an inertial or accelerated worldline.

    Along an accelerated worldline the vacuum two-point function only sees
    the invariant interval, W(s) = W_inertial(2 sinh(as/2)/a); no spectral
    density is exposed in that case.
    """
    regulated = True
    singular_lapses = (0.0,)

    def __init__(self, spec: CorrelatorSpec, epsilon: Optional[float] = None):
        super().__init__(spec, epsilon)
        self.modes = ModeSpectrum(spec.dimension, spec.mass, str(spec.normalization), spec.ir_cutoff)

    @property
    def inertial(self) -> bool:
        return self.spec.trajectory.kind is WorldlineKind.INERTIAL

    @property
    def spectrum(self) -> Optional[SpectralDensity]:
        return self.modes if self.inertial else None

    @property
    def has_reference(self) -> bool:
        return self.spec.ir_cutoff is None

    def _at_interval(self, delta: float, eps: float) -> complex:
        modes = self.modes
        omega_max = BOLTZMANN_CUTOFF / eps
        if omega_max <= modes.lower:
            return 0j
        p_max = modes.to_variable(omega_max)
        breaks = [modes.p_min, p_max]
        if 0 < self.spec.mass < p_max:
            breaks.append(self.spec.mass)
        max_width = math.pi / abs(delta) if delta != 0 else None

        def integrand(p: np.ndarray) -> np.ndarray:
            omega = modes.omega_of(p)
            return modes.measure(p) * np.exp(-1j * omega * delta - eps * omega)

        result = adaptive_quad(
            integrand, breaks, rtol=QUAD_RTOL, max_depth=QUAD_MAX_DEPTH, max_width=max_width
        )
        if not result.converged:
            raise QuadratureError(
                f"mode integral did not converge at interval {delta}, epsilon {eps}",
                estimate=result.value,
                residual=result.error
            )
        return result.value

    def lapse(self, s, epsilon: Optional[float] = None) -> np.ndarray:
        eps = self.epsilon if epsilon is None else epsilon
        s = np.asarray(s, dtype=float)
        deltas = np.atleast_1d(lapse_interval(self.spec.trajectory, s))
        values = np.array([self._at_interval(float(d), eps) for d in deltas.ravel()], dtype=complex)
        return values.reshape(s.shape)

    def reference_lapse(self, s: float) -> Optional[complex]:
        if not self.has_reference:
            return None
        delta = lapse_interval(self.spec.trajectory, s)
        return massive_vacuum_reference(
            self.spec.dimension, self.spec.mass, delta, str(self.spec.normalization)
        )


def mode_integral_correlator(spec: CorrelatorSpec) -> ModeIntegralCorrelator:
    if spec.state.kind is not StateKind.VACUUM:
        raise NotSupported(
            f"mode integrals cover the vacuum state only, got {spec.state.kind}"
        )
    return ModeIntegralCorrelator(spec)
