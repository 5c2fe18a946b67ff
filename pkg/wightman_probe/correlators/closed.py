"""
Closed-form pullbacks of the massless d=3 Wightman function.

All kernels are evaluated at complex lapse z = s - iε; the ε → 0 value at
s != 0 is the kernel at real z.
"""
from abc import abstractmethod
from typing import Optional
import math
import numpy as np
from ..conf import THERMAL_IMAGES
from ..exceptions import InvalidParameter, NotSupported
from ..trajectories import WorldlineKind
from .abstract import CorrelatorSpec, StateKind, StationaryCorrelator
from .spectra import SpectralDensity, ThermalSpectrum


# trigamma argument beyond which the asymptotic series is used as is.
_ASYMPTOTIC_FROM = 20.0


def trigamma(w: np.ndarray) -> np.ndarray:
    """ψ₁(w) for complex w with Re(w) > 0: recurrence up to |w| >= 20, then the Bernoulli series."""
    w = np.asarray(w, dtype=complex)
    shift = np.zeros_like(w)
    while True:
        small = np.abs(w) < _ASYMPTOTIC_FROM
        if not small.any():
            break
        shift = shift + np.where(small, 1.0 / (w * w), 0.0)
        w = np.where(small, w + 1.0, w)
    inv = 1.0 / w
    inv2 = inv * inv
    series = inv * (1.0 + inv * (0.5 + inv * (
        1.0 / 6.0 + inv2 * (-1.0 / 30.0 + inv2 * (1.0 / 42.0 + inv2 * (-1.0 / 30.0 + inv2 * 5.0 / 66.0)))
    )))
    return shift + series


class ClosedFormCorrelator(StationaryCorrelator):
    regulated = True
    singular_lapses = (0.0,)

    @abstractmethod
    def kernel(self, z: np.ndarray) -> np.ndarray:
        pass

    @property
    def has_reference(self) -> bool:
        return True

    def lapse(self, s, epsilon: Optional[float] = None) -> np.ndarray:
        eps = self.epsilon if epsilon is None else epsilon
        return self.kernel(np.asarray(s, dtype=float) - 1j * eps)

    def limit(self, tau: float, tau_p: float) -> complex:
        s = float(tau - tau_p)
        if s == 0:
            raise InvalidParameter(
                f"{self.__class__.__name__} diverges at coincidence; no ε → 0 value"
            )
        return complex(self.kernel(np.asarray(s + 0j)))

    def reference_lapse(self, s: float) -> Optional[complex]:
        return self.limit(s, 0.0)


class InertialVacuumCorrelator(ClosedFormCorrelator):
    """W(s) = -1/(4π²(s - iε)²)."""

    @property
    def spectrum(self) -> SpectralDensity:
        return ThermalSpectrum(None)

    def kernel(self, z: np.ndarray) -> np.ndarray:
        return -1.0 / (4.0 * math.pi ** 2 * z * z)


class AcceleratedVacuumCorrelator(ClosedFormCorrelator):
    """W(s) = -a²/(16π² sinh²(a(s - iε)/2))."""

    def __init__(self, acceleration: float, spec: Optional[CorrelatorSpec] = None, epsilon: Optional[float] = None):
        if not acceleration > 0:
            raise InvalidParameter(f"proper acceleration must be positive, got {acceleration}")
        super().__init__(spec, epsilon)
        self.acceleration = acceleration

    @property
    def spectrum(self) -> SpectralDensity:
        return ThermalSpectrum(2.0 * math.pi / self.acceleration)

    def kernel(self, z: np.ndarray) -> np.ndarray:
        a = self.acceleration
        with np.errstate(over="ignore"):
            sh = np.sinh(0.5 * a * z)
        return -(a * a) / (16.0 * math.pi ** 2 * sh * sh)


class ThermalImageCorrelator(ClosedFormCorrelator):
    """Inertial KMS state: W(s) = -(1/4π²)Σ_n 1/(s - iε + inβ)².

    Images |n| <= K are summed explicitly; the rest is added through
    Σ_{n>K} 1/(z ± inβ)² = -ψ₁(K + 1 ∓ iz/β)/β².
    """

    def __init__(
        self,
        beta: float,
        images: int = THERMAL_IMAGES,
        spec: Optional[CorrelatorSpec] = None,
        epsilon: Optional[float] = None
    ):
        if not beta > 0:
            raise InvalidParameter(f"inverse temperature must be positive, got {beta}")
        super().__init__(spec, epsilon)
        self.beta = beta
        self.images = int(images)

    @property
    def spectrum(self) -> SpectralDensity:
        return ThermalSpectrum(self.beta)

    def kernel(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        beta, k = self.beta, self.images
        n = np.arange(-k, k + 1)
        shifted = z[..., None] + 1j * beta * n
        total = np.sum(1.0 / (shifted * shifted), axis=-1)
        w = 1j * z / beta
        tail = -(trigamma(k + 1 - w) + trigamma(k + 1 + w)) / beta ** 2
        return -(total + tail) / (4.0 * math.pi ** 2)


def closed_form_pullback(spec: CorrelatorSpec) -> ClosedFormCorrelator:
    """Closed-form pullback for massless d=3 vacuum or thermal states."""
    valid = (
        "m=0, d=3 with state vacuum on inertial or uniformly_accelerated worldlines, "
        "or state thermal on an inertial worldline at rest"
    )
    trajectory = spec.trajectory
    if spec.mass != 0 or spec.dimension != 3:
        raise NotSupported(
            f"no closed form for m={spec.mass}, d={spec.dimension}; supported: {valid}"
        )
    if spec.state.kind is StateKind.VACUUM:
        if trajectory.kind is WorldlineKind.INERTIAL:
            return InertialVacuumCorrelator(spec)
        return AcceleratedVacuumCorrelator(trajectory.acceleration, spec)
    if spec.state.kind is StateKind.THERMAL:
        if trajectory.kind is WorldlineKind.INERTIAL and not any(trajectory.velocity):
            return ThermalImageCorrelator(spec.state.beta, spec.thermal_images, spec)
        raise NotSupported(
            f"thermal state on a {trajectory.kind} (velocity {trajectory.velocity}) worldline; "
            f"supported: {valid}"
        )
    raise NotSupported(
        f"state {spec.state.kind} has no closed-form pullback (use single_mode_correlator); "
        f"supported: {valid}"
    )
