"""
Correlator specification and the correlator base classes.
"""
from abc import ABC, abstractmethod
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional
import copy
import numpy as np
from ..conf import DEFAULT_EPSILON, EPSILON_LADDER, THERMAL_IMAGES, logging
from ..exceptions import (
    InvalidParameter,
    InfraredDivergence,
    NumericalError
)
from ..libs.quadrature import extrapolate_to_zero
from ..trajectories import Worldline
from .spectra import SpectralDensity


class StateKind(str, Enum):
    VACUUM = "vacuum"
    THERMAL = "thermal"
    SINGLE_MODE = "single_mode"

    def __str__(self) -> str:
        return self.value


class Normalization(str, Enum):
    CANONICAL = "canonical"
    AS_PRINTED = "as_printed"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class FieldState:
    kind: StateKind = StateKind.VACUUM
    beta: Optional[float] = None
    omega: Optional[float] = None
    occupation: int = 0

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", StateKind(self.kind))
        except ValueError as err:
            raise InvalidParameter(
                f"Unknown state {self.kind!r}, expected one of {[k.value for k in StateKind]}"
            ) from err
        if self.kind is StateKind.THERMAL and not (self.beta is not None and self.beta > 0):
            raise InvalidParameter(f"thermal state needs beta > 0, got {self.beta}")
        if self.kind is StateKind.SINGLE_MODE:
            if not (self.omega is not None and self.omega > 0):
                raise InvalidParameter(f"single_mode state needs omega > 0, got {self.omega}")
            if int(self.occupation) != self.occupation or self.occupation < 0:
                raise InvalidParameter(f"occupation must be a non-negative integer, got {self.occupation}")

    @classmethod
    def vacuum(cls) -> "FieldState":
        return cls(StateKind.VACUUM)

    @classmethod
    def thermal(cls, beta: float) -> "FieldState":
        return cls(StateKind.THERMAL, beta=beta)

    @classmethod
    def single_mode(cls, omega: float, occupation: int = 0) -> "FieldState":
        return cls(StateKind.SINGLE_MODE, omega=omega, occupation=occupation)


@dataclass(frozen=True)
class CorrelatorSpec:
    """What to pull back: field, state, worldline and iε regulator.

    Attributes:
    ----------
    mass: float: field mass m >= 0.
    dimension: int: spatial dimension d in {1, 2, 3}.
    state: FieldState: vacuum, thermal(β) or single_mode(ω, n).
    trajectory: Worldline: detector worldline (same spatial dimension).
    epsilon: float: iε regulator > 0.
    normalization: Normalization: weight of the mode sum, canonical π^{-d} or as_printed (2π)^{-d}.
    ir_cutoff: float: optional lower momentum cutoff (admits d = 1, m = 0).
    thermal_images: int: image-sum truncation K.
    """
    mass: float = 0.0
    dimension: int = 3
    state: FieldState = field(default_factory=FieldState)
    trajectory: Optional[Worldline] = None
    epsilon: float = DEFAULT_EPSILON
    normalization: Normalization = Normalization.CANONICAL
    ir_cutoff: Optional[float] = None
    thermal_images: int = THERMAL_IMAGES

    def __post_init__(self):
        if not self.mass >= 0:
            raise InvalidParameter(f"field mass must be >= 0, got {self.mass}")
        if self.dimension not in (1, 2, 3):
            raise InvalidParameter(f"spatial dimension must be 1, 2 or 3, got {self.dimension}")
        if not self.epsilon > 0:
            raise InvalidParameter(f"regulator epsilon must be positive, got {self.epsilon}")
        if self.ir_cutoff is not None and not self.ir_cutoff > 0:
            raise InvalidParameter(f"ir_cutoff must be positive, got {self.ir_cutoff}")
        if self.thermal_images < 0:
            raise InvalidParameter(f"thermal_images must be >= 0, got {self.thermal_images}")
        try:
            object.__setattr__(self, "normalization", Normalization(self.normalization))
        except ValueError as err:
            raise InvalidParameter(
                f"Unknown normalization {self.normalization!r}, expected one of "
                f"{[n.value for n in Normalization]}"
            ) from err
        if self.trajectory is None:
            object.__setattr__(self, "trajectory", Worldline.inertial(dimension=self.dimension))
        elif self.trajectory.dimension != self.dimension:
            raise InvalidParameter(
                f"trajectory lives in {self.trajectory.dimension} spatial dimensions, "
                f"field in {self.dimension}"
            )
        if self.dimension == 1 and self.mass == 0 and self.ir_cutoff is None:
            raise InfraredDivergence(
                "d=1 massless field: the two-point function has an infrared divergence; "
                "give the field a mass or set an explicit ir_cutoff"
            )


class AbstractCorrelator(ABC):
    """Two-point function W(τ, τ') pulled back along a worldline.

    Class attributes describe what the response quadratures may assume:
    ``stationary`` (W depends on τ - τ' only), ``bounded`` (finite at every
    separation, coincidence included), ``regulated`` (the value depends on
    the iε regulator) and ``singular_lapses`` (lapses where the unregulated
    kernel is singular).
    """
    stationary: bool = False
    bounded: bool = False
    regulated: bool = False
    singular_lapses: tuple[float, ...] = ()

    def __init__(self, spec: Optional[CorrelatorSpec] = None, epsilon: Optional[float] = None):
        self.spec = spec
        if epsilon is None:
            epsilon = spec.epsilon if spec is not None else DEFAULT_EPSILON
        if not epsilon > 0:
            raise InvalidParameter(f"regulator epsilon must be positive, got {epsilon}")
        self.epsilon = epsilon
        self.logger = logging.getLogger(f"WProbe.{self.__class__.__name__}")

    @property
    def spectrum(self) -> Optional[SpectralDensity]:
        return None

    @property
    def has_reference(self) -> bool:
        return False

    @abstractmethod
    def evaluate(self, tau, tau_p, epsilon: Optional[float] = None) -> np.ndarray:
        """W(τ, τ') at the given regulator (the instance's one by default)."""

    def __call__(self, tau, tau_p) -> np.ndarray:
        return self.evaluate(tau, tau_p)

    def limit(self, tau: float, tau_p: float) -> complex:
        """ε → 0 value by Richardson extrapolation over the regulator ladder."""
        if not self.regulated:
            return complex(np.asarray(self.evaluate(tau, tau_p)))
        scale = abs(tau - tau_p)
        if scale == 0:
            raise InvalidParameter(
                f"{self.__class__.__name__} diverges at coincidence; no ε → 0 value"
            )
        return self._epsilon_limit(lambda eps: complex(np.asarray(self.evaluate(tau, tau_p, eps))), scale)

    def _epsilon_limit(self, func: Callable[[float], complex], scale: float) -> complex:
        ladder = [c * scale for c in EPSILON_LADDER]
        values = [func(eps) for eps in ladder]
        result = extrapolate_to_zero(ladder, values, power=1.0)
        if not np.isfinite(result.value):
            raise NumericalError(
                f"{self.__class__.__name__}: ε-extrapolation produced {result.value}",
                estimate=values[-1],
                residual=result.error
            )
        self.logger.debug(f"ε-ladder {ladder} -> {result.value} (±{result.error:.3g})")
        return result.value

    def reference(self, tau: float, tau_p: float) -> Optional[complex]:
        """Closed-form ε → 0 oracle, when one exists."""
        return None

    def with_epsilon(self, epsilon: float) -> "AbstractCorrelator":
        if not epsilon > 0:
            raise InvalidParameter(f"regulator epsilon must be positive, got {epsilon}")
        clone = copy.copy(self)
        clone.epsilon = epsilon
        return clone

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__}: epsilon={self.epsilon}>"


class StationaryCorrelator(AbstractCorrelator):
    """W(τ, τ') = W(τ - τ') with W(-s) = conj(W(s))."""
    stationary = True

    @abstractmethod
    def lapse(self, s, epsilon: Optional[float] = None) -> np.ndarray:
        """W(s) at the given regulator."""

    def evaluate(self, tau, tau_p, epsilon: Optional[float] = None) -> np.ndarray:
        return self.lapse(np.asarray(tau, dtype=float) - np.asarray(tau_p, dtype=float), epsilon)

    def limit_lapse(self, s: float) -> complex:
        return self.limit(s, 0.0)

    def reference_lapse(self, s: float) -> Optional[complex]:
        return None

    def reference(self, tau: float, tau_p: float) -> Optional[complex]:
        return self.reference_lapse(tau - tau_p)


class TwoPointFunction(AbstractCorrelator):
    """General correlator from a callable ``func(τ, τ')`` (or ``func(τ, τ', ε)`` when regulated)."""

    def __init__(
        self,
        func: Callable,
        *,
        bounded: bool = True,
        regulated: bool = False,
        singular_lapses: tuple[float, ...] = (),
        spec: Optional[CorrelatorSpec] = None,
        epsilon: Optional[float] = None
    ):
        super().__init__(spec, epsilon)
        self.func = func
        self.bounded = bounded
        self.regulated = regulated
        self.singular_lapses = tuple(singular_lapses)

    def evaluate(self, tau, tau_p, epsilon: Optional[float] = None) -> np.ndarray:
        if self.regulated:
            return np.asarray(self.func(tau, tau_p, epsilon or self.epsilon), dtype=complex)
        return np.asarray(self.func(tau, tau_p), dtype=complex)
