"""
Worldlines in flat spacetime.

Natural units (c = 1). Accelerated motion runs along the first spatial axis;
the remaining coordinates of an Event are zero-padded.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union
import math
import numpy as np
from .exceptions import DomainError, InvalidParameter


ArrayLike = Union[float, np.ndarray]

# relative slack before a numerically null separation is called spacelike.
NULL_TOLERANCE = 1e-12


class WorldlineKind(str, Enum):
    INERTIAL = "inertial"
    UNIFORMLY_ACCELERATED = "uniformly_accelerated"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Event:
    """Spacetime point; ``x`` has shape (d,) or (d, n) for vectorized events."""
    t: ArrayLike
    x: np.ndarray

    @property
    def dimension(self) -> int:
        return int(np.shape(self.x)[0])


@dataclass(frozen=True)
class Worldline:
    """Timelike worldline parametrized by proper time.

    Attributes:
    ----------
    kind: WorldlineKind: inertial or uniformly_accelerated.
    dimension: int: number of spatial dimensions d >= 1.
    velocity: tuple: inertial velocity (a scalar means motion along the first axis).
    offset: tuple: inertial position at τ = 0.
    acceleration: float: proper acceleration a > 0 of the accelerated kind.
    """
    kind: WorldlineKind = WorldlineKind.INERTIAL
    dimension: int = 3
    velocity: tuple = field(default=(0.0,))
    offset: tuple = field(default=(0.0,))
    acceleration: Optional[float] = None

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", WorldlineKind(self.kind))
        except ValueError as err:
            raise InvalidParameter(
                f"Unknown trajectory kind {self.kind!r}, expected one of "
                f"{[k.value for k in WorldlineKind]}"
            ) from err
        if int(self.dimension) != self.dimension or self.dimension < 1:
            raise InvalidParameter(f"spatial dimension must be >= 1, got {self.dimension}")
        d = int(self.dimension)
        object.__setattr__(self, "dimension", d)
        object.__setattr__(self, "velocity", self._pad(self.velocity, "velocity"))
        object.__setattr__(self, "offset", self._pad(self.offset, "offset"))
        if self.kind is WorldlineKind.INERTIAL:
            if float(np.dot(self.velocity, self.velocity)) >= 1.0:
                raise InvalidParameter(f"inertial speed must be below 1, got {self.velocity}")
        elif self.acceleration is None or not self.acceleration > 0:
            raise InvalidParameter(
                f"uniformly accelerated worldline needs a > 0, got {self.acceleration}"
            )

    def _pad(self, value, name: str) -> tuple:
        values = np.atleast_1d(np.asarray(value, dtype=float))
        if values.size > self.dimension:
            raise InvalidParameter(f"{name} has more than {self.dimension} components")
        padded = np.zeros(self.dimension)
        padded[:values.size] = values
        return tuple(float(v) for v in padded)

    @property
    def gamma(self) -> float:
        return 1.0 / math.sqrt(1.0 - float(np.dot(self.velocity, self.velocity)))

    @classmethod
    def inertial(cls, velocity=0.0, offset=0.0, dimension: int = 3) -> "Worldline":
        return cls(WorldlineKind.INERTIAL, dimension, velocity=velocity, offset=offset)

    @classmethod
    def accelerated(cls, acceleration: float, dimension: int = 3) -> "Worldline":
        return cls(WorldlineKind.UNIFORMLY_ACCELERATED, dimension, acceleration=acceleration)


def position(w: Worldline, tau: ArrayLike) -> Event:
    tau = np.asarray(tau, dtype=float)
    if w.kind is WorldlineKind.INERTIAL:
        g = w.gamma
        v = np.asarray(w.velocity)
        x0 = np.asarray(w.offset)
        x = x0.reshape((-1,) + (1,) * tau.ndim) + g * np.multiply.outer(v, tau)
        return Event(t=g * tau, x=x)
    a = w.acceleration
    x = np.zeros((w.dimension,) + tau.shape)
    x[0] = np.cosh(a * tau) / a
    return Event(t=np.sinh(a * tau) / a, x=x)


def interval(e1: Event, e2: Event) -> ArrayLike:
    """Signed proper interval sqrt((t1-t2)² - |x1-x2|²)·sign(t1-t2)."""
    dt = np.asarray(e1.t, dtype=float) - np.asarray(e2.t, dtype=float)
    dx = np.asarray(e1.x, dtype=float) - np.asarray(e2.x, dtype=float)
    spatial = np.sum(dx * dx, axis=0)
    squared = dt * dt - spatial
    scale = dt * dt + spatial
    if np.any(squared < -NULL_TOLERANCE * scale):
        raise DomainError(
            "spacelike separated events have no proper interval",
            separation=float(np.min(squared))
        )
    result = np.sqrt(np.maximum(squared, 0.0)) * np.sign(dt)
    return float(result) if np.ndim(result) == 0 else result


def lapse_interval(w: Worldline, s: ArrayLike) -> ArrayLike:
    """Proper interval between x(τ + s) and x(τ); depends on s only."""
    s = np.asarray(s, dtype=float)
    if w.kind is WorldlineKind.INERTIAL:
        result = s
    else:
        a = w.acceleration
        result = 2.0 * np.sinh(0.5 * a * s) / a
    return float(result) if np.ndim(result) == 0 else result


def four_velocity_norm(w: Worldline, tau: ArrayLike, step: float = 1e-4) -> ArrayLike:
    """ẋ·ẋ (mostly-plus signature) by central differences; -1 on a proper-time worldline."""
    ahead = position(w, np.asarray(tau, dtype=float) + step)
    behind = position(w, np.asarray(tau, dtype=float) - step)
    vt = (np.asarray(ahead.t) - np.asarray(behind.t)) / (2 * step)
    vx = (ahead.x - behind.x) / (2 * step)
    result = -vt * vt + np.sum(vx * vx, axis=0)
    return float(result) if np.ndim(result) == 0 else result
