"""
Switching functions.

Tooth profiles, nascent-delta families built from them and uniform combs of
teeth. Every switching function knows its Fourier transform
``F(ν) = ∫χ(τ)e^{-iντ}dτ`` and the windows outside which it is negligible,
which is all the response quadratures need.
"""
from abc import ABC, abstractmethod
from collections.abc import Sequence
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache
import math
import warnings
import numpy as np
from scipy import integrate, special
from .conf import TAIL_TOL, logging
from .exceptions import InvalidParameter, NumericalError, OverlapWarning


logger = logging.getLogger("WProbe.Switching")

# |φ̃(k)| below this is treated as zero when windowing Fourier integrals.
FOURIER_TOL = 1e-9
# composite Gauss-Legendre table used for the smooth_bump transform.
_BUMP_PANELS = 256
_BUMP_ORDER = 20
_BUMP_SCAN = np.arange(0.0, 1000.0, 0.5)
_CHUNK = 1024


class ShapeKind(str, Enum):
    GAUSSIAN = "gaussian"
    SMOOTH_BUMP = "smooth_bump"

    def __str__(self) -> str:
        return self.value


def _bump_kernel(u: np.ndarray, sharpness: float) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    out[inside] = np.exp(-sharpness / (1.0 - u[inside] ** 2))
    return out


@lru_cache(maxsize=8)
def _bump_constant(sharpness: float) -> float:
    area, _ = integrate.quad(
        lambda u: math.exp(-sharpness / (1.0 - u * u)),
        -1.0, 1.0, epsabs=0.0, epsrel=1e-13, limit=200
    )
    return 1.0 / area


@lru_cache(maxsize=8)
def _bump_table(sharpness: float) -> tuple[np.ndarray, np.ndarray]:
    """Positive half of a composite Gauss-Legendre table of φ on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(_BUMP_ORDER)
    edges = np.linspace(-1.0, 1.0, _BUMP_PANELS + 1)
    half = 0.5 * np.diff(edges)
    nodes = (0.5 * (edges[:-1] + edges[1:]))[:, None] + half[:, None] * x
    weights = half[:, None] * w
    nodes, weights = nodes.ravel(), weights.ravel()
    nodes = 0.5 * (nodes - nodes[::-1])
    weights = 0.5 * (weights + weights[::-1])
    positive = nodes > 0
    phi = _bump_constant(sharpness) * _bump_kernel(nodes, sharpness)
    area = float(np.sum(weights * phi))
    if abs(area - 1.0) > 1e-10:
        raise NumericalError(
            f"smooth_bump(sharpness={sharpness}) failed its unit-area check: {area!r}",
            estimate=area,
            residual=abs(area - 1.0)
        )
    # symmetric nodes contain no zero for an even node count.
    return nodes[positive], 2.0 * weights[positive] * phi[positive]


def _bump_fourier(k: np.ndarray, sharpness: float) -> np.ndarray:
    nodes, weights = _bump_table(sharpness)
    flat = np.abs(np.asarray(k, dtype=float)).ravel()
    out = np.empty_like(flat)
    for start in range(0, flat.size, _CHUNK):
        chunk = flat[start:start + _CHUNK]
        out[start:start + _CHUNK] = np.cos(np.outer(chunk, nodes)) @ weights
    return out.reshape(np.shape(k))


@lru_cache(maxsize=8)
def _bump_bandwidth(sharpness: float, tol: float) -> float:
    values = np.abs(_bump_fourier(_BUMP_SCAN, sharpness))
    above = np.nonzero(values >= tol)[0]
    if above.size == 0:
        return 1.0
    if above[-1] == _BUMP_SCAN.size - 1:
        logger.warning(
            f"smooth_bump transform still above {tol} at k={_BUMP_SCAN[-1]}"
        )
    return float(_BUMP_SCAN[above[-1]]) + 1.0


@dataclass(frozen=True)
class ToothShape:
    """Unit-area symmetric tooth profile φ(u).

    Attributes:
    ----------
    kind: ShapeKind: gaussian (2π)^{-1/2}e^{-u²/2} or smooth_bump C·exp(-s/(1-u²)) on [-1, 1].
    sharpness: float: the s of smooth_bump; ignored by gaussian.
    """
    kind: ShapeKind = ShapeKind.GAUSSIAN
    sharpness: float = 1.0

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", ShapeKind(self.kind))
        except ValueError as err:
            raise InvalidParameter(
                f"Unknown tooth shape {self.kind!r}, expected one of "
                f"{[k.value for k in ShapeKind]}"
            ) from err
        if not self.sharpness > 0:
            raise InvalidParameter(f"sharpness must be positive, got {self.sharpness}")
        if self.kind is ShapeKind.SMOOTH_BUMP:
            _bump_table(float(self.sharpness))

    def profile(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if self.kind is ShapeKind.GAUSSIAN:
            return np.exp(-0.5 * u * u) / math.sqrt(2.0 * math.pi)
        return _bump_constant(self.sharpness) * _bump_kernel(u, self.sharpness)

    def fourier(self, k) -> np.ndarray:
        """Real, even transform φ̃(k) = ∫φ(u)e^{-iku}du."""
        k = np.asarray(k, dtype=float)
        if self.kind is ShapeKind.GAUSSIAN:
            return np.exp(-0.5 * k * k)
        return _bump_fourier(k, self.sharpness)

    def halfwidth(self, tail_tol: float = TAIL_TOL) -> float:
        """Half-width u such that the mass outside [-u, u] is below ``tail_tol``."""
        if not 0 < tail_tol < 1:
            raise InvalidParameter(f"tail_tol must lie in (0, 1), got {tail_tol}")
        if self.kind is ShapeKind.GAUSSIAN:
            return math.sqrt(2.0) * float(special.erfcinv(tail_tol))
        return 1.0

    def bandwidth(self, tol: float = FOURIER_TOL) -> float:
        """Wavenumber beyond which |φ̃| stays below ``tol``."""
        if self.kind is ShapeKind.GAUSSIAN:
            return math.sqrt(2.0 * math.log(1.0 / tol))
        return _bump_bandwidth(float(self.sharpness), tol)

    def __str__(self) -> str:
        return f"<ToothShape: {self.kind}>"


GAUSSIAN = ToothShape(ShapeKind.GAUSSIAN)


class SwitchingFunction(ABC):
    """Real switching function χ(τ) with a known Fourier transform."""

    @abstractmethod
    def __call__(self, tau) -> np.ndarray:
        pass

    @abstractmethod
    def fourier(self, nu) -> np.ndarray:
        """F(ν) = ∫χ(τ)e^{-iντ}dτ."""

    @property
    @abstractmethod
    def centers(self) -> tuple[float, ...]:
        pass

    @property
    @abstractmethod
    def width(self) -> float:
        """Width η of the (widest) tooth."""

    @abstractmethod
    def windows(self, tail_tol: float = TAIL_TOL) -> list[tuple[float, float]]:
        pass

    @abstractmethod
    def bandwidth(self, tol: float = FOURIER_TOL) -> float:
        """Angular frequency beyond which |F| is negligible."""


@dataclass(frozen=True)
class NascentDelta(SwitchingFunction):
    """φ_η(τ) = φ((τ - center)/η)/η."""
    shape: ToothShape = field(default=GAUSSIAN)
    width: float = 0.1
    center: float = 0.0

    def __post_init__(self):
        if isinstance(self.shape, (str, ShapeKind)):
            object.__setattr__(self, "shape", ToothShape(self.shape))
        if not (self.width > 0 and math.isfinite(self.width)):
            raise InvalidParameter(f"tooth width must be positive, got {self.width}")
        if not math.isfinite(self.center):
            raise InvalidParameter(f"tooth center must be finite, got {self.center}")

    def __call__(self, tau) -> np.ndarray:
        return self.shape.profile((np.asarray(tau, dtype=float) - self.center) / self.width) / self.width

    def fourier(self, nu) -> np.ndarray:
        nu = np.asarray(nu, dtype=float)
        return np.exp(-1j * nu * self.center) * self.shape.fourier(self.width * nu)

    @property
    def centers(self) -> tuple[float, ...]:
        return (self.center,)

    def support(self, tail_tol: float = TAIL_TOL) -> tuple[float, float]:
        half = self.width * self.shape.halfwidth(tail_tol)
        return (self.center - half, self.center + half)

    def windows(self, tail_tol: float = TAIL_TOL) -> list[tuple[float, float]]:
        return [self.support(tail_tol)]

    def bandwidth(self, tol: float = FOURIER_TOL) -> float:
        return self.shape.bandwidth(tol) / self.width

    def with_width(self, width: float) -> "NascentDelta":
        return replace(self, width=width)

    def centered(self, center: float) -> "NascentDelta":
        return replace(self, center=center)


@dataclass(frozen=True)
class Comb(SwitchingFunction):
    """N identical teeth centered at start + l·lapse, l = 0..N-1.

    The template tooth provides shape and width; its own center is ignored.
    """
    tooth: NascentDelta = field(default_factory=NascentDelta)
    start: float = 0.0
    lapse: float = 1.0
    teeth: int = 2

    def __post_init__(self):
        if not (self.lapse > 0 and math.isfinite(self.lapse)):
            raise InvalidParameter(f"comb lapse must be positive, got {self.lapse}")
        if isinstance(self.teeth, bool) or int(self.teeth) != self.teeth or self.teeth < 1:
            raise InvalidParameter(f"teeth count must be a positive integer, got {self.teeth}")
        object.__setattr__(self, "teeth", int(self.teeth))
        lo, hi = self.tooth.centered(0.0).support()
        if self.teeth > 1 and self.lapse <= hi - lo:
            warnings.warn(
                f"Comb teeth overlap: lapse {self.lapse} <= tooth support width {hi - lo:.6g}",
                OverlapWarning,
                stacklevel=3
            )

    @property
    def width(self) -> float:
        return self.tooth.width

    @property
    def centers(self) -> tuple[float, ...]:
        return tuple(self.start + l * self.lapse for l in range(self.teeth))

    def tooth_at(self, index: int) -> NascentDelta:
        if not 0 <= index < self.teeth:
            raise InvalidParameter(f"tooth index {index} outside 0..{self.teeth - 1}")
        return self.tooth.centered(self.start + index * self.lapse)

    def teeth_list(self) -> list[NascentDelta]:
        return [self.tooth_at(l) for l in range(self.teeth)]

    def __call__(self, tau) -> np.ndarray:
        total = np.zeros_like(np.asarray(tau, dtype=float))
        for tooth in self.teeth_list():
            total = total + tooth(tau)
        return total

    def fourier(self, nu) -> np.ndarray:
        nu = np.asarray(nu, dtype=float)
        phases = sum(np.exp(-1j * nu * c) for c in self.centers)
        return phases * self.tooth.shape.fourier(self.width * nu)

    def windows(self, tail_tol: float = TAIL_TOL) -> list[tuple[float, float]]:
        return [tooth.support(tail_tol) for tooth in self.teeth_list()]

    def bandwidth(self, tol: float = FOURIER_TOL) -> float:
        return self.tooth.bandwidth(tol)

    def with_width(self, width: float) -> "Comb":
        return replace(self, tooth=self.tooth.with_width(width))

    def with_teeth(self, teeth: int) -> "Comb":
        return replace(self, teeth=teeth)

    def __str__(self) -> str:
        return f"<Comb: N={self.teeth}, start={self.start}, lapse={self.lapse}, eta={self.width}>"


def eval_tooth(delta: NascentDelta, tau) -> np.ndarray:
    if not delta.width > 0:
        raise InvalidParameter(f"tooth width must be positive, got {delta.width}")
    return delta(tau)


def eval_comb(comb: Comb, tau) -> np.ndarray:
    return comb(tau)


def tooth_support(delta: NascentDelta, tail_tol: float = TAIL_TOL) -> tuple[float, float]:
    """Smallest symmetric window holding all but ``tail_tol`` of the tooth's mass."""
    return delta.support(tail_tol)


def merge_windows(windows: Sequence[tuple[float, float]]) -> list[tuple[float, float]]:
    """Union of (lo, hi) windows as a sorted list of disjoint intervals."""
    merged: list[list[float]] = []
    for lo, hi in sorted(windows):
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [(lo, hi) for lo, hi in merged]
