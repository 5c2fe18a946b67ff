"""
Spectral densities of stationary correlators.

A stationary pullback is W(s - iε) = ∫ρ(ω)e^{-iω(s-iε)}dω. Keeping ρ next to
the time-domain evaluator lets the response integrals run in frequency space,
where switching functions are known in closed form.
"""
from abc import ABC, abstractmethod
from collections.abc import Callable, Sequence
from typing import Optional
import math
import numpy as np
from scipy import special
from ..libs.quadrature import adaptive_quad, QuadResult
from ..exceptions import InvalidParameter


# e^{-x} below ~4e-18 is dropped from Boltzmann-suppressed tails.
BOLTZMANN_CUTOFF = 40.0


def dos_prefactor(dimension: int) -> float:
    """2^{1-d}π^{d/2}/Γ(d/2), the angular factor of the density of states."""
    return 2.0 ** (1 - dimension) * math.pi ** (dimension / 2) / special.gamma(dimension / 2)


def normalization_factor(dimension: int, normalization: str = "canonical") -> float:
    if str(normalization) == "canonical":
        return math.pi ** (-dimension)
    if str(normalization) == "as_printed":
        return (2.0 * math.pi) ** (-dimension)
    raise InvalidParameter(
        f"Unknown normalization {normalization!r}, expected 'canonical' or 'as_printed'"
    )


class SpectralDensity(ABC):
    """ρ(ω) split into discrete atoms and a continuous part.

    The continuous part may be integrated in a variable x other than ω
    (``omega_of(x)``, ``measure(x) = ρ(ω(x))·dω/dx``) to remove endpoint
    singularities of the density.
    """
    continuous: bool = True
    lower: float = -math.inf
    upper: float = math.inf
    feature_width: float = math.inf

    @property
    def atoms(self) -> tuple[tuple[float, float], ...]:
        return ()

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return ()

    @abstractmethod
    def density(self, omega) -> np.ndarray:
        pass

    def to_variable(self, omega: float) -> float:
        return omega

    def omega_of(self, x: np.ndarray) -> np.ndarray:
        return x

    def measure(self, x: np.ndarray) -> np.ndarray:
        return self.density(x)

    def integrate(
        self,
        weight: Callable[[np.ndarray], np.ndarray],
        lo: float,
        hi: float,
        *,
        breaks: Sequence[float] = (),
        max_width: Optional[float] = None,
        rtol: Optional[float] = None,
        max_depth: Optional[int] = None,
        order: Optional[int] = None
    ) -> QuadResult:
        """∫ρ(ω)·weight(ω)dω, atoms included, continuous part restricted to [lo, hi]."""
        atom_value = 0j
        for omega, mass in self.atoms:
            atom_value += mass * complex(np.asarray(weight(np.array([omega])))[0])
        lo, hi = max(lo, self.lower), min(hi, self.upper)
        if not self.continuous or hi <= lo:
            return QuadResult(atom_value, 0.0, abs(atom_value), len(self.atoms), 0, True)
        x_lo, x_hi = self.to_variable(lo), self.to_variable(hi)
        points = [x_lo, x_hi] + [
            self.to_variable(b) for b in (*self.breakpoints, *breaks) if lo < b < hi
        ]
        width = min(max_width or math.inf, self.feature_width)
        result = adaptive_quad(
            lambda x: self.measure(x) * weight(self.omega_of(x)),
            points,
            rtol=rtol,
            max_depth=max_depth,
            order=order,
            max_width=width if math.isfinite(width) else None
        )
        return QuadResult(
            value=result.value + atom_value,
            error=result.error,
            l1=result.l1 + abs(atom_value),
            evaluations=result.evaluations + len(self.atoms),
            panels=result.panels,
            converged=result.converged
        )


class DiscreteSpectrum(SpectralDensity):
    """Finite sum of atoms Σ m_k δ(ω - ω_k)."""
    continuous = False

    def __init__(self, atoms: Sequence[tuple[float, float]]):
        self._atoms = tuple((float(w), float(m)) for w, m in atoms if m != 0)

    @property
    def atoms(self) -> tuple[tuple[float, float], ...]:
        return self._atoms

    def density(self, omega) -> np.ndarray:
        return np.zeros_like(np.asarray(omega, dtype=float))


class ThermalSpectrum(SpectralDensity):
    """Massless d=3 field: ρ(ω) = ω/(4π²(1 - e^{-βω})); β = None is the vacuum ω/(4π²)Θ(ω)."""

    def __init__(self, beta: Optional[float] = None):
        if beta is not None and not beta > 0:
            raise InvalidParameter(f"inverse temperature must be positive, got {beta}")
        self.beta = beta
        if beta is None:
            self.lower = 0.0
        else:
            self.lower = -BOLTZMANN_CUTOFF / beta
            self.feature_width = 2.0 * math.pi / beta

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return (0.0,)

    def density(self, omega) -> np.ndarray:
        omega = np.asarray(omega, dtype=float)
        if self.beta is None:
            return np.where(omega > 0, omega, 0.0) / (4.0 * math.pi ** 2)
        x = self.beta * omega
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            planck = np.where(x == 0, 1.0, x / -np.expm1(-x))
        planck = np.where(np.isfinite(planck), planck, 0.0)
        return planck / (4.0 * math.pi ** 2 * self.beta)


class ModeSpectrum(SpectralDensity):
    """Vacuum mode sum ρ(ω) = D_d(ω, m)/(2ω)·N_d, integrated in momentum p = sqrt(ω² - m²)."""
    upper = math.inf

    def __init__(
        self,
        dimension: int,
        mass: float = 0.0,
        normalization: str = "canonical",
        ir_cutoff: Optional[float] = None
    ):
        self.dimension = dimension
        self.mass = mass
        self.p_min = float(ir_cutoff or 0.0)
        self.constant = dos_prefactor(dimension) * normalization_factor(dimension, normalization)
        self.lower = math.sqrt(mass ** 2 + self.p_min ** 2)
        if mass > 0:
            self.feature_width = mass

    def density(self, omega) -> np.ndarray:
        omega = np.asarray(omega, dtype=float)
        p = np.sqrt(np.maximum(omega ** 2 - self.mass ** 2, 0.0))
        with np.errstate(divide="ignore", invalid="ignore"):
            rho = 0.5 * self.constant * p ** (self.dimension - 2)
        return np.where(omega >= self.lower, rho, 0.0)

    def to_variable(self, omega: float) -> float:
        return math.sqrt(max(omega * omega - self.mass ** 2, 0.0))

    def omega_of(self, x: np.ndarray) -> np.ndarray:
        return np.sqrt(np.asarray(x) ** 2 + self.mass ** 2)

    def measure(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return 0.5 * self.constant * x ** (self.dimension - 1) / self.omega_of(x)
