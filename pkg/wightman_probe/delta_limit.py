"""
Delta-switching limit.

Non-local terms converge, as the teeth shrink, to sums of the Wightman
function sampled at the kick times; local terms diverge like η^{1-d} with a
coefficient fixed by the tooth shape alone.
"""
from collections.abc import Sequence
from dataclasses import dataclass, field, replace
from typing import Any, Optional
import math
import warnings
import numpy as np
from scipy import integrate
from .conf import SCALING_RESIDUAL_LIMIT, logging
from .correlators import (
    AbstractCorrelator,
    CorrelatorSpec,
    density_of_states,
    mode_integral_correlator
)
from .correlators.spectra import normalization_factor
from .exceptions import (
    ConvergenceWarning,
    InfraredDivergence,
    InvalidParameter,
    NumericalError,
    OverlapWarning,
    RefinementError,
    WProbeException
)
from .libs.quadrature import Extrapolation, extrapolate_to_zero
from .response import (
    DEFAULT_OPTIONS,
    Detector,
    QuadratureOptions,
    functional_estimate,
    nonlocal_estimate,
    parallel_map
)
from .switching import GAUSSIAN, Comb, NascentDelta, ToothShape


logger = logging.getLogger("WProbe.DeltaLimit")

__all__ = (
    "EtaSchedule",
    "EtaSweep",
    "ScalingReport",
    "density_of_states",
    "nonlocal_delta_limit",
    "richardson",
    "eta_sweep",
    "single_kick_coefficient",
    "scaling_experiment",
)

# observed orders below this fall back to first-order extrapolation.
_SECOND_ORDER_FLOOR = 1.5


@dataclass(frozen=True)
class EtaSchedule:
    """Strictly decreasing tooth widths with the extrapolation order.

    Attributes:
    ----------
    widths: tuple[float, ...]: η_i > 0, strictly decreasing, at least 3 entries.
    order: Optional[float]: power of η in the leading error; None validates 2 against the data.
    """
    widths: tuple[float, ...]
    order: Optional[float] = None

    def __post_init__(self):
        widths = tuple(float(w) for w in self.widths)
        if len(widths) < 3:
            raise InvalidParameter(f"an η schedule needs at least 3 widths, got {len(widths)}")
        if any(not (w > 0 and math.isfinite(w)) for w in widths):
            raise InvalidParameter(f"η widths must be positive and finite, got {widths}")
        if any(b >= a for a, b in zip(widths, widths[1:])):
            raise InvalidParameter(f"η widths must be strictly decreasing, got {widths}")
        if self.order is not None and self.order not in (1, 2):
            raise InvalidParameter(f"extrapolation order must be 1, 2 or None, got {self.order}")
        object.__setattr__(self, "widths", widths)

    @classmethod
    def geometric(cls, start: float = 0.2, ratio: float = 0.5, count: int = 4, order: Optional[float] = None) -> "EtaSchedule":
        if not 0 < ratio < 1:
            raise InvalidParameter(f"geometric ratio must lie in (0, 1), got {ratio}")
        return cls(tuple(start * ratio ** i for i in range(count)), order)

    @classmethod
    def spanning(cls, largest: float, smallest: float, count: int, order: Optional[float] = None) -> "EtaSchedule":
        """``count`` log-spaced widths from ``largest`` down to ``smallest``."""
        if not largest > smallest > 0:
            raise InvalidParameter(f"need largest > smallest > 0, got {largest}, {smallest}")
        return cls(tuple(np.geomspace(largest, smallest, count).tolist()), order)

    def relative_to(self, scale: float) -> "EtaSchedule":
        return EtaSchedule(tuple(w * scale for w in self.widths), self.order)

    def __len__(self) -> int:
        return len(self.widths)

    def __iter__(self):
        return iter(self.widths)


@dataclass
class EtaSweep:
    """Raw η sequence of a non-local sum and its η → 0 extrapolant."""
    etas: list[float]
    values: list[complex]
    extrapolated: complex
    error: float
    order: float
    observed_order: float
    monotone: bool
    reference: Optional[complex] = None
    reference_errors: Optional[list[float]] = None

    @property
    def error_ratios(self) -> list[float]:
        errors = self.reference_errors or [abs(v - self.extrapolated) for v in self.values]
        return [a / b if b > 0 else math.inf for a, b in zip(errors, errors[1:])]

    def to_dict(self) -> dict[str, Any]:
        return {
            "etas": self.etas,
            "values": self.values,
            "extrapolated": self.extrapolated,
            "error": self.error,
            "order": self.order,
            "observed_order": self.observed_order,
            "monotone": self.monotone,
            "reference": self.reference,
            "reference_errors": self.reference_errors,
        }

    def rows(self) -> list[tuple[float, float, float]]:
        return [(eta, v.real, v.imag) for eta, v in zip(self.etas, self.values)]


def _observed_order(etas: Sequence[float], values: Sequence[complex]) -> float:
    """Convergence order from the last three points of the sequence."""
    d1 = abs(values[-2] - values[-3])
    d2 = abs(values[-1] - values[-2])
    if d1 == 0 or d2 == 0:
        return math.nan
    scale = 0.5 * math.log(etas[-3] / etas[-1])
    return math.log(d1 / d2) / scale


def richardson(
    etas: Sequence[float],
    values: Sequence[complex],
    order: Optional[float] = None
) -> tuple[Extrapolation, float, float]:
    """Extrapolate to η = 0 and return (extrapolation, order used, observed order)."""
    observed = _observed_order(etas, values)
    if order is None:
        order = 2.0 if math.isnan(observed) or observed >= _SECOND_ORDER_FLOOR else 1.0
        if order == 1.0:
            logger.info(f"observed η order {observed:.3g}; extrapolating at first order")
    return extrapolate_to_zero(etas, values, power=order), float(order), observed


def nonlocal_delta_limit(
    teeth: int,
    zeta: float,
    tau0: float,
    omega: float,
    corr: AbstractCorrelator
) -> complex:
    """Σ_{m=1}^{N-1} e^{-iΩζm} Σ_{n=0}^{N-1-m} W(τ₀ + (n+m)ζ, τ₀ + nζ), straight from the correlator."""
    if teeth < 1:
        raise InvalidParameter(f"teeth count must be >= 1, got {teeth}")
    if not zeta > 0:
        raise InvalidParameter(f"lapse must be positive, got {zeta}")
    total = 0j
    for m in range(1, teeth):
        inner = 0j
        for n in range(teeth - m):
            try:
                inner += corr.limit(tau0 + (n + m) * zeta, tau0 + n * zeta)
            except NumericalError as err:
                raise err.__class__(
                    f"correlator failed at pair (m={m}, n={n}): {err.message}",
                    estimate=err.estimate,
                    residual=err.residual,
                    m=m,
                    n=n
                ) from err
            except WProbeException as err:
                raise err.__class__(
                    f"correlator failed at pair (m={m}, n={n}): {err.message}", m=m, n=n
                ) from err
        total += np.exp(-1j * omega * zeta * m) * inner
    return complex(total)


def eta_sweep(
    comb: Comb,
    det: Detector,
    corr: AbstractCorrelator,
    schedule: EtaSchedule,
    options: Optional[QuadratureOptions] = None,
    reference: Optional[complex] = None
) -> EtaSweep:
    """Non-local sum C(η) over the schedule, extrapolated to η → 0."""
    options = options or DEFAULT_OPTIONS
    inner = replace(options, workers=1)
    etas = list(schedule.widths)
    with warnings.catch_warnings():
        # wide teeth of a sweep may overlap; only the limit matters here.
        warnings.simplefilter("ignore", OverlapWarning)
        combs = [comb.with_width(eta) for eta in etas]
    estimates = parallel_map(
        lambda c: nonlocal_estimate(c, det.gap, corr, inner),
        combs,
        options.workers
    )
    values = [e.value for e in estimates]
    result, order, observed = richardson(etas, values, schedule.order)
    errors = [abs(v - (reference if reference is not None else result.value)) for v in values]
    monotone = all(b <= a * (1 + 1e-9) + 1e-15 for a, b in zip(errors, errors[1:]))
    if not monotone:
        warnings.warn(
            f"η-sweep errors are not monotone: {errors}",
            ConvergenceWarning,
            stacklevel=2
        )
        logger.warning(f"non-monotone η sequence for {comb}")
    logger.debug(f"η-sweep {etas} -> {result.value} (±{result.error:.3g}, order {order})")
    return EtaSweep(
        etas=etas,
        values=values,
        extrapolated=result.value,
        error=result.error + max(e.error for e in estimates),
        order=order,
        observed_order=observed,
        monotone=monotone,
        reference=reference,
        reference_errors=errors if reference is not None else None
    )


def single_kick_coefficient(
    d: int,
    shape: ToothShape = GAUSSIAN,
    normalization: str = "as_printed"
) -> float:
    """c_d = ∫₀^∞ ρ_d(ω, 0)·|φ̃(ω)|² dω, so that P⁺/λ² ≈ c_d·η^{1-d} for a single tooth."""
    if d == 1:
        raise InfraredDivergence(
            "d=1 single kick: the divergence is not only ultraviolet but also an infrared divergence"
        )
    if d not in (2, 3):
        raise InvalidParameter(f"single-kick asymptotics need d in {{2, 3}}, got {d}")
    norm = normalization_factor(d, normalization)
    upper = shape.bandwidth(1e-12)

    def integrand(w: float) -> float:
        return density_of_states(d, 0.0, w) / (2.0 * w) * norm * float(shape.fourier(w)) ** 2

    value, abserr = integrate.quad(integrand, 0.0, upper, epsabs=0.0, epsrel=1e-12, limit=400)
    if not abserr <= 1e-8 * abs(value):
        raise RefinementError(
            f"single-kick coefficient did not converge for {shape} (d={d})",
            estimate=value,
            residual=abserr
        )
    return float(value)


@dataclass
class ScalingReport:
    """Single-tooth probabilities across η and their log-log fit.

    ``slope`` comes from a fit of ln P on (1, ln η, η, η²), which absorbs the
    gap and mass corrections; ``raw_slope`` is the plain two-parameter fit.
    ``coefficient`` is fitted with the slope pinned at 1 - d.
    """
    dimension: int
    etas: list[float]
    probabilities: list[float]
    slope: float
    raw_slope: float
    coefficient: float
    theoretical_slope: float
    theoretical_coefficient: float
    r_squared: float
    residual: float
    normalization: str
    mass: float = 0.0
    gap: float = 1.0
    inconclusive: bool = False
    errors: list[float] = field(default_factory=list)

    @property
    def coefficient_ratio(self) -> float:
        return self.coefficient / self.theoretical_coefficient

    def to_dict(self) -> dict[str, Any]:
        return {
            "dimension": self.dimension,
            "etas": self.etas,
            "probabilities": self.probabilities,
            "errors": self.errors,
            "slope": self.slope,
            "raw_slope": self.raw_slope,
            "theoretical_slope": self.theoretical_slope,
            "coefficient": self.coefficient,
            "theoretical_coefficient": self.theoretical_coefficient,
            "coefficient_ratio": self.coefficient_ratio,
            "r_squared": self.r_squared,
            "residual": self.residual,
            "normalization": self.normalization,
            "mass": self.mass,
            "gap": self.gap,
            "inconclusive": self.inconclusive,
        }


def _lstsq(columns: list[np.ndarray], y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    design = np.column_stack(columns)
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    return coef, y - design @ coef


def scaling_experiment(
    d: int,
    shape: ToothShape = GAUSSIAN,
    det: Optional[Detector] = None,
    schedule: Optional[EtaSchedule] = None,
    mass: float = 0.0,
    normalization: str = "as_printed",
    options: Optional[QuadratureOptions] = None
) -> ScalingReport:
    """Fit ln(P⁺/λ²) of a single tooth against ln η on the inertial vacuum."""
    if d == 1:
        raise InfraredDivergence(
            "d=1 scaling: the single-kick probability has an infrared divergence"
        )
    if d not in (2, 3):
        raise InvalidParameter(f"scaling experiments need d in {{2, 3}}, got {d}")
    det = det or Detector(gap=1.0, coupling=1.0)
    schedule = schedule or EtaSchedule.spanning(0.1, 0.01, 8)
    options = options or DEFAULT_OPTIONS
    corr = mode_integral_correlator(
        CorrelatorSpec(mass=mass, dimension=d, normalization=normalization)
    )
    inner = replace(options, workers=1)
    etas = list(schedule.widths)
    estimates = parallel_map(
        lambda eta: functional_estimate(
            NascentDelta(shape, eta), NascentDelta(shape, eta), det.gap, corr, inner
        ),
        etas,
        options.workers
    )
    probabilities = [e.value.real for e in estimates]
    if min(probabilities) <= 0:
        raise NumericalError(
            f"non-positive single-tooth probability in scaling run: {probabilities}",
            estimate=min(probabilities)
        )
    eta = np.asarray(etas)
    log_eta = np.log(eta)
    log_p = np.log(probabilities)
    ones = np.ones_like(eta)
    coef, resid = _lstsq([ones, log_eta, eta, eta * eta], log_p)
    raw, _ = _lstsq([ones, log_eta], log_p)
    pinned, _ = _lstsq([ones, eta, eta * eta], log_p - (1 - d) * log_eta)
    total = float(np.sum((log_p - log_p.mean()) ** 2))
    r_squared = 1.0 - float(np.sum(resid ** 2)) / total if total > 0 else 1.0
    residual = float(np.sqrt(np.mean(resid ** 2)))
    inconclusive = residual > SCALING_RESIDUAL_LIMIT
    if inconclusive:
        logger.warning(f"d={d} scaling fit residual {residual:.3g} above {SCALING_RESIDUAL_LIMIT}")
    report = ScalingReport(
        dimension=d,
        etas=etas,
        probabilities=probabilities,
        slope=float(coef[1]),
        raw_slope=float(raw[1]),
        coefficient=float(math.exp(pinned[0])),
        theoretical_slope=float(1 - d),
        theoretical_coefficient=single_kick_coefficient(d, shape, normalization),
        r_squared=r_squared,
        residual=residual,
        normalization=str(normalization),
        mass=mass,
        gap=det.gap,
        inconclusive=inconclusive,
        errors=[e.error for e in estimates]
    )
    logger.debug(f"d={d} scaling: slope {report.slope:.4f}, coefficient {report.coefficient:.6g}")
    return report
