"""
Wightman reconstruction protocol.

Two kicks separated by ζ give the statistic

    S = (P_total - P_first - P_second) / (2λ²) = Re Σ W^Ω[ξ₁, ξ₀],

which tends to Re(e^{-iΩζ}W(τ₀ + ζ, τ₀)) as the kicks sharpen. Tuning the gap
so that Ωζ = 2πk reads off Re W; Ωζ = 2πk' + π/2 reads off Im W.
"""
from collections.abc import Sequence
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path, PurePath
from typing import Any, Optional, Union
import csv
import math
import warnings
from .conf import CANCELLATION_FACTOR, DEFAULT_ETA_FRACTIONS, logging
from .correlators import AbstractCorrelator
from .delta_limit import EtaSchedule, richardson
from .exceptions import InvalidParameter, OverlapWarning, WProbeException
from .response import (
    DEFAULT_OPTIONS,
    QuadratureOptions,
    functional_estimate,
    parallel_map
)
from .switching import GAUSSIAN, Comb, NascentDelta, ToothShape


logger = logging.getLogger("WProbe.Protocol")

CSV_COLUMNS = ("zeta", "re_w", "im_w", "re_ref", "im_ref", "abs_err", "rel_err", "flag")


class SyncMode(str, Enum):
    EVEN_CYCLES = "even_cycles"
    QUARTER_CYCLE = "quarter_cycle"

    def __str__(self) -> str:
        return self.value


class Route(str, Enum):
    MEASURED = "measured"
    DIRECT = "direct"

    def __str__(self) -> str:
        return self.value


def statistic_S(p_total: float, p_first: float, p_second: float, coupling: float) -> float:
    """S = (P_total - P_first - P_second)/(2λ²)."""
    if not coupling > 0:
        raise InvalidParameter(f"coupling must be positive, got {coupling}")
    return (p_total - p_first - p_second) / (2.0 * coupling ** 2)


def statistic_S_stationary(p_total: float, p_single: float, coupling: float) -> float:
    """S for identical kicks on a stationary correlator, where P_first = P_second."""
    return statistic_S(p_total, p_single, p_single, coupling)


def synchronize_gap(zeta: float, k: int, mode: Union[SyncMode, str] = SyncMode.EVEN_CYCLES) -> float:
    if not (zeta > 0 and math.isfinite(zeta)):
        raise InvalidParameter(f"lapse must be positive, got {zeta}")
    try:
        mode = SyncMode(mode)
    except ValueError as err:
        raise InvalidParameter(
            f"Unknown synchronization {mode!r}, expected one of {[m.value for m in SyncMode]}"
        ) from err
    if isinstance(k, bool) or int(k) != k:
        raise InvalidParameter(f"cycle count must be an integer, got {k}")
    if mode is SyncMode.EVEN_CYCLES:
        if k < 1:
            raise InvalidParameter(f"even_cycles needs k >= 1, got {k}")
        return 2.0 * math.pi * k / zeta
    if k < 0:
        raise InvalidParameter(f"quarter_cycle needs k >= 0, got {k}")
    return (2.0 * math.pi * k + 0.5 * math.pi) / zeta


@dataclass(frozen=True)
class ProtocolConfig:
    """Two-kick experiment at one lapse.

    Attributes:
    ----------
    lapse: float: ζ > 0, separation of the two kicks.
    start: float: τ₀, center of the first kick.
    eta_fractions: tuple[float, ...]: tooth widths as fractions of ζ (decreasing).
    k_even: int: cycles of the Re W run (>= 1).
    k_quarter: int: cycles of the Im W run (>= 0).
    coupling: float: λ > 0.
    route: Route: ``measured`` subtracts three probabilities, ``direct`` uses the non-local term.
    shape: ToothShape: tooth profile.
    order: Optional[float]: η extrapolation order (None validates second order).
    """
    lapse: float = 1.0
    start: float = 0.0
    eta_fractions: tuple[float, ...] = DEFAULT_ETA_FRACTIONS
    k_even: int = 1
    k_quarter: int = 1
    coupling: float = 0.01
    route: Route = Route.MEASURED
    shape: ToothShape = GAUSSIAN
    order: Optional[float] = None

    def __post_init__(self):
        if not (self.lapse > 0 and math.isfinite(self.lapse)):
            raise InvalidParameter(f"lapse must be positive, got {self.lapse}")
        if not math.isfinite(self.start):
            raise InvalidParameter(f"start must be finite, got {self.start}")
        if not self.coupling > 0:
            raise InvalidParameter(f"coupling must be positive, got {self.coupling}")
        try:
            object.__setattr__(self, "route", Route(self.route))
        except ValueError as err:
            raise InvalidParameter(
                f"Unknown route {self.route!r}, expected one of {[r.value for r in Route]}"
            ) from err
        if isinstance(self.shape, str):
            object.__setattr__(self, "shape", ToothShape(self.shape))
        object.__setattr__(self, "eta_fractions", tuple(float(f) for f in self.eta_fractions))
        synchronize_gap(self.lapse, self.k_even, SyncMode.EVEN_CYCLES)
        synchronize_gap(self.lapse, self.k_quarter, SyncMode.QUARTER_CYCLE)
        EtaSchedule(self.eta_fractions, self.order)

    @property
    def gap_even(self) -> float:
        return synchronize_gap(self.lapse, self.k_even, SyncMode.EVEN_CYCLES)

    @property
    def gap_quarter(self) -> float:
        return synchronize_gap(self.lapse, self.k_quarter, SyncMode.QUARTER_CYCLE)

    @property
    def schedule(self) -> EtaSchedule:
        return EtaSchedule(self.eta_fractions, self.order).relative_to(self.lapse)

    def comb(self, eta: float) -> Comb:
        with warnings.catch_warnings():
            # tails of the widest teeth touch; the schedule extrapolates that away.
            warnings.simplefilter("ignore", OverlapWarning)
            return Comb(NascentDelta(self.shape, eta), start=self.start, lapse=self.lapse, teeth=2)

    def with_lapse(self, lapse: float) -> "ProtocolConfig":
        return replace(self, lapse=lapse)


@dataclass
class GapRun:
    """S across the η schedule for one synchronized gap."""
    gap: float
    etas: list[float]
    values: list[float]
    signals: list[float]
    errors: list[float]
    extrapolated: float
    extrapolation_error: float
    order: float
    observed_order: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "gap": self.gap,
            "etas": self.etas,
            "s_values": self.values,
            "signals": self.signals,
            "quadrature_errors": self.errors,
            "extrapolated": self.extrapolated,
            "extrapolation_error": self.extrapolation_error,
            "order": self.order,
            "observed_order": self.observed_order,
        }


@dataclass
class ReconstructionEntry:
    zeta: float
    value: complex
    reference: Optional[complex]
    error: float
    route: Route
    even: Optional[GapRun] = None
    quarter: Optional[GapRun] = None
    precision_limited: bool = False
    failure: Optional[str] = None

    @property
    def abs_err(self) -> float:
        if self.reference is None:
            return math.nan
        return abs(self.value - self.reference)

    @property
    def rel_err(self) -> float:
        if self.reference is None or self.reference == 0:
            return math.nan
        return self.abs_err / abs(self.reference)

    @property
    def flag(self) -> str:
        flags = []
        if self.failure:
            flags.append(f"failed: {self.failure}")
        if self.precision_limited:
            flags.append("precision_limited")
        if self.reference is None and not self.failure:
            flags.append("no_reference")
        return ";".join(flags)

    def row(self) -> list[str]:
        ref = self.reference if self.reference is not None else complex(math.nan, math.nan)
        numbers = (self.zeta, self.value.real, self.value.imag, ref.real, ref.imag, self.abs_err, self.rel_err)
        return [repr(float(x)) for x in numbers] + [self.flag]

    def to_dict(self) -> dict[str, Any]:
        return {
            "zeta": self.zeta,
            "value": self.value,
            "reference": self.reference,
            "abs_err": self.abs_err,
            "rel_err": self.rel_err,
            "error": self.error,
            "route": str(self.route),
            "precision_limited": self.precision_limited,
            "flag": self.flag,
            "even_cycles": self.even.to_dict() if self.even else None,
            "quarter_cycle": self.quarter.to_dict() if self.quarter else None,
        }


@dataclass
class ReconstructionResult:
    entries: list[ReconstructionEntry] = field(default_factory=list)
    route: Route = Route.MEASURED

    @property
    def values(self) -> list[complex]:
        return [e.value for e in self.entries]

    @property
    def failed(self) -> list[ReconstructionEntry]:
        return [e for e in self.entries if e.failure]

    @property
    def max_rel_err(self) -> float:
        errors = [e.rel_err for e in self.entries if not math.isnan(e.rel_err)]
        return max(errors) if errors else math.nan

    def to_csv(self, path: Union[str, PurePath]) -> Path:
        path = Path(path)
        with path.open("w", newline="") as fp:
            writer = csv.writer(fp, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for entry in self.entries:
                writer.writerow(entry.row())
        return path

    def to_dict(self) -> dict[str, Any]:
        return {
            "route": str(self.route),
            "max_rel_err": self.max_rel_err,
            "entries": [e.to_dict() for e in self.entries],
        }


def _signal(
    comb: Comb,
    gap: float,
    coupling: float,
    route: Route,
    corr: AbstractCorrelator,
    options: QuadratureOptions
) -> tuple[float, float, float]:
    """(P_total - P_first - P_second, its error estimate, S) for one comb."""
    lam2 = coupling ** 2
    first, second = comb.tooth_at(0), comb.tooth_at(1)
    if route is Route.DIRECT:
        est = functional_estimate(second, first, gap, corr, options)
        signal = 2.0 * lam2 * est.value.real
        return signal, 2.0 * lam2 * est.error, est.value.real
    total = functional_estimate(comb, comb, gap, corr, options)
    p1 = functional_estimate(first, first, gap, corr, options)
    p2 = functional_estimate(second, second, gap, corr, options)
    p_total, p_first, p_second = (lam2 * e.value.real for e in (total, p1, p2))
    error = lam2 * (total.error + p1.error + p2.error)
    return p_total - p_first - p_second, error, statistic_S(p_total, p_first, p_second, coupling)


def _gap_run(
    cfg: ProtocolConfig,
    gap: float,
    corr: AbstractCorrelator,
    options: QuadratureOptions
) -> GapRun:
    etas = list(cfg.schedule.widths)
    signals, errors, values = [], [], []
    for eta in etas:
        signal, error, s = _signal(cfg.comb(eta), gap, cfg.coupling, cfg.route, corr, options)
        signals.append(signal)
        errors.append(error)
        values.append(s)
    result, order, observed = richardson(etas, values, cfg.order)
    return GapRun(
        gap=gap,
        etas=etas,
        values=values,
        signals=signals,
        errors=errors,
        extrapolated=result.value.real,
        extrapolation_error=result.error,
        order=order,
        observed_order=observed
    )


def reconstruct_point(
    cfg: ProtocolConfig,
    corr: AbstractCorrelator,
    options: Optional[QuadratureOptions] = None
) -> ReconstructionEntry:
    """Both synchronized runs at the configured lapse, combined into S_even + i·S_quarter."""
    options = options or DEFAULT_OPTIONS
    inner = replace(options, workers=1)
    even, quarter = parallel_map(
        lambda gap: _gap_run(cfg, gap, corr, inner),
        (cfg.gap_even, cfg.gap_quarter),
        options.workers
    )
    value = complex(even.extrapolated, quarter.extrapolated)
    scale = 2.0 * cfg.coupling ** 2
    error = (
        even.extrapolation_error + quarter.extrapolation_error
        + (even.errors[-1] + quarter.errors[-1]) / scale
    )
    signal = max(abs(even.signals[-1]), abs(quarter.signals[-1]))
    noise = max(even.errors[-1], quarter.errors[-1])
    precision_limited = cfg.route is Route.MEASURED and signal < CANCELLATION_FACTOR * noise
    if precision_limited:
        logger.warning(
            f"ζ={cfg.lapse}: probability difference {signal:.3g} is within "
            f"{CANCELLATION_FACTOR:g}x the quadrature error {noise:.3g}"
        )
    reference = None
    if corr.has_reference:
        reference = corr.reference(cfg.start + cfg.lapse, cfg.start)
    logger.debug(f"ζ={cfg.lapse}: W ≈ {value} (reference {reference})")
    return ReconstructionEntry(
        zeta=cfg.lapse,
        value=value,
        reference=reference,
        error=error,
        route=cfg.route,
        even=even,
        quarter=quarter,
        precision_limited=precision_limited
    )


def reconstruct_wightman(
    cfg: ProtocolConfig,
    corr: AbstractCorrelator,
    options: Optional[QuadratureOptions] = None
) -> complex:
    """Estimate of W(τ₀ + ζ, τ₀) from the two synchronized experiments."""
    return reconstruct_point(cfg, corr, options).value


def reconstruction_sweep(
    zeta_grid: Sequence[float],
    cfg: ProtocolConfig,
    corr: AbstractCorrelator,
    options: Optional[QuadratureOptions] = None,
    csv_path: Optional[Union[str, PurePath]] = None
) -> ReconstructionResult:
    """Reconstruct W over a grid of lapses; failing points are recorded, not raised."""
    grid = [float(z) for z in zeta_grid]
    if not grid:
        raise InvalidParameter("ζ grid is empty")
    if any(not z > 0 for z in grid):
        raise InvalidParameter(f"ζ grid must be positive, got {grid}")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidParameter(f"ζ grid must be sorted and strictly increasing, got {grid}")
    options = options or DEFAULT_OPTIONS

    def point(zeta: float) -> ReconstructionEntry:
        try:
            return reconstruct_point(cfg.with_lapse(zeta), corr, replace(options, workers=1))
        except WProbeException as err:
            logger.error(f"reconstruction failed at ζ={zeta}: {err}")
            return ReconstructionEntry(
                zeta=zeta,
                value=complex(math.nan, math.nan),
                reference=None,
                error=math.nan,
                route=cfg.route,
                failure=str(err)
            )

    result = ReconstructionResult(parallel_map(point, grid, options.workers), cfg.route)
    if csv_path is not None:
        result.to_csv(csv_path)
    return result
