"""
Leading-order detector response.

The bi-functional

    W^Ω[f, g] = ∬ f(τ) g(τ') e^{-iΩ(τ-τ')} W(τ, τ') dτ dτ'

gives the excitation probability λ²W^Ω[χ, χ] of a two-level detector with
switching χ. For a comb χ = Σ ξ_n it splits into local terms λ²W^Ω[ξ_n, ξ_n]
and the non-local sum C = Σ_{m>=1} Σ_n W^Ω[ξ_{n+m}, ξ_n].
"""
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Optional
import math
import warnings
import numpy as np
from .conf import (
    EPSILON_LADDER,
    GL_ORDER,
    PERTURBATIVE_LIMIT,
    QUAD_MAX_DEPTH,
    QUAD_RTOL,
    TAIL_TOL,
    logging
)
from .correlators.abstract import AbstractCorrelator
from .exceptions import (
    ContractViolation,
    InvalidParameter,
    NotSupported,
    PerturbativityWarning,
    QuadratureError
)
from .libs.quadrature import adaptive_quad, extrapolate_to_zero, graded_breakpoints
from .switching import Comb, SwitchingFunction, merge_windows


logger = logging.getLogger("WProbe.Response")

METHODS = ("auto", "spectral", "tensor")


@dataclass(frozen=True)
class Detector:
    """Two-level monopole detector.

    Attributes:
    ----------
    gap: float: energy gap Ω (negative values give the deexcitation probability).
    coupling: float: coupling strength λ >= 0.
    """
    gap: float = 1.0
    coupling: float = 0.01

    def __post_init__(self):
        if not math.isfinite(self.gap):
            raise InvalidParameter(f"detector gap must be finite, got {self.gap}")
        if not (self.coupling >= 0 and math.isfinite(self.coupling)):
            raise InvalidParameter(f"coupling must be a finite number >= 0, got {self.coupling}")


@dataclass(frozen=True)
class QuadratureOptions:
    rtol: float = QUAD_RTOL
    max_depth: int = QUAD_MAX_DEPTH
    order: int = GL_ORDER
    tail_tol: float = TAIL_TOL
    workers: int = 1
    method: str = "auto"

    def __post_init__(self):
        if self.method not in METHODS:
            raise InvalidParameter(f"Unknown quadrature method {self.method!r}, expected one of {METHODS}")
        if not self.rtol > 0:
            raise InvalidParameter(f"quadrature tolerance must be positive, got {self.rtol}")
        if self.max_depth < 0:
            raise InvalidParameter(f"max_depth must be >= 0, got {self.max_depth}")
        if self.workers < 1:
            raise InvalidParameter(f"workers must be >= 1, got {self.workers}")


DEFAULT_OPTIONS = QuadratureOptions()


@dataclass(frozen=True)
class Estimate:
    value: complex
    error: float
    route: str


@dataclass
class ProbeOutcome:
    """Excitation probability of a comb and its local/non-local decomposition."""
    total: float
    local_terms: list[float]
    nonlocal_c: complex
    error: float
    coupling: float
    gap: float
    direct_total: Optional[float] = None
    route: str = field(default="auto")

    @property
    def decomposed_total(self) -> float:
        return math.fsum(self.local_terms) + 2.0 * self.coupling ** 2 * self.nonlocal_c.real

    @property
    def p_over_lambda2(self) -> float:
        if self.coupling == 0:
            return math.nan
        return self.total / self.coupling ** 2

    def to_dict(self) -> dict[str, Any]:
        return {
            "total": self.total,
            "p_over_lambda2": self.p_over_lambda2,
            "local_terms": list(self.local_terms),
            "nonlocal_c": self.nonlocal_c,
            "error": self.error,
            "coupling": self.coupling,
            "gap": self.gap,
            "direct_total": self.direct_total,
            "route": self.route,
        }


def parallel_map(func: Callable, items: Iterable, workers: int = 1) -> list:
    """Order-preserving map; results do not depend on the worker count."""
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))


def _spectral_functional(
    f: SwitchingFunction,
    g: SwitchingFunction,
    omega: float,
    corr: AbstractCorrelator,
    options: QuadratureOptions
) -> Estimate:
    spectrum = corr.spectrum

    def weight(w: np.ndarray) -> np.ndarray:
        nu = np.asarray(w) + omega
        return f.fourier(nu) * np.conj(g.fourier(nu))

    reach = min(f.bandwidth(), g.bandwidth())
    delay = max(abs(a - b) for a in f.centers for b in g.centers)
    max_width = 2.0 / max(f.width, g.width)
    if delay > 0:
        max_width = min(max_width, math.pi / delay)
    result = spectrum.integrate(
        weight,
        -omega - reach,
        -omega + reach,
        breaks=(-omega,),
        max_width=max_width,
        rtol=options.rtol,
        max_depth=options.max_depth,
        order=options.order
    )
    if not result.converged:
        raise QuadratureError(
            f"spectral bi-functional did not converge (gap {omega}, {result.panels} panels)",
            estimate=result.value,
            residual=result.error
        )
    return Estimate(result.value, result.error, "spectral")


def _tensor_at(
    f: SwitchingFunction,
    g: SwitchingFunction,
    omega: float,
    corr: AbstractCorrelator,
    options: QuadratureOptions,
    epsilon: Optional[float]
) -> Estimate:
    f_windows = merge_windows(f.windows(options.tail_tol))
    g_windows = merge_windows(g.windows(options.tail_tol))
    max_width = math.pi / (4.0 * abs(omega)) if omega else None
    inner_error = [0.0]

    def inner(tau: float) -> complex:
        total, error = 0j, 0.0
        for lo, hi in g_windows:
            points = [lo, hi]
            if epsilon is not None:
                for s in corr.singular_lapses:
                    points.extend(graded_breakpoints(tau - s, 0.25 * epsilon, lo, hi))

            def integrand(tp: np.ndarray) -> np.ndarray:
                return g(tp) * np.exp(1j * omega * tp) * corr.evaluate(tau, tp, epsilon)

            res = adaptive_quad(
                integrand,
                points,
                rtol=options.rtol,
                max_depth=options.max_depth,
                order=options.order,
                max_width=max_width
            )
            if not res.converged:
                raise QuadratureError(
                    f"inner tensor quadrature did not converge at τ={tau}",
                    estimate=res.value,
                    residual=res.error
                )
            total += res.value
            error += res.error
        inner_error[0] = max(inner_error[0], error)
        return total

    def outer(taus: np.ndarray) -> np.ndarray:
        return np.array(
            [complex(f(t)) * np.exp(-1j * omega * t) * inner(float(t)) for t in taus],
            dtype=complex
        )

    value, error = 0j, 0.0
    for lo, hi in f_windows:
        res = adaptive_quad(
            outer,
            [lo, hi],
            rtol=options.rtol,
            max_depth=options.max_depth,
            order=options.order,
            max_width=max_width
        )
        if not res.converged:
            raise QuadratureError(
                f"outer tensor quadrature did not converge on [{lo}, {hi}]",
                estimate=res.value,
                residual=res.error
            )
        value += res.value
        error += res.error
    error += inner_error[0] * len(f.centers)
    return Estimate(value, error, "tensor")


def _tensor_functional(f, g, omega, corr, options) -> Estimate:
    if not corr.regulated:
        return _tensor_at(f, g, omega, corr, options, None)
    # ε must resolve the narrowest tooth.
    scale = min(f.width, g.width)
    ladder = [c * scale for c in EPSILON_LADDER]
    estimates = [_tensor_at(f, g, omega, corr, options, eps) for eps in ladder]
    result = extrapolate_to_zero(ladder, [e.value for e in estimates], power=1.0)
    return Estimate(result.value, result.error + max(e.error for e in estimates), "tensor")


def functional_estimate(
    f: SwitchingFunction,
    g: SwitchingFunction,
    omega: float,
    corr: AbstractCorrelator,
    options: Optional[QuadratureOptions] = None
) -> Estimate:
    """W^Ω[f, g] with its quadrature error estimate.

    The ``spectral`` route integrates ρ(ω)F(ω+Ω)·conj G(ω+Ω) and needs a
    correlator with a spectral density; ``tensor`` integrates the double
    time integral directly (any correlator, stationary or not).
    """
    options = options or DEFAULT_OPTIONS
    method = options.method
    if method == "auto":
        method = "spectral" if corr.spectrum is not None else "tensor"
    if method == "spectral":
        if corr.spectrum is None:
            raise NotSupported(
                f"{corr.__class__.__name__} exposes no spectral density; use method='tensor'"
            )
        estimate = _spectral_functional(f, g, omega, corr, options)
    else:
        estimate = _tensor_functional(f, g, omega, corr, options)
    logger.debug(f"W^{omega}[f, g] via {estimate.route}: {estimate.value} (±{estimate.error:.3g})")
    return estimate


def functional_W(
    f: SwitchingFunction,
    g: SwitchingFunction,
    omega: float,
    corr: AbstractCorrelator,
    options: Optional[QuadratureOptions] = None
) -> complex:
    return functional_estimate(f, g, omega, corr, options).value


def _check_perturbative(local_terms: list[float]) -> None:
    if local_terms and max(local_terms) >= PERTURBATIVE_LIMIT:
        warnings.warn(
            f"single-tooth excitation probability {max(local_terms):.3g} is not "
            f"perturbative (limit {PERTURBATIVE_LIMIT})",
            PerturbativityWarning,
            stacklevel=3
        )


def _pairs(comb: Comb) -> list[tuple[int, int]]:
    n_teeth = comb.teeth
    return [(n + m, n) for m in range(1, n_teeth) for n in range(n_teeth - m)]


def local_term(
    n: int,
    comb: Comb,
    det: Detector,
    corr: AbstractCorrelator,
    options: Optional[QuadratureOptions] = None
) -> float:
    """λ²W^Ω[ξ_n, ξ_n]."""
    tooth = comb.tooth_at(n)
    value = functional_estimate(tooth, tooth, det.gap, corr, options).value
    return det.coupling ** 2 * value.real


def nonlocal_estimate(
    comb: Comb,
    omega: float,
    corr: AbstractCorrelator,
    options: Optional[QuadratureOptions] = None
) -> Estimate:
    options = options or DEFAULT_OPTIONS
    pairs = _pairs(comb)
    if not pairs:
        return Estimate(0j, 0.0, options.method)
    estimates = parallel_map(
        lambda pair: functional_estimate(
            comb.tooth_at(pair[0]), comb.tooth_at(pair[1]), omega, corr, options
        ),
        pairs,
        options.workers
    )
    value = 0j
    for est in estimates:
        value += est.value
    return Estimate(value, sum(e.error for e in estimates), estimates[0].route)


def nonlocal_correlations(
    comb: Comb,
    omega: float,
    corr: AbstractCorrelator,
    options: Optional[QuadratureOptions] = None
) -> complex:
    """C = Σ_{m=1}^{N-1} Σ_{n=0}^{N-1-m} W^Ω[ξ_{n+m}, ξ_n]; exactly 0 for N < 2."""
    return nonlocal_estimate(comb, omega, corr, options).value


def excitation_probability(
    comb: Comb,
    det: Detector,
    corr: AbstractCorrelator,
    options: Optional[QuadratureOptions] = None
) -> ProbeOutcome:
    """P⁺ computed directly on the full comb and through its decomposition."""
    options = options or DEFAULT_OPTIONS
    lam2 = det.coupling ** 2
    teeth = comb.teeth_list()
    jobs = [(tooth, tooth) for tooth in teeth]
    jobs += [(comb.tooth_at(a), comb.tooth_at(b)) for a, b in _pairs(comb)]
    jobs.append((comb, comb))
    estimates = parallel_map(
        lambda job: functional_estimate(job[0], job[1], det.gap, corr, options),
        jobs,
        options.workers
    )
    local = estimates[:comb.teeth]
    cross = estimates[comb.teeth:-1]
    direct = estimates[-1]
    local_terms = [lam2 * e.value.real for e in local]
    c = 0j
    for est in cross:
        c += est.value
    direct_total = lam2 * direct.value.real
    decomposed = math.fsum(local_terms) + 2.0 * lam2 * c.real
    error = lam2 * math.fsum(e.error for e in estimates) + abs(direct_total - decomposed)
    _check_perturbative(local_terms)
    for n, term in enumerate(local_terms):
        if term < -max(error, 1e-12):
            logger.warning(f"local term {n} is negative beyond tolerance: {term!r}")
    logger.debug(
        f"P+ = {direct_total!r} (decomposed {decomposed!r}) for {comb} via {direct.route}"
    )
    return ProbeOutcome(
        total=direct_total,
        local_terms=local_terms,
        nonlocal_c=c,
        error=error,
        coupling=det.coupling,
        gap=det.gap,
        direct_total=direct_total,
        route=direct.route
    )


def stationary_probability(
    comb: Comb,
    det: Detector,
    corr: AbstractCorrelator,
    options: Optional[QuadratureOptions] = None
) -> ProbeOutcome:
    """P⁺ = N·P⁺_{ξ,0} + 2λ²Re Σ_m (N-m)·W^Ω[ξ_m, ξ_0] for stationary correlators."""
    if not corr.stationary:
        raise ContractViolation(
            f"{corr.__class__.__name__} is not stationary; use excitation_probability"
        )
    options = options or DEFAULT_OPTIONS
    lam2 = det.coupling ** 2
    first = comb.tooth_at(0)
    jobs = [(first, first)] + [(comb.tooth_at(m), first) for m in range(1, comb.teeth)]
    estimates = parallel_map(
        lambda job: functional_estimate(job[0], job[1], det.gap, corr, options),
        jobs,
        options.workers
    )
    single = lam2 * estimates[0].value.real
    c = 0j
    for m, est in enumerate(estimates[1:], start=1):
        c += (comb.teeth - m) * est.value
    total = comb.teeth * single + 2.0 * lam2 * c.real
    error = lam2 * (
        comb.teeth * estimates[0].error
        + math.fsum((comb.teeth - m) * e.error for m, e in enumerate(estimates[1:], start=1))
    )
    _check_perturbative([single])
    return ProbeOutcome(
        total=total,
        local_terms=[single] * comb.teeth,
        nonlocal_c=c,
        error=error,
        coupling=det.coupling,
        gap=det.gap,
        route=estimates[0].route
    )


def independent_repetitions_probability(teeth: int, p: float) -> float:
    """Probability of exactly one excitation in N independent kicks, N·p·(1-p)^{N-1}."""
    if teeth < 1 or not 0 <= p <= 1:
        raise InvalidParameter(f"need teeth >= 1 and 0 <= p <= 1, got {teeth}, {p}")
    return teeth * p * (1.0 - p) ** (teeth - 1)
