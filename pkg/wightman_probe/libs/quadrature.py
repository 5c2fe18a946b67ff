"""
Quadrature helpers.

Panel-wise Gauss-Legendre rules with level-wise bisection, geometric grading
toward singular points and Neville (Richardson) extrapolation to zero step.
"""
from typing import Callable, Optional
from collections.abc import Sequence
from dataclasses import dataclass
from functools import lru_cache
import math
import numpy as np
from ..conf import QUAD_RTOL, QUAD_MAX_DEPTH, GL_ORDER
from ..exceptions import InvalidParameter


# a single initial interval is never cut into more panels than this.
MAX_INITIAL_PANELS = 200_000


@lru_cache(maxsize=16)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre rule on [-1, 1], symmetrized so mirrored panels sum identically."""
    if order < 2:
        raise InvalidParameter(f"Gauss-Legendre order must be >= 2, got {order}")
    x, w = np.polynomial.legendre.leggauss(order)
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error: float
    l1: float
    evaluations: int
    panels: int
    converged: bool


@dataclass(frozen=True)
class Extrapolation:
    value: complex
    error: float
    table: tuple


def _rule(func: Callable, a: np.ndarray, b: np.ndarray, order: int):
    x, w = gauss_legendre(order)
    half = 0.5 * (b - a)
    nodes = (0.5 * (a + b))[:, None] + half[:, None] * x[None, :]
    values = np.asarray(func(nodes.ravel()), dtype=complex).reshape(nodes.shape)
    return half * (values @ w), half * (np.abs(values) @ w)


def _split(func: Callable, a: np.ndarray, b: np.ndarray, known: np.ndarray, order: int):
    m = 0.5 * (a + b)
    left, l1_left = _rule(func, a, m, order)
    right, l1_right = _rule(func, m, b, order)
    return left, right, np.abs(known - (left + right)), l1_left + l1_right


def initial_mesh(breakpoints: Sequence[float], max_width: Optional[float] = None) -> np.ndarray:
    edges = np.unique(np.asarray(breakpoints, dtype=float))
    edges = edges[np.isfinite(edges)]
    if edges.size < 2 or not max_width or max_width <= 0:
        return edges
    pieces = [edges[:1]]
    for lo, hi in zip(edges[:-1], edges[1:]):
        count = min(MAX_INITIAL_PANELS, max(1, math.ceil((hi - lo) / max_width)))
        pieces.append(np.linspace(lo, hi, count + 1)[1:])
    return np.concatenate(pieces)


def graded_breakpoints(
    center: float,
    smallest: float,
    lo: float,
    hi: float,
    ratio: float = 2.0
) -> list[float]:
    """Breakpoints clustering geometrically toward ``center`` inside [lo, hi]."""
    points = [lo, hi]
    if not lo <= center <= hi or smallest <= 0:
        return points
    points.append(center)
    step = smallest
    reach = max(center - lo, hi - center)
    while step < reach:
        for p in (center - step, center + step):
            if lo < p < hi:
                points.append(p)
        step *= ratio
    return points


def adaptive_quad(
    func: Callable[[np.ndarray], np.ndarray],
    breakpoints: Sequence[float],
    *,
    rtol: Optional[float] = None,
    atol: float = 0.0,
    max_depth: Optional[int] = None,
    order: Optional[int] = None,
    max_width: Optional[float] = None
) -> QuadResult:
    """Integrate a vectorized ``func`` over the span of ``breakpoints``.

    Every panel is compared against its two halves; panels whose discrepancy
    exceeds their share of the tolerance are bisected, one level at a time,
    until the summed discrepancy falls below
    ``max(atol, rtol * max(|I|, 1e-3 * ∫|f|))`` or ``max_depth`` levels were
    spent. The returned value always uses the finest rule evaluated.
    """
    rtol = QUAD_RTOL if rtol is None else rtol
    max_depth = QUAD_MAX_DEPTH if max_depth is None else max_depth
    order = order or GL_ORDER
    edges = initial_mesh(breakpoints, max_width)
    if edges.size < 2:
        return QuadResult(0j, 0.0, 0.0, 0, 0, True)
    a, b = edges[:-1], edges[1:]
    whole, _ = _rule(func, a, b, order)
    left, right, err, l1 = _split(func, a, b, whole, order)
    evaluations = 3 * a.size * order
    done_value, done_error, done_l1, done_count = 0j, 0.0, 0.0, 0
    converged = False
    for depth in range(max_depth + 1):
        value = done_value + complex(np.sum(left + right))
        error = done_error + float(np.sum(err))
        mass = done_l1 + float(np.sum(l1))
        tol = max(atol, rtol * max(abs(value), 1e-3 * mass))
        if error <= tol:
            converged = True
            break
        if depth == max_depth:
            break
        refine = err > tol / (done_count + a.size)
        if not refine.any():
            refine = err == err.max()
        keep = ~refine
        done_value += complex(np.sum(left[keep] + right[keep]))
        done_error += float(np.sum(err[keep]))
        done_l1 += float(np.sum(l1[keep]))
        done_count += int(keep.sum())
        ar, br = a[refine], b[refine]
        mid = 0.5 * (ar + br)
        a = np.concatenate((ar, mid))
        b = np.concatenate((mid, br))
        known = np.concatenate((left[refine], right[refine]))
        left, right, err, l1 = _split(func, a, b, known, order)
        evaluations += 2 * a.size * order
    return QuadResult(
        value=value,
        error=error,
        l1=mass,
        evaluations=evaluations,
        panels=done_count + a.size,
        converged=converged
    )


def extrapolate_to_zero(
    steps: Sequence[float],
    values: Sequence[complex],
    power: float = 2.0
) -> Extrapolation:
    """Polynomial extrapolation in ``h**power`` to h = 0 (Neville's scheme).

    Works for arbitrary step ratios; with a constant ratio it reduces to the
    classical Richardson table. The error estimate is the gap between the
    full extrapolant and the one built from all but the widest step.
    """
    if len(steps) != len(values) or not steps:
        raise InvalidParameter("steps and values must be non-empty and of equal length")
    x = np.asarray(steps, dtype=float) ** power
    if np.any(np.diff(np.sort(x)) == 0):
        raise InvalidParameter("extrapolation steps must be distinct")
    current = [complex(v) for v in values]
    table = [tuple(current)]
    n = len(current)
    for k in range(1, n):
        current = [
            (x[i] * current[i + 1] - x[i + k] * current[i]) / (x[i] - x[i + k])
            for i in range(n - k)
        ]
        table.append(tuple(current))
    if n == 1:
        return Extrapolation(current[0], math.inf, tuple(table))
    return Extrapolation(
        value=current[0],
        error=abs(current[0] - table[-2][1]),
        table=tuple(table)
    )
