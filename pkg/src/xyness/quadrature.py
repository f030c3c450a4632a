"""Panelized adaptive Gauss-Legendre quadrature on the momentum circle.

Every integral in the package is of the form ``(1/2pi) * int_{-pi}^{pi} f(k) dk``
where ``f`` is smooth between a handful of known breakpoints but may oscillate
(Fourier factors ``exp(-ikm)``) or carry sharp features of width ``kappa`` near
``k = 0`` and ``k = +-pi``.  The integrand callables used here are *panel
callables*: they receive the nodes and weights of one panel and return the
weighted sum, which lets matrix-valued integrands (Gram matrices) be
accumulated with a single BLAS product per panel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

PanelFn = Callable[[np.ndarray, np.ndarray], np.ndarray]

TWO_PI = 2.0 * math.pi


class QuadratureError(RuntimeError):
    """Adaptive refinement did not reach the requested tolerance.

    Attributes
    ----------
    error_estimate : float
        Accumulated error estimate over all panels.
    context : str
        What was being integrated (entry indices, symbol name, ...).
    index : tuple or None
        For array-valued integrands, the component with the largest
        unresolved difference.
    """

    def __init__(self, error_estimate: float, context: str = "", index=None):
        self.error_estimate = float(error_estimate)
        self.context = context
        self.index = index
        msg = f"quadrature did not converge: error estimate {error_estimate:.3e}"
        if context:
            msg += f" ({context})"
        if index is not None:
            msg += f" at component {index}"
        super().__init__(msg)


@dataclass(frozen=True)
class QuadSpec:
    """Parameters of the panel quadrature.

    ``order`` Gauss-Legendre nodes per panel; ``min_subpanels`` initial
    subdivisions of each breakpoint interval; ``tol`` absolute tolerance on the
    normalized integral (the ``1/2pi`` factor included); ``max_depth`` bisection
    levels allowed below the initial subpanels.
    """

    order: int = 32
    tol: float = 1e-12
    min_subpanels: int = 8
    max_depth: int = 48
    max_panels: int = 200_000

    def __post_init__(self):
        if self.order < 2:
            raise ValueError("order must be >= 2")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.min_subpanels < 1:
            raise ValueError("min_subpanels must be >= 1")


DEFAULT_QUAD = QuadSpec()


@lru_cache(maxsize=32)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1] (read-only arrays)."""
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_rule(a: float, b: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre rule mapped to [a, b], weights already divided by 2pi."""
    x, w = gauss_legendre(order)
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return mid + half * x, (half / TWO_PI) * w


def subdivide(breakpoints: Sequence[float], n_sub: int) -> list[tuple[float, float]]:
    """Split each interval between consecutive breakpoints into ``n_sub`` equal panels."""
    bps = sorted(float(b) for b in breakpoints)
    out = []
    for a, b in zip(bps[:-1], bps[1:]):
        if b <= a:
            continue
        edges = np.linspace(a, b, n_sub + 1)
        out.extend(zip(edges[:-1], edges[1:]))
    return out


def momentum_breakpoints(extra: Sequence[float] = (0.0,)) -> list[float]:
    """Breakpoints on [-pi, pi]; always contains -pi, pi and 0."""
    pts = {-math.pi, math.pi, 0.0}
    pts.update(float(p) for p in extra)
    return sorted(pts)


def oscillation_subpanels(frequency: float, minimum: int = 8) -> int:
    """Initial panel count per breakpoint interval for an ``exp(i*frequency*k)`` factor."""
    return max(int(minimum), int(math.ceil(abs(frequency) / 4.0)))


@dataclass
class QuadResult:
    value: np.ndarray
    error: float
    n_panels: int


def integrate_panels(
    panel_fn: PanelFn,
    intervals: Sequence[tuple[float, float]],
    quad: QuadSpec = DEFAULT_QUAD,
    context: str = "",
) -> QuadResult:
    """Adaptive bisection on top of an initial panel set.

    Each panel is integrated once with the full rule and once as two halves;
    the halves are accepted when they differ from the whole by less than the
    panel's share of ``quad.tol`` (or by a rounding floor).  Otherwise both
    halves are bisected further.  The returned ``error`` is the sum of the
    accepted differences, a conservative estimate.
    """
    total_len = sum(b - a for a, b in intervals)
    eps = np.finfo(float).eps
    value = None
    err_total = 0.0
    n_panels = 0
    worst = (0.0, None)

    def rule(a, b):
        k, w = panel_rule(a, b, quad.order)
        return np.asarray(panel_fn(k, w))

    # explicit stack keeps the accumulation order deterministic
    stack = [(a, b, rule(a, b), 0) for a, b in reversed(list(intervals))]
    while stack:
        a, b, whole, depth = stack.pop()
        m = 0.5 * (a + b)
        left = rule(a, m)
        right = rule(m, b)
        halves = left + right
        delta = np.abs(halves - whole)
        diff = float(np.max(delta)) if halves.size else 0.0
        where = (tuple(int(i) for i in np.unravel_index(np.argmax(delta), delta.shape))
                 if halves.ndim else None)
        if n_panels > quad.max_panels:
            raise QuadratureError(float("inf"), context + " (panel budget exhausted)", where)
        local_tol = quad.tol * (b - a) / total_len
        floor = 64.0 * eps * float(np.max(np.abs(halves))) if halves.size else 0.0
        if diff <= max(local_tol, floor) or depth >= quad.max_depth:
            if depth >= quad.max_depth and diff > max(local_tol, floor):
                err_total += diff
                if diff > worst[0]:
                    worst = (diff, where)
            else:
                err_total += min(diff, local_tol)
            value = halves if value is None else value + halves
            n_panels += 2
        else:
            stack.append((m, b, right, depth + 1))
            stack.append((a, m, left, depth + 1))
    if value is None:
        raise ValueError("no intervals to integrate")
    if err_total > quad.tol * 1.000001:
        raise QuadratureError(err_total, context, worst[1])
    return QuadResult(value=value, error=err_total, n_panels=n_panels)


def integrate_circle(
    panel_fn: PanelFn,
    quad: QuadSpec = DEFAULT_QUAD,
    breakpoints: Sequence[float] = (0.0,),
    frequency: float = 0.0,
    context: str = "",
) -> QuadResult:
    """``(1/2pi) int_{-pi}^{pi}`` with panels respecting ``breakpoints``."""
    n_sub = oscillation_subpanels(frequency, quad.min_subpanels)
    intervals = subdivide(momentum_breakpoints(breakpoints), n_sub)
    return integrate_panels(panel_fn, intervals, quad, context)


def integrate_function(
    f: Callable[[np.ndarray], np.ndarray],
    quad: QuadSpec = DEFAULT_QUAD,
    breakpoints: Sequence[float] = (0.0,),
    frequency: float = 0.0,
    context: str = "",
) -> complex | float:
    """Scalar convenience wrapper: ``(1/2pi) int f(k) dk`` over the circle."""

    def panel(k, w):
        return np.asarray(np.sum(w * f(k)))

    res = integrate_circle(panel, quad, breakpoints, frequency, context)
    return res.value[()]


def integrate_interval(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    quad: QuadSpec = DEFAULT_QUAD,
    context: str = "",
) -> float | complex:
    """Plain ``int_a^b f(x) dx`` (no ``1/2pi``) with the same adaptive scheme."""

    def panel(k, w):
        return np.asarray(np.sum(w * TWO_PI * f(k)))

    intervals = subdivide([a, b], quad.min_subpanels)
    return integrate_panels(panel, intervals, quad, context).value[()]
