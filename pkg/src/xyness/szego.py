"""Fourier coefficients, Toeplitz/Hankel sections, geometric means and decay rates."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (ChainParams, ScalarSymbol, fermi_side, momentum_grid, toeplitz_symbol,
                    transmission)
from .quadrature import DEFAULT_QUAD, QuadSpec, integrate_circle, integrate_panels, subdivide
from .spectral import bound_state, bound_state_overlap

HANKEL_MODES = ("A", "B")
DEFAULT_HANKEL_MODE = "B"


def fourier_coefficients(s: ScalarSymbol, ms, quad: QuadSpec = DEFAULT_QUAD) -> np.ndarray:
    """``(1/2pi) int s(k) exp(-ikm) dk`` for every ``m`` in ``ms``.

    One adaptive pass with a vector-valued integrand; panels respect the
    symbol's breakpoints and are pre-split according to ``max |m|``.
    """
    ms = np.atleast_1d(np.asarray(ms, dtype=float))
    freq = float(np.max(np.abs(ms))) if ms.size else 0.0

    def panel(k, w):
        return np.exp(-1j * np.outer(ms, k)) @ (w * s(k))

    res = integrate_circle(panel, quad, s.panel_breakpoints(), freq,
                           context=f"Fourier coefficients of {s.name or 'symbol'}")
    out = res.value
    if s.real and _is_even(s):
        out = out.real.astype(complex)
    return out


def _is_even(s: ScalarSymbol) -> bool:
    k = np.linspace(0.05, 3.0, 17)
    return bool(np.allclose(s(k), s(-k), rtol=0.0, atol=1e-15))


def fourier_coefficient(s: ScalarSymbol, m: int, quad: QuadSpec = DEFAULT_QUAD) -> complex:
    """Single coefficient ``s_hat_m``; see :func:`fourier_coefficients`."""
    return complex(fourier_coefficients(s, [m], quad)[0])


def toeplitz_from_coefficients(c: np.ndarray, n: int) -> np.ndarray:
    """``T[i, j] = c_{i-j}`` with ``c`` indexed from ``-(n-1)`` to ``n-1``."""
    idx = np.arange(n)
    return np.asarray(c)[(idx[:, None] - idx[None, :]) + (n - 1)]


def hankel_from_coefficients(c: np.ndarray, n: int) -> np.ndarray:
    """``H[i, j] = c_{i+j-1}`` (1-based) with ``c`` indexed from 1 to ``2n-1``."""
    idx = np.arange(n)
    return np.asarray(c)[idx[:, None] + idx[None, :]]


def toeplitz_section(s: ScalarSymbol, n: int, quad: QuadSpec = DEFAULT_QUAD) -> np.ndarray:
    """Finite section ``T_n[s]``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    c = fourier_coefficients(s, np.arange(-(n - 1), n), quad)
    return toeplitz_from_coefficients(c, n)


def hankel_section(s: ScalarSymbol, n: int, quad: QuadSpec = DEFAULT_QUAD) -> np.ndarray:
    """Finite section ``H_n[s]``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    c = fourier_coefficients(s, np.arange(1, 2 * n), quad)
    return hankel_from_coefficients(c, n)


def hankel_symbol(params: ChainParams, mode: str = DEFAULT_HANKEL_MODE, overlap: float | None = None,
                  shift: int = 0) -> ScalarSymbol:
    """Hankel symbol of the reduced correlation matrix.

    ``b(k) = i kappa exp(-ik(2 x0 - 1)) / (sin k + i kappa) * [w - s_{-,R}(k)]``
    multiplied by ``exp(i shift k)``.  In mode ``"B"`` the weight ``w`` is the
    bound-state overlap ``(f_B, s_{0,-} f_B)``; mode ``"A"`` divides it by
    ``e_B^2``.  Mode A does not reproduce the directly assembled matrix and is
    kept as a negative control.

    Parameters
    ----------
    overlap : float, optional
        Precomputed ``(f_B, s_{0,-} f_B)``.
    shift : int
        Extra factor ``exp(i shift k)``; the block of a string starting at
        ``x0 = -n0`` uses ``shift = -2 n0``.
    """
    if mode not in HANKEL_MODES:
        raise ValueError(f"hankel_mode must be one of {HANKEL_MODES}, got {mode!r}")
    bs = bound_state(params.kappa)
    ov = bound_state_overlap(params, -1) if overlap is None else float(overlap)
    weight = ov if mode == "B" else ov / bs.e_b ** 2
    kap = params.kappa
    freq = shift - (2 * params.x0 - 1)

    def ev(k):
        k = np.asarray(k, dtype=float)
        sr = fermi_side(k, params.beta_right, -1)
        return 1j * kap * np.exp(1j * freq * k) / (np.sin(k) + 1j * kap) * (weight - sr)

    return ScalarSymbol(evaluator=ev, breakpoints=(0.0, math.pi), name=f"b[{mode}]", real=False)


def _log_fermi_minus(k, beta):
    # log((1 - tanh(beta cos k / 2)) / 2) = -log(1 + exp(beta cos k))
    return -np.logaddexp(0.0, beta * np.cos(k))


def geometric_mean(s: ScalarSymbol, quad: QuadSpec = DEFAULT_QUAD) -> tuple[float, float]:
    """``G(s) = exp((1/2pi) int log s dk)`` and the rate ``-log G``.

    Raises
    ------
    ValueError
        If ``s`` is not strictly positive on a fine test grid.
    """
    grid = momentum_grid(4001, include_breakpoints=(0.0, math.pi))
    vals = np.asarray(s(grid))
    if np.iscomplexobj(vals):
        if np.max(np.abs(vals.imag)) > 1e-14:
            raise ValueError("geometric mean needs a real symbol")
        vals = vals.real
    if not np.min(vals) > 0:
        raise ValueError(f"symbol must be strictly positive, minimum {np.min(vals):.3e}")

    def panel(k, w):
        return np.asarray(np.sum(w * np.log(np.real(s(k)))))

    mean_log = float(integrate_circle(panel, quad, s.panel_breakpoints(),
                                      context=f"log of {s.name or 'symbol'}").value)
    return math.exp(mean_log), -mean_log


@dataclass(frozen=True)
class DecayRates:
    """Exponential decay rates in nats per site.

    ``rewrite_error`` is the largest difference between the defining
    integrals and their half-circle rewritings.
    """

    gamma_L: float
    gamma_R: float
    gamma_B: float
    gamma_total: float
    rewrite_error: float = 0.0

    @property
    def ordered(self) -> bool:
        """``0 < gamma_L < gamma_B < gamma_R``."""
        return 0.0 < self.gamma_L < self.gamma_B < self.gamma_R


def _mixture(k, params):
    sig = transmission(k, params.kappa)
    return (sig * fermi_side(k, params.beta_left, -1)
            + (1.0 - sig) * fermi_side(k, params.beta_right, -1))


def _circle_mean(f, quad, breakpoints=(0.0, -math.pi / 2, math.pi / 2), context=""):
    def panel(k, w):
        return np.asarray(np.sum(w * f(k)))

    return float(integrate_circle(panel, quad, breakpoints, context=context).value)


def _half_circle_mean(f, quad, context=""):
    # (1/2pi) int_{-pi/2}^{pi/2}
    intervals = subdivide([-math.pi / 2, 0.0, math.pi / 2], quad.min_subpanels)

    def panel(k, w):
        return np.asarray(np.sum(w * f(k)))

    return float(integrate_panels(panel, intervals, quad, context).value)


def decay_rates(params: ChainParams, quad: QuadSpec = DEFAULT_QUAD) -> DecayRates:
    """``Gamma_L``, ``Gamma_R``, ``Gamma_B`` and ``Gamma_R + Gamma_B``.

    Each rate is evaluated twice: from its defining full-circle integral
    ``-1/2 (1/2pi) int log(...)`` and from the half-circle form
    ``-1/2 (1/2pi) int_{-pi/2}^{pi/2} log[(1 - t^2)/4]`` where ``t`` is the
    corresponding (mixed) ``tanh``.  The two must agree.  The half-circle form
    follows from ``k -> pi - k``, which maps ``s_{-,alpha}`` to
    ``s_{+,alpha}`` and leaves ``sigma_B`` invariant; the factor ``1/2``
    survives the folding.
    """
    bl, br = params.beta_left, params.beta_right

    def t_side(k, beta):
        return np.tanh(0.5 * beta * np.cos(k))

    def rewrite(t):
        # log[(1 - t^2)/4] = log((1-t)/2) + log((1+t)/2), both factors positive
        return np.log(0.5 * (1.0 - t)) + np.log(0.5 * (1.0 + t))

    g_l = -0.5 * _circle_mean(lambda k: _log_fermi_minus(k, bl), quad, context="Gamma_L")
    g_r = -0.5 * _circle_mean(lambda k: _log_fermi_minus(k, br), quad, context="Gamma_R")
    g_b = -0.5 * _circle_mean(lambda k: np.log(_mixture(k, params)), quad, context="Gamma_B")

    def t_mix(k):
        sig = transmission(k, params.kappa)
        return (1.0 - sig) * t_side(k, br) + sig * t_side(k, bl)

    alt_l = -0.5 * _half_circle_mean(lambda k: rewrite(t_side(k, bl)), quad, "Gamma_L rewrite")
    alt_r = -0.5 * _half_circle_mean(lambda k: rewrite(t_side(k, br)), quad, "Gamma_R rewrite")
    alt_b = -0.5 * _half_circle_mean(lambda k: rewrite(t_mix(k)), quad, "Gamma_B rewrite")
    err = max(abs(g_l - alt_l), abs(g_r - alt_r), abs(g_b - alt_b))
    return DecayRates(gamma_L=g_l, gamma_R=g_r, gamma_B=g_b, gamma_total=g_r + g_b, rewrite_error=err)


def rate_identity_error(params: ChainParams, quad: QuadSpec = DEFAULT_QUAD) -> float:
    """``|Gamma_R + Gamma_B + (1/2pi) int log a|``."""
    rates = decay_rates(params, quad)
    _, rate = geometric_mean(toeplitz_symbol(params), quad)
    return abs(rates.gamma_total - rate)


@dataclass(frozen=True)
class JumpDiagnostic:
    """Jumps ``D_+ a'(k) - D_- a'(k)`` at ``k = 0`` and ``k = pi``.

    ``measured_*`` come from one-sided finite differences of ``a'``;
    ``predicted_*`` from the closed form ``X / kappa^2`` with
    ``X = sinh((beta_R - beta_L)/2) / (cosh(beta_R/2) cosh(beta_L/2))``,
    which has the same sign at both points.
    """

    measured_zero: float
    measured_pi: float
    predicted_zero: float
    predicted_pi: float
    step: float


def jump_magnitude(params: ChainParams) -> float:
    """``sinh((beta_R - beta_L)/2) / (cosh(beta_R/2) cosh(beta_L/2) kappa^2)``."""
    bl, br = params.beta_left, params.beta_right
    return math.sinh(0.5 * (br - bl)) / (math.cosh(0.5 * br) * math.cosh(0.5 * bl)) / params.kappa ** 2


# fourth-order one-sided first-derivative stencil
_FD4 = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0


def one_sided_derivative(f, x: float, h: float, direction: int) -> float:
    """Fourth-order one-sided difference of ``f`` at ``x`` (``direction = +1`` right, ``-1`` left)."""
    pts = x + direction * h * np.arange(5)
    return float(direction * np.dot(_FD4, f(pts)) / h)


def symbol_jump_diagnostic(params: ChainParams, step: float = 1e-3) -> JumpDiagnostic:
    """Measure the second-derivative jumps of the Toeplitz symbol at ``0`` and ``pi``.

    The analytic derivative ``a'`` is differenced one-sidedly.  At ``pi`` the
    right side is reached through ``-pi`` (the circle identification), so the
    right stencil samples ``a'`` at ``-pi + j h``.
    """
    sym = toeplitz_symbol(params)
    da = sym.derivative

    right0 = one_sided_derivative(lambda k: da(k), 0.0, step, +1)

    # a'(0) = 0 from both formulas, so the shared stencil point is harmless
    left0 = one_sided_derivative(lambda k: da(k), 0.0, step, -1)

    def da_right_pi(k):
        return da(np.asarray(k, dtype=float) - 2.0 * math.pi)

    right_pi = one_sided_derivative(da_right_pi, math.pi, step, +1)
    left_pi = one_sided_derivative(lambda k: da(k), math.pi, step, -1)
    x = jump_magnitude(params)
    return JumpDiagnostic(measured_zero=right0 - left0, measured_pi=right_pi - left_pi,
                          predicted_zero=x, predicted_pi=x, step=step)


def continuity_gap(params: ChainParams, eps: float = 1e-13) -> tuple[float, float]:
    """``|a(k+) - a(k-)|`` at ``0`` and ``pi`` from evaluations ``eps`` away."""
    sym = toeplitz_symbol(params)
    g0 = abs(float(sym(eps)) - float(sym(-eps)))
    gpi = abs(float(sym(math.pi - eps)) - float(sym(-math.pi + eps)))
    return g0, gpi


def hankel_singular_values(s: ScalarSymbol, n: int, quad: QuadSpec = DEFAULT_QUAD) -> np.ndarray:
    """Singular values of ``H_n[s]`` (summability proxy for trace class)."""
    return np.linalg.svd(hankel_section(s, n, quad), compute_uv=False)


@dataclass(frozen=True)
class AsymptoticProfile:
    """Log-domain EFP profile against the Szego geometric mean.

    ``log_ratio[n-1] = log P(n) - n log G(a)``; ``increments`` are the
    relative changes ``|r_{n+1} - r_n| / |r_n|`` of ``r_n = P(n)/G^n``;
    ``fitted_rate`` is the least-squares slope of ``-log P(n)`` over
    ``fit_window``.
    """

    n: np.ndarray
    log_p: np.ndarray
    log_ratio: np.ndarray
    increments: np.ndarray
    geometric_mean: float
    gamma_total: float
    fitted_rate: float
    fit_window: tuple[int, int]

    @property
    def limit_estimate(self) -> float:
        return float(math.exp(self.log_ratio[-1]))


def asymptotic_profile(params: ChainParams, n_max: int, quad: QuadSpec = DEFAULT_QUAD,
                       fit_window: tuple[int, int] = (60, 120)) -> AsymptoticProfile:
    """``P(n) / G(a)^n`` for ``n = 1..n_max`` from leading minors of one ``Theta``.

    The fitted rate uses the part of ``fit_window`` below ``n_max`` (the full
    range when fewer than two points fall in the window).
    """
    from .correlation import assemble_theta, leading_logdets

    if not 1 <= n_max <= 400:
        raise ValueError("n_max must lie in 1..400")
    theta = assemble_theta(n_max, params, quad)
    logs = leading_logdets(theta.matrix)
    log_p = np.array([ls.log_magnitude for ls in logs])
    G, rate = geometric_mean(toeplitz_symbol(params), quad)
    ns = np.arange(1, n_max + 1)
    log_ratio = log_p + ns * rate
    r = np.exp(log_ratio)
    inc = np.abs(np.diff(r)) / np.abs(r[:-1])
    lo, hi = fit_window
    mask = (ns >= lo) & (ns <= hi)
    if mask.sum() < 2:
        mask = np.ones_like(ns, dtype=bool)
    slope = float(np.polyfit(ns[mask], -log_p[mask], 1)[0])
    return AsymptoticProfile(n=ns, log_p=log_p, log_ratio=log_ratio, increments=inc,
                             geometric_mean=G, gamma_total=rate, fitted_rate=slope,
                             fit_window=(lo, hi))
