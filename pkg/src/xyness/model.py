"""Physical configuration and closed-form momentum-space functions.

Momenta live on (-pi, pi]; ``pi`` and ``-pi`` are accepted and give equal
values.  All functions are vectorized over ``k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

LEFT, RIGHT = "L", "R"


@dataclass(frozen=True)
class ChainParams:
    """Reservoir temperatures, impurity coupling and EFP string placement.

    Parameters
    ----------
    beta_left, beta_right : float
        Inverse temperatures of the left and right reservoirs, with
        ``0 < beta_left <= beta_right``.  The pair ``(0, 0)`` (infinite
        temperature) is admitted as a test configuration and flagged by
        :attr:`infinite_temperature`.
    kappa : float
        Strength of the on-site impurity at the origin, ``kappa > 0``.
    x0 : int
        First site of the EFP string ``x0, ..., x0 + n - 1``.
    sample_radius : int
        ``N``; the sample is the sites ``|x| <= N``.
    """

    beta_left: float
    beta_right: float
    kappa: float
    x0: int = 1
    sample_radius: int = 0

    def __post_init__(self):
        bl, br = float(self.beta_left), float(self.beta_right)
        if not (math.isfinite(bl) and math.isfinite(br)):
            raise ValueError("inverse temperatures must be finite")
        if bl == 0.0 and br == 0.0:
            pass
        elif not (0.0 < bl <= br):
            raise ValueError(
                f"need 0 < beta_left <= beta_right (or both 0), got {bl}, {br}")
        if not (self.kappa > 0 and math.isfinite(self.kappa)):
            raise ValueError(f"kappa must be positive and finite, got {self.kappa}")
        if int(self.x0) != self.x0:
            raise ValueError("x0 must be an integer")
        if int(self.sample_radius) != self.sample_radius or self.sample_radius < 0:
            raise ValueError("sample_radius must be a nonnegative integer")
        object.__setattr__(self, "beta_left", bl)
        object.__setattr__(self, "beta_right", br)
        object.__setattr__(self, "kappa", float(self.kappa))
        object.__setattr__(self, "x0", int(self.x0))
        object.__setattr__(self, "sample_radius", int(self.sample_radius))

    @property
    def infinite_temperature(self) -> bool:
        """True for the ``beta_left = beta_right = 0`` test configuration."""
        return self.beta_left == 0.0 and self.beta_right == 0.0

    @property
    def beta_bar(self) -> float:
        return 0.5 * (self.beta_right + self.beta_left)

    @property
    def delta(self) -> float:
        return 0.5 * (self.beta_right - self.beta_left)

    def beta(self, side: str) -> float:
        if side == LEFT:
            return self.beta_left
        if side == RIGHT:
            return self.beta_right
        raise ValueError(f"side must be 'L' or 'R', got {side!r}")

    def replace(self, **changes) -> "ChainParams":
        kw = dict(beta_left=self.beta_left, beta_right=self.beta_right,
                  kappa=self.kappa, x0=self.x0, sample_radius=self.sample_radius)
        kw.update(changes)
        return ChainParams(**kw)


@dataclass(frozen=True)
class ScalarSymbol:
    """A function on the momentum circle with declared non-smooth points.

    ``breakpoints`` always contains ``0`` and ``pi`` (the latter standing for
    the ``-pi``/``pi`` identification).  ``derivative`` is optional and, when
    present, gives the one-sided derivative taken from inside the panel
    containing ``k`` (``k > 0`` panel for ``k in [0, pi]``).
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    breakpoints: tuple[float, ...] = (0.0, math.pi)
    name: str = ""
    real: bool = True
    derivative: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, compare=False)

    def __post_init__(self):
        bps = set(float(b) for b in self.breakpoints) | {0.0, math.pi}
        object.__setattr__(self, "breakpoints", tuple(sorted(bps)))

    def __call__(self, k):
        return self.evaluator(np.asarray(k, dtype=float))

    def panel_breakpoints(self) -> list[float]:
        """Breakpoints mapped into [-pi, pi] for quadrature panelization."""
        pts = {-math.pi, math.pi}
        for b in self.breakpoints:
            b = float(np.angle(np.exp(1j * b)))
            pts.add(b)
        return sorted(pts)


def fermi_side(k, beta: float, sign: int):
    """Reservoir occupation ``(1 +- tanh(beta cos(k) / 2)) / 2``.

    ``sign = -1`` gives the hole density entering the EFP symbol.
    """
    k = np.asarray(k, dtype=float)
    return 0.5 * (1.0 + sign * np.tanh(0.5 * beta * np.cos(k)))


def fermi(k, params: ChainParams, side: str, sign: int):
    """:func:`fermi_side` with the inverse temperature of reservoir ``side``."""
    return fermi_side(k, params.beta(side), sign)


def ness_density(k, params: ChainParams, sign: int, sin_zero_sign: float = 0.0):
    """Momentum-space density of the translation-invariant XY NESS.

    ``(1 + sign * rho_sign(k)) / 2`` with
    ``rho_pm(k) = tanh((beta_bar +- sgn(sin k) delta) cos(k) / 2)``.
    ``sin_zero_sign`` sets the value of ``sgn`` at ``sin k = 0``; the default 0
    averages the two reservoirs at ``k in {0, pi}``.
    """
    k = np.asarray(k, dtype=float)
    s = np.sin(k)
    sg = np.where(np.abs(s) < 1e-300, sin_zero_sign, np.sign(s))
    # sin(pi) evaluates to 1.2e-16 in floating point; treat exact +-pi as sin = 0
    sg = np.where(np.abs(np.abs(k) - math.pi) == 0.0, sin_zero_sign, sg)
    sg = np.where(k == 0.0, sin_zero_sign, sg)
    rho = np.tanh(0.5 * (params.beta_bar + sign * sg * params.delta) * np.cos(k))
    return 0.5 * (1.0 + sign * rho)


def transmission(k, kappa: float):
    """Transmission probability ``sin^2 k / (sin^2 k + kappa^2)`` through the impurity."""
    s2 = np.sin(np.asarray(k, dtype=float)) ** 2
    return s2 / (s2 + kappa * kappa)


def phi_b(k, kappa: float):
    """:func:`transmission` restricted to ``k in [0, pi]``, zero for ``k < 0``."""
    k = np.asarray(k, dtype=float)
    return np.where(k >= 0.0, transmission(k, kappa), 0.0)


def _symbol_a(k, params: ChainParams):
    k = np.asarray(k, dtype=float)
    sl = fermi(k, params, LEFT, -1)
    sr = fermi(k, params, RIGHT, -1)
    phi = phi_b(k, params.kappa)
    return phi * sl + (1.0 - phi) * sr


def _symbol_a_prime(k, params: ChainParams):
    """Derivative of the Toeplitz symbol, taken inside the panel of ``k``."""
    k = np.asarray(k, dtype=float)
    s, c = np.sin(k), np.cos(k)
    bl, br, kap = params.beta_left, params.beta_right, params.kappa

    def ds(beta):
        # d/dk of (1 - tanh(beta cos k / 2)) / 2
        return 0.25 * beta * s / np.cosh(0.5 * beta * c) ** 2

    sl = fermi_side(k, bl, -1)
    sr = fermi_side(k, br, -1)
    d = s * s + kap * kap
    sigma = s * s / d
    dsigma = 2.0 * s * c * kap * kap / (d * d)
    upper = dsigma * (sl - sr) + sigma * ds(bl) + (1.0 - sigma) * ds(br)
    return np.where(k >= 0.0, upper, ds(br))


def toeplitz_symbol(params: ChainParams) -> ScalarSymbol:
    """Symbol ``a = phi_B s_{-,L} + (1 - phi_B) s_{-,R}`` of the Toeplitz part."""
    return ScalarSymbol(
        evaluator=lambda k: _symbol_a(k, params),
        breakpoints=(0.0, math.pi),
        name="a",
        real=True,
        derivative=lambda k: _symbol_a_prime(k, params),
    )


def limit_symbol(params: ChainParams) -> ScalarSymbol:
    """Zero-coupling symbol: ``s_{-,L}`` on ``[0, pi]`` and ``s_{-,R}`` on ``(-pi, 0)``."""

    def ev(k):
        k = np.asarray(k, dtype=float)
        return np.where(k >= 0.0, fermi(k, params, LEFT, -1), fermi(k, params, RIGHT, -1))

    return ScalarSymbol(evaluator=ev, breakpoints=(0.0, math.pi), name="a_kappa0")


def density_symbol(params: ChainParams, sign: int) -> ScalarSymbol:
    """:func:`ness_density` wrapped as a symbol."""
    return ScalarSymbol(evaluator=lambda k: ness_density(k, params, sign),
                        breakpoints=(0.0, math.pi), name=f"s{'+' if sign > 0 else '-'}")


def momentum_grid(n: int = 2001, include_breakpoints: Sequence[float] = (0.0,)) -> np.ndarray:
    """Uniform grid on (-pi, pi] plus the given breakpoints (for property checks)."""
    k = np.linspace(-math.pi, math.pi, n + 1)[1:]
    return np.unique(np.concatenate([k, np.asarray(include_breakpoints, dtype=float)]))
