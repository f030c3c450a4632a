"""Finite-volume dynamics oracle for the steady-state EFP.

The chain is cut to ``[-M, M]``, the reservoirs are prepared at their own
temperatures, the coupled impurity Hamiltonian is switched on, and the
reduced correlation matrix is evolved exactly.  Its determinant, averaged
over the late half of a time window, approximates the steady-state value as
long as nothing reflected at the walls has reached the string.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .correlation import ReducedCorrelation, theta_from_blocks
from .model import ChainParams
from .pfaffian import logdet
from .spectral import fermi_matrix, hopping_matrix, reservoir_generator

IMAG_TOL = 1e-8


class LightConeError(ValueError):
    """The time horizon lets wall reflections reach the observed string."""


@dataclass(frozen=True)
class FiniteVolumeSpec:
    """Lattice ``[-M, M]`` and Cesaro time window ``[start * T, T]``.

    Parameters
    ----------
    window_radius : int
        ``M``.
    horizon : float
        ``T``; must satisfy ``T < M - n - |x0|`` for the string at hand.
    samples : int
        Number of equispaced time samples (trapezoid weights).
    averaging_start : float
        Fraction of the horizon discarded as transient, in ``[0, 1)``.
    """

    window_radius: int = 300
    horizon: float = 150.0
    samples: int = 256
    averaging_start: float = 0.5

    def __post_init__(self):
        if int(self.window_radius) != self.window_radius or self.window_radius < 1:
            raise ValueError("window_radius must be a positive integer")
        if not (self.horizon > 0 and math.isfinite(self.horizon)):
            raise ValueError("horizon must be positive")
        if int(self.samples) != self.samples or self.samples < 2:
            raise ValueError("samples must be an integer >= 2")
        if not 0.0 <= self.averaging_start < 1.0:
            raise ValueError("averaging_start must lie in [0, 1)")

    def check(self, n: int, params: ChainParams, t: float | None = None) -> None:
        """Validate the window against the sample size and the light cone.

        Raises
        ------
        LightConeError
            If ``t`` (default: the horizon) is not below ``M - n - |x0|``.
        """
        M = self.window_radius
        if M < 10 * max(1, params.sample_radius):
            raise ValueError(f"window_radius {M} must be >= 10 * max(1, N)")
        lo, hi = params.x0, params.x0 + n - 1
        if lo < -M or hi > M:
            raise ValueError("the string does not fit in the window")
        bound = M - n - abs(params.x0)
        t = self.horizon if t is None else t
        if not abs(t) < bound:
            raise LightConeError(f"time {t} violates the light-cone bound |t| < M - n - |x0| = {bound}")

    def times(self) -> tuple[np.ndarray, np.ndarray]:
        """Sample times and normalized trapezoid weights."""
        t = np.linspace(self.averaging_start * self.horizon, self.horizon, self.samples)
        w = np.full(self.samples, 1.0)
        w[0] = w[-1] = 0.5
        return t, w / w.sum()


def build_hamiltonians(spec: FiniteVolumeSpec, params: ChainParams
                       ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(h, h0, hB)`` on ``[-M, M]``.

    ``h`` is the hopping matrix, ``h0`` drops the bonds ``-(N+1)<->-N`` and
    ``N<->N+1`` and ``hB = h + kappa |0><0|``.
    """
    M, N = spec.window_radius, params.sample_radius
    sites = np.arange(-M, M + 1)
    h = hopping_matrix(sites)
    h0 = h.copy()
    for a, b in ((-(N + 1), -N), (N, N + 1)):
        ia, ib = a + M, b + M
        if 0 <= ia < len(sites) and 0 <= ib < len(sites):
            h0[ia, ib] = h0[ib, ia] = 0.0
    hb = h.copy()
    hb[M, M] += params.kappa
    return h, h0, hb


def initial_density(spec: FiniteVolumeSpec, params: ChainParams, sign: int) -> np.ndarray:
    """``s_{0,sign} = (1 + sign tanh(k_0 / 2)) / 2`` on ``[-M, M]``.

    ``k_0 = beta_L h_L (+) 0 (+) beta_R h_R``; the sign convention is the one
    of :func:`xyness.spectral.fermi_matrix`.
    """
    return fermi_matrix(reservoir_generator(params, spec.window_radius), sign)


@dataclass
class _Propagator:
    energies: np.ndarray
    vectors: np.ndarray
    s_minus: np.ndarray
    s_plus: np.ndarray
    site_idx: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))


def _prepare(n: int, spec: FiniteVolumeSpec, params: ChainParams) -> _Propagator:
    _, _, hb = build_hamiltonians(spec, params)
    ev, vec = np.linalg.eigh(hb)
    s_minus = initial_density(spec, params, -1)
    s_plus = np.eye(len(ev)) - s_minus
    idx = np.arange(n) + params.x0 + spec.window_radius
    return _Propagator(ev, vec, s_minus, s_plus, idx)


def _theta(t: float, prop: _Propagator) -> np.ndarray:
    vt = prop.vectors[prop.site_idx, :].T
    # columns of exp(+-i t hB) belonging to the string sites
    u_fwd = prop.vectors @ (np.exp(1j * t * prop.energies)[:, None] * vt)
    u_bwd = prop.vectors @ (np.exp(-1j * t * prop.energies)[:, None] * vt)
    b = u_fwd.conj().T @ prop.s_minus @ u_fwd
    c = u_bwd.conj().T @ prop.s_plus @ u_bwd
    return theta_from_blocks(b, c)


def theta_at_time(t: float, n: int, spec: FiniteVolumeSpec, params: ChainParams) -> ReducedCorrelation:
    """``Theta_n(t)`` with ``b_ij(t) = (e^{i t hB} d_i', s_{0,-} e^{i t hB} d_j')`` and
    ``c_ij(t) = (e^{-i t hB} d_i', s_{0,+} e^{-i t hB} d_j')``.

    Raises
    ------
    LightConeError
        If ``t`` violates the light-cone bound.
    """
    spec.check(n, params, t)
    return ReducedCorrelation(_theta(t, _prepare(n, spec, params)), "oracle")


@dataclass(frozen=True)
class OracleAverage:
    """Cesaro averages over the sampled window.

    ``efp`` is the weighted mean of ``det Theta_n(t)``; ``max_imag`` the
    largest imaginary part of any sampled determinant; ``theta`` the mean
    matrix; ``spread`` the standard deviation of the sampled determinants.
    """

    efp: float
    max_imag: float
    theta: np.ndarray
    spread: float


def time_average(n: int, spec: FiniteVolumeSpec, params: ChainParams) -> OracleAverage:
    """Average ``det Theta_n(t)`` and ``Theta_n(t)`` over the time grid.

    The sum over samples runs in a fixed order, so results are reproducible.
    """
    spec.check(n, params)
    prop = _prepare(n, spec, params)
    times, weights = spec.times()
    dets = np.empty(len(times), dtype=complex)
    theta_mean = np.zeros((n, n), dtype=complex)
    for m, (t, w) in enumerate(zip(times, weights)):
        th = _theta(t, prop)
        dets[m] = logdet(th).value
        theta_mean += w * th
    mean = complex(np.dot(weights, dets))
    max_imag = float(np.max(np.abs(dets.imag)))
    if max_imag > IMAG_TOL:
        raise ArithmeticError(f"sampled determinants carry imaginary parts up to {max_imag:.2e}")
    return OracleAverage(efp=mean.real, max_imag=max_imag, theta=theta_mean,
                         spread=float(np.std(dets.real)))


def efp_time_average(n: int, spec: FiniteVolumeSpec, params: ChainParams) -> float:
    """Cesaro mean of ``det Theta_n(t)`` over ``[start * T, T]``."""
    return time_average(n, spec, params).efp


def bound_state_energy(spec: FiniteVolumeSpec, params: ChainParams) -> float:
    """Largest eigenvalue of the finite-volume ``hB`` (the bound state above the band)."""
    _, _, hb = build_hamiltonians(spec, params)
    return float(np.linalg.eigvalsh(hb)[-1])
