"""Bound state of the impurity Hamiltonian ``h_B = h + kappa p_0``.

For ``kappa > 0`` the impurity binds one state above the band, with energy
``e_B = sqrt(1 + kappa^2)`` and eigenfunction ``f_B(x) = exp(-lambda_B |x|) / n_B``.
Its overlap with the initial reservoir state, ``(f_B, s_{0,+-} f_B)``, enters
the pure point part of the steady-state correlations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ChainParams
from .quadrature import DEFAULT_QUAD, QuadSpec, integrate_function, integrate_panels

# dense eigendecomposition is used up to this window radius; beyond it the
# half-line spectral formula takes over
MAX_DENSE_WINDOW = 1500


@dataclass(frozen=True)
class BoundState:
    """Closed-form bound-state data for coupling ``kappa``."""

    kappa: float
    e_b: float
    lambda_b: float
    n_b: float

    @property
    def q(self) -> float:
        """Decay factor per site, ``exp(-lambda_B) = e_B - kappa``."""
        return self.e_b - self.kappa

    @property
    def one_minus_q(self) -> float:
        """``1 - exp(-lambda_B)`` without cancellation."""
        return self.kappa - self.kappa ** 2 / (1.0 + self.e_b)

    def f(self, x):
        return eigenfunction(x, self)

    def f_hat(self, k):
        return eigenfunction_hat(k, self)


def bound_state(kappa: float) -> BoundState:
    if not kappa > 0:
        raise ValueError(f"the bound state exists only for kappa > 0, got {kappa}")
    e_b = math.hypot(1.0, kappa)
    # log1p keeps lambda_B accurate for small kappa: kappa + e_B = 1 + (kappa + e_B - 1)
    lam = math.log1p(kappa + kappa * kappa / (1.0 + e_b))
    return BoundState(kappa=float(kappa), e_b=e_b, lambda_b=lam, n_b=math.sqrt(e_b / kappa))


def eigenfunction(x, bs: BoundState):
    """``f_B(x) = exp(-lambda_B |x|) / n_B``."""
    x = np.asarray(x)
    return np.exp(-bs.lambda_b * np.abs(x)) / bs.n_b


def eigenfunction_hat(k, bs: BoundState):
    """Fourier transform ``sum_x f_B(x) e^{ikx} = kappa / (n_B (e_B - cos k))``."""
    k = np.asarray(k, dtype=float)
    # e_B - cos k = (e_B - 1) + 2 sin^2(k/2), both terms exact for small kappa
    return bs.kappa / (bs.n_b * ((bs.e_b - 1.0) + 2.0 * np.sin(0.5 * k) ** 2))


def eigen_residual(x, bs: BoundState):
    """``(h_B f_B)(x) - e_B f_B(x)`` evaluated from the closed form."""
    x = np.asarray(x)
    hop = 0.5 * (eigenfunction(x - 1, bs) + eigenfunction(x + 1, bs))
    onsite = np.where(x == 0, bs.kappa * eigenfunction(0, bs), 0.0)
    return hop + onsite - bs.e_b * eigenfunction(x, bs)


def exp_fourier_identity(x: int, bs: BoundState, quad: QuadSpec = DEFAULT_QUAD) -> complex:
    """Quadrature value of ``i e_B (1/2pi) int e^{-ikx} / (sin k + i kappa) dk``.

    Equals ``exp(-lambda_B x)`` for ``x >= 0``.
    """
    if x < 0:
        raise ValueError("identity holds for x >= 0")
    kap = bs.kappa

    def f(k):
        return np.exp(-1j * k * x) / (np.sin(k) + 1j * kap)

    return 1j * bs.e_b * integrate_function(f, quad, breakpoints=(0.0, -math.pi / 2, math.pi / 2),
                                            frequency=x, context=f"exp identity x={x}")


def overlap_window(params: ChainParams, tol: float = 1e-13) -> int:
    """Window radius making the bound-state truncation error ``exp(-2 lambda_B (W - N))`` < tol."""
    bs = bound_state(params.kappa)
    return int(math.ceil(math.log(1.0 / tol) / (2.0 * bs.lambda_b))) + params.sample_radius + 10


def hopping_matrix(sites: np.ndarray) -> np.ndarray:
    """Nearest-neighbour hopping ``1/2`` among consecutive integer ``sites``."""
    n = len(sites)
    h = np.zeros((n, n))
    if n > 1:
        idx = np.arange(n - 1)
        h[idx, idx + 1] = h[idx + 1, idx] = 0.5
    return h


def reservoir_generator(params: ChainParams, window: int) -> np.ndarray:
    """``k_0 = beta_L h_L + 0 + beta_R h_R`` on the sites ``-window..window``.

    The left block couples sites ``-window..-(N+1)``, the right block
    ``N+1..window``; the sample ``|x| <= N`` carries no generator.
    """
    n_sites = 2 * window + 1
    N = params.sample_radius
    k0 = np.zeros((n_sites, n_sites))
    n_res = window - N
    if n_res > 0:
        block = hopping_matrix(np.arange(n_res))
        k0[:n_res, :n_res] = params.beta_left * block
        k0[-n_res:, -n_res:] = params.beta_right * block
    return k0


def fermi_matrix(k0: np.ndarray, sign: int) -> np.ndarray:
    """``(1 + sign * tanh(k0 / 2)) / 2 = (1 + exp(-sign * k0))^{-1}`` via ``eigh``.

    The sign matches :func:`xyness.model.fermi_side`: on a reservoir in
    equilibrium the ``sign = -1`` component has momentum symbol
    ``(1 - tanh(beta cos k / 2)) / 2``.
    """
    ev, vec = np.linalg.eigh(k0)
    occ = 0.5 * (1.0 + sign * np.tanh(0.5 * ev))
    return (vec * occ) @ vec.T


def initial_overlap(params: ChainParams, sign: int, window: int, tol: float = 1e-12) -> float:
    """``(f_B, s_{0,sign} f_B)`` on the truncated lattice ``[-window, window]``.

    ``s_{0,sign} = (1 + sign tanh(k_0 / 2)) / 2`` with
    ``k_0 = beta_L h_L (+) 0 (+) beta_R h_R`` (see :func:`fermi_matrix`).

    Raises
    ------
    ValueError
        If ``window < N + 10`` or the neglected bound-state weight
        ``exp(-2 lambda_B (window - N))`` exceeds ``tol``.
    """
    N = params.sample_radius
    if window < N + 10:
        raise ValueError(f"window {window} must be at least N + 10 = {N + 10}")
    bs = bound_state(params.kappa)
    trunc = math.exp(-2.0 * bs.lambda_b * (window - N))
    if trunc > tol:
        raise ValueError(f"window {window} leaves truncation error {trunc:.2e} > tol {tol:.1e}; "
                         f"need window >= {overlap_window(params, tol)}")
    if params.infinite_temperature:
        return 0.5
    sites = np.arange(-window, window + 1)
    f = eigenfunction(sites, bs)
    s0 = fermi_matrix(reservoir_generator(params, window), sign)
    return float(f @ s0 @ f)


def initial_overlap_halfline(params: ChainParams, sign: int, quad: QuadSpec = DEFAULT_QUAD) -> float:
    """``(f_B, s_{0,sign} f_B)`` for semi-infinite reservoirs via the sine transform.

    On ``Z_R = {N+1, N+2, ...}`` the hopping operator is diagonalized by
    ``sqrt(2/pi) sin(k (x - N))``, ``k in (0, pi)``, with energy ``cos k``, and
    ``sum_{x > N} f_B(x) sin(k (x - N)) = q^N q sin k / (n_B (1 - 2 q cos k + q^2))``
    with ``q = exp(-lambda_B)``.  The left reservoir is the mirror image.
    """
    bs = bound_state(params.kappa)
    N = params.sample_radius
    q = bs.q
    sample = 0.5 * float(np.sum(eigenfunction(np.arange(-N, N + 1), bs) ** 2))
    if params.infinite_temperature:
        return 0.5
    amp = q ** N / bs.n_b

    def transform_sq(k):
        # 1 - 2q cos k + q^2 written without the cancellation in 1 - cos k
        g = amp * q * np.sin(k) / (bs.one_minus_q ** 2 + 4.0 * q * np.sin(0.5 * k) ** 2)
        return g * g

    total = sample
    # features of width lambda_B near k = 0; pre-grade the mesh
    edges = [0.0]
    w = max(bs.lambda_b, 1e-12) / 4.0
    while w < math.pi / 16:
        edges.append(w)
        w *= 2.0
    edges += list(np.linspace(math.pi / 16, math.pi, 16)[1:])
    intervals = list(zip(edges[:-1], edges[1:]))
    for beta in (params.beta_left, params.beta_right):

        def panel(k, wts, beta=beta):
            occ = 0.5 * (1.0 + sign * np.tanh(0.5 * beta * np.cos(k)))
            # wts carry 1/2pi; the sine basis carries 2/pi -> factor 4
            return np.asarray(np.sum(wts * 4.0 * occ * transform_sq(k)))

        total += float(integrate_panels(panel, intervals, quad, "half-line overlap").value)
    return total


def bound_state_overlap(params: ChainParams, sign: int, tol: float = 1e-13,
                        quad: QuadSpec = DEFAULT_QUAD) -> float:
    """Overlap used by the correlation assembly.

    Dense truncated lattice when the required window is moderate, otherwise
    the half-line spectral formula (small ``kappa`` makes ``f_B`` very wide).
    """
    if params.infinite_temperature:
        return 0.5
    window = overlap_window(params, tol)
    if window <= MAX_DENSE_WINDOW:
        return initial_overlap(params, sign, window, tol=max(tol, 1e-16))
    return initial_overlap_halfline(params, sign, quad)
