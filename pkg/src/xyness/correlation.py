"""Reduced correlation matrix of the steady state and the emptiness formation probability.

The string occupies sites ``x0, ..., x0 + n - 1``; row ``i`` of ``Theta_n``
(1-based) refers to site ``i' = i + x0 - 1``.  Entries combine the
absolutely continuous part, an integral of wave images against the
translation-invariant density, and the bound-state part
``f_B(i') f_B(j') (f_B, s_{0,+-} f_B)``::

    theta_ij = b_ij          (i <= j),   b = G_- + ov_- f f^t
    theta_ij = -c_ji         (i >  j),   c = G_+ + ov_+ f f^t

with ``G_+-[x, y] = (1/2pi) int conj(w_+- e_x) s_+- (w_+- e_y) dk``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ChainParams, ness_density, toeplitz_symbol
from .pfaffian import LogScaled, logdet
from .quadrature import DEFAULT_QUAD, QuadratureError, QuadSpec
from .scattering import wave_gram
from .spectral import bound_state, bound_state_overlap, eigenfunction
from .szego import (DEFAULT_HANKEL_MODE, HANKEL_MODES, hankel_section, hankel_symbol,
                    toeplitz_section)

PHASE_TOL = 1e-8


class AssemblyError(RuntimeError):
    """A computed quantity violates a structural property (signals a bug)."""


@dataclass(frozen=True)
class ReducedCorrelation:
    """``n x n`` reduced correlation matrix with its provenance.

    ``provenance`` is ``"direct"`` (entry integrals), ``"structured"``
    (Toeplitz plus Hankel sections) or ``"oracle"`` (finite volume).
    """

    matrix: np.ndarray
    provenance: str

    @property
    def order(self) -> int:
        return self.matrix.shape[0]

    def leading(self, m: int) -> "ReducedCorrelation":
        return ReducedCorrelation(self.matrix[:m, :m], self.provenance)


def string_sites(n: int, x0: int) -> np.ndarray:
    """Sites ``i' = i + x0 - 1`` for ``i = 1..n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return np.arange(n) + int(x0)


def ness_gram(sites, params: ChainParams, sign: int, quad: QuadSpec = DEFAULT_QUAD) -> np.ndarray:
    """``G_sign[x, y]`` over ``sites``: wave images weighted by the NESS density ``s_sign``."""
    bs = bound_state(params.kappa)
    return wave_gram(sites, sign, bs, weight=lambda k: ness_density(k, params, sign), quad=quad)


def correlation_blocks(n: int, params: ChainParams, quad: QuadSpec = DEFAULT_QUAD
                       ) -> tuple[np.ndarray, np.ndarray]:
    """Full ``n x n`` arrays ``b_ij`` and ``c_ij`` for all index pairs.

    Only ``b`` on and above the diagonal and ``c`` strictly above it enter
    ``Theta_n``; the other halves are their Hermitian companions.
    """
    sites = string_sites(n, params.x0)
    bs = bound_state(params.kappa)
    f = eigenfunction(sites, bs)
    ff = np.outer(f, f)
    try:
        g_minus = ness_gram(sites, params, -1, quad)
        g_plus = ness_gram(sites, params, +1, quad)
    except QuadratureError as exc:
        if exc.index is not None:
            i, j = exc.index
            raise QuadratureError(exc.error_estimate,
                                  f"Theta entry (i={i + 1}, j={j + 1})", exc.index) from exc
        raise
    b = g_minus + bound_state_overlap(params, -1) * ff
    c = g_plus + bound_state_overlap(params, +1) * ff
    return b, c


def theta_from_blocks(b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """``theta_ij = b_ij`` for ``i <= j`` and ``-c_ji`` for ``i > j``."""
    return np.triu(b) - np.tril(c.T, -1)


def theta_entry_direct(i: int, j: int, params: ChainParams, quad: QuadSpec = DEFAULT_QUAD) -> complex:
    """Single entry ``theta_ij`` (1-based indices) from its own integrals.

    Raises
    ------
    QuadratureError
        If the entry integral does not converge; the message names ``(i, j)``.
    """
    if i < 1 or j < 1:
        raise ValueError("indices are 1-based and positive")
    bs = bound_state(params.kappa)
    lo, hi = min(i, j), max(i, j)
    sites = np.array([lo, hi]) + params.x0 - 1
    sign = -1 if i <= j else +1
    try:
        g = ness_gram(sites, params, sign, quad)
    except QuadratureError as exc:
        raise QuadratureError(exc.error_estimate, f"Theta entry (i={i}, j={j})") from exc
    f = eigenfunction(sites, bs)
    val = g[0, 1] + bound_state_overlap(params, sign) * f[0] * f[1]
    return complex(val if i <= j else -val)


def assemble_theta(n: int, params: ChainParams, quad: QuadSpec = DEFAULT_QUAD) -> ReducedCorrelation:
    """Directly assembled ``Theta_n``.

    All entries come from two Gram-matrix integrals (one per branch)
    evaluated on shared adaptive panels.
    """
    b, c = correlation_blocks(n, params, quad)
    return ReducedCorrelation(theta_from_blocks(b, c), "direct")


def hermitian_companion(n: int, params: ChainParams, quad: QuadSpec = DEFAULT_QUAD) -> np.ndarray:
    """``b_ij`` for all ``i, j``; Hermitian since ``s_-`` is self-adjoint."""
    return correlation_blocks(n, params, quad)[0]


def _real_positive(det: LogScaled, what: str) -> LogScaled:
    if det.is_zero:
        return det
    if abs(det.phase - 1.0) > PHASE_TOL:
        raise AssemblyError(f"{what}: determinant phase {det.phase!r} is not real-positive")
    return LogScaled(det.log_magnitude, 1.0)


def efp(n: int, params: ChainParams, quad: QuadSpec = DEFAULT_QUAD,
        theta: ReducedCorrelation | None = None) -> LogScaled:
    """Emptiness formation probability ``P(n) = det Theta_n``.

    Parameters
    ----------
    theta : ReducedCorrelation, optional
        Precomputed matrix of order ``>= n``; its leading block is used.

    Raises
    ------
    AssemblyError
        If the determinant phase deviates from 1 by more than ``1e-8``.
    """
    if theta is None:
        theta = assemble_theta(n, params, quad)
    return _real_positive(logdet(theta.matrix[:n, :n]), f"P({n})")


def leading_logdets(M: np.ndarray, check_phase: bool = True) -> list[LogScaled]:
    """Log-determinants of all leading principal minors of ``M``."""
    out = []
    for m in range(1, M.shape[0] + 1):
        d = logdet(M[:m, :m])
        out.append(_real_positive(d, f"P({m})") if check_phase else d)
    return out


def efp_sequence(n_max: int, params: ChainParams, quad: QuadSpec = DEFAULT_QUAD) -> list[LogScaled]:
    """``P(1), ..., P(n_max)`` from one assembly of ``Theta_{n_max}``."""
    return leading_logdets(assemble_theta(n_max, params, quad).matrix)


def full_skew_from_blocks(b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """``2n x 2n`` skew matrix with ``2x2`` blocks ``[[0, b_ij], [c_ij, 0]]`` for ``i < j``.

    Diagonal blocks are ``[[0, b_ii], [-b_ii, 0]]``; entries at odd-odd and
    even-even positions vanish.
    """
    n = b.shape[0]
    om = np.zeros((2 * n, 2 * n), dtype=complex)
    for i in range(n):
        for j in range(i, n):
            om[2 * i, 2 * j + 1] = b[i, j]
            if j > i:
                om[2 * i + 1, 2 * j] = c[i, j]
    return om - om.T


def assemble_full_skew(n: int, params: ChainParams, quad: QuadSpec = DEFAULT_QUAD) -> np.ndarray:
    """Full correlation matrix ``Omega_n`` whose Pfaffian equals ``P(n)``."""
    b, c = correlation_blocks(n, params, quad)
    return full_skew_from_blocks(b, c)


def assemble_theta_structured(n: int, params: ChainParams, hankel_mode: str = DEFAULT_HANKEL_MODE,
                              quad: QuadSpec = DEFAULT_QUAD, shift: int | None = None
                              ) -> ReducedCorrelation:
    """``Theta_n`` from Toeplitz and Hankel sections.

    For ``x0 >= 0`` the result is ``T_n[a] + H_n[b]``.  For ``x0 = -n0 < 0``
    the lower-right ``(n - n0)`` block is ``T[a] + H[c]`` with
    ``c = exp(i shift k) b`` and the first ``n0`` rows and columns are taken
    from the direct assembly.  The default ``shift = -2 n0`` aligns the block
    with the sites ``0, 1, ...``; other values are accepted for diagnostics.

    Raises
    ------
    ValueError
        For an unknown ``hankel_mode`` or ``x0 < 0`` with ``n <= -x0``.
    """
    if hankel_mode not in HANKEL_MODES:
        raise ValueError(f"hankel_mode must be one of {HANKEL_MODES}, got {hankel_mode!r}")
    a = toeplitz_symbol(params)
    ov = bound_state_overlap(params, -1)
    if params.x0 >= 0:
        b = hankel_symbol(params, hankel_mode, overlap=ov, shift=0 if shift is None else shift)
        mat = toeplitz_section(a, n, quad) + hankel_section(b, n, quad)
        return ReducedCorrelation(mat, "structured")
    n0 = -params.x0
    if n <= n0:
        raise ValueError(f"x0 = {params.x0} needs n > {n0}")
    c = hankel_symbol(params, hankel_mode, overlap=ov, shift=-2 * n0 if shift is None else shift)
    m = n - n0
    mat = assemble_theta(n, params, quad).matrix.copy()
    mat[n0:, n0:] = toeplitz_section(a, m, quad) + hankel_section(c, m, quad)
    return ReducedCorrelation(mat, "structured")


def finite_rank_remainder(n: int, params: ChainParams, hankel_mode: str = DEFAULT_HANKEL_MODE,
                          quad: QuadSpec = DEFAULT_QUAD, shift: int | None = None
                          ) -> tuple[np.ndarray, np.ndarray]:
    """``M_n = Theta_n - 0 (+) (T[a] + H[c])`` and its singular values (``x0 < 0``).

    ``M_n`` is supported on the first ``n0`` rows and columns, so its rank is
    at most ``2 n0`` when the block relation holds.
    """
    if params.x0 >= 0:
        raise ValueError("the remainder is defined for x0 < 0")
    n0 = -params.x0
    theta = assemble_theta(n, params, quad).matrix
    a = toeplitz_symbol(params)
    c = hankel_symbol(params, hankel_mode, shift=-2 * n0 if shift is None else shift)
    m = n - n0
    block = np.zeros_like(theta)
    block[n0:, n0:] = toeplitz_section(a, m, quad) + hankel_section(c, m, quad)
    rem = theta - block
    return rem, np.linalg.svd(rem, compute_uv=False)


def limit_theta(n: int, params: ChainParams, quad: QuadSpec = DEFAULT_QUAD) -> np.ndarray:
    """Toeplitz section of the zero-coupling symbol (translation-invariant limit)."""
    from .model import limit_symbol

    return toeplitz_section(limit_symbol(params), n, quad)
