"""Scattering data of the impurity: resolvent boundary values, energy space, wave operators.

Conventions: ``e_x(k) = exp(ikx)`` is the Fourier image of the site vector
``delta_x``, the free hopping Hamiltonian acts as multiplication by ``cos k``
and inner products are ``(1/2pi) int conj(f) g dk``.  In energy space the
absolutely continuous part of ``h`` is the direct integral over ``e in (-1, 1)``
with fiber ``C^2``; the two components carry the momenta ``+arccos e`` and
``-arccos e``.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .quadrature import DEFAULT_QUAD, QuadSpec, integrate_circle, integrate_panels, subdivide
from .spectral import BoundState, eigenfunction

_SIDES = (-1, 1)


def _check_branch(branch: int) -> int:
    if branch not in _SIDES:
        raise ValueError(f"branch/side must be +1 or -1, got {branch!r}")
    return branch


def _check_energy(e) -> np.ndarray:
    e = np.asarray(e, dtype=float)
    if np.any(np.abs(e) >= 1.0) or np.any(~np.isfinite(e)):
        raise ValueError("energy must lie in the open interval (-1, 1)")
    return e


def resolvent_boundary(e, x: int, side: int):
    """Boundary value ``(delta_0, (h - (e +- i0))^{-1} delta_x)``.

    Parameters
    ----------
    e : float or array_like
        Energies strictly inside ``(-1, 1)``.
    x : int
        Site index.
    side : {+1, -1}
        Approach from the upper (``+1``) or lower (``-1``) half plane.

    Returns
    -------
    complex or ndarray
        ``side * i * (e - side*i*sqrt(1-e^2))^{|x|} / sqrt(1 - e^2)``.

    Raises
    ------
    ValueError
        If ``|e| >= 1``.
    """
    side = _check_branch(side)
    e = _check_energy(e)
    r = np.sqrt(1.0 - e * e)
    return side * 1j * (e - side * 1j * r) ** abs(int(x)) / r


def resolvent_quadrature(e: float, x: int, eps: float, side: int,
                         quad: QuadSpec = QuadSpec(tol=1e-9)) -> complex:
    """``(delta_0, (h - (e + side*i*eps))^{-1} delta_x)`` by momentum quadrature.

    Independent check of :func:`resolvent_boundary` at small ``eps``.  The
    mesh is refined around the two momenta ``+-arccos e`` where the integrand
    peaks with width ``eps`` and height ``1/eps``, hence the looser default
    absolute tolerance.
    """
    side = _check_branch(side)
    k0 = math.acos(e)
    pts = {-math.pi, 0.0, math.pi}
    for c in (k0, -k0):
        w = eps
        while w < 0.5:
            pts.update((c - w, c + w))
            w *= 2.0
        pts.add(c)
    pts = sorted(p for p in pts if -math.pi <= p <= math.pi)

    def panel(k, w):
        # cos k - e as a product, free of cancellation near the peaks
        d = -2.0 * np.sin(0.5 * (k + k0)) * np.sin(0.5 * (k - k0)) - side * 1j * eps
        return np.asarray(np.sum(w * np.exp(1j * k * x) / d))

    return complex(integrate_panels(panel, subdivide(pts, 2), quad,
                                    f"resolvent x={x} eps={eps}").value)


def wave_action(k, x, branch: int, bs: BoundState):
    """Momentum representation of ``w_+-(h, h_B) delta_x``.

    ``exp(ikx) -+ i kappa exp(-+ i|k||x|) / (sin|k| +- i kappa)``.  Vectorized:
    ``k`` and ``x`` broadcast against each other.
    """
    branch = _check_branch(branch)
    k = np.asarray(k, dtype=float)
    x = np.asarray(x)
    ak = np.abs(k)
    kap = bs.kappa
    corr = 1j * kap * np.exp(-branch * 1j * ak * np.abs(x)) / (np.sin(ak) + branch * 1j * kap)
    return np.exp(1j * k * x) - branch * corr


def wave_matrix(k, sites, branch: int, bs: BoundState) -> np.ndarray:
    """``W[m, s] = wave_action(k[m], sites[s])`` (nodes along rows)."""
    k = np.asarray(k, dtype=float)[:, None]
    return wave_action(k, np.asarray(sites)[None, :], branch, bs)


def wave_gram(sites, branch: int, bs: BoundState,
              weight: Callable[[np.ndarray], np.ndarray] | None = None,
              quad: QuadSpec = DEFAULT_QUAD,
              breakpoints=(0.0, -math.pi / 2, math.pi / 2)) -> np.ndarray:
    """``G[x, y] = (1/2pi) int conj(w e_x) weight(k) (w e_y) dk`` over ``sites``.

    With ``weight=None`` this is the Gram matrix of the wave images, which
    equals ``delta_xy - f_B(x) f_B(y)``.  One BLAS product per panel.
    """
    sites = np.asarray(sites)
    freq = float(2 * np.max(np.abs(sites))) if sites.size else 0.0

    def panel(k, w):
        W = wave_matrix(k, sites, branch, bs)
        ww = w if weight is None else w * weight(k)
        return (W.conj().T * ww) @ W

    return integrate_circle(panel, quad, breakpoints, freq,
                            context=f"wave Gram branch={branch}").value


def completeness_defect(sites, bs: BoundState) -> np.ndarray:
    """``I - |f_B><f_B|`` restricted to ``sites`` (target of :func:`wave_gram`)."""
    sites = np.asarray(sites)
    f = eigenfunction(sites, bs)
    return np.eye(len(sites)) - np.outer(f, f)


def energy_transform(phi: Callable[[np.ndarray], np.ndarray], e) -> np.ndarray:
    """Energy-space image of a momentum function, shape ``e.shape + (2,)``.

    ``(2pi)^{-1/2} (1 - e^2)^{-1/4} [phi(arccos e), phi(-arccos e)]``.
    """
    e = _check_energy(e)
    th = np.arccos(e)
    pref = (2.0 * math.pi) ** -0.5 * (1.0 - e * e) ** -0.25
    return np.stack([pref * phi(th), pref * phi(-th)], axis=-1)


def inverse_energy_transform(eta: Callable[[np.ndarray], np.ndarray], k) -> np.ndarray:
    """Momentum function from an energy-space function ``eta(e) -> (..., 2)``.

    ``(2pi)^{1/2} |sin k|^{1/2}`` times the first component at ``cos k`` for
    ``k >= 0`` and the second for ``k < 0``.  Undefined at ``k in {0, pi}``
    where ``cos k = +-1``; those points are returned as NaN.
    """
    k = np.asarray(k, dtype=float)
    c = np.cos(k)
    inside = np.abs(c) < 1.0
    safe_c = np.where(inside, c, 0.0)
    vals = np.asarray(eta(safe_c))
    comp = np.where(k >= 0.0, vals[..., 0], vals[..., 1])
    out = math.sqrt(2.0 * math.pi) * np.abs(np.sin(k)) ** 0.5 * comp
    return np.where(inside, out, np.nan)


def energy_inner(phi, psi, quad: QuadSpec = DEFAULT_QUAD) -> complex:
    """``int_{-1}^{1} <phi~(e), psi~(e)> de`` evaluated under ``e = cos(theta)``.

    The substitution absorbs the ``(1 - e^2)^{-1/2}`` endpoint weight: the
    integrand becomes ``(conj(phi) psi)(theta) + (conj(phi) psi)(-theta)``
    over ``theta in (0, pi)`` with the ``1/2pi`` normalization.
    """

    def panel(th, w):
        # de = sin(theta) dtheta cancels the (1 - e^2)^{-1/2} of the fiber product
        v = np.conj(phi(th)) * psi(th) + np.conj(phi(-th)) * psi(-th)
        return np.asarray(np.sum(w * v))

    return complex(integrate_panels(panel, subdivide([0.0, math.pi / 2, math.pi], quad.min_subpanels),
                                    quad, "energy inner product").value)


def wave_action_energy(e, x: int, branch: int, bs: BoundState) -> np.ndarray:
    """Energy-space image of ``w_+-(h, h_B) delta_x``, shape ``e.shape + (2,)``.

    ``delta~_x(e) - kappa rho_{0,x}(e +- i0) / (1 + kappa rho_{0,0}(e +- i0)) delta~_0(e)``
    built from :func:`resolvent_boundary` rather than from :func:`wave_action`.
    """
    branch = _check_branch(branch)
    e = _check_energy(e)
    r = np.sqrt(1.0 - e * e)
    pref = (2.0 * math.pi) ** -0.5 * (1.0 - e * e) ** -0.25
    delta_x = np.stack([pref * (e + 1j * r) ** x, pref * (e - 1j * r) ** x], axis=-1)
    delta_0 = np.stack([pref + 0j * e, pref + 0j * e], axis=-1)
    kap = bs.kappa
    factor = kap * resolvent_boundary(e, x, branch) / (1.0 + kap * resolvent_boundary(e, 0, branch))
    return delta_x - factor[..., None] * delta_0
