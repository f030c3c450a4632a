"""Pfaffians and determinants in the log domain.

Correlation determinants decay like ``exp(-Gamma n)`` and leave the double
range near ``n ~ 700``; every routine here returns a :class:`LogScaled`
value instead of a bare float.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

PAIRING_MAX_ORDER = 12


@dataclass(frozen=True)
class LogScaled:
    """A number ``exp(log_magnitude) * phase``.

    Zero is represented by ``log_magnitude = -inf`` with ``phase = 0``.
    """

    log_magnitude: float
    phase: complex = 1.0 + 0j

    def __post_init__(self):
        if self.log_magnitude == -math.inf:
            object.__setattr__(self, "phase", 0j)
        elif abs(abs(self.phase) - 1.0) > 1e-14:
            raise ValueError(f"phase must have unit modulus, got |phase| = {abs(self.phase)!r}")
        object.__setattr__(self, "log_magnitude", float(self.log_magnitude))
        object.__setattr__(self, "phase", complex(self.phase))

    @classmethod
    def from_value(cls, z) -> "LogScaled":
        z = complex(z)
        if z == 0:
            return cls.zero()
        return cls(math.log(abs(z)), z / abs(z))

    @classmethod
    def zero(cls) -> "LogScaled":
        return cls(-math.inf, 0j)

    @property
    def is_zero(self) -> bool:
        return self.log_magnitude == -math.inf

    @property
    def value(self) -> complex:
        """Plain complex value (underflows to 0 for very negative logs)."""
        if self.is_zero:
            return 0j
        return math.exp(self.log_magnitude) * self.phase

    @property
    def log10_magnitude(self) -> float:
        return self.log_magnitude / math.log(10.0)

    def __mul__(self, other: "LogScaled") -> "LogScaled":
        if not isinstance(other, LogScaled):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return LogScaled.zero()
        ph = self.phase * other.phase
        return LogScaled(self.log_magnitude + other.log_magnitude, ph / abs(ph))

    def __truediv__(self, other: "LogScaled") -> "LogScaled":
        if not isinstance(other, LogScaled):
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("division by a zero LogScaled")
        if self.is_zero:
            return LogScaled.zero()
        ph = self.phase / other.phase
        return LogScaled(self.log_magnitude - other.log_magnitude, ph / abs(ph))

    def __pow__(self, p: int) -> "LogScaled":
        if self.is_zero:
            return LogScaled.zero() if p > 0 else LogScaled(0.0)
        ph = self.phase ** p
        return LogScaled(p * self.log_magnitude, ph / abs(ph))

    def close_to(self, other: "LogScaled", rtol: float) -> bool:
        """Relative comparison ``|x - y| <= rtol * max(|x|, |y|)`` done in the log domain."""
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        ref = max(self.log_magnitude, other.log_magnitude)
        x = math.exp(self.log_magnitude - ref) * self.phase
        y = math.exp(other.log_magnitude - ref) * other.phase
        return abs(x - y) <= rtol


def skew_from_upper(upper: np.ndarray, order: int) -> np.ndarray:
    """Skew-symmetric matrix of ``order`` from its strict upper triangle (row-major)."""
    if order % 2:
        raise ValueError("order must be even")
    iu = np.triu_indices(order, 1)
    upper = np.asarray(upper)
    if upper.shape != (len(iu[0]),):
        raise ValueError(f"expected {len(iu[0])} upper entries, got shape {upper.shape}")
    A = np.zeros((order, order), dtype=np.result_type(upper, float))
    A[iu] = upper
    return A - A.T


def check_skew(A: np.ndarray, rtol: float = 1e-12) -> np.ndarray:
    """Validate a square, even-order, skew-symmetric array and return it as ndarray."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    if A.shape[0] % 2:
        raise ValueError("Pfaffian needs even order")
    scale = float(np.max(np.abs(A))) if A.size else 0.0
    if A.size and float(np.max(np.abs(A + A.T))) > rtol * max(scale, 1.0):
        raise ValueError("matrix is not skew-symmetric")
    return A


def _pairings(items: tuple[int, ...]):
    """All perfect matchings of ``items`` with the crossing-parity sign."""
    if not items:
        yield 1, ()
        return
    first, rest = items[0], items[1:]
    for pos, partner in enumerate(rest):
        remaining = rest[:pos] + rest[pos + 1:]
        # pairing first with the (pos+1)-th element crosses pos elements
        sign = -1 if pos % 2 else 1
        for s, tail in _pairings(remaining):
            yield sign * s, ((first, partner),) + tail


def pfaffian_pairing(A: np.ndarray) -> complex:
    """Pairing-sum Pfaffian; ``(2n)!/(2^n n!)`` terms, order at most 12."""
    A = check_skew(A)
    m = A.shape[0]
    if m > PAIRING_MAX_ORDER:
        raise ValueError(f"pairing sum limited to order <= {PAIRING_MAX_ORDER}")
    total = 0j
    for sign, pairs in _pairings(tuple(range(m))):
        term = complex(sign)
        for i, j in pairs:
            term *= A[i, j]
        total += term
    return total


def pfaffian_elimination(A: np.ndarray) -> LogScaled:
    """Pfaffian by skew Gaussian elimination with partial pivoting.

    Reduces ``A`` to tridiagonal form two columns at a time.  At step ``k``
    the largest entry below the diagonal in column ``k`` is moved to row
    ``k+1`` by a symmetric row/column swap (each swap flips the sign), then
    rows ``k+2..`` are cleared against pivot ``A[k, k+1]``.  The product of
    pivots is accumulated as a log-magnitude and a unit phase.
    """
    A = np.array(check_skew(A), dtype=complex)
    m = A.shape[0]
    log_mag = 0.0
    phase = 1.0 + 0j
    for k in range(0, m - 1, 2):
        col = np.abs(A[k + 1:, k])
        kp = k + 1 + int(np.argmax(col))
        if kp != k + 1:
            A[[k + 1, kp], :] = A[[kp, k + 1], :]
            A[:, [k + 1, kp]] = A[:, [kp, k + 1]]
            phase = -phase
        piv = A[k, k + 1]
        if piv == 0:
            return LogScaled.zero()
        log_mag += math.log(abs(piv))
        phase *= piv / abs(piv)
        if k + 2 < m:
            tau = A[k, k + 2:] / piv
            u = A[k + 2:, k + 1]
            A[k + 2:, k + 2:] += np.outer(tau, u) - np.outer(u, tau)
    return LogScaled(log_mag, phase / abs(phase))


def pfaffian(A: np.ndarray, method: str = "auto") -> LogScaled:
    """Pfaffian of a skew-symmetric matrix.

    Parameters
    ----------
    A : (2n, 2n) array_like
        Skew-symmetric matrix.
    method : {"auto", "pairing", "elimination"}
        ``"pairing"`` sums over all pairings (order <= 12); ``"elimination"``
        uses pivoted skew elimination; ``"auto"`` picks elimination.

    Returns
    -------
    LogScaled
        Zero Pfaffians are reported with ``log_magnitude = -inf``.
    """
    if method == "pairing":
        return LogScaled.from_value(pfaffian_pairing(A))
    if method in ("auto", "elimination"):
        return pfaffian_elimination(A)
    raise ValueError(f"unknown method {method!r}")


def logdet(M: np.ndarray) -> LogScaled:
    """Determinant from an LU factorization with partial pivoting.

    Singular input (an exactly zero pivot) yields the zero sentinel.
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("matrix must be square")
    n = M.shape[0]
    if n == 0:
        return LogScaled(0.0)
    with warnings.catch_warnings():
        # exactly singular input is reported through the zero sentinel
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(M, check_finite=True)
    d = np.diag(lu)
    if np.any(d == 0):
        return LogScaled.zero()
    swaps = int(np.count_nonzero(piv != np.arange(n)))
    phase = complex(-1.0 if swaps % 2 else 1.0)
    phase *= complex(np.prod(d / np.abs(d)))
    return LogScaled(float(np.sum(np.log(np.abs(d)))), phase / abs(phase))


def det_cofactor(M: np.ndarray) -> complex:
    """Laplace expansion along the first row (order <= 8; test oracle)."""
    M = np.asarray(M)
    n = M.shape[0]
    if n > 8:
        raise ValueError("cofactor expansion limited to order <= 8")
    if n == 0:
        return 1.0 + 0j
    if n == 1:
        return complex(M[0, 0])
    total = 0j
    for j in range(n):
        minor = np.delete(np.delete(M, 0, axis=0), j, axis=1)
        total += (-1) ** j * M[0, j] * det_cofactor(minor)
    return total


def det_block(M: np.ndarray, block: int = 4) -> complex:
    """Determinant by the Schur complement recursion ``det A * det(D - C A^{-1} B)``.

    Leading ``block x block`` pieces use :func:`det_cofactor`; test oracle for
    :func:`logdet`.
    """
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    if n <= block:
        return det_cofactor(M)
    A, B = M[:block, :block], M[:block, block:]
    C, D = M[block:, :block], M[block:, block:]
    return det_cofactor(A) * det_block(D - C @ np.linalg.solve(A, B), block)


def block_embed(X: np.ndarray) -> np.ndarray:
    """``[[0, X], [-X^t, 0]]``."""
    X = np.asarray(X)
    n = X.shape[0]
    Z = np.zeros((n, n), dtype=X.dtype)
    return np.block([[Z, X], [-X.T, Z]])


def pfaffian_block_identity(X: np.ndarray, Y: np.ndarray | None = None) -> dict:
    """Both sides of the two Pfaffian identities used for the reduction.

    ``pf([[0, X], [-X^t, 0]]) = (-1)^{n(n-1)/2} det X`` and, when a skew ``Y``
    of the same order as ``X`` is given, ``pf(X Y X^t) = det(X) pf(Y)``.

    Returns
    -------
    dict
        ``{"block": (lhs, rhs)}`` and optionally ``{"congruence": (lhs, rhs)}``
        with :class:`LogScaled` entries.
    """
    X = np.asarray(X)
    n = X.shape[0]
    sign = LogScaled(0.0, -1.0 if (n * (n - 1) // 2) % 2 else 1.0)
    out = {"block": (pfaffian(block_embed(X)), sign * logdet(X))}
    if Y is not None:
        Y = check_skew(Y)
        if Y.shape != X.shape:
            raise ValueError("X and Y must have the same order")
        out["congruence"] = (pfaffian(X @ Y @ X.T), logdet(X) * pfaffian(Y))
    return out


def random_skew(order: int, rng: np.random.Generator, complex_entries: bool = True) -> np.ndarray:
    """Skew matrix with standard normal upper entries."""
    iu = np.triu_indices(order, 1)
    vals = rng.standard_normal(len(iu[0]))
    if complex_entries:
        vals = vals + 1j * rng.standard_normal(len(iu[0]))
    A = np.zeros((order, order), dtype=vals.dtype)
    A[iu] = vals
    return A - A.T
