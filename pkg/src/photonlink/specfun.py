"""Special functions and Poisson statistics in log space.

Every analytical error-rate formula in the package is built from the
functions here. Poisson point masses are kept as natural logarithms, tails
come from the regularized incomplete gamma function, and the modified
Bessel function is carried as ``ln I0`` so that nothing overflows at the
photon counts seen in practice (hundreds of counts per slot).

All functions are pure. Scalars in give Python floats out; arrays in give
arrays out.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special

__all__ = [
    "LogProb",
    "log_factorial",
    "poisson_log_pmf",
    "poisson_tail_geq",
    "poisson_cdf_below",
    "bessel_i0_log",
    "marcum_q1",
    "DEFAULT_TOL",
    "MAX_TERMS",
]

LogProb = float
"""Natural log of a probability; ``-inf`` stands for probability zero."""

DEFAULT_TOL = 1e-15
MAX_TERMS = 100_000

_EXACT_FACTORIAL_LIMIT = 20
_LOG_FACTORIAL_TABLE = np.array(
    [math.log(math.factorial(i)) for i in range(_EXACT_FACTORIAL_LIMIT + 1)]
)


def _scalar_or_array(x, was_scalar):
    if was_scalar:
        return float(np.asarray(x).reshape(()))
    return x


def _check_nonnegative(name, value):
    arr = np.asarray(value, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise ValueError(f"{name} must be nonnegative, got {value!r}")


def log_factorial(n):
    """Return ``ln(n!)``.

    Exact (via the integer factorial) for ``n <= 20``; log-gamma beyond.
    Accepts an int or an integer array.
    """
    scalar = np.ndim(n) == 0
    arr = np.asarray(n)
    if np.any(arr < 0):
        raise ValueError(f"n must be nonnegative, got {n!r}")
    if scalar:
        k = int(arr)
        if k <= _EXACT_FACTORIAL_LIMIT:
            return math.log(math.factorial(k))
        return math.lgamma(k + 1.0)
    arr = arr.astype(np.int64)
    small = arr <= _EXACT_FACTORIAL_LIMIT
    out = special.gammaln(arr + 1.0)
    out[small] = _LOG_FACTORIAL_TABLE[arr[small]]
    return out


def poisson_log_pmf(k, lam):
    """Log of the Poisson point mass ``lam**k e**-lam / k!``.

    Parameters
    ----------
    k : int or array of int
        Count, ``k >= 0``.
    lam : float or array
        Mean count, ``lam >= 0``. For ``lam == 0`` the result is ``0`` at
        ``k == 0`` and ``-inf`` elsewhere.

    Returns
    -------
    float or ndarray
        ``k ln(lam) - lam - ln(k!)``.
    """
    _check_nonnegative("lam", lam)
    scalar = np.ndim(k) == 0 and np.ndim(lam) == 0
    k_arr = np.asarray(k)
    lam_arr = np.asarray(lam, dtype=float)
    with np.errstate(divide="ignore"):
        out = special.xlogy(k_arr, lam_arr) - lam_arr - log_factorial(np.atleast_1d(k_arr)).reshape(k_arr.shape)
    return _scalar_or_array(out, scalar)


def poisson_tail_geq(k, lam):
    """``P(X >= k)`` for ``X ~ Poisson(lam)``.

    Uses the identity ``P(X >= k) = P(k, lam)`` with ``P`` the regularized
    lower incomplete gamma function, so small tails keep full relative
    precision instead of being formed as ``1 - cdf``.
    """
    _check_nonnegative("lam", lam)
    scalar = np.ndim(k) == 0 and np.ndim(lam) == 0
    k_arr = np.asarray(k, dtype=float)
    lam_arr = np.asarray(lam, dtype=float)
    if np.any(k_arr < 0):
        raise ValueError(f"k must be nonnegative, got {k!r}")
    safe_k = np.where(k_arr > 0, k_arr, 1.0)
    out = np.where(k_arr > 0, special.gammainc(safe_k, lam_arr), 1.0)
    return _scalar_or_array(out, scalar)


def poisson_cdf_below(k, lam):
    """``P(X < k)`` for ``X ~ Poisson(lam)``; zero for ``k == 0``.

    Complement of :func:`poisson_tail_geq`, computed from the upper
    regularized incomplete gamma function.
    """
    _check_nonnegative("lam", lam)
    scalar = np.ndim(k) == 0 and np.ndim(lam) == 0
    k_arr = np.asarray(k, dtype=float)
    lam_arr = np.asarray(lam, dtype=float)
    if np.any(k_arr < 0):
        raise ValueError(f"k must be nonnegative, got {k!r}")
    safe_k = np.where(k_arr > 0, k_arr, 1.0)
    out = np.where(k_arr > 0, special.gammaincc(safe_k, lam_arr), 0.0)
    return _scalar_or_array(out, scalar)


def bessel_i0_log(z):
    """``ln I0(z)`` for ``z >= 0``.

    Evaluated as ``ln(i0e(z)) + z`` where ``i0e`` is the exponentially
    scaled Bessel function, so it is finite for any representable ``z``.
    """
    _check_nonnegative("z", z)
    scalar = np.ndim(z) == 0
    z_arr = np.asarray(z, dtype=float)
    out = np.log(special.i0e(z_arr)) + z_arr
    return _scalar_or_array(out, scalar)


def marcum_q1(a: float, b: float, tol: float = DEFAULT_TOL) -> float:
    """First-order Marcum Q function ``Q1(a, b)``.

    Evaluated from the Poisson double-series representation

        Q1(a, b) = sum_k pmf(k; b^2/2) * P(Y >= k),   Y ~ Poisson(a^2/2)

    with log-domain point masses. Terms are added in blocks until the
    remainder, bounded by ``P(X > K) * P(Y > K)``, falls below ``tol``
    times the partial sum, or ``MAX_TERMS`` is reached.
    """
    _check_nonnegative("a", a)
    _check_nonnegative("b", b)
    a = float(a)
    b = float(b)
    if b == 0.0:
        return 1.0
    x = 0.5 * a * a
    y = 0.5 * b * b
    if a == 0.0:
        return math.exp(-y)

    n = int(min(MAX_TERMS, math.ceil(y + 12.0 * math.sqrt(y) + 32.0)))
    while True:
        k = np.arange(n)
        with np.errstate(divide="ignore"):
            log_terms = poisson_log_pmf(k, y) + np.log(poisson_tail_geq(k, x))
        partial = float(np.exp(special.logsumexp(log_terms)))
        remainder = poisson_tail_geq(n, y) * poisson_tail_geq(n, x)
        if remainder <= tol * partial or remainder == 0.0 or n >= MAX_TERMS:
            break
        n = min(MAX_TERMS, 2 * n)
    return min(1.0, max(0.0, partial))
