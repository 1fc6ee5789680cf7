"""Symbol and bit error rates for photon-counting M-ary PPM.

A PPM symbol puts one optical pulse in one of ``M`` slots. The receiver
counts photons per slot and picks the slot with the most counts, breaking
ties uniformly at random. Signal slots see Poisson(``K_s + K_b``) counts,
empty slots Poisson(``K_b``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from photonlink.specfun import (
    MAX_TERMS,
    bessel_i0_log,
    marcum_q1,
    poisson_cdf_below,
    poisson_log_pmf,
    poisson_tail_geq,
)

__all__ = [
    "PpmChannel",
    "ErrorRates",
    "is_power_of_two",
    "quantum_ser",
    "quantum_ber",
    "pe2_closed",
    "pe2_series",
    "ser_mppm_exact",
    "ser_mppm_with_residual",
    "ser_mppm_unmixed",
    "hughes_bound",
    "ser_to_ber",
    "ber_mppm",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-12


def is_power_of_two(m) -> bool:
    return isinstance(m, (int, np.integer)) and m >= 1 and (m & (m - 1)) == 0


def _check_order(M):
    if not isinstance(M, (int, np.integer)) or M < 2:
        raise ValueError(f"PPM order must be an integer >= 2, got {M!r}")


@dataclass(frozen=True)
class PpmChannel:
    """Photon-counting PPM channel.

    Attributes
    ----------
    order : int
        Slots per symbol ``M``, a power of two, at least 2.
    signal_counts : float
        Mean signal counts in the pulsed slot, ``K_s``.
    background_counts : float
        Mean background counts in every slot, ``K_b``.
    """

    order: int
    signal_counts: float
    background_counts: float

    def __post_init__(self):
        if not is_power_of_two(self.order) or self.order < 2:
            raise ValueError(f"order must be a power of 2 >= 2, got {self.order!r}")
        if not (self.signal_counts >= 0 and math.isfinite(self.signal_counts)):
            raise ValueError(f"signal_counts must be finite and >= 0, got {self.signal_counts!r}")
        if not (self.background_counts >= 0 and math.isfinite(self.background_counts)):
            raise ValueError(
                f"background_counts must be finite and >= 0, got {self.background_counts!r}"
            )

    @property
    def bits_per_symbol(self) -> int:
        return self.order.bit_length() - 1


@dataclass(frozen=True)
class ErrorRates:
    ser: float
    ber: float
    bound_ser: float
    truncation_residual: float


def quantum_ser(M: int, n_ph: float) -> float:
    """Noise-free SER: the pulse goes undetected and the guess is wrong."""
    _check_order(M)
    if n_ph < 0:
        raise ValueError(f"n_ph must be >= 0, got {n_ph!r}")
    return (M - 1) / M * math.exp(-n_ph)


def quantum_ber(M: int, n_ph: float) -> float:
    """Noise-free BER, ``0.5 * exp(-n_ph)`` for every ``M``."""
    return ser_to_ber(M, quantum_ser(M, n_ph))


def ser_to_ber(M: int, ser: float) -> float:
    """Convert SER to BER assuming an error picks a wrong slot uniformly.

    The expected fraction of wrong bits given a symbol error is
    ``M / (2 (M - 1))``.
    """
    _check_order(M)
    if not is_power_of_two(M):
        raise ValueError(f"M must be a power of 2, got {M!r}")
    if not 0.0 <= ser <= 1.0:
        raise ValueError(f"ser must lie in [0, 1], got {ser!r}")
    return M / (2.0 * (M - 1)) * ser


def pe2_closed(k_s: float, k_b: float) -> float:
    """Binary PPM error probability in Marcum-Q / Bessel form.

    ``Q1(sqrt(2 K_b), sqrt(2 (K_s + K_b))) - 0.5 exp(-(K_s + 2 K_b)) I0(2 sqrt((K_s + K_b) K_b))``
    """
    if k_s < 0 or k_b < 0:
        raise ValueError(f"counts must be >= 0, got k_s={k_s!r}, k_b={k_b!r}")
    q = marcum_q1(math.sqrt(2.0 * k_b), math.sqrt(2.0 * (k_s + k_b)))
    tie = math.exp(bessel_i0_log(2.0 * math.sqrt((k_s + k_b) * k_b)) - (k_s + 2.0 * k_b))
    return min(0.5, max(0.0, q - 0.5 * tie))


def pe2_series(k_s: float, k_b: float, tol: float = DEFAULT_TOL) -> float:
    """Binary PPM error probability summed directly over the signal-slot count.

    Same quantity as :func:`pe2_closed`; kept as a second route for checks.
    """
    return ser_mppm_exact(PpmChannel(2, k_s, k_b), tol)


def _xlogp(e, logp):
    # e * log(p) with 0 * log(0) taken as 0, so 0**0 == 1.
    return np.where(e == 0, 0.0, e * np.where(e == 0, 0.0, logp))


def _log_binomials(M):
    m = np.arange(1, M)
    return m, special.gammaln(M) - special.gammaln(m + 1.0) - special.gammaln(M - m)


def _log_error_given_count(k1, M, k_b):
    """Log of P(symbol error | signal-slot count k1), one entry per k1.

    An error happens when at least one empty slot beats ``k1``, or when none
    does and ``m`` of them tie with it, in which case the random pick is wrong
    with probability ``m / (m + 1)``.
    """
    k1 = np.asarray(k1)
    above = poisson_tail_geq(k1 + 1, k_b)
    with np.errstate(divide="ignore"):
        # ln P(empty slot <= k1), taken from whichever side is more accurate
        log_not_above = np.where(
            above < 0.5, np.log1p(-np.minimum(above, 0.5)), np.log(poisson_cdf_below(k1 + 1, k_b))
        )
        log_any_above = np.log(-np.expm1((M - 1) * log_not_above))
        log_tie = poisson_log_pmf(k1, k_b)[:, None]
        log_below = np.log(poisson_cdf_below(k1, k_b))[:, None]
        m, log_binom = _log_binomials(M)
        tied = (
            log_binom
            + np.log(m / (m + 1.0))
            + _xlogp(m, log_tie)
            + _xlogp(M - m - 1, log_below)
        )
        return np.logaddexp(log_any_above, special.logsumexp(tied, axis=1))


def _log_unmixed_error_given_count(k1, M, k_b):
    # Only "m above, rest below" and "m tied, rest below" configurations.
    k1 = np.asarray(k1)
    with np.errstate(divide="ignore"):
        log_above = np.log(poisson_tail_geq(k1 + 1, k_b))[:, None]
        log_tie = poisson_log_pmf(k1, k_b)[:, None]
        log_below = np.log(poisson_cdf_below(k1, k_b))[:, None]
        m, log_binom = _log_binomials(M)
        rest = _xlogp(M - m - 1, log_below)
        above = log_binom + _xlogp(m, log_above) + rest
        tied = log_binom + np.log(m / (m + 1.0)) + _xlogp(m, log_tie) + rest
        return special.logsumexp(np.concatenate([above, tied], axis=1), axis=1)


def _sum_over_signal_count(ch, tol, log_error_given_count):
    if not 0.0 < tol <= 1e-6:
        raise ValueError(f"tol must lie in (0, 1e-6], got {tol!r}")
    M = ch.order
    lam_on = ch.signal_counts + ch.background_counts
    k_b = ch.background_counts

    n = int(min(MAX_TERMS, math.ceil(lam_on + 12.0 * math.sqrt(lam_on) + 32.0)))
    while True:
        k1 = np.arange(n)
        log_terms = poisson_log_pmf(k1, lam_on) + log_error_given_count(k1, M, k_b)
        ser = float(np.exp(special.logsumexp(log_terms)))
        residual = poisson_tail_geq(n, lam_on) * min(1.0, (M - 1) * poisson_tail_geq(n, k_b))
        if residual <= tol * ser or residual < 1e-300 or n >= MAX_TERMS:
            break
        n = min(MAX_TERMS, 2 * n)
    return min(1.0, max(0.0, ser)), residual


def ser_mppm_with_residual(ch: PpmChannel, tol: float = DEFAULT_TOL) -> tuple[float, float]:
    """Exact M-ary PPM SER and an upper bound on the mass dropped by truncation.

    Sums ``P(k1) * P(error | k1)`` over the signal-slot count ``k1``. The sum
    stops at ``K`` once the remainder bound
    ``P(k1 >= K) * min(1, (M - 1) P(k_empty >= K))`` is below ``tol * SER``.
    """
    return _sum_over_signal_count(ch, tol, _log_error_given_count)


def ser_mppm_exact(ch: PpmChannel, tol: float = DEFAULT_TOL) -> float:
    """Exact M-ary PPM symbol error rate with random tie-breaking."""
    return ser_mppm_with_residual(ch, tol)[0]


def ser_mppm_unmixed(ch: PpmChannel, tol: float = DEFAULT_TOL) -> float:
    """Binomial-sum SER that ignores mixed beaten-and-tied configurations.

    Counts only the cases where ``m`` empty slots all beat the signal slot,
    or all tie with it, while the remaining ``M - 1 - m`` fall below. Cases
    mixing beaten and tied slots are missing, so for ``M > 2`` this is a
    lower estimate of :func:`ser_mppm_exact`. The two agree for ``M = 2``
    and for ``K_b = 0``.
    """
    return _sum_over_signal_count(ch, tol, _log_unmixed_error_given_count)[0]


def hughes_bound(ch: PpmChannel) -> float:
    """Upper bound ``1 - (1 - PE2)**M`` on the M-ary SER."""
    pe2 = pe2_closed(ch.signal_counts, ch.background_counts)
    return min(1.0, max(0.0, -math.expm1(ch.order * math.log1p(-pe2))))


def ber_mppm(ch: PpmChannel, tol: float = DEFAULT_TOL) -> ErrorRates:
    """SER, BER, Hughes bound and truncation residual for one channel."""
    ser, residual = ser_mppm_with_residual(ch, tol)
    return ErrorRates(
        ser=ser,
        ber=ser_to_ber(ch.order, ser),
        bound_ser=hughes_bound(ch),
        truncation_residual=residual,
    )
