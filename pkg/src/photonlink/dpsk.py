"""Bit error rate of binary DPSK receivers.

Two receivers are modelled: direct detection behind an optical
pre-amplifier, limited by amplified spontaneous emission (ASE), and
shot-noise-limited heterodyne detection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["DpskChannel", "ber_dpsk_preamp", "ber_dpsk_heterodyne"]


@dataclass(frozen=True)
class DpskChannel:
    """Pre-amplified DPSK link at one operating point.

    Attributes
    ----------
    photons_per_bit : float
        Mean received signal photons per bit, ``N_ph``.
    gain : float
        Linear amplifier gain ``G > 1``. ``math.inf`` selects the
        high-gain limit, where ``(G - 1) / G == 1``.
    n_sp : float
        Spontaneous emission factor, at least 1 (1 is an ideal amplifier).
    background_per_bit : float
        Mean in-band, in-polarization background photons per bit, ``N_b``.
    """

    photons_per_bit: float
    gain: float = 1e4
    n_sp: float = 1.0
    background_per_bit: float = 0.0

    def __post_init__(self):
        if not self.photons_per_bit >= 0:
            raise ValueError(f"photons_per_bit must be >= 0, got {self.photons_per_bit!r}")
        if not self.gain > 1:
            raise ValueError(f"gain must be > 1, got {self.gain!r}")
        if not self.n_sp >= 1:
            raise ValueError(f"n_sp must be >= 1, got {self.n_sp!r}")
        if not self.background_per_bit >= 0:
            raise ValueError(f"background_per_bit must be >= 0, got {self.background_per_bit!r}")


def ber_dpsk_preamp(ch: DpskChannel) -> float:
    """ASE-limited BER ``0.5 exp(-G N_ph / ((G - 1) n_sp + G N_b))``.

    With no background this is ``0.5 exp(-G N_ph / ((G - 1) n_sp))``; the
    high-gain limit is ``0.5 exp(-N_ph / (n_sp + N_b))``.
    """
    if math.isinf(ch.gain):
        snr = ch.photons_per_bit / (ch.n_sp + ch.background_per_bit)
    else:
        g = ch.gain
        snr = g * ch.photons_per_bit / ((g - 1.0) * ch.n_sp + g * ch.background_per_bit)
    return 0.5 * math.exp(-snr)


def ber_dpsk_heterodyne(n_ph: float, eta: float = 1.0) -> float:
    """Shot-noise-limited heterodyne DPSK, ``0.5 exp(-eta N_ph)``."""
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"eta must lie in (0, 1], got {eta!r}")
    if not n_ph >= 0:
        raise ValueError(f"n_ph must be >= 0, got {n_ph!r}")
    return 0.5 * math.exp(-eta * n_ph)
