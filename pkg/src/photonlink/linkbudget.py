"""Sky-background photon budget for a ground receiving telescope.

Turns sky spectral radiance, telescope and filter parameters into
background photon counts per bit, per PPM symbol and per PPM slot, and
applies detector efficiency, dark counts and transmitter Q-switch
efficiency to get the ``(K_s, K_b)`` pair the PPM formulas expect.

Units follow the field list of :class:`LinkScenario`. Defaults describe a
40 cm telescope at 1547.5 nm behind a 0.5 nm filter looking at a bright
daytime sky, received at 311 Mbps.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from scipy import constants

from photonlink.dpsk import DpskChannel
from photonlink.ppm import is_power_of_two

__all__ = [
    "LinkScenario",
    "BackgroundBreakdown",
    "solid_angle",
    "noise_power",
    "noise_photon_rate",
    "background_breakdown",
    "effective_counts",
    "dpsk_background_per_bit",
    "dpsk_channel",
    "DEFAULT_ORDERS",
]

DEFAULT_ORDERS = (2, 4, 8, 16, 32)

_UW = 1e-6  # W per microwatt
_CM2 = 1e-4  # m^2 per cm^2


@dataclass(frozen=True)
class LinkScenario:
    """Receiver-side link parameters.

    Attributes
    ----------
    spectral_radiance : float
        Sky spectral radiance, uW cm^-2 sr^-1 um^-1.
    aperture_diameter : float
        Telescope aperture diameter, cm.
    filter_bandwidth : float
        Optical filter bandwidth, um.
    fov_full_angle : float
        Full angular diameter of the field of view, degrees.
    wavelength : float
        Carrier wavelength, nm.
    data_rate : float
        Information rate, bit/s.
    polarization_filtered : bool
        A polarizer passes one of two equally bright background
        polarizations, halving the background.
    counter_efficiency : float
        Photon-counting detector efficiency, (0, 1].
    dark_count_rate : float
        Detector dark counts per second.
    qswitch_efficiency : float
        Fraction of transmitter power that ends up in PPM pulses, (0, 1].
    amplifier_gain : float
        DPSK pre-amplifier linear gain; ``math.inf`` for the ideal limit.
    n_sp : float
        DPSK pre-amplifier spontaneous emission factor, >= 1.
    """

    spectral_radiance: float = 10.0
    aperture_diameter: float = 40.0
    filter_bandwidth: float = 0.5e-3
    fov_full_angle: float = 0.5
    wavelength: float = 1547.5
    data_rate: float = 311e6
    polarization_filtered: bool = True
    counter_efficiency: float = 0.7
    dark_count_rate: float = 0.0
    qswitch_efficiency: float = 1.0
    amplifier_gain: float = 1e4
    n_sp: float = 1.05

    def __post_init__(self):
        for name in (
            "spectral_radiance",
            "aperture_diameter",
            "filter_bandwidth",
            "fov_full_angle",
            "wavelength",
            "data_rate",
            "dark_count_rate",
        ):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and value >= 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be a finite number >= 0, got {value!r}")
        for name in ("counter_efficiency", "qswitch_efficiency"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and 0.0 < value <= 1.0):
                raise ValueError(f"{name} must lie in (0, 1], got {value!r}")
        if not isinstance(self.polarization_filtered, bool):
            raise ValueError("polarization_filtered must be a boolean")
        if not self.amplifier_gain > 1:
            raise ValueError(f"amplifier_gain must be > 1, got {self.amplifier_gain!r}")
        if not self.n_sp >= 1:
            raise ValueError(f"n_sp must be >= 1, got {self.n_sp!r}")
        if not self.fov_full_angle <= 180:
            raise ValueError(f"fov_full_angle must be <= 180 degrees, got {self.fov_full_angle!r}")

    def replace(self, **changes) -> "LinkScenario":
        return dataclasses.replace(self, **changes)

    def idealized(self) -> "LinkScenario":
        """Perfect photon counter, ideal amplifier with infinite gain."""
        return self.replace(counter_efficiency=1.0, n_sp=1.0, amplifier_gain=math.inf)


@dataclass(frozen=True)
class BackgroundBreakdown:
    """One row of the background budget.

    ``modulation`` is ``"DPSK"`` or the PPM order ``M``. Rates are in
    symbols per second; counts are expected photons before any detector
    efficiency.
    """

    modulation: str | int
    symbol_rate: float
    photons_per_symbol_in_pol: float
    photons_per_slot: float

    @property
    def slots(self) -> int:
        return 1 if self.modulation == "DPSK" else int(self.modulation)


def solid_angle(fov_full_angle: float) -> float:
    """Solid angle in sr of a cone with full angular diameter in degrees.

    ``2 pi (1 - cos(theta / 2))``: 0.5 deg gives 59.8 usr.
    """
    if not 0.0 <= fov_full_angle <= 180.0:
        raise ValueError(f"angle must lie in [0, 180] degrees, got {fov_full_angle!r}")
    half = math.radians(fov_full_angle) / 2.0
    # 1 - cos(x) == 2 sin^2(x/2), exact for small angles
    return 4.0 * math.pi * math.sin(half / 2.0) ** 2


def noise_power(sc: LinkScenario) -> float:
    """Background optical power collected by the aperture, in W."""
    area_cm2 = math.pi * (sc.aperture_diameter / 2.0) ** 2
    power_uw = sc.spectral_radiance * area_cm2 * solid_angle(sc.fov_full_angle) * sc.filter_bandwidth
    return power_uw * _UW


def noise_photon_rate(sc: LinkScenario) -> float:
    """Background photon arrival rate at the aperture, photons/s (both polarizations)."""
    photon_energy = constants.h * constants.c / (sc.wavelength * 1e-9)
    return noise_power(sc) / photon_energy


def _polarization_factor(sc):
    return 0.5 if sc.polarization_filtered else 1.0


def _symbol_rate(sc, M):
    return sc.data_rate / (M.bit_length() - 1)


def _check_orders(orders):
    for M in orders:
        if not is_power_of_two(M) or M < 2:
            raise ValueError(f"PPM order must be a power of 2 >= 2, got {M!r}")


def background_breakdown(sc: LinkScenario, orders=DEFAULT_ORDERS) -> list[BackgroundBreakdown]:
    """Background photons per symbol and per slot, DPSK row first then each PPM order."""
    if not sc.data_rate > 0:
        raise ValueError("data_rate must be > 0")
    _check_orders(orders)
    rate = noise_photon_rate(sc) * _polarization_factor(sc)
    per_bit = rate / sc.data_rate
    rows = [BackgroundBreakdown("DPSK", sc.data_rate, per_bit, per_bit)]
    for M in orders:
        symbol_rate = _symbol_rate(sc, M)
        per_symbol = rate / symbol_rate
        rows.append(BackgroundBreakdown(M, symbol_rate, per_symbol, per_symbol / M))
    return rows


def effective_counts(sc: LinkScenario, photons_per_bit: float, M: int) -> tuple[float, float]:
    """Detected ``(K_s, K_b)`` for M-ary PPM at a received photons-per-bit level.

    ``K_s = photons_per_bit * log2(M) * qswitch * eta`` and
    ``K_b = (N_noise * eta + N_dark) / M`` with both noise terms per symbol.
    """
    if not photons_per_bit >= 0:
        raise ValueError(f"photons_per_bit must be >= 0, got {photons_per_bit!r}")
    _check_orders([M])
    if not sc.data_rate > 0:
        raise ValueError("data_rate must be > 0")
    eta = sc.counter_efficiency
    bits = M.bit_length() - 1
    k_s = photons_per_bit * bits * sc.qswitch_efficiency * eta
    symbol_rate = _symbol_rate(sc, M)
    noise_per_symbol = noise_photon_rate(sc) * _polarization_factor(sc) / symbol_rate
    dark_per_symbol = sc.dark_count_rate / symbol_rate
    k_b = (noise_per_symbol * eta + dark_per_symbol) / M
    return k_s, k_b


def dpsk_background_per_bit(sc: LinkScenario) -> float:
    """In-band, in-polarization background photons per DPSK bit (no detector efficiency)."""
    if not sc.data_rate > 0:
        raise ValueError("data_rate must be > 0")
    return noise_photon_rate(sc) * _polarization_factor(sc) / sc.data_rate


def dpsk_channel(sc: LinkScenario, photons_per_bit: float) -> DpskChannel:
    return DpskChannel(
        photons_per_bit=photons_per_bit,
        gain=sc.amplifier_gain,
        n_sp=sc.n_sp,
        background_per_bit=dpsk_background_per_bit(sc),
    )
