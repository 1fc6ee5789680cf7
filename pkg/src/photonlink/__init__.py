"""Error-rate models for photon-counting PPM and optically pre-amplified DPSK links."""

__version__ = "0.1.0"

from photonlink.dpsk import DpskChannel, ber_dpsk_heterodyne, ber_dpsk_preamp
from photonlink.linkbudget import (
    BackgroundBreakdown,
    LinkScenario,
    background_breakdown,
    effective_counts,
    noise_photon_rate,
    solid_angle,
)
from photonlink.mcsim import SimConfig, SimReport, binomial_ci95, enumerate_exact, simulate_ppm
from photonlink.ppm import (
    ErrorRates,
    PpmChannel,
    ber_mppm,
    hughes_bound,
    pe2_closed,
    quantum_ber,
    quantum_ser,
    ser_mppm_exact,
    ser_to_ber,
)
