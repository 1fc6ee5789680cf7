"""BER curves and required-photon comparisons across modulations.

A modulation is either ``"DPSK"`` or a PPM order ``M``. The horizontal
axis everywhere is average received photons per bit, before detector
efficiency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from photonlink.dpsk import ber_dpsk_preamp
from photonlink.linkbudget import LinkScenario, dpsk_channel, effective_counts
from photonlink.ppm import DEFAULT_TOL, PpmChannel, ber_mppm, is_power_of_two

__all__ = [
    "BerSeries",
    "parse_modulation",
    "modulation_label",
    "ber_at",
    "ber_curve",
    "default_grid",
    "required_photons",
    "compare",
    "DEFAULT_TARGETS",
]

DEFAULT_TARGETS = (1e-4, 1e-6, 1e-9)
_SEARCH_CEILING = 1e4  # photons per bit


@dataclass(frozen=True)
class BerSeries:
    label: str
    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        xs = [p[0] for p in self.points]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("photons_per_bit must be strictly increasing")
        if any(not 0.0 <= p[1] <= 1.0 for p in self.points):
            raise ValueError("BER values must lie in [0, 1]")

    @property
    def photons_per_bit(self) -> np.ndarray:
        return np.array([p[0] for p in self.points])

    @property
    def ber(self) -> np.ndarray:
        return np.array([p[1] for p in self.points])


def parse_modulation(value) -> str | int:
    """Accept ``"DPSK"`` (any case) or a power-of-two PPM order as int or string."""
    if isinstance(value, str):
        text = value.strip()
        if text.upper() == "DPSK":
            return "DPSK"
        if text.upper().endswith("-PPM"):
            text = text[:-4]
        try:
            value = int(text)
        except ValueError:
            raise ValueError(f"unknown modulation {value!r}") from None
    if isinstance(value, bool) or not is_power_of_two(value) or value < 2:
        raise ValueError(f"PPM order must be a power of 2 >= 2, got {value!r}")
    return int(value)


def modulation_label(mod) -> str:
    return "DPSK" if mod == "DPSK" else f"{mod}-PPM"


def _bits(mod) -> int:
    return 1 if mod == "DPSK" else int(mod).bit_length() - 1


def ber_at(sc: LinkScenario, mod, photons_per_bit: float, tol: float = DEFAULT_TOL) -> float:
    if mod == "DPSK":
        return ber_dpsk_preamp(dpsk_channel(sc, photons_per_bit))
    k_s, k_b = effective_counts(sc, photons_per_bit, mod)
    return ber_mppm(PpmChannel(mod, k_s, k_b), tol).ber


def default_grid(lo: float = 1.0, hi: float = 150.0, points: int = 150) -> np.ndarray:
    return np.geomspace(lo, hi, points)


def ber_curve(sc: LinkScenario, mod, grid, tol: float = DEFAULT_TOL) -> BerSeries:
    pts = tuple((float(n), ber_at(sc, mod, float(n), tol)) for n in grid)
    return BerSeries(modulation_label(mod), pts)


def required_photons(
    sc: LinkScenario, mod, target: float, tol: float = DEFAULT_TOL, ceiling: float = _SEARCH_CEILING
) -> float | None:
    """Photons per bit at which the BER falls to ``target``; ``None`` if not reached by ``ceiling``."""
    if not 0.0 < target < 0.5:
        raise ValueError(f"target BER must lie in (0, 0.5), got {target!r}")

    def excess(n):
        return math.log(max(ber_at(sc, mod, n, tol), 1e-300)) - math.log(target)

    if excess(ceiling) > 0:
        return None
    return optimize.brentq(excess, 0.0, ceiling, xtol=1e-10, rtol=1e-12)


def compare(
    sc: LinkScenario,
    radiance_levels,
    modulations,
    targets=DEFAULT_TARGETS,
    tol: float = DEFAULT_TOL,
) -> list[dict]:
    """Required photons per bit for every level, target and modulation, with a ranking.

    Rankings list labels from fewest to most photons per bit; unreachable
    modulations come last and are reported with ``None``.
    """
    out = []
    for level in radiance_levels:
        level_sc = sc.replace(spectral_radiance=float(level))
        per_target = []
        for target in targets:
            required = {}
            for mod in modulations:
                n = required_photons(level_sc, mod, target, tol)
                required[modulation_label(mod)] = {
                    "photons_per_bit": n,
                    "photons_per_symbol": None if n is None else n * _bits(mod),
                    "reachable": n is not None,
                }
            ranking = sorted(
                required,
                key=lambda k: (required[k]["photons_per_bit"] is None, required[k]["photons_per_bit"] or 0.0),
            )
            per_target.append({"target_ber": target, "required": required, "ranking": ranking})
        out.append({"spectral_radiance": float(level), "targets": per_target})
    return out
