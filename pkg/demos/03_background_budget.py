"""
Sky background budget
=====================

Converts sky spectral radiance into background photons per PPM slot and
per DPSK bit for a 40 cm telescope with a 0.5 degree field of view and
a 0.5 nm filter at 1547.5 nm, receiving 311 Mbit/s.
"""

# %%
from photonlink import LinkScenario, background_breakdown, noise_photon_rate, solid_angle

sc = LinkScenario()
print(f"solid angle       {solid_angle(sc.fov_full_angle) * 1e6:.2f} usr")
print(f"background rate   {noise_photon_rate(sc):.4e} photons/s at {sc.spectral_radiance} uW/cm^2/sr/um")

# %%
# One breakdown per radiance level. A longer PPM symbol collects more
# background, but each slot holds less of it.
for radiance in (10.0, 5.0, 1.0, 0.5, 0.1):
    print(f"\nradiance {radiance}")
    print(f"{'mod':>5} {'Msym/s':>12} {'per symbol':>12} {'per slot':>12}")
    for row in background_breakdown(sc.replace(spectral_radiance=radiance)):
        print(f"{str(row.modulation):>5} {row.symbol_rate / 1e6:12.6f} "
              f"{row.photons_per_symbol_in_pol:12.9f} {row.photons_per_slot:12.9f}")

# %%
# Dark counts at a few per second are negligible next to this background.
from photonlink import effective_counts

_, k_b = effective_counts(sc, 10.0, 16)
_, k_b_dark = effective_counts(sc.replace(dark_count_rate=10.0), 10.0, 16)
print(f"\n16-PPM K_b {k_b:.9f} -> {k_b_dark:.9f} with 10 dark counts/s")
