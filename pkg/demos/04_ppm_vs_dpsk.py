"""
PPM against pre-amplified DPSK
==============================

Photons per bit each modulation needs to reach a target BER, under the
default receiver (70% photon counter, 40 dB amplifier with n_sp = 1.05),
with a half-efficient Q-switched PPM transmitter, and with ideal
components.
"""

# %%
from photonlink import LinkScenario
from photonlink.curves import compare, required_photons

MODS = ["DPSK", 2, 4, 8, 16, 32]
base = LinkScenario()


def show(title, sc, levels, target=1e-6):
    print(f"\n{title}, BER {target:g}")
    for level in compare(sc, levels, MODS, targets=(target,)):
        t = level["targets"][0]
        cells = "  ".join(
            f"{label} {t['required'][label]['photons_per_bit']:6.2f}" for label in t["ranking"]
        )
        print(f"  radiance {level['spectral_radiance']:>4}: {cells}")


# %%
# Bright sky: every PPM order beats DPSK and higher orders do better.
show("default receiver", base, [10.0, 1.0, 0.1], target=1e-9)

# %%
# Halving PPM pulse energy with an inefficient Q-switch lets DPSK pass
# 4-PPM at low background.
show("Q-switch efficiency 0.5", base.replace(qswitch_efficiency=0.5), [1.0])

# %%
# With ideal components 2-PPM moves ahead of DPSK.
sc = base.replace(spectral_radiance=1.0)
for name, s in (("non-ideal", sc), ("ideal", sc.idealized())):
    print(f"{name:>9}: 2-PPM {required_photons(s, 2, 1e-6):.2f}  DPSK {required_photons(s, 'DPSK', 1e-6):.2f}")

# %%
# In the dark with ideal components, all modulations need the same number
# of photons per symbol, ln(0.5 / target).
show("dark sky, ideal", base.idealized(), [0.0], target=1e-9)
