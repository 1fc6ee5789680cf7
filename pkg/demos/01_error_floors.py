"""
Error floors of photon-counting PPM
===================================

Walks from the noise-free quantum limit to M-ary PPM with background
light, and compares the exact symbol error rate with the simple
``1 - (1 - P2)^M`` upper bound.
"""

# %%
# With no background, an M-ary PPM symbol is lost only when the pulsed
# slot registers no photons and the receiver then guesses wrong. Per bit,
# the BER is 0.5 exp(-n) for every M, where n is the mean count per symbol.
import math

import numpy as np

from photonlink import PpmChannel, ber_mppm, hughes_bound, pe2_closed, quantum_ber, ser_mppm_exact

for n in (5, 10, 20):
    print(f"n = {n:2d}  BER = {quantum_ber(8, n):.3e}  (0.5 e^-n = {0.5 * math.exp(-n):.3e})")

# %%
# Binary PPM with background: a Marcum Q / Bessel closed form.
for k_b in (0.0, 0.5, 2.0):
    print(f"K_s = 20, K_b = {k_b:3.1f}  P2 = {pe2_closed(20.0, k_b):.4e}")

# %%
# Higher orders: the exact SER accounts for every way an empty slot can
# beat or tie the pulsed slot. The bound is loose by roughly a factor M/2
# at these operating points but never below the exact value.
print(f"{'M':>4} {'SER':>11} {'bound':>11} {'BER':>11}")
for M in (2, 4, 8, 16, 32, 64, 128):
    ch = PpmChannel(M, 20.0, 4.0 / M)
    r = ber_mppm(ch)
    print(f"{M:>4} {r.ser:11.4e} {r.bound_ser:11.4e} {r.ber:11.4e}")

# %%
# SER falls steadily with signal strength for a fixed background.
ks = np.arange(1, 31)
sers = [ser_mppm_exact(PpmChannel(16, float(k), 0.25)) for k in ks]
print("16-PPM, K_b = 0.25:", ", ".join(f"{k}:{s:.1e}" for k, s in zip(ks[::5], sers[::5])))
print("bound at K_s = 10:", f"{hughes_bound(PpmChannel(16, 10.0, 0.25)):.3e}")
