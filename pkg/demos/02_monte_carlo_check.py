"""
Simulation against theory
=========================

Draws Poisson slot counts symbol by symbol and compares the empirical
symbol error rate with the exact value, for M = 2..32, a signal of 20
counts and 4 background counts spread over the M slots of a symbol.

Run with a larger ``N_SYMBOLS`` for tighter intervals; the result for a
given seed is the same whatever ``WORKERS`` is set to.
"""

# %%
import math

from photonlink import PpmChannel, SimConfig, ber_mppm, enumerate_exact, ser_mppm_exact, simulate_ppm
from photonlink.mcsim import validation_channel

N_SYMBOLS = 1_000_000
WORKERS = 1
SEED = 2024

# %%
print(f"{'M':>3} {'errors':>7} {'SER_hat':>10} {'SER':>10} {'z':>6} {'Wilson 95%':>25}")
for M in (2, 4, 8, 16, 32):
    ch = validation_channel(M)
    report = simulate_ppm(SimConfig(ch, N_SYMBOLS, SEED), workers=WORKERS)
    ser = ber_mppm(ch).ser
    z = (report.ser_hat - ser) / math.sqrt(ser * (1 - ser) / N_SYMBOLS)
    low, high = report.ser_ci95
    print(f"{M:>3} {report.symbol_errors:>7} {report.ser_hat:10.3e} {ser:10.3e} {z:6.2f} [{low:.2e}, {high:.2e}]")

# %%
# At 1e6 symbols only a handful of errors are expected, so a noisier
# operating point shows the bit-per-symbol-error ratio converging to
# M / (2 (M - 1)) per bit.
for M in (4, 16):
    report = simulate_ppm(SimConfig(PpmChannel(M, 3.0, 0.3), 200_000, SEED))
    b = M.bit_length() - 1
    print(f"M={M}: bit/symbol-error ratio per bit {report.bit_errors / (report.symbol_errors * b):.4f}"
          f"  expected {M / (2 * (M - 1)):.4f}")

# %%
# Independent check on the analytic formula: brute-force enumeration of
# all slot-count tuples for a small 4-ary case.
ch = PpmChannel(4, 2.0, 0.5)
ser_enum, residual = enumerate_exact(ch, 40)
print(f"enumeration {ser_enum:.12f} (+{residual:.1e})  formula {ser_mppm_exact(ch):.12f}")
