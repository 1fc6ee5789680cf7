"""Monte Carlo simulation of photon-counting M-ary PPM.

Each symbol draws a Poisson count per slot, decides by maximum count with
uniform random tie-breaking, and maps slot indices to bits by natural
binary. Random streams come from a counter-based generator (Philox) keyed
by ``(seed, block_index)``, where a block is a fixed run of
``BLOCK_SIZE`` symbols. Work is split into chunks of whole blocks, so the
tallies for a given seed do not depend on the chunk size or on how many
worker processes run the chunks.

Also holds :func:`enumerate_exact`, a brute-force SER for small ``M`` used
as an independent check on the analytical formula.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np
from scipy import stats

from photonlink.ppm import PpmChannel

__all__ = [
    "BLOCK_SIZE",
    "SimConfig",
    "SimReport",
    "simulate_ppm",
    "enumerate_exact",
    "binomial_ci95",
    "validation_channel",
]

BLOCK_SIZE = 1 << 14
_Z95 = 1.959963984540054


@dataclass(frozen=True)
class SimConfig:
    """Monte Carlo run description.

    ``chunk_size`` is the number of symbols handed to a worker at a time;
    it is rounded up to a whole number of ``BLOCK_SIZE`` blocks.
    """

    channel: PpmChannel
    n_symbols: int
    seed: int = 0
    chunk_size: int = 16 * BLOCK_SIZE

    def __post_init__(self):
        if not isinstance(self.n_symbols, (int, np.integer)) or self.n_symbols < 1:
            raise ValueError(f"n_symbols must be an integer >= 1, got {self.n_symbols!r}")
        if not isinstance(self.chunk_size, (int, np.integer)) or self.chunk_size < 1:
            raise ValueError(f"chunk_size must be an integer >= 1, got {self.chunk_size!r}")
        if not isinstance(self.seed, (int, np.integer)) or not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")


@dataclass(frozen=True)
class SimReport:
    symbols_run: int
    symbol_errors: int
    bit_errors: int
    ser_hat: float
    ber_hat: float
    ser_ci95: tuple[float, float]
    wall_time: float
    seed: int

    def tallies(self) -> tuple[int, int, int]:
        return self.symbols_run, self.symbol_errors, self.bit_errors

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ser_ci95"] = list(self.ser_ci95)
        return d


def binomial_ci95(errors: int, trials: int) -> tuple[float, float]:
    """Wilson score 95% interval for a binomial proportion."""
    if trials < 1 or not 0 <= errors <= trials:
        raise ValueError(f"need 0 <= errors <= trials and trials >= 1, got {errors}, {trials}")
    n = float(trials)
    p = errors / n
    z2 = _Z95 * _Z95
    denom = 1.0 + z2 / n
    center = (p + z2 / (2.0 * n)) / denom
    half = _Z95 * math.sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom
    low = 0.0 if errors == 0 else min(p, max(0.0, center - half))
    high = 1.0 if errors == trials else max(p, min(1.0, center + half))
    return low, high


def validation_channel(
    M: int, signal: float = 20.0, background: float = 4.0, background_per_symbol: bool = True
) -> PpmChannel:
    """Channel for the simulation-vs-theory sweep.

    By default ``background`` counts are spread over the ``M`` slots of a
    symbol; with ``background_per_symbol=False`` every slot gets the full
    ``background``.
    """
    k_b = background / M if background_per_symbol else background
    return PpmChannel(M, signal, k_b)


def _block_rng(seed, block_index):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, block_index])))


def _simulate_block(M, k_s, k_b, seed, block_index, n):
    rng = _block_rng(seed, block_index)
    sent = rng.integers(0, M, size=n)
    counts = rng.poisson(k_b, size=(n, M))
    counts[np.arange(n), sent] = rng.poisson(k_s + k_b, size=n)
    u = rng.random(n)

    tied = counts == counts.max(axis=1, keepdims=True)
    n_tied = tied.sum(axis=1)
    pick = np.minimum((u * n_tied).astype(np.int64), n_tied - 1)
    rank = np.cumsum(tied, axis=1)
    decided = np.argmax(tied & (rank == (pick + 1)[:, None]), axis=1)

    wrong = decided != sent
    bit_errors = int(np.bitwise_count(decided ^ sent).sum())
    return int(wrong.sum()), bit_errors


def _run_blocks(args):
    M, k_s, k_b, seed, first_block, last_block, n_symbols = args
    symbol_errors = 0
    bit_errors = 0
    for b in range(first_block, last_block):
        n = min(BLOCK_SIZE, n_symbols - b * BLOCK_SIZE)
        se, be = _simulate_block(M, k_s, k_b, seed, b, n)
        symbol_errors += se
        bit_errors += be
    return symbol_errors, bit_errors


def simulate_ppm(cfg: SimConfig, workers: int = 1) -> SimReport:
    """Run the Monte Carlo and return tallies, estimates and a Wilson interval.

    ``workers > 1`` spreads chunks over a process pool. Tallies are
    integers summed per chunk, so the result is identical for any
    ``workers`` and ``chunk_size``.
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers!r}")
    ch = cfg.channel
    start = time.perf_counter()
    n_blocks = -(-cfg.n_symbols // BLOCK_SIZE)
    per_chunk = max(1, -(-cfg.chunk_size // BLOCK_SIZE))
    jobs = [
        (
            ch.order,
            ch.signal_counts,
            ch.background_counts,
            int(cfg.seed),
            first,
            min(first + per_chunk, n_blocks),
            cfg.n_symbols,
        )
        for first in range(0, n_blocks, per_chunk)
    ]
    if workers == 1 or len(jobs) == 1:
        results = list(map(_run_blocks, jobs))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_blocks, jobs))
    symbol_errors = sum(r[0] for r in results)
    bit_errors = sum(r[1] for r in results)
    elapsed = time.perf_counter() - start

    n = cfg.n_symbols
    return SimReport(
        symbols_run=n,
        symbol_errors=symbol_errors,
        bit_errors=bit_errors,
        ser_hat=symbol_errors / n,
        ber_hat=bit_errors / (n * ch.bits_per_symbol),
        ser_ci95=binomial_ci95(symbol_errors, n),
        wall_time=elapsed,
        seed=int(cfg.seed),
    )


def enumerate_exact(ch: PpmChannel, count_cap: int = 40) -> tuple[float, float]:
    """Brute-force SER by enumerating every slot-count tuple up to ``count_cap``.

    Each tuple is weighted by its product of Poisson masses and scored 1 if
    an empty slot strictly beats the signal slot, ``m / (m + 1)`` if ``m``
    empty slots tie it at the top, 0 otherwise. Returns ``(ser, residual)``
    where ``residual`` is the probability of tuples outside the cap; the
    true SER lies in ``[ser, ser + residual]``.

    Only ``M`` in {2, 4} and ``count_cap <= 60`` are accepted.
    """
    M = ch.order
    if M not in (2, 4):
        raise ValueError(f"enumeration supports M in (2, 4), got {M}")
    if not isinstance(count_cap, (int, np.integer)) or not 0 <= count_cap <= 60:
        raise ValueError(f"count_cap must be an integer in [0, 60], got {count_cap!r}")

    counts = np.arange(count_cap + 1)
    p_on = stats.poisson.pmf(counts, ch.signal_counts + ch.background_counts)
    p_off = stats.poisson.pmf(counts, ch.background_counts)

    grids = np.meshgrid(*([counts] * (M - 1)), indexing="ij")
    off = np.stack([g.ravel() for g in grids], axis=1)
    weight = np.prod(p_off[off], axis=1)
    top = off.max(axis=1)
    n_top = (off == top[:, None]).sum(axis=1)

    ser = 0.0
    for c0 in counts:
        score = np.where(top > c0, 1.0, np.where(top == c0, n_top / (n_top + 1.0), 0.0))
        ser += p_on[c0] * float(np.dot(weight, score))

    # mass of tuples with at least one count above the cap
    sf_on = stats.poisson.sf(count_cap, ch.signal_counts + ch.background_counts)
    sf_off = stats.poisson.sf(count_cap, ch.background_counts)
    residual = -math.expm1(math.log1p(-sf_on) + (M - 1) * math.log1p(-sf_off))
    return float(ser), max(0.0, residual)
