"""Seeded Monte Carlo estimators that cross-validate every closed form.

The simulator draws the five block-fading gains directly from their
exponential laws, evaluates the same SINR expressions the analysis
started from, and reduces threshold tests or rate samples to estimates
with 95% confidence intervals.  Nothing here reuses the analytical
manipulations, which is the point: agreement between the two routes is
the evidence either one is right.

Reproducibility is structural.  Every (sweep point, estimator, chunk)
triple owns a counter-based substream, chunks have a fixed size, and
reductions run in fixed chunk order, so results are bit-identical for any
worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .model import (SignalIndex, SystemConfig, gamma_threshold,
                    sample_channel_draw, signal_role, sinr_set)

CHUNK = 1 << 17

# Substream tags keep the estimators' random draws disjoint even when they
# run at the same sweep point with the same master seed.
_TAG_OUTAGE = {1: 1, 2: 2, 3: 3, 4: 4}
_TAG_ERGODIC = {1: 5, 2: 6, 3: 7, 4: 8}
_TAG_OMA = 9

_Z95 = 1.959963984540054


@dataclass(frozen=True)
class McEstimate:
    """A Monte Carlo point estimate with its 95% interval.

    half_width_95 is (ci_high - ci_low)/2; the interval always brackets
    the mean.
    """

    mean: float
    half_width_95: float
    n: int
    seed: int
    ci_low: float
    ci_high: float

    def __post_init__(self):
        if not (self.ci_low <= self.mean <= self.ci_high):
            raise ValueError("confidence interval must bracket the mean")


def ci_bounds(successes: int, n: int):
    """95% interval for a binomial proportion.

    Normal approximation away from the boundary; Wilson score interval
    once either count drops below 10, where the normal interval's coverage
    collapses.
    """
    if n <= 0:
        raise ValueError("need a positive sample count")
    if successes < 0 or successes > n:
        raise ValueError("success count must lie in [0, n]")
    p = successes / n
    if successes < 10 or n - successes < 10:
        z2 = _Z95 * _Z95
        center = (successes + z2 / 2.0) / (n + z2)
        hw = _Z95 / (n + z2) * math.sqrt(successes * (n - successes) / n + z2 / 4.0)
        lo, hi = center - hw, center + hw
    else:
        hw = _Z95 * math.sqrt(p * (1.0 - p) / n)
        lo, hi = p - hw, p + hw
    # The Wilson endpoints equal p exactly when every trial agrees, but the
    # arithmetic can land one ulp inside; keep the interval bracketing p.
    return max(0.0, min(lo, p)), min(1.0, max(hi, p))


def chunk_generator(master_seed: int, effective_point_index: int,
                    chunk_index: int) -> np.random.Generator:
    """Counter-based substream for one chunk of one estimator at one point."""
    seq = np.random.SeedSequence(master_seed,
                                 spawn_key=(effective_point_index, chunk_index))
    return np.random.Generator(np.random.Philox(seq))


def _chunk_sizes(n):
    sizes = []
    left = int(n)
    while left > 0:
        take = min(CHUNK, left)
        sizes.append(take)
        left -= take
    return sizes


def _require_run_shape(n, seed):
    if n < 1000:
        raise ValueError("Monte Carlo runs need at least 1000 samples")
    if seed < 0:
        raise ValueError("master seed must be nonnegative")


def _map_chunks(sizes, worker_fn, workers):
    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(worker_fn, range(len(sizes)), sizes))
    return [worker_fn(i, size) for i, size in enumerate(sizes)]


def _success_mask(config, sinrs, idx, role):
    gth_l = gamma_threshold(config.rate(idx.l))
    gth_t = gamma_threshold(config.rate(idx.t))
    if role == "strong":
        return ((sinrs.relay_strong > gth_l)
                & (sinrs.near_decodes_weak > gth_t)
                & (sinrs.near_decodes_own > gth_l))
    return ((sinrs.relay_weak > gth_t)
            & (sinrs.relay_strong > gth_l)
            & (sinrs.near_decodes_weak > gth_t)
            & (sinrs.far_decodes_weak > gth_t))


def mc_outage(config: SystemConfig, signal: int, n: int, seed: int,
              point_index: int = 0, workers=None) -> McEstimate:
    """Simulated outage probability of one signal's exchange."""
    _require_run_shape(n, seed)
    idx = SignalIndex.for_signal(signal)
    role = signal_role(signal)
    tag = _TAG_OUTAGE[signal]
    effective = point_index * 16 + tag
    sizes = _chunk_sizes(n)

    def run(chunk_index, size):
        stream = chunk_generator(seed, effective, chunk_index)
        draw = sample_channel_draw(config, stream, size=size)
        ok = _success_mask(config, sinr_set(config, draw, idx), idx, role)
        return int(np.count_nonzero(ok))

    successes = sum(_map_chunks(sizes, run, workers))
    failures = n - successes
    lo, hi = ci_bounds(failures, n)
    return McEstimate(mean=failures / n, half_width_95=(hi - lo) / 2.0,
                      n=n, seed=seed, ci_low=lo, ci_high=hi)


def _rate_samples(config, sinrs, role):
    if role == "strong":
        eff = np.minimum(sinrs.relay_strong, sinrs.near_decodes_own)
    else:
        eff = np.minimum(np.minimum(sinrs.relay_weak, sinrs.near_decodes_weak),
                         sinrs.far_decodes_weak)
    return 0.5 * np.log2(1.0 + eff)


def mc_ergodic(config: SystemConfig, signal: int, n: int, seed: int,
               point_index: int = 0, workers=None) -> McEstimate:
    """Simulated ergodic rate of one signal's exchange, bits/s/Hz."""
    _require_run_shape(n, seed)
    idx = SignalIndex.for_signal(signal)
    role = signal_role(signal)
    effective = point_index * 16 + _TAG_ERGODIC[signal]
    sizes = _chunk_sizes(n)

    def run(chunk_index, size):
        stream = chunk_generator(seed, effective, chunk_index)
        draw = sample_channel_draw(config, stream, size=size)
        r = _rate_samples(config, sinr_set(config, draw, idx), role)
        return float(np.sum(r)), float(np.sum(r * r))

    parts = _map_chunks(sizes, run, workers)
    total = 0.0
    total_sq = 0.0
    for s, sq in parts:          # fixed order keeps the reduction bitwise stable
        total += s
        total_sq += sq
    mean = total / n
    var = max(0.0, (total_sq - n * mean * mean) / (n - 1))
    hw = _Z95 * math.sqrt(var / n)
    return McEstimate(mean=mean, half_width_95=hw, n=n, seed=seed,
                      ci_low=mean - hw, ci_high=mean + hw)


# Orthogonal baseline.  The same exchange takes five slots: all four
# uplinks land at the relay in the first (each on its own orthogonal
# resource at full power), then the relay forwards one symbol per slot.
# Every transmission sees an independent fade of its link, so signal i's
# end-to-end SNR is the minimum of two independent exponentials and its
# threshold reflects the 5x bandwidth expansion, 2^{5 R} - 1.

_OMA_PARTNER = {1: 3, 2: 4, 3: 1, 4: 2}


def oma_threshold(rate_bpcu: float) -> float:
    return 2.0 ** (5.0 * rate_bpcu) - 1.0


def oma_outage_exact(config: SystemConfig, signal) -> float:
    """Closed-form orthogonal-baseline outage, per signal or whole system."""
    def exponent(i):
        gth = oma_threshold(config.rate(i))
        return gth * (1.0 / config.omega(i)
                      + 1.0 / config.omega(_OMA_PARTNER[i])) / config.rho

    if signal == "system":
        return -math.expm1(-sum(exponent(i) for i in (1, 2, 3, 4)))
    if signal not in (1, 2, 3, 4):
        raise ValueError(f"signal must be 1..4 or 'system', got {signal!r}")
    return -math.expm1(-exponent(signal))


def mc_oma_baseline(config: SystemConfig, signal, n: int, seed: int,
                    point_index: int = 0, workers=None):
    """Simulated orthogonal baseline: (outage, rate) estimate pair.

    signal is 1..4 for a single exchange or "system" for all four jointly:
    system outage is the event any exchange fails, system rate the sum of
    the four per-slot-discounted rates.
    """
    _require_run_shape(n, seed)
    if signal != "system" and signal not in (1, 2, 3, 4):
        raise ValueError(f"signal must be 1..4 or 'system', got {signal!r}")
    effective = point_index * 16 + _TAG_OMA
    sizes = _chunk_sizes(n)
    rho = config.rho
    gth = {i: oma_threshold(config.rate(i)) for i in (1, 2, 3, 4)}

    def run(chunk_index, size):
        stream = chunk_generator(seed, effective, chunk_index)
        up = {i: stream.exponential(config.omega(i), size=size) for i in (1, 2, 3, 4)}
        down = {i: stream.exponential(config.omega(i), size=size) for i in (1, 2, 3, 4)}
        snr = {i: rho * np.minimum(up[i], down[_OMA_PARTNER[i]]) for i in (1, 2, 3, 4)}
        rates = {i: 0.2 * np.log2(1.0 + snr[i]) for i in (1, 2, 3, 4)}
        if signal == "system":
            fail = np.zeros(size, dtype=bool)
            rate = np.zeros(size)
            for i in (1, 2, 3, 4):
                fail |= snr[i] <= gth[i]
                rate += rates[i]
        else:
            fail = snr[signal] <= gth[signal]
            rate = rates[signal]
        return (int(np.count_nonzero(fail)), float(np.sum(rate)),
                float(np.sum(rate * rate)))

    parts = _map_chunks(sizes, run, workers)
    failures = 0
    total = 0.0
    total_sq = 0.0
    for f, s, sq in parts:
        failures += f
        total += s
        total_sq += sq
    lo, hi = ci_bounds(failures, n)
    outage = McEstimate(mean=failures / n, half_width_95=(hi - lo) / 2.0,
                        n=n, seed=seed, ci_low=lo, ci_high=hi)
    mean = total / n
    var = max(0.0, (total_sq - n * mean * mean) / (n - 1))
    hw = _Z95 * math.sqrt(var / n)
    rate = McEstimate(mean=mean, half_width_95=hw, n=n, seed=seed,
                      ci_low=mean - hw, ci_high=mean + hw)
    return outage, rate
