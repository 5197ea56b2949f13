"""System throughput in both transmission modes, and energy efficiency.

Delay-limited mode sends each signal at its fixed target rate and loses
whatever lands in outage, so the system throughput is
sum_i (1 - P_i) R_i.  Delay-tolerant mode adapts to the channel and simply
accumulates the four ergodic rates.  Energy efficiency normalizes either
throughput by the energy spent across the two slots, 2 R / (T Pu + T Pr);
the transmit SNR of the statistical model and the Watt-level power budget
are independent knobs, matching how the curves are usually reported.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import SystemConfig

_MODES = ("delay_limited", "delay_tolerant")


@dataclass(frozen=True)
class SystemThroughput:
    mode: str
    value: float
    contributions: tuple

    def __post_init__(self):
        if self.mode not in _MODES:
            raise ValueError(f"mode must be one of {_MODES}, got {self.mode!r}")


def throughput_delay_limited(outages, rates) -> SystemThroughput:
    """Fixed-rate system throughput from per-signal outage probabilities.

    outages and rates align positionally, one entry per signal.
    """
    outages = tuple(float(p) for p in outages)
    rates = tuple(float(r) for r in rates)
    if len(outages) != len(rates):
        raise ValueError(f"got {len(outages)} outage probabilities for "
                         f"{len(rates)} rates")
    for p in outages:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"outage probability {p!r} outside [0, 1]")
    for r in rates:
        if r < 0.0:
            raise ValueError(f"target rate {r!r} is negative")
    parts = tuple((1.0 - p) * r for p, r in zip(outages, rates))
    return SystemThroughput("delay_limited", sum(parts), parts)


def throughput_delay_tolerant(rates) -> SystemThroughput:
    """Rate-adaptive system throughput: the sum of ergodic rates."""
    parts = tuple(float(r) for r in rates)
    for r in parts:
        if r < 0.0:
            raise ValueError(f"ergodic rate {r!r} is negative")
    return SystemThroughput("delay_tolerant", sum(parts), parts)


def energy_efficiency(throughput, config: SystemConfig) -> float:
    """Bits per channel use per unit energy over one two-slot exchange."""
    if config.t_slot <= 0 or config.pu_watts <= 0 or config.pr_watts <= 0:
        raise ValueError("slot duration and both powers must be positive")
    value = getattr(throughput, "value", throughput)
    return 2.0 * value / (config.t_slot * config.pu_watts
                          + config.t_slot * config.pr_watts)
