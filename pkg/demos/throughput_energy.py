"""System throughput and energy efficiency in both service modes.

Delay-limited throughput pays for outages at fixed target rates;
delay-tolerant throughput follows the ergodic rates.  Both flatten at
high SNR, so energy efficiency collapses once transmit power keeps
rising against a capped throughput.
"""

import dataclasses

from twrnoma import (SignalIndex, SystemConfig, energy_efficiency,
                     ergodic_rate_strong_closed, ergodic_rate_weak_numeric,
                     outage_probability, throughput_delay_limited,
                     throughput_delay_tolerant)

SIGNALS = (1, 2, 3, 4)


def delay_limited(cfg, rho, mode):
    c = cfg.with_rho(rho).with_mode(mode)
    outs = [outage_probability(c, s).p_exact for s in SIGNALS]
    rates = [c.rate(s) for s in SIGNALS]
    return throughput_delay_limited(outs, rates)


def delay_tolerant(cfg, rho, mode):
    c = cfg.with_rho(rho).with_mode(mode)
    rates = []
    for s in SIGNALS:
        idx = SignalIndex.for_signal(s)
        if s in (1, 3):
            rates.append(ergodic_rate_strong_closed(c, idx))
        else:
            rates.append(ergodic_rate_weak_numeric(c, idx))
    return throughput_delay_tolerant(rates)


def main():
    cfg = SystemConfig()
    # ergodic closed forms hold with the leakage fractions at zero
    cfg0 = dataclasses.replace(cfg, varpi1=0.0, varpi2=0.0)

    print(f"{'SNR dB':>6} {'mode':>6} {'T delay-lim':>12} {'T delay-tol':>12} "
          f"{'EE dl':>10} {'EE dt':>10}")
    for db in range(0, 65, 10):
        rho = 10.0 ** (db / 10.0)
        for mode in ("ipsic", "psic"):
            dl = delay_limited(cfg, rho, mode)
            dt = delay_tolerant(cfg0, rho, mode)
            ee_dl = energy_efficiency(dl, cfg)
            ee_dt = energy_efficiency(dt, cfg)
            print(f"{db:>6} {mode:>6} {dl.value:>12.5f} {dt.value:>12.5f} "
                  f"{ee_dl:>10.5f} {ee_dt:>10.5f}")

    print("\nsaturation between 50 and 60 dB:")
    for mode in ("ipsic", "psic"):
        d50 = delay_tolerant(cfg0, 1e5, mode).value
        d60 = delay_tolerant(cfg0, 1e6, mode).value
        print(f"  delay-tolerant {mode}: {d50:.5f} -> {d60:.5f} "
              f"({abs(d60 - d50) / d50:.2%} change)")


if __name__ == "__main__":
    main()
