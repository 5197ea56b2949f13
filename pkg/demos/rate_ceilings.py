"""Ergodic rate routes and their high-SNR limits.

The strong signal has a closed form (validated here against direct
quadrature and simulation); the weak signal is integrated numerically.
At high SNR every curve saturates: the weak user hits a hard ceiling
and the strong user's asymptote levels off because uplink interference
from the paired signal never vanishes.
"""

import dataclasses

from twrnoma import (SignalIndex, SystemConfig, ergodic_rate_strong_asymptotic,
                     ergodic_rate_strong_closed, ergodic_rate_strong_quadrature,
                     ergodic_rate_weak_highsnr, ergodic_rate_weak_numeric,
                     high_snr_slope_estimate, mc_ergodic)

IDX1 = SignalIndex.for_signal(1)
IDX2 = SignalIndex.for_signal(2)


def rate_table(cfg):
    print("strong signal x1, bits/s/Hz (closed vs quadrature vs simulated):")
    for point, db in enumerate((10, 20, 30)):
        c = cfg.with_rho(10.0 ** (db / 10.0))
        for mode in ("ipsic", "psic"):
            cm = c.with_mode(mode)
            closed = ergodic_rate_strong_closed(cm, IDX1)
            quad = ergodic_rate_strong_quadrature(cm, IDX1)
            sim = mc_ergodic(cm, 1, 400_000, 7, point_index=point, workers=4)
            print(f"  {db} dB {mode}: {closed:.6f}  {quad:.6f}  "
                  f"{sim.mean:.6f} (+/- {sim.half_width_95:.1e})")

    print("weak signal x2 (numeric integral vs simulated):")
    for point, db in enumerate((10, 20, 30)):
        c = cfg.with_rho(10.0 ** (db / 10.0))
        for mode in ("ipsic", "psic"):
            cm = c.with_mode(mode)
            val = ergodic_rate_weak_numeric(cm, IDX2)
            sim = mc_ergodic(cm, 2, 400_000, 7, point_index=point + 8,
                             workers=4)
            print(f"  {db} dB {mode}: {val:.6f}  {sim.mean:.6f}")


def ceilings(cfg):
    print("\nhigh-SNR limits:")
    c50 = cfg.with_rho(1e5)
    ceiling = ergodic_rate_weak_highsnr(c50, IDX2)
    direct = ergodic_rate_weak_numeric(c50, IDX2)
    print(f"  weak ceiling (ipsic): {ceiling:.6f}  integral at 50 dB: "
          f"{direct:.6f}")
    for mode in ("ipsic", "psic"):
        cm = c50.with_mode(mode)
        asym = ergodic_rate_strong_asymptotic(cm, IDX1)
        closed = ergodic_rate_strong_closed(cm, IDX1)
        print(f"  strong asymptote ({mode}): {asym:.6f}  closed: {closed:.6f}")

    rhos = [1e5, 1e6]
    for mode in ("ipsic", "psic"):
        cs = [cfg.with_rho(r).with_mode(mode) for r in rhos]
        s = high_snr_slope_estimate(rhos, [ergodic_rate_strong_closed(c, IDX1)
                                           for c in cs])
        w = high_snr_slope_estimate(rhos, [ergodic_rate_weak_numeric(c, IDX2)
                                           for c in cs])
        print(f"  slope 50-60 dB ({mode}): strong {s:+.4f}, weak {w:+.4f}")


if __name__ == "__main__":
    # closed rate routes need the relay's residual leakage terms at zero
    cfg = dataclasses.replace(SystemConfig(), varpi1=0.0, varpi2=0.0)
    rate_table(cfg)
    ceilings(cfg)
