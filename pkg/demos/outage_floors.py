"""Outage behaviour of the two-way relay link across the SNR range.

Prints closed-form outage next to a seeded Monte Carlo estimate for the
near and far user in both SIC modes, then shows the high-SNR error
floors and the resulting zero diversity order.  Run with --iterations
to trade accuracy for speed.
"""

import argparse

from twrnoma import (SystemConfig, diversity_order_estimate, mc_outage,
                     oma_outage_exact, outage_asymptotic, outage_probability)


def sweep(cfg, n_mc, seed=1729):
    print(f"{'SNR dB':>6} {'sig':>4} {'mode':>6} {'closed':>12} "
          f"{'simulated':>12} {'ci half':>10}")
    for point, db in enumerate(range(0, 45, 5)):
        c = cfg.with_rho(10.0 ** (db / 10.0))
        for mode in ("ipsic", "psic"):
            cm = c.with_mode(mode)
            for sig in (1, 2):
                res = outage_probability(cm, sig)
                est = mc_outage(cm, sig, n_mc, seed, point_index=point,
                                workers=4)
                print(f"{db:>6} {sig:>4} {mode:>6} {res.p_exact:>12.6f} "
                      f"{est.mean:>12.6f} {est.half_width_95:>10.2e}")


def floors(cfg):
    print("\nerror floors at 60 dB (exact vs asymptotic):")
    c = cfg.with_rho(1e6)
    for mode in ("ipsic", "psic"):
        cm = c.with_mode(mode)
        for sig in (1, 2):
            exact = outage_probability(cm, sig).p_exact
            floor = outage_asymptotic(cm, sig).floor
            print(f"  x{sig} {mode}: exact {exact:.6e}  floor {floor:.6e}")

    rhos = [1e5, 1e6]
    for mode in ("ipsic", "psic"):
        probs = [outage_probability(cfg.with_rho(r).with_mode(mode), 1).p_exact
                 for r in rhos]
        d = diversity_order_estimate(rhos, probs)
        print(f"  diversity order, x1 {mode}: {d:+.4f}")


def oma_crossover(cfg):
    # the orthogonal baseline keeps its diversity, so it wins eventually
    print("\northogonal baseline comparison (system outage):")
    for db in (10, 20, 30, 40):
        c = cfg.with_rho(10.0 ** (db / 10.0))
        noma = outage_probability(c, 1).p_exact
        oma = oma_outage_exact(c, "system")
        tag = "noma ahead" if noma < oma else "baseline ahead"
        print(f"  {db} dB: noma x1 {noma:.5f}  baseline {oma:.5f}  ({tag})")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--iterations", type=int, default=200_000)
    args = ap.parse_args()
    cfg = SystemConfig()
    sweep(cfg, args.iterations)
    floors(cfg)
    oma_crossover(cfg)
