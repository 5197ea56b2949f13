"""Self-check battery: closed forms against simulation and known limits.

Each check compares an analytical quantity with an independent route
(Monte Carlo, quadrature, scipy, or a frozen limit) and reports one
pass/fail line.  The default profile is sized so a healthy build passes
with the pinned seed; the strict profile halves every tolerance band and
is expected to surface the checks that sit close to their band edge.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from . import metrics as metrics_mod
from .analysis import diversity_order_estimate, outage_asymptotic, outage_probability
from .ergodic import (ergodic_rate_strong_closed, ergodic_rate_strong_quadrature,
                      ergodic_rate_weak_numeric)
from .model import SignalIndex, SystemConfig
from .montecarlo import mc_ergodic, mc_oma_baseline, mc_outage
from .specfun import HypoExpParams, expint_ei, hypoexp_pdf
from .sweep import _no_leakage

PROFILES = {"default": 1.0, "strict": 0.5}

DEFAULT_VALIDATE_SEED = 424242


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    tolerance: float
    observed: float
    detail: str = ""

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        text = (f"{status} {self.name}: observed {self.observed:.3e} "
                f"against tolerance {self.tolerance:.3e}")
        if self.detail:
            text += f" ({self.detail})"
        return text


@dataclass(frozen=True)
class ValidationReport:
    profile: str
    results: tuple

    @property
    def passed(self):
        return all(r.passed for r in self.results)

    def lines(self):
        body = [r.line() for r in self.results]
        verdict = "all checks passed" if self.passed else (
            f"{sum(1 for r in self.results if not r.passed)} check(s) failed")
        body.append(f"profile {self.profile}: {verdict}")
        return body


def _rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def _check_outage_vs_mc(config, scale, iterations, seed, workers):
    worst, band = 0.0, math.inf
    for point, db in enumerate((10.0, 25.0, 40.0)):
        for mode in ("ipsic", "psic"):
            cfg = config.with_rho(10.0 ** (db / 10.0)).with_mode(mode)
            for s in (1, 2):
                exact = outage_probability(cfg, s).p_exact
                est = mc_outage(cfg, s, iterations, seed,
                                point_index=point, workers=workers)
                sigma = math.sqrt(max(exact * (1.0 - exact), 0.0) / iterations)
                allowed = scale * max(3.0 * sigma, 0.005)
                gap = abs(est.mean - exact)
                if gap * band > worst * allowed:
                    worst, band = gap, allowed
    return CheckResult("outage_closed_vs_mc", worst <= band, band, worst,
                       "worst |mc - exact| over 10/25/40 dB, x1/x2, both modes")


def _check_floor(config, scale):
    tol = 0.05 * scale
    worst = 0.0
    cfg60 = config.with_rho(1e6)
    for mode in ("ipsic", "psic"):
        cfg = cfg60.with_mode(mode)
        for s in (1, 2):
            exact = outage_probability(cfg, s).p_exact
            asym = outage_asymptotic(cfg, s).floor
            worst = max(worst, _rel(exact, asym))
    return CheckResult("outage_floor_vs_asymptote", worst <= tol, tol, worst,
                       "60 dB exact vs floor, x1/x2, both modes")


def _check_diversity(config, scale):
    tol = 0.1 * scale
    rhos = [1e5, 1e6]
    worst = 0.0
    for mode in ("ipsic", "psic"):
        for s in (1, 2):
            probs = [outage_probability(config.with_rho(r).with_mode(mode),
                                        s).p_exact for r in rhos]
            worst = max(worst, abs(diversity_order_estimate(rhos, probs)))
    return CheckResult("diversity_order_zero", worst <= tol, tol, worst,
                       "|slope| of log outage between 50 and 60 dB")


def _check_psic_limit(config, scale):
    tol = 1e-6 * scale
    worst = 0.0
    tiny = dataclasses.replace(config, omega_I=1e-12)
    for db in (10.0, 30.0):
        rho = 10.0 ** (db / 10.0)
        ip = tiny.with_rho(rho).with_mode("ipsic")
        p = config.with_rho(rho).with_mode("psic")
        for s in (1, 2):
            worst = max(worst, _rel(outage_probability(ip, s).p_exact,
                                    outage_probability(p, s).p_exact))
    zip_cfg = _no_leakage(tiny).with_rho(100.0).with_mode("ipsic")
    zp_cfg = _no_leakage(config).with_rho(100.0).with_mode("psic")
    idx = SignalIndex.for_signal(1)
    worst = max(worst, _rel(ergodic_rate_strong_closed(zip_cfg, idx),
                            ergodic_rate_strong_closed(zp_cfg, idx)))
    return CheckResult("psic_limit_recovery", worst <= tol, tol, worst,
                       "residual power 1e-12 reproduces perfect SIC")


def _check_rate_quadrature(config, scale):
    tol = 1e-8 * scale
    worst = 0.0
    idx = SignalIndex.for_signal(1)
    for mode in ("ipsic", "psic"):
        cfg = _no_leakage(config).with_rho(100.0).with_mode(mode)
        worst = max(worst, _rel(ergodic_rate_strong_closed(cfg, idx),
                                ergodic_rate_strong_quadrature(cfg, idx)))
    return CheckResult("strong_rate_closed_vs_quadrature", worst <= tol, tol,
                       worst, "20 dB, leakage off, both modes")


def _check_rate_vs_mc(config, scale, iterations, seed, workers):
    tol = 0.02 * scale
    worst = 0.0
    cfg = _no_leakage(config).with_rho(100.0)
    for mode in ("ipsic", "psic"):
        mcfg = cfg.with_mode(mode)
        for s, fn in ((1, ergodic_rate_strong_closed),
                      (2, ergodic_rate_weak_numeric)):
            closed = fn(mcfg, SignalIndex.for_signal(s))
            est = mc_ergodic(mcfg, s, iterations, seed, point_index=5,
                             workers=workers)
            worst = max(worst, _rel(closed, est.mean))
    return CheckResult("rate_closed_vs_mc", worst <= tol, tol, worst,
                       "20 dB, leakage off, x1/x2, both modes")


def _check_hypoexp(scale, seed):
    from scipy.integrate import quad
    tol = 1e-9 * scale
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(10):
        lams = tuple(float(v) for v in rng.uniform(0.05, 20.0, size=3))
        if len({round(l, 6) for l in lams}) < 3:
            continue
        params = HypoExpParams(lams)
        total, _err = quad(lambda z: hypoexp_pdf(params, z), 0.0, np.inf,
                           limit=400)
        worst = max(worst, abs(total - 1.0))
    return CheckResult("hypoexp_normalization", worst <= tol, tol, worst,
                       "pdf integrates to one for random rate triples")


def _check_expint(scale):
    from scipy.special import expi
    tol = 1e-10 * scale
    grid = np.logspace(-6, math.log10(30.0), 60)
    worst = 0.0
    for x in np.concatenate([-grid, grid]):
        worst = max(worst, _rel(expint_ei(float(x)), float(expi(x))))
    return CheckResult("expint_vs_scipy", worst <= tol, tol, worst,
                       "exponential integral against scipy.special.expi")


def _check_oma(config, scale, iterations, seed, workers):
    from .montecarlo import oma_outage_exact
    cfg = config.with_rho(10.0)
    exact = oma_outage_exact(cfg, "system")
    est, _ = mc_oma_baseline(cfg, "system", iterations, seed,
                             point_index=7, workers=workers)
    sigma = math.sqrt(exact * (1.0 - exact) / iterations)
    band = scale * max(3.0 * sigma, 0.005)
    gap = abs(est.mean - exact)
    return CheckResult("oma_baseline_mc_vs_exact", gap <= band, band, gap,
                       "orthogonal baseline system outage at 10 dB")


def _dt_throughput(config, rho):
    cfg = _no_leakage(config).with_rho(rho)
    from .sweep import _rate_closed
    return metrics_mod.throughput_delay_tolerant(
        [_rate_closed(cfg, s) for s in (1, 2, 3, 4)]).value


def _check_throughput_ceiling(config, scale):
    tol = 0.02 * scale
    worst = 0.0
    for mode in ("ipsic", "psic"):
        cfg = config.with_mode(mode)
        t50 = _dt_throughput(cfg, 1e5)
        t60 = _dt_throughput(cfg, 1e6)
        worst = max(worst, _rel(t50, t60))
    return CheckResult("throughput_ceiling", worst <= tol, tol, worst,
                       "delay tolerant throughput change from 50 to 60 dB")


def _dl_throughput(config, rho, mode):
    cfg = config.with_rho(rho).with_mode(mode)
    outs = [outage_probability(cfg, s).p_exact for s in (1, 2, 3, 4)]
    rates = [cfg.rate(s) for s in (1, 2, 3, 4)]
    return metrics_mod.throughput_delay_limited(outs, rates).value


def _check_ee(config, scale):
    tol = 0.05 * scale
    worst = 0.0
    for db in (0.0, 10.0, 20.0, 30.0, 40.0):
        rho = 10.0 ** (db / 10.0)
        ip = metrics_mod.energy_efficiency(
            _dl_throughput(config, rho, "ipsic"), config)
        p = metrics_mod.energy_efficiency(
            _dl_throughput(config, rho, "psic"), config)
        worst = max(worst, _rel(ip, p))
    gap = _check_ee_dt_gap(config)
    detail = "delay limited efficiency gap between SIC modes, 0 to 40 dB"
    if gap < 0.0:
        return CheckResult("energy_efficiency_modes", False, tol, worst,
                           detail + "; delay tolerant ordering violated")
    return CheckResult("energy_efficiency_modes", worst <= tol, tol, worst,
                       detail)


def _check_ee_dt_gap(config):
    gap = math.inf
    for rho in (1e3, 1e5):
        ip = metrics_mod.energy_efficiency(
            _dt_throughput(config.with_mode("ipsic"), rho), config)
        p = metrics_mod.energy_efficiency(
            _dt_throughput(config.with_mode("psic"), rho), config)
        gap = min(gap, p - ip)
    return gap


def validate(config: SystemConfig, profile: str = "default",
             iterations: int = 200_000, seed: int = DEFAULT_VALIDATE_SEED,
             workers=None) -> ValidationReport:
    """Run every consistency check and collect one result per check."""
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}; "
                         f"choose from {sorted(PROFILES)}")
    scale = PROFILES[profile]
    checks = (
        lambda: _check_outage_vs_mc(config, scale, iterations, seed, workers),
        lambda: _check_floor(config, scale),
        lambda: _check_diversity(config, scale),
        lambda: _check_psic_limit(config, scale),
        lambda: _check_rate_quadrature(config, scale),
        lambda: _check_rate_vs_mc(config, scale, iterations, seed, workers),
        lambda: _check_hypoexp(scale, seed),
        lambda: _check_expint(scale),
        lambda: _check_oma(config, scale, iterations, seed, workers),
        lambda: _check_throughput_ceiling(config, scale),
        lambda: _check_ee(config, scale),
    )
    results = []
    for check in checks:
        try:
            results.append(check())
        except Exception as exc:
            results.append(CheckResult(type(exc).__name__, False, 0.0,
                                       math.nan, str(exc)))
    return ValidationReport(profile, tuple(results))
