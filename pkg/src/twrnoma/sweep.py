"""SNR sweeps: one row per grid point and curve, with paired MC columns.

Every row carries the analytical value and an independently seeded Monte
Carlo estimate side by side; the CSV is the cross-validation record, not
just plot fodder.  Row-level reproducibility comes from deriving each
estimator's substream from (master seed, grid position, estimator tag),
so reruns and different worker counts give identical bytes.

Rate-style metrics follow the reporting convention of the reference
curves: the analytic column is the leakage-free closed form while the
simulation runs the configured leakage, making the gap between the two
columns the visible cost of cross-antenna interference.
"""

from __future__ import annotations

import dataclasses
import math
import os
from dataclasses import dataclass

from . import metrics as metrics_mod
from .analysis import outage_probability
from .ergodic import (ergodic_rate_strong_asymptotic, ergodic_rate_strong_closed,
                      ergodic_rate_weak_highsnr, ergodic_rate_weak_numeric)
from .model import ConfigError, SignalIndex, SystemConfig, signal_role
from .montecarlo import mc_ergodic, mc_oma_baseline, mc_outage

METRICS = ("outage", "ergodic_rate", "throughput_dl", "throughput_dt",
           "ee_dl", "ee_dt")

CSV_HEADER = ("snr_db,signal,metric,mode,analytic,asymptotic,"
              "mc_mean,mc_ci_low,mc_ci_high,feasible")


class OutputError(RuntimeError):
    pass


@dataclass(frozen=True)
class SweepSpec:
    snr_start_db: float = 0.0
    snr_stop_db: float = 40.0
    snr_step_db: float = 5.0
    metric: str = "outage"
    signals: tuple = (1, 2)
    sic_mode: str = "both"
    mc_iterations: int = 1_000_000
    master_seed: int = 1729
    include_asymptotic: bool = False
    include_oma: bool = False
    out_path: str | None = None

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ConfigError(f"unknown metric {self.metric!r}; "
                              f"choose from {METRICS}")
        if self.snr_start_db > self.snr_stop_db:
            raise ConfigError("SNR grid start exceeds stop")
        if self.snr_step_db <= 0:
            raise ConfigError("SNR grid step must be positive")
        if self.mc_iterations < 1000:
            raise ConfigError("mc_iterations below 1000 is too coarse to "
                              "state a confidence interval")
        sigs = tuple(sorted(set(int(s) for s in self.signals)))
        if not sigs:
            raise ConfigError("signal set must not be empty")
        for s in sigs:
            if s not in (1, 2, 3, 4):
                raise ConfigError(f"signals must be in 1..4, got {s}")
        object.__setattr__(self, "signals", sigs)
        if self.sic_mode not in ("ipsic", "psic", "both"):
            raise ConfigError(f"sic_mode must be ipsic, psic or both, "
                              f"got {self.sic_mode!r}")
        if self.master_seed < 0:
            raise ConfigError("master seed must be nonnegative")
        if self.include_oma and self.metric not in ("outage", "ergodic_rate"):
            raise ConfigError("the orthogonal baseline is defined for outage "
                              "and ergodic_rate sweeps only")

    @property
    def modes(self):
        return ("ipsic", "psic") if self.sic_mode == "both" else (self.sic_mode,)

    def grid_db(self):
        count = int(math.floor((self.snr_stop_db - self.snr_start_db)
                               / self.snr_step_db + 1e-9)) + 1
        return [self.snr_start_db + i * self.snr_step_db for i in range(count)]


@dataclass(frozen=True)
class MetricPoint:
    snr_db: float
    signal: str
    metric: str
    mode: str
    analytic: float | None
    asymptotic: float | None
    mc_mean: float | None
    mc_ci_low: float | None
    mc_ci_high: float | None
    feasible: bool

    def __post_init__(self):
        if self.mc_mean is not None:
            if not (self.mc_ci_low <= self.mc_mean <= self.mc_ci_high):
                raise ValueError("confidence interval must bracket the mean")


def _no_leakage(config):
    if config.varpi1 == 0.0 and config.varpi2 == 0.0:
        return config
    return dataclasses.replace(config, varpi1=0.0, varpi2=0.0)


def _rate_closed(config, signal):
    idx = SignalIndex.for_signal(signal)
    if signal_role(signal) == "strong":
        return ergodic_rate_strong_closed(config, idx)
    return ergodic_rate_weak_numeric(config, idx)


def _rate_asymptote(config, signal):
    idx = SignalIndex.for_signal(signal)
    if signal_role(signal) == "strong":
        return ergodic_rate_strong_asymptotic(config, idx)
    return ergodic_rate_weak_highsnr(config, idx)


def _outage_rows(spec, cfg, db, point_index, mode, first_mode, workers):
    rows = []
    for s in spec.signals:
        res = outage_probability(cfg, s)
        est = mc_outage(cfg, s, spec.mc_iterations, spec.master_seed,
                        point_index=point_index, workers=workers)
        rows.append(MetricPoint(
            db, f"x{s}", spec.metric, mode,
            analytic=res.p_exact,
            asymptotic=res.p_asymptotic if spec.include_asymptotic else None,
            mc_mean=est.mean, mc_ci_low=est.ci_low, mc_ci_high=est.ci_high,
            feasible=res.feasible))
    if spec.include_oma and first_mode:
        targets = ["system"] + list(spec.signals)
        for target in targets:
            out_est, _ = mc_oma_baseline(cfg, target, spec.mc_iterations,
                                         spec.master_seed,
                                         point_index=point_index, workers=workers)
            name = "oma:system" if target == "system" else f"oma:x{target}"
            rows.append(MetricPoint(db, name, spec.metric, "oma", None, None,
                                    out_est.mean, out_est.ci_low,
                                    out_est.ci_high, True))
    return rows


def _ergodic_rows(spec, cfg, db, point_index, mode, first_mode, workers):
    zero = _no_leakage(cfg)
    rows = []
    for s in spec.signals:
        est = mc_ergodic(cfg, s, spec.mc_iterations, spec.master_seed,
                         point_index=point_index, workers=workers)
        rows.append(MetricPoint(
            db, f"x{s}", spec.metric, mode,
            analytic=_rate_closed(zero, s),
            asymptotic=_rate_asymptote(zero, s) if spec.include_asymptotic else None,
            mc_mean=est.mean, mc_ci_low=est.ci_low, mc_ci_high=est.ci_high,
            feasible=True))
    if spec.include_oma and first_mode:
        targets = ["system"] + list(spec.signals)
        for target in targets:
            _, rate_est = mc_oma_baseline(cfg, target, spec.mc_iterations,
                                          spec.master_seed,
                                          point_index=point_index, workers=workers)
            name = "oma:system" if target == "system" else f"oma:x{target}"
            rows.append(MetricPoint(db, name, spec.metric, "oma", None, None,
                                    rate_est.mean, rate_est.ci_low,
                                    rate_est.ci_high, True))
    return rows


def _system_row(spec, cfg, db, point_index, mode, workers):
    delay_limited = spec.metric in ("throughput_dl", "ee_dl")
    targets = (1, 2, 3, 4)
    rates = [cfg.rate(s) for s in targets]
    if delay_limited:
        results = [outage_probability(cfg, s) for s in targets]
        feasible = all(r.feasible for r in results)
        analytic = metrics_mod.throughput_delay_limited(
            [r.p_exact for r in results], rates).value
        asym = None
        if spec.include_asymptotic:
            asym = sum((1.0 - r.p_asymptotic) * rate
                       for r, rate in zip(results, rates))
        ests = [mc_outage(cfg, s, spec.mc_iterations, spec.master_seed,
                          point_index=point_index, workers=workers)
                for s in targets]
        mc_value = sum((1.0 - e.mean) * rate for e, rate in zip(ests, rates))
        hw = math.sqrt(sum((rate * e.half_width_95) ** 2
                           for e, rate in zip(ests, rates)))
    else:
        zero = _no_leakage(cfg)
        feasible = True
        analytic = metrics_mod.throughput_delay_tolerant(
            [_rate_closed(zero, s) for s in targets]).value
        asym = None
        if spec.include_asymptotic:
            asym = sum(_rate_asymptote(zero, s) for s in targets)
        ests = [mc_ergodic(cfg, s, spec.mc_iterations, spec.master_seed,
                           point_index=point_index, workers=workers)
                for s in targets]
        mc_value = sum(e.mean for e in ests)
        hw = math.sqrt(sum(e.half_width_95 ** 2 for e in ests))
    if spec.metric in ("ee_dl", "ee_dt"):
        scale = metrics_mod.energy_efficiency(1.0, cfg)
        analytic *= scale
        mc_value *= scale
        hw *= scale
        if asym is not None:
            asym *= scale
    return MetricPoint(db, "system", spec.metric, mode, analytic, asym,
                       mc_value, mc_value - hw, mc_value + hw, feasible)


def run_sweep(spec: SweepSpec, config: SystemConfig, workers: int = 1):
    """Evaluate the sweep and return rows sorted by (snr, signal, metric, mode)."""
    rows = []
    for point_index, db in enumerate(spec.grid_db()):
        cfg_point = config.with_rho(10.0 ** (db / 10.0))
        for mode_pos, mode in enumerate(spec.modes):
            cfg = cfg_point.with_mode(mode)
            if spec.metric == "outage":
                rows.extend(_outage_rows(spec, cfg, db, point_index, mode,
                                         mode_pos == 0, workers))
            elif spec.metric == "ergodic_rate":
                rows.extend(_ergodic_rows(spec, cfg, db, point_index, mode,
                                          mode_pos == 0, workers))
            else:
                rows.append(_system_row(spec, cfg, db, point_index, mode, workers))
    rows.sort(key=lambda r: (r.snr_db, r.signal, r.metric, r.mode))
    return rows


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_csv(table) -> str:
    lines = [CSV_HEADER]
    for row in table:
        lines.append(",".join([
            _cell(float(row.snr_db)), row.signal, row.metric, row.mode,
            _cell(row.analytic), _cell(row.asymptotic), _cell(row.mc_mean),
            _cell(row.mc_ci_low), _cell(row.mc_ci_high), _cell(row.feasible)]))
    return "\n".join(lines) + "\n"


_PLOT_TEMPLATE = '''#!/usr/bin/env python3
"""Plot __CSV__: one curve per (signal, mode) pair."""
import csv
import os

import matplotlib
matplotlib.use(os.environ.get("MPLBACKEND", "Agg"))
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
with open(os.path.join(here, "__CSV__"), newline="") as fh:
    rows = list(csv.DictReader(fh))

metric = rows[0]["metric"] if rows else "metric"
series = {}
for row in rows:
    key = (row["signal"], row["mode"])
    bucket = series.setdefault(key, ([], []))
    value = row["mc_mean"] or row["analytic"]
    if value:
        bucket[0].append(float(row["snr_db"]))
        bucket[1].append(float(value))

fig, ax = plt.subplots(figsize=(7.0, 5.0))
for (signal, mode), (xs, ys) in sorted(series.items()):
    ax.plot(xs, ys, marker="o", label=f"{signal} ({mode})")
if metric == "outage":
    ax.set_yscale("log")
ax.set_xlabel("SNR (dB)")
ax.set_ylabel(metric.replace("_", " "))
ax.grid(True, which="both", alpha=0.3)
ax.legend(fontsize=8)
fig.savefig(os.path.join(here, "__PNG__"), dpi=150, bbox_inches="tight")
print("wrote __PNG__")
'''


def render_plot_script(csv_name: str) -> str:
    png_name = os.path.splitext(csv_name)[0] + ".png"
    return (_PLOT_TEMPLATE
            .replace("__CSV__", csv_name)
            .replace("__PNG__", png_name))


def emit_outputs(table, format: str, path, csv_path=None) -> str:
    """Write the table as CSV, or a plot script that reads that CSV."""
    if not table:
        raise ValueError("refusing to write an empty table")
    if format == "csv":
        content = render_csv(table)
    elif format == "plot-script":
        name = os.path.basename(csv_path) if csv_path else (
            os.path.splitext(os.path.basename(path))[0] + ".csv")
        content = render_plot_script(name)
    else:
        raise ValueError(f"unknown output format {format!r}")
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(content)
    except OSError as exc:
        raise OutputError(f"cannot write output file {path}: {exc}") from exc
    return str(path)
