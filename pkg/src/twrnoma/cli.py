"""Command line front end: parameter sweeps and the self-check battery.

Exit codes: 0 on success, 1 for configuration or usage problems, 2 when
the validation battery reports a failing check.  SNR is taken in dB on
the command line and converted once, here, to the linear scale the
library works in.
"""

from __future__ import annotations

import argparse
import sys

from .configio import (DEFAULT_CONFIG_TEXT, PRESETS, apply_overrides,
                       load_config)
from .model import ConfigError, SystemConfig
from .sweep import METRICS, OutputError, SweepSpec, emit_outputs, run_sweep
from .validate import DEFAULT_VALIDATE_SEED, PROFILES, validate


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _parse_signals(text):
    out = []
    for part in text.split(","):
        token = part.strip().lower().lstrip("x")
        if not token:
            continue
        try:
            out.append(int(token))
        except ValueError:
            raise ConfigError(f"cannot parse signal name {part.strip()!r}; "
                              "expected x1..x4") from None
    if not out:
        raise ConfigError("signal list is empty")
    return tuple(out)


def _parse_snr(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"--snr expects start:stop:step in dB, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise ConfigError(f"--snr values must be numeric, got {text!r}") from None


def _build_parser():
    parser = _Parser(prog="twrnoma",
                     description="Two-way relay NOMA link analysis")
    parser.add_argument("--print-default-config", action="store_true",
                        help="print the annotated default config and exit")
    sub = parser.add_subparsers(dest="command")

    sweep = sub.add_parser("sweep", help="run an SNR sweep", prog="twrnoma sweep")
    sweep.add_argument("--config", metavar="PATH",
                       help="flat key=value config file")
    sweep.add_argument("--preset", choices=sorted(PRESETS),
                       help="bundled sweep configuration")
    sweep.add_argument("--metric", choices=METRICS)
    sweep.add_argument("--signals", metavar="LIST",
                       help="comma separated, e.g. x1,x2")
    sweep.add_argument("--mode", choices=("ipsic", "psic", "both"))
    sweep.add_argument("--snr", metavar="A:B:STEP",
                       help="SNR grid in dB, e.g. 0:40:5")
    sweep.add_argument("--iterations", type=int, metavar="N")
    sweep.add_argument("--seed", type=int, metavar="N")
    sweep.add_argument("--with-oma", action="store_true")
    sweep.add_argument("--with-asymptotic", action="store_true")
    sweep.add_argument("--out", metavar="PATH", help="output CSV path")
    sweep.add_argument("--emit-plot", action="store_true",
                       help="also write a standalone plot script")
    sweep.add_argument("--workers", type=int, default=1, metavar="N")

    check = sub.add_parser("validate", help="run the self-check battery",
                           prog="twrnoma validate")
    check.add_argument("--config", metavar="PATH")
    check.add_argument("--profile", choices=sorted(PROFILES), default="default")
    check.add_argument("--iterations", type=int, default=200_000, metavar="N")
    check.add_argument("--seed", type=int, default=DEFAULT_VALIDATE_SEED,
                       metavar="N")
    check.add_argument("--workers", type=int, default=1, metavar="N")
    return parser


def _load(args):
    if args.config:
        return load_config(args.config)
    return SystemConfig()


def _sweep_jobs(args, base_config):
    """Expand preset and flags into (spec, config, out path) jobs."""
    if args.preset:
        preset = PRESETS[args.preset]
        metric = args.metric or preset.metric
        signals = _parse_signals(args.signals) if args.signals else preset.signals
        mode = args.mode or ("both" if len(preset.modes) > 1 else preset.modes[0])
        snr = _parse_snr(args.snr) if args.snr else preset.snr
        with_oma = args.with_oma or preset.with_oma
        with_asym = args.with_asymptotic or preset.with_asymptotic
        variants = preset.variants
        stem = args.preset
    else:
        if args.metric is None:
            raise ConfigError("either --preset or --metric is required")
        metric = args.metric
        signals = _parse_signals(args.signals) if args.signals else (1, 2)
        mode = args.mode or "both"
        snr = _parse_snr(args.snr) if args.snr else (0.0, 40.0, 5.0)
        with_oma = args.with_oma
        with_asym = args.with_asymptotic
        from .configio import PresetVariant
        variants = (PresetVariant("", {}),)
        stem = "sweep"
    base_out = args.out or f"{stem}.csv"
    root, ext = (base_out.rsplit(".", 1) + ["csv"])[:2]
    jobs = []
    for variant in variants:
        spec = SweepSpec(
            snr_start_db=snr[0], snr_stop_db=snr[1], snr_step_db=snr[2],
            metric=variant.metric or metric, signals=signals, sic_mode=mode,
            mc_iterations=args.iterations or 1_000_000,
            master_seed=args.seed if args.seed is not None else 1729,
            include_asymptotic=with_asym, include_oma=with_oma)
        cfg = apply_overrides(base_config, variant.overrides)
        path = f"{root}.{ext}" if not variant.suffix else (
            f"{root}_{variant.suffix}.{ext}")
        jobs.append((spec, cfg, path))
    return jobs


def _cmd_sweep(args):
    base_config = _load(args)
    for spec, cfg, path in _sweep_jobs(args, base_config):
        table = run_sweep(spec, cfg, workers=max(1, args.workers))
        emit_outputs(table, "csv", path)
        print(f"wrote {path} ({len(table)} rows)")
        if args.emit_plot:
            stem = path.rsplit(".", 1)[0]
            script = emit_outputs(table, "plot-script", f"{stem}_plot.py",
                                  csv_path=path)
            print(f"wrote {script}")
    return 0


def _cmd_validate(args):
    config = _load(args)
    report = validate(config, profile=args.profile,
                      iterations=args.iterations, seed=args.seed,
                      workers=max(1, args.workers))
    for line in report.lines():
        print(line)
    return 0 if report.passed else 2


def main(argv=None) -> int:
    raw = list(sys.argv[1:]) if argv is None else list(argv)
    if "--print-default-config" in raw:
        print(DEFAULT_CONFIG_TEXT, end="")
        return 0
    parser = _build_parser()
    try:
        args = parser.parse_args(raw)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "validate":
            return _cmd_validate(args)
        parser.print_help()
        return 1
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ConfigError, OutputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
