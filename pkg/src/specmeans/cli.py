"""Command-line interface for the experiment harness.

Exit codes: 0 success; 2 configuration error; 3 a hypothesis-passing
convergence run violated the monotone-decay assertion.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .harness import (
    ExperimentConfig,
    parse_mean,
    parse_norm_spec,
    report_to_csv,
    report_to_json,
    run_conditions,
    run_convergence_distribution,
    run_convergence_function,
    run_equivalence,
)


def _add_common(sub):
    sub.add_argument("--config", type=str, default=None, help="JSON config path")
    sub.add_argument("--t0", type=float, default=None)
    sub.add_argument("--ratio", type=float, default=None)
    sub.add_argument("--steps", type=int, default=None)
    sub.add_argument("--grid", type=str, default=None, help="n or N,n[,L]")
    sub.add_argument("--alpha", type=float, default=None)
    sub.add_argument("--beta", type=float, default=None)
    sub.add_argument("--p", type=float, default=None)
    sub.add_argument("--q", type=float, default=None)
    sub.add_argument("--p0", type=float, default=None)
    sub.add_argument("--l", type=int, default=None)
    sub.add_argument("--N", type=int, default=None)
    sub.add_argument("--m", type=float, default=None)
    sub.add_argument("--mean", type=str, default=None)
    sub.add_argument("--symbol", type=str, default=None)
    sub.add_argument("--signal", type=str, default=None)
    sub.add_argument("--space", type=str, default=None)
    sub.add_argument("--theorem", type=str, default=None)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--out", type=str, default=None)
    sub.add_argument("--format", type=str, choices=("csv", "json"), default=None)


def _build_parser():
    parser = argparse.ArgumentParser(prog="specmeans")
    subs = parser.add_subparsers(dest="command", required=True)
    for name in ("converge", "converge-dist", "equivalence", "conditions", "norm", "apply"):
        sub = subs.add_parser(name)
        _add_common(sub)
        if name == "norm":
            sub.add_argument("--via", type=str, default="lp", choices=("lp", "modulus", "classical"))
        if name == "apply":
            sub.add_argument("--t", type=float, default=1e-2)
    return parser


def _config_from_args(args, kind: str) -> ExperimentConfig:
    if args.config:
        config = ExperimentConfig.from_json(args.config)
    else:
        config = ExperimentConfig()
    config.kind = kind
    overrides = {
        "t0": args.t0,
        "ratio": args.ratio,
        "steps": args.steps,
        "alpha": args.alpha,
        "beta": args.beta,
        "p": args.p,
        "q": args.q,
        "p0": args.p0,
        "l": args.l,
        "mean": args.mean,
        "symbol": args.symbol,
        "signal": args.signal,
        "space": args.space,
        "theorem": args.theorem,
        "seed": args.seed,
        "out": args.out,
        "format": args.format,
    }
    for key, value in overrides.items():
        if value is not None:
            setattr(config, key, value)
    if args.N is not None:
        config.dimension = args.N
    if args.m is not None:
        config.symbol = f"abs:{args.m:g}"
    if args.grid is not None:
        parts = args.grid.split(",")
        if len(parts) == 1:
            config.points_per_axis = int(parts[0])
        else:
            config.dimension = int(parts[0])
            config.points_per_axis = int(parts[1])
            if len(parts) > 2:
                config.period = float(parts[2])
    config.__post_init__()
    return config


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.command == "converge":
            config = _config_from_args(args, "converge_function")
            report = run_convergence_function(config)
            text = (
                report_to_csv(report)
                if config.format == "csv"
                else report_to_json(report)
            )
            _emit(text, config.out)
            if report.hypothesis_passed and not report.monotone and not report.floor_validated:
                return 3
            return 0
        if args.command == "converge-dist":
            config = _config_from_args(args, "converge_distribution")
            if not config.atoms and not config.density_signal:
                config.atoms = [{"x": [0.0] * config.dimension, "alpha": [0] * config.dimension, "c": [1.0, 0.0]}]
            report = run_convergence_distribution(config)
            text = (
                report_to_csv(report)
                if config.format == "csv"
                else report_to_json(report)
            )
            _emit(text, config.out)
            if report.hypothesis_passed and not report.monotone and not report.floor_validated:
                return 3
            return 0
        if args.command == "equivalence":
            config = _config_from_args(args, "equivalence")
            _emit(json.dumps(run_equivalence(config), indent=2), config.out)
            return 0
        if args.command == "conditions":
            config = _config_from_args(args, "conditions")
            _emit(run_conditions(config), config.out)
            return 0
        if args.command == "norm":
            config = _config_from_args(args, "norm")
            from .signals import make_signal
            from .spaces import evaluate_norm

            spec = config.grid
            f = make_signal(config.signal, spec)
            norm_spec = parse_norm_spec(config.space)
            if norm_spec.kind == "besov_lp" and args.via == "modulus":
                norm_spec = parse_norm_spec(
                    config.space.replace("besov", "besov_modulus", 1)
                )
            elif norm_spec.kind == "besov_lp" and args.via == "classical":
                norm_spec = parse_norm_spec(
                    config.space.replace("besov", "classical_besov", 1)
                )
            value = evaluate_norm(f, norm_spec)
            _emit(
                json.dumps(
                    {
                        "signal": config.signal,
                        "space": norm_spec.label(),
                        "via": args.via,
                        "value": value,
                    },
                    indent=2,
                ),
                config.out,
            )
            return 0
        if args.command == "apply":
            config = _config_from_args(args, "apply")
            from .harness import parse_symbol
            from .multipliers import spectral_mean
            from .signals import make_signal

            spec = config.grid
            f = make_signal(config.signal, spec)
            result = spectral_mean(parse_mean(config.mean), args.t, parse_symbol(config.symbol), f)
            _emit(result.to_json(), config.out)
            return 0
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
