"""Command-line front end.

    braidsplit analyze --n 3 --q 4
    braidsplit sweep --n 3..5 --q-range 1..12 --format json --out sweep.json
    braidsplit verify-claims
    braidsplit analyze --module-file my_module.cfg

Exit status is 0 exactly when no record or check in the report failed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import runner
from .config import ConfigError, RunConfig, load_extension_file, parse_file, parse_range, run_settings
from .report import Report, emit_json, render_text

COMMANDS = ("analyze", "sweep", "verify-claims")


def _range(text: str) -> list[int]:
    try:
        return parse_range(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N, A..B or a comma list, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="braidsplit", description=__doc__.split("\n\n")[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="key = value file with any of the options below")
    parser.add_argument("--n", type=_range, help="strand count: N, A..B or a comma list")
    parser.add_argument("--q", type=_range, help="modulus: N, A..B or a comma list")
    parser.add_argument("--q-range", type=_range, metavar="A..B", help="inclusive modulus range")
    parser.add_argument("--family", choices=("wreath",))
    parser.add_argument("--module-file", help="explicit module in key = value format")
    parser.add_argument("--budget-lifts", type=int, help="max tuples for the brute-force lift oracle")
    parser.add_argument("--budget-group", type=int, help="max group order for the complement oracle")
    parser.add_argument("--format", choices=("text", "json"))
    parser.add_argument("--out", help="write the report here instead of stdout")
    parser.add_argument("--workers", type=int, help="parallel workers for sweeps")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    settings: dict[str, object] = {}
    if args.config:
        settings.update(run_settings(parse_file(args.config), args.config))
    for key in ("n", "q", "q_range", "family", "module_file", "budget_lifts", "budget_group", "format", "out", "workers"):
        value = getattr(args, key)
        if value is None:
            continue
        if key in ("q", "q_range"):
            # a modulus flag replaces whatever modulus the config file gave
            settings.pop("q", None)
            settings.pop("q-range", None)
        settings[key.replace("_", "-")] = value
    if "q-range" in settings:
        settings["q"] = settings.pop("q-range")
    defaults = {
        "analyze": {},
        "sweep": {"n": [3, 4], "q": list(range(2, 13))},
        "verify-claims": {"n": [3, 4, 5], "q": list(range(1, 13))},
    }[args.command]
    kwargs = {k.replace("-", "_"): v for k, v in {**defaults, **settings}.items()}
    return RunConfig(command=args.command, **kwargs)


def run(cfg: RunConfig) -> Report:
    if cfg.command == "analyze":
        if cfg.module_file:
            ext = load_extension_file(cfg.module_file)
            return Report("analyze", [runner.analyze_extension(ext, cfg.budget_lifts, cfg.module_file)])
        if len(cfg.n) != 1 or len(cfg.q) != 1:
            raise ConfigError("analyze takes a single n and q; use sweep for ranges")
        return Report("analyze", [runner.analyze_wreath(cfg.n[0], cfg.q[0], cfg.budget_lifts, cfg.budget_group)])
    if cfg.command == "sweep":
        return runner.sweep(cfg.n, cfg.q, cfg.budget_lifts, cfg.budget_group, cfg.workers)
    return runner.verify_claims(cfg.n, cfg.q, cfg.budget_lifts, cfg.budget_group, cfg.workers)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        report = run(cfg)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = emit_json(report) if cfg.format == "json" else render_text(report)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
