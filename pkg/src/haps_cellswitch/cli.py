"""Command-line entry point: ``haps-cellswitch {run,sweep,reproduce-paper,validate-config}``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import ConfigError, ScenarioConfig, build_config, expand_grid, resolve_raw
from .reporting import fmt, write_results
from .simulation import run_sweep

GRID_LAMBDAS = (0.7, 0.5, 0.2)
GRID_MUS = (100, 500, 700, 1000)
GRID_MODES = ("CSA", "A3")


def paper_grid(seed: int) -> list[ScenarioConfig]:
    """The 24 paired runs behind the energy and rate figures."""
    base = ScenarioConfig(n_ts=100, t_d=1.0, seed=seed).validate()
    return [base.replace(mode=m, lam=lam, mu=mu) for m in GRID_MODES for lam in GRID_LAMBDAS for mu in GRID_MUS]


def format_config(cfg: ScenarioConfig) -> str:
    lines = []
    for key, value in cfg.to_dict().items():
        if isinstance(value, list):
            value = ",".join(fmt(v) for v in value)
        elif isinstance(value, (bool, int, float)):
            value = fmt(value)
        lines.append(f"{key} = {value}")
    return "\n".join(lines)


def _raw(args) -> dict[str, str]:
    text = None
    if getattr(args, "config", None):
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ConfigError("config", f"cannot read {args.config}: {exc.strerror}") from None
    overrides = list(getattr(args, "set", None) or [])
    if getattr(args, "seed", None) is not None:
        overrides.append(("seed", str(args.seed)))
    return resolve_raw(text, overrides)


def _progress(cfg, summary, err):
    tag = f"{cfg.mode} lambda={fmt(cfg.lam)} mu={cfg.mu} seed={cfg.seed}"
    if err is not None:
        print(f"FAILED {tag}: {err}", file=sys.stderr)
    else:
        print(f"done {tag}: energy={summary.total_energy_j:.2f} J", file=sys.stderr)


def _execute(configs, args) -> int:
    result = run_sweep(configs, workers=args.workers, progress=_progress)
    paths = write_results(result.summaries, args.out)
    print(f"wrote {len(paths)} file(s) to {args.out}")
    return 1 if result.failures else 0


def cmd_run(args) -> int:
    cfg = build_config(_raw(args))
    return _execute([cfg], args)


def cmd_sweep(args) -> int:
    return _execute(expand_grid(_raw(args)), args)


def cmd_reproduce(args) -> int:
    return _execute(paper_grid(args.seed if args.seed is not None else 42), args)


def cmd_validate(args) -> int:
    print(format_config(build_config(_raw(args))))
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="haps-cellswitch", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_config=True):
        if with_config:
            p.add_argument("--config", help="key = value config file")
            p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key (repeatable)")
        p.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
        p.add_argument("--out", default="results", help="output directory")
        p.add_argument("--workers", type=int, default=1, help="parallel runs")

    common(sub.add_parser("run", help="simulate one configuration"))
    common(sub.add_parser("sweep", help="expand comma-separated lambda/mu/mode/seed values into a grid"))
    common(sub.add_parser("reproduce-paper", help="fixed 24-run CSA/A3 grid"), with_config=False)
    p = sub.add_parser("validate-config", help="check a config and print it fully resolved")
    p.add_argument("--config")
    p.add_argument("--set", action="append", metavar="KEY=VALUE")
    p.add_argument("--seed", type=int)
    return parser


COMMANDS = {"run": cmd_run, "sweep": cmd_sweep, "reproduce-paper": cmd_reproduce, "validate-config": cmd_validate}


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: invalid config key {exc.key!r}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
