"""Energy gain, rate CDFs and result files."""

from __future__ import annotations

import csv
import json
import logging
from collections import defaultdict
from pathlib import Path

import numpy as np

from .simulation import RunSummary

log = logging.getLogger(__name__)

ENERGY_COLUMNS = (
    "mode", "lambda", "mu", "seed", "gamma", "total_energy_j", "mean_power_w",
    "gain_pct", "unserved_total", "infeasible_slots",
)


def gain(e_a3: float, e_csa: float) -> float:
    """Percentage energy saved by CSA relative to the all-active baseline."""
    if e_a3 <= 0:
        raise ValueError("baseline energy must be positive")
    return (e_a3 - e_csa) / e_a3 * 100.0


def rate_cdf(samples) -> list[tuple[float, float]]:
    """Empirical CDF points ``(x_(i), i/N)`` of the sorted samples.

    An empty input yields an empty list (and a logged warning).
    """
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    n = len(x)
    if n == 0:
        log.warning("rate_cdf called with no samples")
        return []
    return [(float(v), (i + 1) / n) for i, v in enumerate(x)]


def fmt(x) -> str:
    """Shortest positional decimal that parses back to the same double."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return np.format_float_positional(float(x), unique=True, trim="-")


def pair_key(cfg) -> tuple:
    """Everything but ``mode`` identifies a matched CSA/A3 pair."""
    d = cfg.to_dict()
    d.pop("mode")
    return tuple(sorted((k, tuple(v) if isinstance(v, list) else v) for k, v in d.items()))


def paired_gains(summaries) -> dict[tuple, float]:
    """Gain per pair key for every CSA run that has a seed-matched A3 run."""
    a3 = {pair_key(s.config): s for s in summaries if s.config.mode == "A3"}
    out = {}
    for s in summaries:
        if s.config.mode == "CSA":
            ref = a3.get(pair_key(s.config))
            if ref is not None:
                out[pair_key(s.config)] = gain(ref.total_energy_j, s.total_energy_j)
    return out


def cross_seed_gains(summaries) -> dict[tuple[float, int], float]:
    """Gain of the seed-averaged energies per (lambda, mu)."""
    energies = defaultdict(lambda: {"CSA": [], "A3": []})
    for s in summaries:
        energies[(s.config.lam, s.config.mu)][s.config.mode].append(s.total_energy_j)
    return {
        key: gain(float(np.mean(e["A3"])), float(np.mean(e["CSA"])))
        for key, e in sorted(energies.items())
        if e["A3"] and e["CSA"]
    }


def _rate_file(mode: str, lam: float, mu: int) -> str:
    return f"rates_{mode}_{fmt(lam)}_{mu}.csv"


def write_results(summaries, out_dir) -> list[Path]:
    """Write ``energy.csv``, one rate CDF file per (mode, lambda, mu) and ``summary.json``.

    Rate samples of runs differing only in seed are pooled into one CDF.
    Returns the paths written. An I/O failure on one file is logged and the
    remaining files are still attempted; the error is re-raised at the end.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    summaries = sorted(summaries, key=_order_key)
    gains = paired_gains(summaries)
    written, errors = [], []

    def attempt(path: Path, writer):
        try:
            writer(path)
            written.append(path)
        except OSError as exc:
            log.error("failed to write %s: %s", path, exc)
            errors.append(exc)

    def energy(path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(ENERGY_COLUMNS)
            for s in summaries:
                c = s.config
                g = gains.get(pair_key(c))
                w.writerow([c.mode, fmt(c.lam), c.mu, c.seed, fmt(s.gamma), fmt(s.total_energy_j),
                            fmt(s.mean_power_w), "" if g is None else fmt(g), s.unserved_total,
                            len(s.infeasible_slots)])

    attempt(out / "energy.csv", energy)

    pooled = defaultdict(list)
    for s in summaries:
        pooled[(s.config.mode, s.config.lam, s.config.mu)].append(s.rates)
    for (mode, lam, mu), parts in pooled.items():
        def rates(path, parts=parts):
            with open(path, "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(("rate_bps", "cdf"))
                for r, p in rate_cdf(np.concatenate(parts)):
                    w.writerow((fmt(r), fmt(p)))
        attempt(out / _rate_file(mode, lam, mu), rates)

    def summary(path):
        doc = {
            "runs": [_run_doc(s, gains.get(pair_key(s.config))) for s in summaries],
            "cross_seed_gain_pct": [
                {"lambda": lam, "mu": mu, "gain_pct": g} for (lam, mu), g in cross_seed_gains(summaries).items()
            ],
        }
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")

    attempt(out / "summary.json", summary)
    if errors:
        raise errors[0]
    return written


def _order_key(s: RunSummary):
    c = s.config
    return (c.mode, c.lam, c.mu, c.seed, pair_key(c))


def _run_doc(s: RunSummary, g) -> dict:
    r = s.rates
    return {
        "config": s.config.to_dict(),
        "gamma": s.gamma,
        "total_energy_j": s.total_energy_j,
        "mean_power_w": s.mean_power_w,
        "gain_pct": g,
        "unserved_total": s.unserved_total,
        "infeasible_slots": s.infeasible_slots,
        "median_rate_bps": float(np.median(r)) if len(r) else None,
        "mean_active_sc": float(np.mean([sum(rec.policy[1:]) for rec in s.records])),
        "policy_histogram": _policy_histogram(s),
    }


def _policy_histogram(s: RunSummary) -> dict[str, int]:
    counts = defaultdict(int)
    for rec in s.records:
        counts["".join(map(str, rec.policy))] += 1
    return dict(sorted(counts.items()))


def read_energy_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
