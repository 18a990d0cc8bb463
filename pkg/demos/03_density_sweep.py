"""
Energy gain versus user density
===============================

Runs matched CSA / A3 pairs over the user counts and HAPS shares of the
study with a shortened horizon, then tabulates energy and gain.
Pass ``--full`` for the 100-slot horizon.
"""

# %%
import sys

import numpy as np

from haps_cellswitch.config import ScenarioConfig
from haps_cellswitch.reporting import gain
from haps_cellswitch.simulation import run_sweep

n_ts = 100 if "--full" in sys.argv else 20
grid = [ScenarioConfig(n_ts=n_ts, mode=m, lam=lam, mu=mu)
        for m in ("CSA", "A3") for lam in (0.7, 0.5, 0.2) for mu in (100, 500, 700, 1000)]
result = run_sweep(grid)
by_key = {(s.config.mode, s.config.lam, s.config.mu): s for s in result.summaries}

# %%
print(f"{'lambda':>6} {'mu':>5} {'gamma':>9} {'E_A3[kJ]':>9} {'E_CSA[kJ]':>9} {'gain%':>6} {'mean SCs on':>11}")
for lam in (0.7, 0.5, 0.2):
    for mu in (100, 500, 700, 1000):
        a3, csa = by_key[("A3", lam, mu)], by_key[("CSA", lam, mu)]
        on = np.mean([sum(r.policy[1:]) for r in csa.records])
        print(f"{lam:6.1f} {mu:5d} {csa.gamma:9.1e} {a3.total_energy_j/1e3:9.2f} {csa.total_energy_j/1e3:9.2f} "
              f"{gain(a3.total_energy_j, csa.total_energy_j):6.2f} {on:11.2f}")

# %%
# The gain is largest for sparse networks and vanishes once the small
# cells are needed for capacity.
