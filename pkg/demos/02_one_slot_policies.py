"""
Pricing every on/off policy in one slot
=======================================

Builds the default scenario, freezes one slot of link draws and evaluates
all sixteen small-cell policies against it, for a generous and a tight
HAPS capacity share.
"""

# %%
from haps_cellswitch.config import ScenarioConfig
from haps_cellswitch.simulation import build_scenario, named_stream, sample_rx_power, slot_state
from haps_cellswitch.switching import enumerate_policies, evaluate_policy, exhaustive_search

for lam in (0.7, 0.2):
    cfg = ScenarioConfig(mu=100, lam=lam, seed=3)
    sc = build_scenario(cfg)
    rx = sample_rx_power(sc, sc.users, named_stream(cfg.seed, "los"), named_stream(cfg.seed, "shadow"))
    state = slot_state(sc, rx)
    print(f"\nlambda = {lam}: HAPS offers {sc.caps[0]} channels to {cfg.mu} users")
    print("policy     power[W]  unserved  users per BS")
    for pol in enumerate_policies(4):
        ev = evaluate_policy(pol, state)
        print(f"{''.join(map(str, pol))}   {ev.total_power_w:8.2f}  {ev.unserved_count:8d}  {ev.association.counts.tolist()}")
    best = exhaustive_search(state)
    print("chosen:", "".join(map(str, best.policy)), f"at {best.total_power_w:.2f} W")

# %%
# With lambda = 0.7 the HAPS carries everyone and every SC sleeps. With
# lambda = 0.2 only 50 users fit on the HAPS, so at least one SC must wake.
