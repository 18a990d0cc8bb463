"""Slow, obviously-correct reference implementations used as test oracles.

Nothing here imports the package's association, switching or power code.
"""

import itertools
import math

SENS = -95.0
# HAPS then four SCs: (P_C, slope, P_max, P_sleep)
TABLE_I = [(130.0, 4.7, 20.0, None)] + [(56.0, 2.6, 6.3, 39.0)] * 4


def sinr_row(rx_dbm_row, noise_dbm, active):
    mw = [10 ** (p / 10) for p in rx_dbm_row]
    noise = 10 ** (noise_dbm / 10)
    total = sum(m for m, a in zip(mw, active) if a)
    return [m / (noise + total - m) if a else None for m, a in zip(mw, active)]


def sequential_associate(rx_dbm, noise_dbm, active, caps, sens=SENS):
    """One user at a time, in id order; best SINR with capacity and sensitivity."""
    remaining = list(caps)
    serving = []
    for row in rx_dbm:
        s = sinr_row(row, noise_dbm, active)
        best, best_val = -1, -math.inf
        for k, val in enumerate(s):
            if val is None or row[k] < sens or remaining[k] <= 0:
                continue
            if val > best_val:
                best, best_val = k, val
        if best >= 0:
            remaining[best] -= 1
        serving.append(best)
    return serving


def network_power(policy, counts, channels=250):
    p_c, slope, p_max, _ = TABLE_I[0]
    total = p_c + slope * (counts[0] / channels) * p_max
    for k in range(1, len(policy)):
        p_c, slope, p_max, p_sleep = TABLE_I[k]
        total += p_c + slope * (counts[k] / channels) * p_max if policy[k] else p_sleep
    return total


def brute_force_search(rx_dbm, noise_dbm, caps, sens=SENS):
    """Return (policy, power, unserved) of the best policy by full re-enumeration."""
    n_bs = len(caps)
    results = []
    for bits in itertools.product((0, 1), repeat=n_bs - 1):
        policy = (1,) + bits
        serving = sequential_associate(rx_dbm, noise_dbm, policy, caps, sens)
        counts = [serving.count(k) for k in range(n_bs)]
        unserved = serving.count(-1)
        results.append((unserved, network_power(policy, counts), sum(bits), policy))
    unserved, power, _, policy = min(results)
    return policy, power, unserved
