"""Load-dependent base-station power consumption (EARTH-style affine model)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PowerProfile:
    p_c: float      # constant term, W
    slope: float    # load-dependent slope
    p_max: float    # max transmit power, W
    p_sleep: float  # sleep-mode consumption, W

    def __post_init__(self):
        if min(self.p_c, self.slope, self.p_max, self.p_sleep) < 0:
            raise ValueError("power profile fields must be non-negative")


SC_PROFILE = PowerProfile(p_c=56.0, slope=2.6, p_max=6.3, p_sleep=39.0)
# the HAPS never sleeps; p_sleep is unused
HAPS_PROFILE = PowerProfile(p_c=130.0, slope=4.7, p_max=20.0, p_sleep=0.0)


def _check_load(rho):
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"load must lie in [0, 1], got {rho}")


def sc_power(profile: PowerProfile, rho: float, active: bool = True) -> float:
    _check_load(rho)
    if not active:
        return profile.p_sleep
    return profile.p_c + profile.slope * rho * profile.p_max


def haps_power(profile: PowerProfile, rho: float) -> float:
    _check_load(rho)
    return profile.p_c + profile.slope * rho * profile.p_max


def network_power(policy, loads, profiles) -> float:
    """Total consumption; index 0 is the HAPS, the rest are small cells.

    Raises if an inactive BS carries a positive load.
    """
    policy = tuple(int(b) for b in policy)
    if not policy or policy[0] != 1:
        raise ValueError("the HAPS (index 0) must be active")
    if not len(policy) == len(loads) == len(profiles):
        raise ValueError("policy, loads and profiles must have equal length")
    total = haps_power(profiles[0], float(loads[0]))
    for beta, rho, prof in zip(policy[1:], loads[1:], profiles[1:]):
        if not beta and rho > 0:
            raise ValueError("inactive base station carries load")
        total += sc_power(prof, float(rho), bool(beta))
    return total


def slot_energy(power_w, t_d: float):
    if t_d <= 0:
        raise ValueError("t_d must be positive")
    return np.multiply(power_w, t_d)
