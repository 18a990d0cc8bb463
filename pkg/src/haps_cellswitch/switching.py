"""On/off policy space, per-policy evaluation and exhaustive search."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .association import DEFAULT_SENSITIVITY_DBM, Association, associate_users, loads_from_association
from .power import HAPS_PROFILE, SC_PROFILE, PowerProfile, network_power
from .radio import sinr_matrix

Policy = tuple  # (1, b_1, ..., b_n); index 0 is the HAPS


def enumerate_policies(n_sc: int) -> list[Policy]:
    """All ``2**n_sc`` policies with the HAPS pinned on, lexicographic in the SC bits."""
    if n_sc < 0:
        raise ValueError("n_sc must be non-negative")
    return [(1,) + bits for bits in itertools.product((0, 1), repeat=n_sc)]


def all_active_policy(n_sc: int) -> Policy:
    return (1,) * (n_sc + 1)


@dataclass
class SlotState:
    """Frozen link realisation for one slot; policies are evaluated against it."""

    rx_dbm: np.ndarray                 # (n_users, n_bs), column 0 = HAPS
    noise_dbm: float
    caps: np.ndarray                   # channels available per BS
    caps_total: np.ndarray             # channels per BS used for the load ratio
    profiles: tuple = ()
    sensitivity_dbm: float = DEFAULT_SENSITIVITY_DBM
    cascade: bool = True
    haps_background_channels: int = 0  # other-network occupancy counted into HAPS load

    def __post_init__(self):
        self.rx_dbm = np.asarray(self.rx_dbm, dtype=float)
        n_bs = self.rx_dbm.shape[1]
        self.caps = np.asarray(self.caps, dtype=np.int64)
        self.caps_total = np.asarray(self.caps_total, dtype=np.int64)
        if not self.profiles:
            self.profiles = (HAPS_PROFILE,) + (SC_PROFILE,) * (n_bs - 1)
        if len(self.caps) != n_bs or len(self.caps_total) != n_bs or len(self.profiles) != n_bs:
            raise ValueError("caps, caps_total and profiles need one entry per BS")

    @property
    def n_users(self) -> int:
        return self.rx_dbm.shape[0]

    @property
    def n_bs(self) -> int:
        return self.rx_dbm.shape[1]


@dataclass
class PolicyEvaluation:
    policy: Policy
    feasible: bool
    total_power_w: float
    unserved_count: int
    association: Association
    loads: np.ndarray
    serving_sinr: np.ndarray = field(repr=False)  # NaN for unserved users

    @property
    def n_active_sc(self) -> int:
        return sum(self.policy[1:])

    def sort_key(self):
        return (self.unserved_count, self.total_power_w, self.n_active_sc, self.policy)


def evaluate_policy(policy: Policy, state: SlotState) -> PolicyEvaluation:
    """Associate users under ``policy`` and price the result."""
    policy = tuple(int(b) for b in policy)
    if len(policy) != state.n_bs or policy[0] != 1:
        raise ValueError("policy must cover every BS and keep the HAPS active")
    active = np.array(policy, dtype=bool)
    sinr = sinr_matrix(state.rx_dbm, state.noise_dbm, active)
    assoc = associate_users(sinr, state.rx_dbm, active, state.caps,
                            state.sensitivity_dbm, state.cascade)
    loads = loads_from_association(assoc, state.caps_total)
    power_loads = loads
    if state.haps_background_channels:
        power_loads = loads.copy()
        power_loads[0] = min(1.0, loads[0] + state.haps_background_channels / state.caps_total[0])
    power = network_power(policy, power_loads, state.profiles)
    served = assoc.serving >= 0
    serving_sinr = np.full(state.n_users, np.nan)
    serving_sinr[served] = sinr[np.flatnonzero(served), assoc.serving[served]]
    unserved = assoc.n_unserved
    return PolicyEvaluation(policy, unserved == 0, float(power), unserved, assoc, loads, serving_sinr)


def exhaustive_search(state: SlotState, policies=None) -> PolicyEvaluation:
    """Cheapest policy that serves every user.

    Ties go to fewer active small cells, then the lexicographically smaller
    policy. When no policy serves everyone, the one leaving the fewest users
    unserved wins (same tie-breaks after power); check ``feasible`` on the
    result.
    """
    if policies is None:
        policies = enumerate_policies(state.n_bs - 1)
    best = None
    for pol in policies:
        ev = evaluate_policy(pol, state)
        if best is None or ev.sort_key() < best.sort_key():
            best = ev
    if best is None:
        raise ValueError("empty policy set")
    return best
