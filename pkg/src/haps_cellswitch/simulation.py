"""Scenario construction, the per-slot loop, and sweeps over configurations."""

from __future__ import annotations

import logging
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import propagation as prop
from .association import haps_available_capacity
from .config import ScenarioConfig
from .geometry import Area, Users, elevation_angle, place_users, step_mobility, terrestrial_distances
from .power import HAPS_PROFILE, SC_PROFILE, slot_energy
from .radio import NoiseModel, data_rate, noise_power
from .switching import SlotState, all_active_policy, evaluate_policy, exhaustive_search

log = logging.getLogger(__name__)

N_SC = 4


def named_stream(seed: int, name: str) -> np.random.Generator:
    """Independent generator for subsystem ``name`` derived from ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(zlib.crc32(name.encode()),)))


@dataclass
class Scenario:
    config: ScenarioConfig
    area: Area
    bs_positions: np.ndarray      # (n_bs, 3); row 0 is the HAPS
    users: Users
    caps: np.ndarray              # channels available to this network per BS
    caps_total: np.ndarray        # channels per BS
    noise_dbm: float
    haps_rf: prop.RfParams
    sc_rf: prop.RfParams

    @property
    def n_bs(self) -> int:
        return len(self.bs_positions)


def sc_layout(area: Area, height: float) -> np.ndarray:
    """Four small cells at the quadrant centroids."""
    w, h = area.width, area.height
    xy = [(w / 4, h / 4), (w / 4, 3 * h / 4), (3 * w / 4, h / 4), (3 * w / 4, 3 * h / 4)]
    return np.array([(x, y, height) for x, y in xy])


def build_scenario(config: ScenarioConfig) -> Scenario:
    cfg = config.validate()
    area = Area(cfg.area_width, cfg.area_height)
    cx, cy = area.center
    bs = np.vstack([[cx, cy, cfg.haps_altitude], sc_layout(area, cfg.sc_height)])
    speeds = (0.0, cfg.speed_pedestrian, cfg.speed_cycler, cfg.speed_vehicular)
    users = place_users(cfg.mu, area, named_stream(cfg.seed, "placement"), cfg.mode_mix, speeds, cfg.ue_height)
    c_total = cfg.channels_per_bs
    caps = np.array([haps_available_capacity(cfg.lam, c_total)] + [c_total] * N_SC)
    noise = noise_power(NoiseModel(cfg.noise_density_dbm_hz, cfg.noise_figure_db, cfg.per_ue_bandwidth))
    haps_rf = prop.RfParams(cfg.haps_tx_power_dbm, cfg.haps_gain_dbi, cfg.ue_gain_dbi, cfg.f_c)
    sc_rf = prop.RfParams(cfg.sc_tx_power_dbm, cfg.sc_gain_dbi, cfg.ue_gain_dbi, cfg.f_c)
    return Scenario(cfg, area, bs, users, caps, np.full(N_SC + 1, c_total), noise, haps_rf, sc_rf)


def link_geometry(scenario: Scenario, users: Users):
    """Elevation angles to the HAPS and (d_2D, d_3D) to every small cell."""
    pos = users.positions()
    theta = elevation_angle(pos, scenario.bs_positions[0])
    d2, d3 = terrestrial_distances(pos[:, None, :], scenario.bs_positions[None, 1:, :])
    return np.atleast_1d(theta), d2, d3


def sample_rx_power(scenario: Scenario, users: Users, los_rng: np.random.Generator,
                    shadow_rng: np.random.Generator) -> np.ndarray:
    """Received power (dBm) on every user-BS link for one slot.

    In ``sampled`` mode each link draws a LoS state and one shadow value.
    In ``blended`` mode both LoS and NLoS losses (each with its own shadow
    draw) are weighted by the LoS probability.
    """
    cfg = scenario.config
    n = len(users)
    theta, d2, d3 = link_geometry(scenario, users)
    p_los = np.empty((n, scenario.n_bs))
    p_los[:, 0] = prop.los_probability_ntn(theta, cfg.environment)
    p_los[:, 1:] = prop.los_probability_tn(d2)
    sig_los = np.array([prop.SHADOW_SIGMA_DB[prop.Tier.HAPS][0]] + [prop.SHADOW_SIGMA_DB[prop.Tier.SC][0]] * N_SC)
    sig_nlos = np.array([prop.SHADOW_SIGMA_DB[prop.Tier.HAPS][1]] + [prop.SHADOW_SIGMA_DB[prop.Tier.SC][1]] * N_SC)

    def losses(los, shadow):
        pl = np.empty((n, scenario.n_bs))
        pl[:, 0] = prop.path_loss_ntn(theta, cfg.haps_altitude, prop.LinkCondition(los[:, 0], shadow[:, 0]),
                                      cfg.f_c, cfg.environment)
        pl[:, 1:] = prop.path_loss_tn(d2, d3, prop.LinkCondition(los[:, 1:], shadow[:, 1:]), cfg.f_c,
                                      cfg.sc_height, cfg.ue_height)
        return pl

    if cfg.los_mode == "sampled":
        los = los_rng.random((n, scenario.n_bs)) < p_los
        z = shadow_rng.standard_normal((n, scenario.n_bs))
        pl = losses(los, z * np.where(los, sig_los, sig_nlos))
    else:
        z = shadow_rng.standard_normal((2, n, scenario.n_bs))
        pl_l = losses(np.ones((n, scenario.n_bs), bool), z[0] * sig_los)
        pl_n = losses(np.zeros((n, scenario.n_bs), bool), z[1] * sig_nlos)
        pl = prop.blended_path_loss(p_los, pl_l, pl_n)
    rx = np.empty((n, scenario.n_bs))
    rx[:, 0] = prop.received_power(scenario.haps_rf, pl[:, 0])
    rx[:, 1:] = prop.received_power(scenario.sc_rf, pl[:, 1:])
    return rx


def slot_state(scenario: Scenario, rx_dbm: np.ndarray) -> SlotState:
    cfg = scenario.config
    background = 0
    if cfg.include_other_load:
        background = int(scenario.caps_total[0] - scenario.caps[0])
    return SlotState(
        rx_dbm=rx_dbm,
        noise_dbm=scenario.noise_dbm,
        caps=scenario.caps,
        caps_total=scenario.caps_total,
        profiles=(HAPS_PROFILE,) + (SC_PROFILE,) * N_SC,
        sensitivity_dbm=cfg.sensitivity_dbm,
        cascade=cfg.cascade,
        haps_background_channels=background,
    )


@dataclass
class SlotRecord:
    slot: int
    policy: tuple
    loads: tuple
    power_w: float
    energy_j: float
    rates: np.ndarray = field(repr=False)   # bit/s for each served user
    unserved: int
    feasible: bool

    @property
    def served(self) -> int:
        return len(self.rates)


@dataclass
class RunSummary:
    config: ScenarioConfig
    records: list

    @property
    def total_energy_j(self) -> float:
        return float(sum(r.energy_j for r in self.records))

    @property
    def mean_power_w(self) -> float:
        return float(np.mean([r.power_w for r in self.records])) if self.records else 0.0

    @property
    def rates(self) -> np.ndarray:
        """All per-user rate samples across slots, sorted ascending."""
        if not self.records:
            return np.empty(0)
        return np.sort(np.concatenate([r.rates for r in self.records]))

    @property
    def unserved_total(self) -> int:
        return sum(r.unserved for r in self.records)

    @property
    def infeasible_slots(self) -> list[int]:
        return [r.slot for r in self.records if not r.feasible]

    @property
    def gamma(self) -> float:
        return self.config.gamma


def run(config: ScenarioConfig) -> RunSummary:
    """Simulate ``n_ts`` slots for one configuration.

    Each slot moves users, samples link conditions and picks a policy
    (exhaustive search for CSA, everything on for A3). The random draws
    never depend on ``mode``, so CSA and A3 runs sharing a seed see the
    same links.
    """
    scenario = build_scenario(config)
    cfg = scenario.config
    mob_rng = named_stream(cfg.seed, "mobility")
    los_rng = named_stream(cfg.seed, "los")
    shadow_rng = named_stream(cfg.seed, "shadow")
    area = scenario.area
    users = scenario.users
    a3 = all_active_policy(N_SC)
    records = []
    for t in range(cfg.n_ts):
        users = step_mobility(users, cfg.t_d, area, mob_rng, cfg.heading_jitter)
        rx = sample_rx_power(scenario, users, los_rng, shadow_rng)
        state = slot_state(scenario, rx)
        ev = exhaustive_search(state) if cfg.mode == "CSA" else evaluate_policy(a3, state)
        sinr = ev.serving_sinr[~np.isnan(ev.serving_sinr)]
        records.append(SlotRecord(
            slot=t,
            policy=ev.policy,
            loads=tuple(float(x) for x in ev.loads),
            power_w=ev.total_power_w,
            energy_j=float(slot_energy(ev.total_power_w, cfg.t_d)),
            rates=data_rate(sinr, cfg.per_ue_bandwidth) if len(sinr) else np.empty(0),
            unserved=ev.unserved_count,
            feasible=ev.feasible,
        ))
    summary = RunSummary(cfg, records)
    if summary.infeasible_slots:
        log.warning("%s lambda=%s mu=%s seed=%s: %d slot(s) left users unserved", cfg.mode, cfg.lam, cfg.mu,
                    cfg.seed, len(summary.infeasible_slots))
    return summary


@dataclass
class SweepResult:
    summaries: list
    failures: list      # (config, error message)


def _run_safe(config):
    try:
        return run(config), None
    except Exception as exc:  # noqa: BLE001 - reported per config
        return None, f"{type(exc).__name__}: {exc}"


def run_sweep(configs, workers: int = 1, progress=None) -> SweepResult:
    """Run every config independently; results keep the input order.

    A failing config is recorded in ``failures`` and does not stop the sweep.
    """
    configs = list(configs)
    if workers > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_safe, configs))
    else:
        outcomes = [_run_safe(c) for c in configs]
    summaries, failures = [], []
    for cfg, (summary, err) in zip(configs, outcomes):
        if err is None:
            summaries.append(summary)
        else:
            failures.append((cfg, err))
        if progress is not None:
            progress(cfg, summary, err)
    return SweepResult(summaries, failures)
