"""Path loss chains for the HAPS (NTN) and small-cell (TN) links.

All functions broadcast over numpy arrays. Distances are meters, carrier
frequency is GHz, losses are dB.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .geometry import SC_HEIGHT_M, UE_HEIGHT_M, slant_distance

SPEED_OF_LIGHT = 299_792_458.0
MAX_CARRIER_GHZ = 6.0
PF_AT_4GHZ_DB = 1.1


class Environment(str, enum.Enum):
    URBAN = "urban"
    RURAL = "rural"


class Tier(str, enum.Enum):
    HAPS = "haps"
    SC = "sc"


# (sigma LoS, sigma NLoS) in dB
SHADOW_SIGMA_DB = {Tier.HAPS: (4.0, 6.0), Tier.SC: (4.0, 6.0)}


@dataclass(frozen=True)
class RfParams:
    tx_power_dbm: float
    tx_gain_dbi: float
    rx_gain_dbi: float = 0.0
    carrier_ghz: float = 2.5

    def __post_init__(self):
        if not 0 < self.carrier_ghz <= MAX_CARRIER_GHZ:
            raise ValueError(f"carrier_ghz must be in (0, {MAX_CARRIER_GHZ}], got {self.carrier_ghz}")


HAPS_RF = RfParams(tx_power_dbm=49.0, tx_gain_dbi=43.2)
SC_RF = RfParams(tx_power_dbm=33.0, tx_gain_dbi=4.0)


@dataclass(frozen=True)
class LinkCondition:
    """LoS state and shadow-fading draw; fields may be scalars or arrays."""

    los: bool | np.ndarray
    shadow_db: float | np.ndarray = 0.0


def _parse_tables(text: str) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    tables: dict[str, list[tuple[float, float]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            tables[current] = []
            continue
        if current is None:
            raise ValueError(f"line {lineno}: record outside a section")
        angle, value = line.split()
        tables[current].append((float(angle), float(value)))
    out = {}
    for name, rows in tables.items():
        arr = np.array(sorted(rows))
        out[name] = (arr[:, 0], arr[:, 1])
    return out


@functools.lru_cache(maxsize=None)
def ntn_tables() -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """Elevation tables keyed ``"los_probability.urban"`` etc."""
    text = resources.files(__package__).joinpath("data/ntn_sband_tables.txt").read_text()
    return _parse_tables(text)


def _table(kind: str, environment) -> tuple[np.ndarray, np.ndarray]:
    env = Environment(environment).value
    return ntn_tables()[f"{kind}.{env}"]


def _scalar_or_array(a):
    a = np.asarray(a)
    return float(a) if a.ndim == 0 else a


def los_probability_ntn(theta, environment=Environment.URBAN):
    """LoS probability of the HAPS link, interpolated over 10-degree steps.

    Angles outside [10, 90] are clamped.
    """
    angles, probs = _table("los_probability", environment)
    t = np.clip(np.asarray(theta, dtype=float), angles[0], angles[-1])
    return _scalar_or_array(np.interp(t, angles, probs))


def los_probability_tn(d_2d):
    """UMi street-canyon outdoor LoS probability."""
    d = np.asarray(d_2d, dtype=float)
    if np.any(d < 0):
        raise ValueError("d_2d must be non-negative")
    safe = np.maximum(d, 18.0)
    p = 18.0 / safe + np.exp(-safe / 36.0) * (1.0 - 18.0 / safe)
    return _scalar_or_array(np.where(d <= 18.0, 1.0, p))


def fspl(d, f_c):
    """Free-space path loss with ``d`` in meters and ``f_c`` in GHz."""
    d = np.asarray(d, dtype=float)
    if np.any(d <= 0):
        raise ValueError("distance must be positive")
    if f_c <= 0:
        raise ValueError("carrier frequency must be positive")
    return _scalar_or_array(32.45 + 20.0 * np.log10(f_c) + 20.0 * np.log10(d))


def clutter_loss_ntn(theta, los, environment=Environment.URBAN):
    """S-band clutter loss; zero under LoS, elevation-dependent under NLoS."""
    angles, cl = _table("clutter_loss", environment)
    t = np.clip(np.asarray(theta, dtype=float), angles[0], angles[-1])
    nlos_cl = np.interp(t, angles, cl)
    return _scalar_or_array(np.where(np.asarray(los, dtype=bool), 0.0, nlos_cl))


def scintillation_loss(f_c: float) -> float:
    """Ionospheric scintillation loss ``PF / sqrt(2)`` for ``f_c <= 6`` GHz."""
    if not 0 < f_c <= MAX_CARRIER_GHZ:
        raise ValueError(f"scintillation model covers 0 < f_c <= {MAX_CARRIER_GHZ} GHz, got {f_c}")
    pf = PF_AT_4GHZ_DB * (f_c / 4.0) ** -1.5
    return pf / math.sqrt(2.0)


def path_loss_ntn(theta, H: float, cond: LinkCondition, f_c: float, environment=Environment.URBAN):
    """Total HAPS-to-UE path loss for a given link condition.

    Gas absorption and building entry loss are taken as zero (sub-6 GHz,
    outdoor users).
    """
    d3 = slant_distance(theta, H)
    pl = fspl(d3, f_c) + clutter_loss_ntn(theta, cond.los, environment) + cond.shadow_db
    return _scalar_or_array(pl + scintillation_loss(f_c))


def breakpoint_distance(f_c: float, h_bs: float = SC_HEIGHT_M, h_ut: float = UE_HEIGHT_M) -> float:
    # effective environment height of 1 m for UMi
    return 4.0 * (h_bs - 1.0) * (h_ut - 1.0) * f_c * 1e9 / SPEED_OF_LIGHT


def umi_los(d_2d, d_3d, f_c: float, h_bs: float = SC_HEIGHT_M, h_ut: float = UE_HEIGHT_M):
    d2 = np.asarray(d_2d, dtype=float)
    d3 = np.asarray(d_3d, dtype=float)
    dbp = breakpoint_distance(f_c, h_bs, h_ut)
    pl1 = 32.4 + 21.0 * np.log10(d3) + 20.0 * np.log10(f_c)
    pl2 = (
        32.4
        + 40.0 * np.log10(d3)
        + 20.0 * np.log10(f_c)
        - 9.5 * np.log10(dbp**2 + (h_bs - h_ut) ** 2)
    )
    return np.where(d2 <= dbp, pl1, pl2)


def umi_nlos(d_2d, d_3d, f_c: float, h_bs: float = SC_HEIGHT_M, h_ut: float = UE_HEIGHT_M):
    d3 = np.asarray(d_3d, dtype=float)
    pl_nlos = 35.3 * np.log10(d3) + 22.4 + 21.3 * np.log10(f_c) - 0.3 * (h_ut - 1.5)
    return np.maximum(umi_los(d_2d, d_3d, f_c, h_bs, h_ut), pl_nlos)


def path_loss_tn(d_2d, d_3d, cond: LinkCondition, f_c: float, h_bs: float = SC_HEIGHT_M,
                 h_ut: float = UE_HEIGHT_M):
    """UMi street-canyon path loss plus the shadow draw in ``cond``."""
    d2 = np.asarray(d_2d, dtype=float)
    d3 = np.asarray(d_3d, dtype=float)
    if np.any(d3 < 1.0):
        raise ValueError("d_3d below 1 m is outside the UMi model validity")
    if np.any(d3 < d2 - 1e-9) or np.any(d2 < 0):
        raise ValueError("require d_3d >= d_2d >= 0")
    los = np.asarray(cond.los, dtype=bool)
    pl = np.where(los, umi_los(d2, d3, f_c, h_bs, h_ut), umi_nlos(d2, d3, f_c, h_bs, h_ut))
    return _scalar_or_array(pl + cond.shadow_db)


def blended_path_loss(p_los, pl_los, pl_nlos):
    """Probability-weighted combination of LoS and NLoS path loss."""
    p = np.asarray(p_los, dtype=float)
    return _scalar_or_array(p * pl_los + (1.0 - p) * pl_nlos)


def received_power(rf: RfParams, pl):
    """Link budget in the dB domain: ``P_TX + G_TX - PL + G_RX``."""
    return _scalar_or_array(rf.tx_power_dbm + rf.tx_gain_dbi - np.asarray(pl, dtype=float) + rf.rx_gain_dbi)


def shadow_sigma(tier, los):
    s_los, s_nlos = SHADOW_SIGMA_DB[Tier(tier)]
    return np.where(np.asarray(los, dtype=bool), s_los, s_nlos)


def sample_link_condition(p_los, tier, rng: np.random.Generator, sigma=None) -> LinkCondition:
    """Draw LoS state ~ Bernoulli(p_los) and zero-mean Gaussian shadowing.

    ``sigma`` overrides the per-tier (LoS, NLoS) standard deviations.
    """
    p = np.asarray(p_los, dtype=float)
    if np.any(p < 0) or np.any(p > 1):
        raise ValueError("p_los must lie in [0, 1]")
    los = rng.random(p.shape) < p
    if sigma is None:
        sd = shadow_sigma(tier, los)
    else:
        sd = np.where(los, sigma[0], sigma[1])
    shadow = rng.standard_normal(p.shape) * sd
    if p.ndim == 0:
        return LinkCondition(bool(los), float(shadow))
    return LinkCondition(los, shadow)
