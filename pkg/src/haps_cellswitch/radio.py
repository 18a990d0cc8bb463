"""Noise power, SINR and Shannon rate."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class NoiseModel:
    density_dbm_hz: float = -174.0
    noise_figure_db: float = 7.0
    per_ue_bandwidth_hz: float = 200e3


def noise_power(model: NoiseModel = NoiseModel()) -> float:
    """Thermal noise over the per-user channel, in dBm."""
    if model.per_ue_bandwidth_hz <= 0:
        raise ValueError("per_ue_bandwidth_hz must be positive")
    return model.density_dbm_hz + 10.0 * math.log10(model.per_ue_bandwidth_hz) + model.noise_figure_db


def dbm_to_mw(p):
    return np.power(10.0, np.asarray(p, dtype=float) / 10.0)


def sinr(serving: int, rx_powers_dbm, noise_dbm: float, active=None) -> float:
    """SINR (linear) of one user towards BS ``serving``.

    ``rx_powers_dbm`` is indexed by BS; ``active`` is an optional boolean
    mask, inactive BSs neither serve nor interfere.
    """
    rx = dbm_to_mw(rx_powers_dbm)
    act = np.ones(rx.shape, dtype=bool) if active is None else np.asarray(active, dtype=bool)
    if not act[serving]:
        raise ValueError(f"serving BS {serving} is not active")
    interference = rx[act].sum() - rx[serving]
    return float(rx[serving] / (dbm_to_mw(noise_dbm) + interference))


def sinr_matrix(rx_powers_dbm, noise_dbm: float, active) -> np.ndarray:
    """Linear SINR for every (user, BS) pair under an active-set mask.

    Columns of inactive BSs are NaN.
    """
    rx = dbm_to_mw(rx_powers_dbm)
    act = np.asarray(active, dtype=bool)
    rx_on = np.where(act, rx, 0.0)
    total = rx_on.sum(axis=-1, keepdims=True)
    out = rx_on / (dbm_to_mw(noise_dbm) + total - rx_on)
    return np.where(act, out, np.nan)


def data_rate(sinr_linear, bandwidth_hz: float):
    """Shannon rate ``W log2(1 + SINR)`` in bit/s."""
    s = np.asarray(sinr_linear, dtype=float)
    if np.any(s < 0):
        raise ValueError("SINR must be non-negative")
    r = bandwidth_hz * np.log2(1.0 + s)
    return float(r) if r.ndim == 0 else r
