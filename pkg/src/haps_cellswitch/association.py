"""SINR-greedy user association under capacity and sensitivity limits."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_SENSITIVITY_DBM = -95.0


@dataclass(frozen=True)
class Association:
    """Serving BS per user (``-1`` for unserved); column 0 is the HAPS."""

    serving: np.ndarray
    n_bs: int

    @property
    def matrix(self) -> np.ndarray:
        """Binary users x BSs association matrix."""
        m = np.zeros((len(self.serving), self.n_bs), dtype=np.int8)
        served = self.serving >= 0
        m[np.flatnonzero(served), self.serving[served]] = 1
        return m

    @property
    def counts(self) -> np.ndarray:
        """Users per BS (column sums of the matrix)."""
        s = self.serving[self.serving >= 0]
        return np.bincount(s, minlength=self.n_bs)

    @property
    def unserved(self) -> np.ndarray:
        return np.flatnonzero(self.serving < 0)

    @property
    def n_unserved(self) -> int:
        return int(np.count_nonzero(self.serving < 0))


def haps_available_capacity(lam: float, c_total: int) -> int:
    """Channels the HAPS offers this network: ``floor(lam * c_total)``."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    # guard against 0.7 * 250 landing a hair below 175
    return int(math.floor(lam * c_total + 1e-9))


def _eligible(sinr, rx_dbm, active, sensitivity_dbm):
    act = np.asarray(active, dtype=bool)
    return act[None, :] & (np.asarray(rx_dbm) >= sensitivity_dbm) & np.isfinite(sinr)


def associate_users(
    sinr: np.ndarray,
    rx_dbm: np.ndarray,
    active,
    caps,
    sensitivity_dbm: float = DEFAULT_SENSITIVITY_DBM,
    cascade: bool = True,
) -> Association:
    """Assign users, in ascending id order, to their best qualifying BS.

    Parameters
    ----------
    sinr : (n_users, n_bs) array
        Linear SINR under the active set (NaN or anything for inactive BSs).
    rx_dbm : (n_users, n_bs) array
        Received power per link.
    active : (n_bs,) bool
        Active-set mask.
    caps : (n_bs,) int
        Channels available at each BS.
    sensitivity_dbm : float
        Minimum received power for service.
    cascade : bool
        If True a user whose best BS is full falls back to the next-best
        qualifying BS. If False that user is left unserved.

    Returns
    -------
    Association
        Equivalent to processing users one at a time; ties in SINR go to
        the lower BS index.
    """
    sinr = np.asarray(sinr, dtype=float)
    n_users, n_bs = sinr.shape
    act = np.asarray(active, dtype=bool)
    remaining = np.asarray(caps, dtype=np.int64).copy()
    if remaining.shape != (n_bs,) or np.any(remaining < 0):
        raise ValueError("caps must be a non-negative vector with one entry per BS")
    serving = np.full(n_users, -1, dtype=np.int64)
    if n_users == 0:
        return Association(serving, n_bs)

    eligible = _eligible(sinr, rx_dbm, act, sensitivity_dbm)
    score = np.where(act[None, :] & np.isfinite(sinr), sinr, -np.inf)
    # stable sort keeps lower BS index first among equal SINR
    order = np.argsort(-score, axis=1, kind="stable")
    rows = np.arange(n_users)

    if not cascade:
        best = order[:, 0]
        ok = act[best] & eligible[rows, best]
        choice = np.where(ok, best, -1)
        onehot = choice[:, None] == np.arange(n_bs)[None, :]
        rank = np.cumsum(onehot, axis=0)
        within = onehot & (rank <= remaining[None, :])
        serving = np.where(within.any(axis=1), choice, -1)
        return Association(serving, n_bs)

    full = remaining <= 0
    start = 0
    bs_ids = np.arange(n_bs)
    # every pass fills up at least one BS, so at most n_bs + 1 passes
    while start < n_users:
        sub_order = order[start:]
        ok = np.take_along_axis(eligible[start:] & ~full[None, :], sub_order, axis=1)
        has = ok.any(axis=1)
        first = np.argmax(ok, axis=1)
        choice = np.where(has, sub_order[np.arange(len(sub_order)), first], -1)
        onehot = choice[:, None] == bs_ids[None, :]
        over = np.cumsum(onehot, axis=0) > remaining[None, :]
        hit = over.any(axis=1)
        if not hit.any():
            serving[start:] = choice
            break
        r = int(np.argmax(hit))
        serving[start:start + r] = choice[:r]
        remaining -= onehot[:r].sum(axis=0)
        full |= remaining <= 0
        start += r
    return Association(serving, n_bs)


def loads_from_association(assoc: Association | np.ndarray, caps_total) -> np.ndarray:
    """Per-BS load: occupied channels over total channels."""
    counts = assoc.counts if isinstance(assoc, Association) else np.asarray(assoc).sum(axis=0)
    caps_total = np.asarray(caps_total, dtype=float)
    if np.any(counts > caps_total):
        raise ValueError("association exceeds a BS channel count")
    return counts / caps_total
