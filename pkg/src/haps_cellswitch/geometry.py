"""Positions, elevation angles, distances and user mobility."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

EARTH_RADIUS_M = 6_371_000.0
HAPS_ALTITUDE_M = 20_000.0
UE_HEIGHT_M = 1.5
SC_HEIGHT_M = 10.0


class Mobility(enum.IntEnum):
    STATIONARY = 0
    PEDESTRIAN = 1
    CYCLER = 2
    VEHICULAR = 3


# m/s, indexed by Mobility
DEFAULT_SPEEDS = (0.0, 1.0, 4.0, 14.0)


@dataclass(frozen=True)
class Position:
    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)


@dataclass(frozen=True)
class Area:
    width: float = 500.0
    height: float = 500.0

    @property
    def size_m2(self) -> float:
        return self.width * self.height

    @property
    def center(self) -> tuple[float, float]:
        return self.width / 2.0, self.height / 2.0


@dataclass
class Users:
    """Struct-of-arrays user population; index i is user id i."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    mode: np.ndarray
    speed: np.ndarray
    heading: np.ndarray

    def __len__(self) -> int:
        return len(self.x)

    def copy(self) -> Users:
        return Users(*(a.copy() for a in (self.x, self.y, self.z, self.mode, self.speed, self.heading)))

    def positions(self) -> np.ndarray:
        return np.column_stack([self.x, self.y, self.z])


def elevation_angle(user, haps) -> np.ndarray | float:
    """Elevation angle in degrees of ``haps`` seen from ``user``.

    Both arguments are ``(..., 3)`` arrays or :class:`Position`. A zero
    horizontal offset gives exactly 90 degrees.
    """
    u = user.as_array() if isinstance(user, Position) else np.asarray(user, dtype=float)
    h = haps.as_array() if isinstance(haps, Position) else np.asarray(haps, dtype=float)
    dz = h[..., 2] - u[..., 2]
    if np.any(dz <= 0):
        raise ValueError("HAPS must be above the user")
    horiz = np.hypot(h[..., 0] - u[..., 0], h[..., 1] - u[..., 1])
    theta = np.degrees(np.arctan2(dz, horiz))
    return float(theta) if np.ndim(theta) == 0 else theta


def slant_distance(theta, H: float = HAPS_ALTITUDE_M, R_E: float = EARTH_RADIUS_M):
    """Distance from a ground terminal to a platform at altitude ``H``.

    Parameters
    ----------
    theta : float or array
        Elevation angle in degrees, in (0, 90].
    H : float
        Platform altitude in meters.
    R_E : float
        Earth radius in meters.

    Returns
    -------
    float or array
        ``sqrt(R_E^2 sin^2(theta) + H^2 + 2 H R_E) - R_E sin(theta)`` in meters.
    """
    t = np.asarray(theta, dtype=float)
    if np.any(t <= 0) or np.any(t > 90):
        raise ValueError(f"elevation angle must be in (0, 90] degrees, got {theta}")
    if H < 0 or R_E <= 0:
        raise ValueError("H must be >= 0 and R_E > 0")
    s = np.sin(np.radians(t))
    rs = R_E * s
    # rewritten to avoid cancellation: sqrt(a^2 + b) - a = b / (sqrt(a^2 + b) + a)
    b = H * H + 2.0 * H * R_E
    d = b / (np.sqrt(rs * rs + b) + rs)
    return float(d) if d.ndim == 0 else d


def terrestrial_distances(user, sc) -> tuple:
    """Horizontal and 3D distances between users and a small cell."""
    u = user.as_array() if isinstance(user, Position) else np.asarray(user, dtype=float)
    s = sc.as_array() if isinstance(sc, Position) else np.asarray(sc, dtype=float)
    d2 = np.hypot(u[..., 0] - s[..., 0], u[..., 1] - s[..., 1])
    d3 = np.hypot(d2, u[..., 2] - s[..., 2])
    if np.ndim(d2) == 0:
        return float(d2), float(d3)
    return d2, d3


def place_users(
    n: int,
    area: Area,
    rng: np.random.Generator,
    mode_mix=(0.25, 0.25, 0.25, 0.25),
    speeds=DEFAULT_SPEEDS,
    ue_height: float = UE_HEIGHT_M,
) -> Users:
    """Uniform placement with a mobility mode drawn per user from ``mode_mix``."""
    mix = np.asarray(mode_mix, dtype=float)
    if mix.shape != (4,) or np.any(mix < 0) or not math.isclose(mix.sum(), 1.0, abs_tol=1e-9):
        raise ValueError("mode_mix must be four non-negative weights summing to 1")
    x = rng.uniform(0.0, area.width, n)
    y = rng.uniform(0.0, area.height, n)
    mode = rng.choice(4, size=n, p=mix).astype(np.int8)
    heading = rng.uniform(0.0, 2.0 * np.pi, n)
    speed = np.asarray(speeds, dtype=float)[mode]
    return Users(x, y, np.full(n, ue_height), mode, speed, heading)


def _reflect(pos: np.ndarray, upper: float):
    """Fold coordinates back into [0, upper]; returns new positions and a flip mask."""
    flips = np.zeros(pos.shape, dtype=bool)
    # a single step never exceeds the area, but loop for robustness on tiny areas
    while True:
        lo = pos < 0.0
        hi = pos > upper
        if not (lo.any() or hi.any()):
            return pos, flips
        pos = np.where(lo, -pos, pos)
        pos = np.where(hi, 2.0 * upper - pos, pos)
        flips ^= lo | hi


def step_mobility(
    users: Users,
    t_d: float,
    area: Area,
    rng: np.random.Generator | None = None,
    jitter: float = 0.0,
) -> Users:
    """Advance every user by one slot of ``t_d`` seconds.

    Headings get a uniform perturbation in ``[-jitter, jitter]`` drawn from
    ``rng``, then users move ``speed * t_d`` along the heading. Crossing a
    boundary reflects both the position and the heading. Stationary users
    are left untouched.
    """
    if t_d <= 0:
        raise ValueError("t_d must be positive")
    out = users.copy()
    n = len(out)
    if n == 0:
        return out
    moving = out.speed > 0
    if jitter > 0:
        if rng is None:
            raise ValueError("rng is required when jitter > 0")
        delta = rng.uniform(-jitter, jitter, n)
        out.heading = np.where(moving, out.heading + delta, out.heading)
    step = out.speed * t_d
    x = out.x + step * np.cos(out.heading)
    y = out.y + step * np.sin(out.heading)
    x, fx = _reflect(x, area.width)
    y, fy = _reflect(y, area.height)
    heading = np.where(fx, np.pi - out.heading, out.heading)
    heading = np.where(fy, -heading, heading)
    out.x = np.where(moving, x, out.x)
    out.y = np.where(moving, y, out.y)
    heading = np.mod(heading, 2.0 * np.pi)
    # np.mod can round a tiny negative angle up to exactly 2*pi
    out.heading = np.where(heading >= 2.0 * np.pi, 0.0, heading)
    return out
