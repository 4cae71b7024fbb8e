"""Random indoor NR-U/WiGig deployments.

Every node draws from its own generator keyed by ``(seed, node_index)``, so
a drop is a pure function of its seed and can be rebuilt anywhere.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

SEED_MASK = (1 << 64) - 1


class PlacementFailure(RuntimeError):
    """Rejection sampling could not honour the minimum transmitter spacing."""


class Rat(Enum):
    NRU = "NRU"
    WIGIG = "WIGIG"


@dataclass(frozen=True)
class Point2D:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError("coordinates must be finite")

    def __iter__(self):
        yield self.x
        yield self.y

    def __getitem__(self, i):
        return (self.x, self.y)[i]

    def distance_to(self, other):
        return math.hypot(other.x - self.x, other.y - self.y)

    def bearing_to(self, other):
        return math.atan2(other.y - self.y, other.x - self.x)


@dataclass(frozen=True)
class LinkPair:
    id: int
    rat: Rat
    tx_pos: Point2D
    rx_pos: Point2D
    tx_boresight: float
    rx_boresight: float

    @property
    def distance(self):
        return self.tx_pos.distance_to(self.rx_pos)


@dataclass(frozen=True)
class ScenarioParams:
    k_pairs: int = 40
    area_side: float = 25.0
    min_tx_separation: float = 1.0
    rx_dist_min: float = 3.0
    rx_dist_max: float = 8.0
    max_attempts: int = 10_000
    # "uniform": uniform in distance; "area": uniform over the annulus area.
    rx_distance_law: str = "uniform"

    def __post_init__(self):
        if self.k_pairs < 0 or self.k_pairs % 2:
            raise ValueError("k_pairs must be even and non-negative")
        if self.area_side <= 0:
            raise ValueError("area_side must be positive")
        if self.min_tx_separation <= 0:
            raise ValueError("min_tx_separation must be positive")
        if not 0 < self.rx_dist_min <= self.rx_dist_max:
            raise ValueError("need 0 < rx_dist_min <= rx_dist_max")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")
        if self.rx_distance_law not in ("uniform", "area"):
            raise ValueError(f"unknown rx_distance_law {self.rx_distance_law!r}")


@dataclass(frozen=True)
class Deployment:
    pairs: tuple
    params: ScenarioParams
    seed: int

    def __len__(self):
        return len(self.pairs)

    def by_rat(self, rat):
        return [p for p in self.pairs if p.rat is rat]

    def arrays(self):
        """Transmitter and receiver coordinates as ``(K, 2)`` arrays."""
        tx = np.array([[p.tx_pos.x, p.tx_pos.y] for p in self.pairs], dtype=float)
        rx = np.array([[p.rx_pos.x, p.rx_pos.y] for p in self.pairs], dtype=float)
        return tx.reshape(-1, 2), rx.reshape(-1, 2)


def node_rng(seed, *key):
    """Independent generator for the stream identified by ``(seed, *key)``."""
    return np.random.default_rng(np.random.SeedSequence([seed & SEED_MASK, *key]))


def generate_deployment(params, seed):
    """Place ``params.k_pairs`` links: transmitters first by rejection
    sampling, then each receiver at a random distance and angle.

    RATs alternate NRU, WIGIG, NRU, ... over pair ids.
    """
    side = params.area_side
    min_sep2 = params.min_tx_separation ** 2
    tx = np.empty((params.k_pairs, 2))
    pairs = []
    for i in range(params.k_pairs):
        rng = node_rng(seed, i)
        for _ in range(params.max_attempts):
            cand = rng.uniform(0.0, side, size=2)
            if i == 0 or np.min(np.sum((tx[:i] - cand) ** 2, axis=1)) >= min_sep2:
                break
        else:
            raise PlacementFailure(
                f"node {i}: no spot {params.min_tx_separation} m from the others "
                f"after {params.max_attempts} attempts"
            )
        tx[i] = cand

        if params.rx_distance_law == "uniform":
            dist = rng.uniform(params.rx_dist_min, params.rx_dist_max)
        else:
            lo2, hi2 = params.rx_dist_min ** 2, params.rx_dist_max ** 2
            dist = math.sqrt(rng.uniform(lo2, hi2))
        angle = rng.uniform(0.0, 2.0 * math.pi)
        tx_pos = Point2D(float(cand[0]), float(cand[1]))
        rx_pos = Point2D(tx_pos.x + dist * math.cos(angle), tx_pos.y + dist * math.sin(angle))
        pairs.append(
            LinkPair(
                id=i,
                rat=Rat.NRU if i % 2 == 0 else Rat.WIGIG,
                tx_pos=tx_pos,
                rx_pos=rx_pos,
                tx_boresight=tx_pos.bearing_to(rx_pos),
                rx_boresight=rx_pos.bearing_to(tx_pos),
            )
        )
    return Deployment(pairs=tuple(pairs), params=params, seed=seed)
