"""Cone-plus-floor antenna patterns and the 60 GHz large-scale link budget.

Powers are carried in linear milliwatts internally and converted to dBm
only at the edges, so sums over interferers are plain additions.
"""

import math
from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0
FOUR_PI = 4.0 * math.pi
TWO_PI = 2.0 * math.pi


class InfeasiblePattern(ValueError):
    pass


def db_to_lin(db):
    return np.power(10.0, np.asarray(db, dtype=float) / 10.0)


def lin_to_db(lin):
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(np.asarray(lin, dtype=float))


@dataclass(frozen=True)
class AntennaPattern:
    """Constant main-lobe gain inside a cone, constant floor outside it.

    Gains are linear power gains; ``beamwidth`` is the full cone angle in
    radians.
    """

    main_gain: float
    beamwidth: float
    side_gain: float
    is_omni: bool = False

    @property
    def main_gain_db(self):
        return 10.0 * math.log10(self.main_gain)

    @property
    def side_gain_db(self):
        return 10.0 * math.log10(self.side_gain) if self.side_gain > 0 else -math.inf

    @property
    def solid_angle(self):
        return cone_solid_angle(self.beamwidth)


OMNI = AntennaPattern(main_gain=1.0, beamwidth=TWO_PI, side_gain=1.0, is_omni=True)


def cone_solid_angle(beamwidth):
    """Solid angle (sr) of a circular cone with full apex angle ``beamwidth``."""
    return TWO_PI * (1.0 - math.cos(beamwidth / 2.0))


def make_pattern(main_gain_db, beamwidth_deg):
    """Build a pattern whose floor gain makes the total radiated power 4*pi.

    >>> round(make_pattern(10.0, 30.0).side_gain, 4)
    0.844
    """
    if not 0.0 < beamwidth_deg <= 360.0:
        raise ValueError("beamwidth must lie in (0, 360] degrees")
    if main_gain_db < 0.0:
        raise ValueError("main-lobe gain must be >= 0 dB")
    if beamwidth_deg == 360.0:
        if main_gain_db == 0.0:
            return OMNI
        raise InfeasiblePattern("a full-sphere lobe cannot exceed 0 dB")

    main = 10.0 ** (main_gain_db / 10.0)
    omega = cone_solid_angle(math.radians(beamwidth_deg))
    side = (FOUR_PI - main * omega) / (FOUR_PI - omega)
    if side < 0.0:
        raise InfeasiblePattern(
            f"{main_gain_db} dB over {beamwidth_deg} deg exceeds the total power"
        )
    return AntennaPattern(main, math.radians(beamwidth_deg), side)


def angle_offset(boresight, toward):
    """Absolute angular difference wrapped to [0, pi]. Works on arrays."""
    d = np.abs(np.remainder(np.asarray(toward) - np.asarray(boresight) + math.pi, TWO_PI) - math.pi)
    return float(d) if np.ndim(d) == 0 else d


def gain(pattern, boresight, toward):
    """Linear gain of ``pattern`` aimed at ``boresight`` in direction ``toward``."""
    if pattern.is_omni:
        if np.ndim(toward) or np.ndim(boresight):
            return np.ones(np.broadcast(np.asarray(boresight), np.asarray(toward)).shape)
        return 1.0
    off = angle_offset(boresight, toward)
    inside = off <= pattern.beamwidth / 2.0
    if np.ndim(inside):
        return np.where(inside, pattern.main_gain, pattern.side_gain)
    return pattern.main_gain if inside else pattern.side_gain


def gain_db(pattern, boresight, toward):
    g = gain(pattern, boresight, toward)
    return float(lin_to_db(g)) if np.ndim(g) == 0 else lin_to_db(g)


@dataclass(frozen=True)
class ChannelParams:
    carrier_freq: float = 60e9
    bandwidth: float = 1e9
    pathloss_exponent: float = 2.0
    ref_distance: float = 1.0
    shadowing_sigma: float = 0.0
    noise_psd: float = -174.0
    noise_figure: float = 7.0
    tx_power: float = 10.0
    # bits/s/Hz cap on the Shannon mapping; None leaves it uncapped.
    max_spectral_efficiency: float | None = None

    def __post_init__(self):
        if self.carrier_freq <= 0 or self.bandwidth <= 0:
            raise ValueError("carrier frequency and bandwidth must be positive")
        if self.pathloss_exponent < 1:
            raise ValueError("pathloss exponent must be >= 1")
        if self.shadowing_sigma < 0:
            raise ValueError("shadowing sigma must be >= 0")
        if self.ref_distance <= 0:
            raise ValueError("reference distance must be positive")


def fspl_db(freq, distance):
    return 20.0 * math.log10(FOUR_PI * distance * freq / SPEED_OF_LIGHT)


def pathloss_db(ch, distance, shadow_draw=0.0):
    """Log-distance path loss anchored at the free-space loss at ``ref_distance``.

    Distances under the reference distance are clamped to it. ``distance``
    and ``shadow_draw`` may be arrays.
    """
    d = np.maximum(np.asarray(distance, dtype=float), ch.ref_distance)
    pl = (
        fspl_db(ch.carrier_freq, ch.ref_distance)
        + 10.0 * ch.pathloss_exponent * np.log10(d / ch.ref_distance)
        + shadow_draw
    )
    return float(pl) if np.ndim(pl) == 0 else pl


@dataclass(frozen=True)
class Endpoint:
    """An antenna placed at ``pos`` = (x, y) and aimed along ``boresight``."""

    pos: tuple
    pattern: AntennaPattern
    boresight: float = 0.0


def _geometry(a, b):
    dx = b.pos[0] - a.pos[0]
    dy = b.pos[1] - a.pos[1]
    return math.hypot(dx, dy), math.atan2(dy, dx)


def rx_power_dbm(ch, tx, rx, shadow_draw=0.0):
    dist, bearing = _geometry(tx, rx)
    if dist == 0.0:
        raise ValueError("transmitter and receiver are co-located")
    g_tx = gain_db(tx.pattern, tx.boresight, bearing)
    g_rx = gain_db(rx.pattern, rx.boresight, bearing + math.pi)
    return ch.tx_power + g_tx + g_rx - pathloss_db(ch, dist, shadow_draw)


def rx_power_mw(ch, tx, rx, shadow_draw=0.0):
    return 10.0 ** (rx_power_dbm(ch, tx, rx, shadow_draw) / 10.0)


def noise_power_dbm(ch):
    return ch.noise_psd + 10.0 * math.log10(ch.bandwidth) + ch.noise_figure


def noise_power_mw(ch):
    return 10.0 ** (noise_power_dbm(ch) / 10.0)
