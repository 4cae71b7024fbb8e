"""Per-drop received-power matrices.

Entry ``[i, j]`` of every matrix is the power (mW) that transmitter ``j``
delivers at listener ``i`` through the listener's antenna; the diagonal is
zero. Sensing and SINR then reduce to row sums over the active columns.
"""

import math

import numpy as np

from .radio import fspl_db, gain, noise_power_mw
from .scenario import node_rng

# Stream key for shadowing draws; node streams use keys 0..K-1.
SHADOW_STREAM = 1 << 32


def draw_shadowing(dep, sigma_db):
    """Symmetric log-normal shadowing (dB) between all 2K nodes of a drop.

    Node order is tx_0..tx_{K-1}, rx_0..rx_{K-1}. Zero when ``sigma_db`` is 0.
    """
    n = 2 * len(dep.pairs)
    if sigma_db <= 0 or n == 0:
        return np.zeros((n, n))
    upper = np.triu(node_rng(dep.seed, SHADOW_STREAM).normal(0.0, sigma_db, size=(n, n)), 1)
    return upper + upper.T


class LinkTable:
    """Vectorised link budgets for one deployment.

    ``tx_pattern`` is the transmit beam every transmitter aims at its own
    receiver; ``rx_pattern`` is the receivers' reception pattern, aimed back
    at their transmitter.
    """

    def __init__(self, dep, ch, tx_pattern, rx_pattern, shadow=None):
        self.dep = dep
        self.ch = ch
        self.tx_pattern = tx_pattern
        self.rx_pattern = rx_pattern
        self.k = k = len(dep.pairs)
        self.tx, self.rx = dep.arrays()
        self.tx_bore = np.array([p.tx_boresight for p in dep.pairs], dtype=float)
        self.rx_bore = np.array([p.rx_boresight for p in dep.pairs], dtype=float)
        self.noise_mw = noise_power_mw(ch)
        if shadow is None:
            shadow = draw_shadowing(dep, ch.shadowing_sigma)
        self.shadow = shadow

        # Transmitter j seen from every transmitter i and every receiver i.
        self._to_tx = self._source_terms(self.tx, shadow[:k, :k])
        self._to_rx = self._source_terms(self.rx, shadow[k:, :k])

        rx_g = gain(rx_pattern, self.rx_bore[:, None], self._to_rx[1] + math.pi)
        self.rx_matrix = self._to_rx[0] * rx_g
        self.signal_mw = np.diag(self.rx_matrix).copy()
        np.fill_diagonal(self.rx_matrix, 0.0)

    def _source_terms(self, listeners, shadow):
        # listeners[i] - tx[j]; bearing from source j to listener i
        d = listeners[:, None, :] - self.tx[None, :, :]
        dist = np.hypot(d[..., 0], d[..., 1])
        bearing = np.arctan2(d[..., 1], d[..., 0])
        ch = self.ch
        dist_c = np.maximum(dist, ch.ref_distance)
        pl = (
            fspl_db(ch.carrier_freq, ch.ref_distance)
            + 10.0 * ch.pathloss_exponent * np.log10(dist_c / ch.ref_distance)
            + shadow
        )
        g_tx = gain(self.tx_pattern, self.tx_bore[None, :], bearing)
        p = np.power(10.0, (ch.tx_power - pl) / 10.0) * g_tx
        return p, bearing

    def at_tx(self, pattern, boresight=None):
        """Matrix seen at the transmitters through ``pattern``.

        ``boresight`` is an array of per-transmitter aiming angles and
        defaults to each transmitter's own beam direction.
        """
        power, bearing = self._to_tx
        bore = self.tx_bore if boresight is None else np.asarray(boresight)
        m = power * gain(pattern, bore[:, None], bearing + math.pi)
        np.fill_diagonal(m, 0.0)
        return m
