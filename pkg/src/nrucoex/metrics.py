"""SINR, Shannon rates, per-drop coexistence metrics and their aggregation."""

import math
from dataclasses import dataclass, field, fields

import numpy as np

from .access import TX_PATTERN
from .links import LinkTable
from .radio import Endpoint, noise_power_mw, rx_power_mw
from .regulatory import lbr_overhead
from .scenario import Rat


class EmptyInput(ValueError):
    pass


def sinr_db(pair, admitted, ch, mode, tx_pattern):
    """SINR of ``pair`` with every other pair in ``admitted`` interfering."""
    rx = Endpoint(tuple(pair.rx_pos), mode.rx_pattern, pair.rx_boresight)
    signal = rx_power_mw(ch, Endpoint(tuple(pair.tx_pos), tx_pattern, pair.tx_boresight), rx)
    interference = 0.0
    for other in admitted:
        if other.id == pair.id:
            continue
        tx = Endpoint(tuple(other.tx_pos), tx_pattern, other.tx_boresight)
        interference += rx_power_mw(ch, tx, rx)
    return 10.0 * math.log10(signal / (interference + noise_power_mw(ch)))


def rate_bps(sinr, ch, overhead_fraction=0.0):
    """Shannon rate over the channel bandwidth, less the handshake overhead.

    Works elementwise on arrays of SINR values (dB).
    """
    if not 0.0 <= overhead_fraction < 1.0:
        raise ValueError("overhead_fraction must lie in [0, 1)")
    se = np.log2(1.0 + np.power(10.0, np.asarray(sinr, dtype=float) / 10.0))
    if ch.max_spectral_efficiency is not None:
        se = np.minimum(se, ch.max_spectral_efficiency)
    r = ch.bandwidth * se * (1.0 - overhead_fraction)
    return float(r) if np.ndim(r) == 0 else r


@dataclass(frozen=True)
class DropMetrics:
    sum_rate: float
    mean_rate_accessed: float
    nru_access_count: int
    wigig_access_count: int
    nru_mean_rate: float
    wigig_mean_rate: float
    per_pair_rate: dict = field(default_factory=dict)


METRIC_NAMES = (
    "sum_rate",
    "mean_rate_accessed",
    "nru_access_count",
    "wigig_access_count",
    "nru_mean_rate",
    "wigig_mean_rate",
)


def _mean(values):
    return math.fsum(values) / len(values) if values else 0.0


def compute_drop_metrics(outcome, dep, ch, mode, strategy, scs_khz=120, tx_pattern=None,
                         links=None):
    """Rates of every admitted pair and the drop-level summaries.

    NR-U pairs pay the LBR handshake overhead when ``strategy`` uses LBR;
    WiGig pairs never do.
    """
    if links is None:
        links = LinkTable(dep, ch, tx_pattern or TX_PATTERN, mode.rx_pattern)
    ids = list(outcome.admitted)
    if not ids:
        return DropMetrics(0.0, 0.0, 0, 0, 0.0, 0.0, {})
    idx = np.array(ids)
    interference = links.rx_matrix[np.ix_(idx, idx)].sum(axis=1)
    sinr = 10.0 * np.log10(links.signal_mw[idx] / (interference + links.noise_mw))
    nru_ovh = lbr_overhead(scs_khz) if strategy.lbr_assist else 0.0

    rates = {}
    for pid, s in zip(ids, sinr):
        ovh = nru_ovh if dep.pairs[pid].rat is Rat.NRU else 0.0
        rates[pid] = rate_bps(float(s), ch, ovh)
    nru = [rates[p] for p in ids if dep.pairs[p].rat is Rat.NRU]
    wigig = [rates[p] for p in ids if dep.pairs[p].rat is Rat.WIGIG]
    all_rates = [rates[p] for p in ids]
    return DropMetrics(
        sum_rate=math.fsum(all_rates),
        mean_rate_accessed=_mean(all_rates),
        nru_access_count=len(nru),
        wigig_access_count=len(wigig),
        nru_mean_rate=_mean(nru),
        wigig_mean_rate=_mean(wigig),
        per_pair_rate=rates,
    )


@dataclass(frozen=True)
class Summary:
    mean: float
    se: float
    p5: float
    p50: float
    p95: float
    n: int = 0


@dataclass(frozen=True)
class AggregateMetrics:
    n_drops: int
    sum_rate: Summary
    mean_rate_accessed: Summary
    nru_access_count: Summary
    wigig_access_count: Summary
    nru_mean_rate: Summary
    wigig_mean_rate: Summary

    def as_dict(self):
        out = {"n_drops": self.n_drops}
        for f in fields(self)[1:]:
            s = getattr(self, f.name)
            for stat in ("mean", "se", "p5", "p50", "p95"):
                out[f"{f.name}_{stat}"] = getattr(s, stat)
        return out


def nearest_rank(sorted_values, pct):
    n = len(sorted_values)
    rank = max(1, math.ceil(pct / 100.0 * n))
    return sorted_values[rank - 1]


def summarize(values, allow_empty=False):
    values = [float(v) for v in values]
    n = len(values)
    if n == 0:
        if allow_empty:
            return Summary(0.0, 0.0, 0.0, 0.0, 0.0, 0)
        raise EmptyInput("cannot summarise an empty sample")
    mean = math.fsum(values) / n
    if n > 1:
        var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
        se = math.sqrt(var / n)
    else:
        se = 0.0
    s = sorted(values)
    return Summary(mean, se, nearest_rank(s, 5), nearest_rank(s, 50), nearest_rank(s, 95), n)


# Rates "during channel access" only count drops in which somebody of the
# relevant group got access.
_CONDITIONAL = {
    "mean_rate_accessed": lambda d: d.nru_access_count + d.wigig_access_count > 0,
    "nru_mean_rate": lambda d: d.nru_access_count > 0,
    "wigig_mean_rate": lambda d: d.wigig_access_count > 0,
}


def aggregate(drops):
    """Mean, standard error and nearest-rank 5/50/95th percentiles per metric.

    Access-conditional rates skip drops where the group had no access; their
    ``Summary.n`` says how many drops contributed. Sums use ``math.fsum``,
    which is exact, so the result does not depend on drop order.
    """
    drops = list(drops)
    if not drops:
        raise EmptyInput("aggregate() needs at least one drop")
    stats = {}
    for name in METRIC_NAMES:
        keep = _CONDITIONAL.get(name)
        sample = [getattr(d, name) for d in drops if keep is None or keep(d)]
        stats[name] = summarize(sample, allow_empty=keep is not None)
    return AggregateMetrics(n_drops=len(drops), **stats)
