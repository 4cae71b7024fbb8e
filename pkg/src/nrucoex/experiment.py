"""Parameter sweeps over (K, strategy, reception) cells with seeded drops.

Each drop is seeded by a hash of ``(base_seed, K, strategy, drop_index)``,
so a cell can be re-run alone and the parallel schedule never changes the
numbers.
"""

import csv
import hashlib
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from .access import (
    ALL_STRATEGIES,
    ReceptionMode,
    SensingConfig,
    SensingStrategy,
    run_admission,
)
from .links import LinkTable
from .metrics import aggregate, compute_drop_metrics
from .radio import ChannelParams
from .regulatory import LBR_OVERHEAD
from .scenario import ScenarioParams, generate_deployment


class ConfigError(ValueError):
    pass


DEFAULT_K_VALUES = (8, 16, 24, 32, 40)

RESULT_COLUMNS = (
    "strategy",
    "lbr",
    "reception",
    "k",
    "n_drops",
    "sum_rate_gbps_mean",
    "sum_rate_gbps_se",
    "mean_rate_gbps_mean",
    "mean_rate_gbps_se",
    "nru_access_mean",
    "wigig_access_mean",
    "nru_mean_rate_gbps",
    "wigig_mean_rate_gbps",
)

DROP_COLUMNS = (
    "strategy",
    "lbr",
    "reception",
    "k",
    "drop",
    "seed",
    "sum_rate_gbps",
    "mean_rate_gbps",
    "nru_access",
    "wigig_access",
    "nru_mean_rate_gbps",
    "wigig_mean_rate_gbps",
)


@dataclass(frozen=True)
class ExperimentConfig:
    k_values: tuple = DEFAULT_K_VALUES
    strategies: tuple = ALL_STRATEGIES
    receptions: tuple = (ReceptionMode.OMNI,)
    n_drops: int = 1000
    base_seed: int = 1
    scs_khz: int = 120
    channel: ChannelParams = field(default_factory=ChannelParams)
    sensing: SensingConfig = field(default_factory=SensingConfig)
    scenario: ScenarioParams = field(default_factory=ScenarioParams)
    out_dir: str = "results"
    parallelism: int = 0
    dump_drops: bool = False

    def __post_init__(self):
        if self.n_drops < 1:
            raise ConfigError("n_drops must be >= 1")
        if not self.k_values:
            raise ConfigError("k_values must not be empty")
        if any(k < 0 or k % 2 for k in self.k_values):
            raise ConfigError("every K must be even and non-negative")
        if not self.strategies:
            raise ConfigError("at least one strategy is required")
        if not self.receptions:
            raise ConfigError("at least one reception mode is required")
        if self.scs_khz not in LBR_OVERHEAD:
            raise ConfigError(f"SCS must be one of {sorted(LBR_OVERHEAD)} kHz")
        if self.parallelism < 0:
            raise ConfigError("parallelism must be >= 0")


def _hash64(*parts):
    text = ":".join(str(p) for p in parts).encode()
    return int.from_bytes(hashlib.blake2b(text, digest_size=8).digest(), "little")


def drop_seed(base_seed, k, strategy_id, drop_index):
    return _hash64(base_seed, k, strategy_id, drop_index)


def order_seed(seed):
    return _hash64(seed, "order")


def simulate_drop(k, strategy, mode, seed, cfg):
    """One Monte-Carlo drop: deploy, admit, measure."""
    dep = generate_deployment(replace(cfg.scenario, k_pairs=k), seed)
    links = LinkTable(dep, cfg.channel, cfg.sensing.tx_pattern, mode.rx_pattern)
    outcome = run_admission(dep, strategy, mode, cfg.sensing, cfg.channel, order_seed(seed), links)
    return compute_drop_metrics(outcome, dep, cfg.channel, mode, strategy, cfg.scs_khz,
                                links=links)


def _run_chunk(args):
    k, strategy, mode, cfg, start, stop = args
    out = []
    for d in range(start, stop):
        seed = drop_seed(cfg.base_seed, k, strategy.name, d)
        out.append((seed, simulate_drop(k, strategy, mode, seed, cfg)))
    return out


def _cells(cfg):
    return [(k, s, m) for m in cfg.receptions for s in cfg.strategies for k in cfg.k_values]


def _workers(cfg):
    return cfg.parallelism or os.cpu_count() or 1


def simulate_cells(cfg, cells=None):
    """Run ``cells`` (default: every cell of ``cfg``) and return, per cell,
    the list of ``(seed, DropMetrics)`` in drop-index order."""
    cells = _cells(cfg) if cells is None else cells
    chunk = max(1, min(100, cfg.n_drops))
    tasks = []
    for k, s, m in cells:
        for start in range(0, cfg.n_drops, chunk):
            tasks.append((k, s, m, cfg, start, min(cfg.n_drops, start + chunk)))

    workers = _workers(cfg)
    if workers == 1:
        chunks = map(_run_chunk, tasks)
    else:
        pool = ProcessPoolExecutor(max_workers=workers)
        chunks = pool.map(_run_chunk, tasks)
    results = {cell: [] for cell in cells}
    try:
        for task, part in zip(tasks, chunks):
            results[task[:3]].extend(part)
    finally:
        if workers != 1:
            pool.shutdown()
    return results


def run_cell(k, strategy, mode, cfg):
    """Aggregate metrics for a single cell."""
    drops = simulate_cells(cfg, [(k, strategy, mode)])[(k, strategy, mode)]
    return aggregate([m for _, m in drops])


def _fmt(x):
    return f"{x:.6g}"


def result_row(k, strategy, mode, agg):
    g = 1e-9
    return {
        "strategy": strategy.procedure.value,
        "lbr": "true" if strategy.lbr_assist else "false",
        "reception": mode.value,
        "k": str(k),
        "n_drops": str(agg.n_drops),
        "sum_rate_gbps_mean": _fmt(agg.sum_rate.mean * g),
        "sum_rate_gbps_se": _fmt(agg.sum_rate.se * g),
        "mean_rate_gbps_mean": _fmt(agg.mean_rate_accessed.mean * g),
        "mean_rate_gbps_se": _fmt(agg.mean_rate_accessed.se * g),
        "nru_access_mean": _fmt(agg.nru_access_count.mean),
        "wigig_access_mean": _fmt(agg.wigig_access_count.mean),
        "nru_mean_rate_gbps": _fmt(agg.nru_mean_rate.mean * g),
        "wigig_mean_rate_gbps": _fmt(agg.wigig_mean_rate.mean * g),
    }


# (file stem, [(column suffix, aggregate attribute, scale)])
PANELS = (
    ("sum_rate", [("", "sum_rate", 1e-9)]),
    ("mean_rate", [("", "mean_rate_accessed", 1e-9)]),
    ("access_count", [(":nru", "nru_access_count", 1.0), (":wigig", "wigig_access_count", 1.0)]),
    ("rat_mean_rate", [(":nru", "nru_mean_rate", 1e-9), (":wigig", "wigig_mean_rate", 1e-9)]),
)


def _write_panels(out, cfg, aggs):
    paths = []
    for mode in cfg.receptions:
        for stem, series in PANELS:
            header = ["K"]
            for s in cfg.strategies:
                header += [s.name + suffix for suffix, _, _ in series]
            lines = ["# " + " ".join(header)]
            for k in cfg.k_values:
                row = [str(k)]
                for s in cfg.strategies:
                    agg = aggs[(k, s, mode)]
                    row += [_fmt(getattr(agg, attr).mean * scale) for _, attr, scale in series]
                lines.append(" ".join(row))
            path = out / f"{mode.value}_{stem}.dat"
            path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
            paths.append(path)
    return paths


def run_experiment(cfg):
    """Simulate every cell and write ``results.csv`` plus the plot-data files.

    Returns the list of written paths. Raises ``OSError`` when ``out_dir``
    cannot be written.
    """
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    results = simulate_cells(cfg)
    aggs = {cell: aggregate([m for _, m in drops]) for cell, drops in results.items()}

    written = []
    path = out / "results.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=RESULT_COLUMNS, lineterminator="\n")
        w.writeheader()
        for cell in _cells(cfg):
            w.writerow(result_row(*cell, aggs[cell]))
    written.append(path)
    written += _write_panels(out, cfg, aggs)

    if cfg.dump_drops:
        path = out / "drops.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(DROP_COLUMNS)
            for (k, s, m), drops in results.items():
                for d, (seed, dm) in enumerate(drops):
                    w.writerow([
                        s.procedure.value, "true" if s.lbr_assist else "false", m.value, k, d, seed,
                        _fmt(dm.sum_rate * 1e-9), _fmt(dm.mean_rate_accessed * 1e-9),
                        dm.nru_access_count, dm.wigig_access_count,
                        _fmt(dm.nru_mean_rate * 1e-9), _fmt(dm.wigig_mean_rate * 1e-9),
                    ])
        written.append(path)
    return written


# -- config parsing ---------------------------------------------------------

_CHANNEL_KEYS = {
    "carrier_freq", "bandwidth", "pathloss_exponent", "ref_distance", "shadowing_sigma",
    "noise_psd", "noise_figure", "tx_power", "max_spectral_efficiency",
}
_SCENARIO_KEYS = {"area_side", "min_tx_separation", "rx_dist_min", "rx_dist_max", "max_attempts"}
_SENSING_KEYS = {"ed_norm_dbm", "harmful_margin_db", "pair_opposite_offsets_deg"}


def read_config_file(path):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    entries = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected 'key = value'")
        key, value = (t.strip() for t in line.split("=", 1))
        entries[key.replace("-", "_")] = value
    return entries


def _list(value):
    return [v.strip() for v in str(value).split(",") if v.strip()]


def _reception(text):
    t = text.lower().replace("-", "_")
    if t in ("omni", "omnidirectional"):
        return ReceptionMode.OMNI
    if t in ("quasi", "quasi_omni", "quasiomni"):
        return ReceptionMode.QUASI_OMNI
    raise ConfigError(f"unknown reception mode {text!r}")


def build_config(entries):
    """Turn a flat ``{key: string}`` mapping into an :class:`ExperimentConfig`."""
    kw, channel, scenario, sensing = {}, {}, {}, {}
    try:
        for key, value in entries.items():
            if key == "k":
                kw["k_values"] = tuple(int(v) for v in _list(value))
            elif key == "strategy":
                names = _list(value)
                if names == ["all"]:
                    kw["strategies"] = ALL_STRATEGIES
                else:
                    kw["strategies"] = tuple(SensingStrategy.parse(v) for v in names)
            elif key == "reception":
                names = _list(value)
                if names == ["both"]:
                    names = ["omni", "quasi"]
                kw["receptions"] = tuple(_reception(v) for v in names)
            elif key == "drops":
                kw["n_drops"] = int(value)
            elif key == "seed":
                kw["base_seed"] = int(value)
            elif key == "scs":
                kw["scs_khz"] = int(value)
            elif key == "out":
                kw["out_dir"] = str(value)
            elif key == "jobs":
                kw["parallelism"] = int(value)
            elif key == "dump_drops":
                kw["dump_drops"] = str(value).lower() in ("1", "true", "yes", "on")
            elif key in _CHANNEL_KEYS:
                channel[key] = None if str(value).lower() == "none" else float(value)
            elif key in _SCENARIO_KEYS:
                scenario[key] = int(value) if key == "max_attempts" else float(value)
            elif key == "pair_opposite_offsets_deg":
                sensing["pair_opposite_offsets"] = tuple(math.radians(float(v)) for v in _list(value))
            elif key in _SENSING_KEYS:
                sensing[key] = float(value)
            else:
                raise ConfigError(f"unknown config key {key!r}")
        if channel:
            kw["channel"] = ChannelParams(**channel)
        if scenario:
            kw["scenario"] = ScenarioParams(**scenario)
        if sensing:
            kw["sensing"] = SensingConfig(**sensing)
        return ExperimentConfig(**kw)
    except ConfigError:
        raise
    except (ValueError, TypeError) as e:
        raise ConfigError(str(e)) from e
