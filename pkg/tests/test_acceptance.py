"""The ten acceptance criteria, each checked at its stated tolerance.

A one-line PASS/FAIL verdict per criterion is printed in the terminal
summary. Criteria 7 and 8 share one K=40, 1000-drop sweep per reception mode.
"""

import math
from collections import defaultdict
from dataclasses import replace

import numpy as np
import pytest
from scipy import integrate

import oracle
from conftest import ACCEPTANCE, make_pair
from nrucoex.access import (
    IDLE,
    ALL_STRATEGIES,
    QUASI_OMNI_PATTERN,
    TX_PATTERN,
    Decision,
    Procedure,
    ReceptionMode,
    SensingConfig,
    SensingStrategy,
    admit_pair,
    dir_lbt,
    is_busy,
    lbr_check,
    lbt_switch,
    omni_lbt,
    pair_lbt,
    run_admission,
    sensed_power_dbm,
    ue_sense,
)
from nrucoex.experiment import ExperimentConfig, order_seed, run_experiment, simulate_cells
from nrucoex.metrics import aggregate, compute_drop_metrics
from nrucoex.radio import OMNI, ChannelParams, Endpoint, gain
from nrucoex.regulatory import (
    LBR_OVERHEAD,
    Band,
    LbtCategory,
    band_rules,
    cot_gap_category,
    lbr_overhead,
)
from nrucoex.scenario import Rat, ScenarioParams, generate_deployment

CH = ChannelParams()
CFG = SensingConfig()
OMNI_RX, QUASI_RX = ReceptionMode.OMNI, ReceptionMode.QUASI_OMNI
K = 40
N_DROPS = 1000

_results = defaultdict(list)


@pytest.fixture(scope="module", autouse=True)
def _summary():
    yield
    for n in sorted(_results):
        checks = _results[n]
        ok = all(c[1] for c in checks)
        details = "; ".join(f"{name}: {'ok' if good else 'FAIL'} ({info})" if info else
                            f"{name}: {'ok' if good else 'FAIL'}" for name, good, info in checks)
        ACCEPTANCE.append(f"{'PASS' if ok else 'FAIL'}  criterion {n:>2}  {details}")


def record(n, name, ok, info=""):
    _results[n].append((name, bool(ok), info))
    return ok


# -- 1 ------------------------------------------------------------------------


@pytest.mark.parametrize("label, pattern, expected", [
    ("omni", OMNI, -74.0), ("directional", TX_PATTERN, -64.0), ("quasi-omni", QUASI_OMNI_PATTERN, -67.0),
])
def test_c1_threshold_normalization(label, pattern, expected):
    threshold = CFG.ed_norm_dbm + pattern.main_gain_db
    ok = (threshold == expected and not is_busy(expected, CFG, pattern.main_gain_db)
          and is_busy(math.nextafter(expected, 0.0), CFG, pattern.main_gain_db))
    record(1, label, ok, f"{threshold:g} dBm")
    assert ok


# -- 2 ------------------------------------------------------------------------


def test_c2_noise_only_idle():
    pair = make_pair(0, Rat.NRU, (3.0, 4.0), (8.0, 4.0))
    sensed = sensed_power_dbm(Endpoint((3.0, 4.0), OMNI), [], CH)
    states = [omni_lbt(pair, [], CFG, CH), dir_lbt(pair, [], CFG, CH), pair_lbt(pair, [], CFG, CH)]
    for mode in ReceptionMode:
        states.append(ue_sense(pair, [], CFG, CH, mode))
        states.append(lbt_switch(pair, [], CFG, CH, ue_sense(pair, [], CFG, CH, mode)))
    lbr = [lbr_check(pair, [], CFG, CH, mode) for mode in ReceptionMode]
    decisions = [admit_pair(pair, [], s, mode, CFG, CH) for s in ALL_STRATEGIES
                 for mode in ReceptionMode]
    ok = (all(s is IDLE for s in states) and all(lbr)
          and all(d is Decision.ADMITTED for d in decisions) and sensed < -74.0)
    record(2, "all variants idle", ok, f"sensed {sensed:.2f} dBm")
    assert ok


# -- 3 ------------------------------------------------------------------------


def random_geometry(rng):
    gnb = rng.uniform(0, 25, 2)
    a = rng.uniform(0, 2 * math.pi)
    r = rng.uniform(3, 8)
    victim = make_pair(0, Rat.NRU, tuple(gnb), tuple(gnb + r * np.array([math.cos(a), math.sin(a)])))
    active = []
    for i in range(rng.integers(0, 8)):
        tx = rng.uniform(0, 25, 2)
        b = rng.uniform(0, 2 * math.pi)
        rx = tx + rng.uniform(3, 8) * np.array([math.cos(b), math.sin(b)])
        rat = Rat.NRU if rng.random() < 0.5 else Rat.WIGIG
        active.append(make_pair(i + 1, rat, tuple(tx), tuple(rx)))
    return victim, active


def test_c3_dominance_invariants():
    rng = np.random.default_rng(2024)
    violations = defaultdict(int)
    lbr_procs = [p for p in Procedure if p is not Procedure.NO_LBT]
    n = 10_000
    for i in range(n):
        victim, active = random_geometry(rng)
        omni = omni_lbt(victim, active, CFG, CH)
        dirl = dir_lbt(victim, active, CFG, CH)
        pair = pair_lbt(victim, active, CFG, CH)
        if omni is IDLE and dirl is not IDLE:
            violations["omni=>dir"] += 1
        if pair is IDLE and dirl is not IDLE:
            violations["pair=>dir"] += 1
        mode = OMNI_RX if i % 2 else QUASI_RX
        for proc in lbr_procs:
            with_lbr = admit_pair(victim, active, SensingStrategy(proc, True), mode, CFG, CH)
            if with_lbr is Decision.ADMITTED:
                plain = admit_pair(victim, active, SensingStrategy(proc), mode, CFG, CH)
                if plain is not Decision.ADMITTED:
                    violations[f"{proc.value}+LBR=>{proc.value}"] += 1
    total = sum(violations.values())
    record(3, f"{n} geometries", total == 0, f"{total} violations {dict(violations)}")
    assert total == 0


# -- 4 ------------------------------------------------------------------------


def sphere_integral(pattern):
    # polar axis along boresight; the model depends only on the off-axis angle,
    # which gain() sees as the bearing offset from a boresight of 0
    half = pattern.beamwidth / 2
    f = lambda t: gain(pattern, 0.0, t) * math.sin(t)
    polar = integrate.quad(f, 0, math.pi, points=[half], epsabs=0, epsrel=1e-10, limit=200)[0]
    return integrate.quad(lambda phi: polar, 0, 2 * math.pi)[0]


@pytest.mark.parametrize("label, pattern, side", [
    ("10 dB/30 deg", TX_PATTERN, 0.8440), ("7 dB/90 deg", QUASI_OMNI_PATTERN, 0.3116),
])
def test_c4_energy_conservation(label, pattern, side):
    total = sphere_integral(pattern)
    rel = abs(total - 4 * math.pi) / (4 * math.pi)
    ok = rel < 1e-4 and abs(pattern.side_gain - side) < 1e-3
    record(4, label, ok, f"rel err {rel:.1e}, side gain {pattern.side_gain:.4f}")
    assert ok


# -- 5 ------------------------------------------------------------------------


def test_c5_lbr_overhead_table():
    expected = {15: 0.1111, 30: 0.0555, 60: 0.0277, 120: 0.0138, 240: 0.0069}
    ok = LBR_OVERHEAD == expected and all(lbr_overhead(s) == v for s, v in expected.items())
    record(5, "table", ok)
    assert ok


# -- 6 ------------------------------------------------------------------------


def test_c6_regulatory_constants():
    r60, r5 = band_rules(Band.BAND_60GHZ), band_rules(Band.BAND_5GHZ)
    got60 = (r60.cca_slot_us, r60.mcot_ms, r60.ed_reference_dbm, r60.max_eirp_dbm,
             r60.max_psd_dbm_per_mhz, r60.ocb_min_fraction, r60.ocb_max_fraction)
    got5 = (r5.cca_slot_us, r5.ed_reference_dbm, r5.ocb_min_fraction, r5.ocb_max_fraction)
    gaps = {g: cot_gap_category(g) for g in (15, 16, 25, 26)}
    ok60 = got60 == (5, 9, -47, 40, 13, 0.80, 1.00) and "40 dBm" in r60.ed_reference_condition
    ok5 = got5 == (9, -72, 0.70, 1.00) and "20 MHz" in r5.ed_reference_condition
    okgap = gaps == {15: LbtCategory.CAT1, 16: LbtCategory.CAT2, 25: LbtCategory.CAT2,
                     26: LbtCategory.CAT4}
    record(6, "60 GHz", ok60)
    record(6, "5 GHz", ok5)
    record(6, "gap boundaries", okgap, " ".join(f"{g}us->{c.name}" for g, c in gaps.items()))
    assert ok60 and ok5 and okgap


# -- 7 and 8: K = 40 sweeps ------------------------------------------------------


@pytest.fixture(scope="module")
def sweep():
    cfg = ExperimentConfig(k_values=(K,), receptions=tuple(ReceptionMode), n_drops=N_DROPS)
    cells = simulate_cells(cfg)
    return {(s.name, m): aggregate([d for _, d in drops]) for (_, s, m), drops in cells.items()}


def ahead(a, b):
    """a - b and twice their combined standard error."""
    return a.mean - b.mean, 2 * math.hypot(a.se, b.se)


def fmt(diff, bound):
    return f"diff {diff:.4g} vs 2se {bound:.3g}"


def test_c7a_nolbt_lowest_nru_rate(sweep):
    base = sweep[("noLBT", OMNI_RX)].nru_mean_rate
    worst = min((ahead(sweep[(s.name, OMNI_RX)].nru_mean_rate, base) for s in ALL_STRATEGIES[1:]),
                key=lambda t: t[0] - t[1])
    ok = worst[0] > worst[1]
    record(7, "(a) noLBT lowest NR-U rate", ok, "closest " + fmt(*worst))
    assert ok


def test_c7b_dir_admits_more_than_omni(sweep):
    diff, bound = ahead(sweep[("dirLBT", OMNI_RX)].nru_access_count,
                        sweep[("omniLBT", OMNI_RX)].nru_access_count)
    ok = diff > bound
    record(7, "(b) dirLBT > omniLBT count", ok, fmt(diff, bound))
    assert ok


def test_c7c_pair_close_to_dir(sweep):
    d = sweep[("dirLBT", OMNI_RX)].nru_access_count.mean
    p = sweep[("pairLBT", OMNI_RX)].nru_access_count.mean
    gap = abs(p - d) / d
    ok = gap <= 0.10
    record(7, "(c) pairLBT ~ dirLBT count", ok, f"{p:.2f} vs {d:.2f}, {gap:.1%}")
    assert ok


@pytest.mark.parametrize("proc", ["omniLBT", "dirLBT", "pairLBT", "LBTswitch"])
def test_c7d_lbr_raises_nru_rate(sweep, proc):
    diff, bound = ahead(sweep[(proc + "+LBR", OMNI_RX)].nru_mean_rate,
                        sweep[(proc, OMNI_RX)].nru_mean_rate)
    ok = diff > bound
    record(7, f"(d) {proc}+LBR > {proc} NR-U rate", ok, fmt(diff * 1e-9, bound * 1e-9) + " Gbps")
    assert ok


def test_c7e_lbr_good_neighbour(sweep):
    base = sweep[("noLBT", OMNI_RX)].wigig_access_count
    worst = min((ahead(sweep[(s.name, OMNI_RX)].wigig_access_count, base)
                 for s in ALL_STRATEGIES if s.lbr_assist), key=lambda t: t[0] - t[1])
    ok = worst[0] > worst[1]
    record(7, "(e) WiGig count under LBR >= noLBT", ok, "closest " + fmt(*worst))
    assert ok


def test_c8a_nolbt_highest_sum_rate(sweep):
    base = sweep[("noLBT", QUASI_RX)].sum_rate
    worst = min((ahead(base, sweep[(s.name, QUASI_RX)].sum_rate) for s in ALL_STRATEGIES[1:]),
                key=lambda t: t[0] - t[1])
    ok = worst[0] > worst[1]
    record(8, "(a) noLBT highest sum rate", ok, "closest " + fmt(worst[0] * 1e-9, worst[1] * 1e-9))
    assert ok


def spread(sweep, mode):
    v = [sweep[(s.name, mode)].mean_rate_accessed.mean for s in ALL_STRATEGIES]
    return (max(v) - min(v)) / max(v)


def test_c8b_smaller_spread(sweep):
    q, o = spread(sweep, QUASI_RX), spread(sweep, OMNI_RX)
    ok = q < o
    record(8, "(b) quasi spread < omni spread", ok, f"{q:.3f} vs {o:.3f}")
    assert ok


def test_c8c_quasi_rates_higher(sweep):
    worst = min((ahead(sweep[(s.name, QUASI_RX)].mean_rate_accessed,
                       sweep[(s.name, OMNI_RX)].mean_rate_accessed) for s in ALL_STRATEGIES),
                key=lambda t: t[0] - t[1])
    ok = worst[0] > worst[1]
    record(8, "(c) quasi mean rate > omni", ok, "closest " + fmt(worst[0] * 1e-9, worst[1] * 1e-9))
    assert ok


# -- 9 ------------------------------------------------------------------------


def test_c9_parallelism_invariance(tmp_path):
    base = ExperimentConfig(k_values=(8, 24), receptions=tuple(ReceptionMode), n_drops=40)
    blobs = {}
    for jobs in (1, 3):
        out = tmp_path / f"jobs{jobs}"
        run_experiment(replace(base, parallelism=jobs, out_dir=str(out)))
        blobs[jobs] = (out / "results.csv").read_bytes()
    again = tmp_path / "again"
    run_experiment(replace(base, parallelism=1, out_dir=str(again)))
    ok = blobs[1] == blobs[3] == (again / "results.csv").read_bytes()
    record(9, "jobs 1 vs 3 vs rerun", ok, f"{len(blobs[1])} bytes")
    assert ok


# -- 10 -----------------------------------------------------------------------

_CODE = {Decision.ADMITTED: "ok", Decision.BLOCKED_TX_SENSE: "tx", Decision.BLOCKED_RX_SENSE: "rx"}


def test_c10_oracle_equivalence():
    mismatches, worst_rel, checked = 0, 0.0, 0
    for d in range(100):
        seed = 10_000 + d
        dep = generate_deployment(ScenarioParams(k_pairs=4), seed)
        order_s = order_seed(seed)
        for mode in ReceptionMode:
            world = oracle.World(dep, quasi=mode is QUASI_RX)
            for s in ALL_STRATEGIES:
                out = run_admission(dep, s, mode, CFG, CH, order_s)
                ref, active = world.admit(out.attempt_order, s.procedure.value, s.lbr_assist)
                got = {i: _CODE[v] for i, v in out.per_pair_decision.items()}
                if got != ref or list(out.admitted) != active:
                    mismatches += 1
                    continue
                m = compute_drop_metrics(out, dep, CH, mode, s)
                rates = world.rates(active, 0.0138 if s.lbr_assist else 0.0)
                pairs = [(m.per_pair_rate[i], rates[i]) for i in active]
                pairs.append((m.sum_rate, math.fsum(rates.values())))
                for a, b in pairs:
                    if b:
                        worst_rel = max(worst_rel, abs(a - b) / b)
                    elif a:
                        worst_rel = math.inf
                checked += 1
    ok = mismatches == 0 and worst_rel < 1e-9
    record(10, "100 drops x 9 strategies x 2 modes", ok,
           f"{mismatches} decision mismatches, worst rate rel err {worst_rel:.1e}")
    assert ok
