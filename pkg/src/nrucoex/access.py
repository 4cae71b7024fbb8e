"""Listen-before-talk procedures for beam-based NR-U and snapshot admission.

Each procedure is exposed as a plain function over an explicit set of
active transmitters (``omni_lbt``, ``dir_lbt``, ``pair_lbt``, ``lbt_switch``,
``lbr_check``). ``run_admission`` applies the same rules to a whole drop,
using precomputed link matrices so a drop costs O(K^2) numpy work.

No backoff is emulated: pairs are visited once in random order and are
either admitted or blocked for the whole snapshot.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .links import LinkTable
from .radio import OMNI, Endpoint, lin_to_db, make_pattern, noise_power_mw, rx_power_mw
from .scenario import Rat

TX_PATTERN = make_pattern(10.0, 30.0)
QUASI_OMNI_PATTERN = make_pattern(7.0, 90.0)


class Procedure(Enum):
    NO_LBT = "noLBT"
    OMNI_LBT = "omniLBT"
    DIR_LBT = "dirLBT"
    PAIR_LBT = "pairLBT"
    LBT_SWITCH = "LBTswitch"


class ChannelState(Enum):
    IDLE = "idle"
    BUSY = "busy"

    def __bool__(self):
        return self is ChannelState.IDLE


IDLE, BUSY = ChannelState.IDLE, ChannelState.BUSY


@dataclass(frozen=True)
class SensingStrategy:
    procedure: Procedure
    lbr_assist: bool = False

    def __post_init__(self):
        if self.procedure is Procedure.NO_LBT and self.lbr_assist:
            raise ValueError("no-LBT cannot be combined with LBR")

    @property
    def name(self):
        return self.procedure.value + ("+LBR" if self.lbr_assist else "")

    @classmethod
    def parse(cls, text):
        """Parse names such as ``dirLBT``, ``pairLBT+LBR`` or ``no-LBT``."""
        t = text.strip()
        lbr = False
        for suffix in ("+LBR", "-LBR"):
            if t.upper().endswith(suffix):
                t, lbr = t[: -len(suffix)], True
        key = t.replace("-", "").replace("_", "").lower()
        for proc in Procedure:
            if key in (proc.value.lower(), proc.name.replace("_", "").lower()):
                return cls(proc, lbr)
        raise ValueError(f"unknown strategy {text!r}")

    def __str__(self):
        return self.name


# Every valid scheme, in plotting order.
ALL_STRATEGIES = (
    SensingStrategy(Procedure.NO_LBT),
    SensingStrategy(Procedure.OMNI_LBT),
    SensingStrategy(Procedure.DIR_LBT),
    SensingStrategy(Procedure.PAIR_LBT),
    SensingStrategy(Procedure.LBT_SWITCH),
    SensingStrategy(Procedure.OMNI_LBT, True),
    SensingStrategy(Procedure.DIR_LBT, True),
    SensingStrategy(Procedure.PAIR_LBT, True),
    SensingStrategy(Procedure.LBT_SWITCH, True),
)


class ReceptionMode(Enum):
    OMNI = "omni"
    QUASI_OMNI = "quasi"

    @property
    def rx_pattern(self):
        return OMNI if self is ReceptionMode.OMNI else QUASI_OMNI_PATTERN


@dataclass(frozen=True)
class SensingConfig:
    ed_norm_dbm: float = -74.0
    gnb_sense_pattern_dir: object = TX_PATTERN
    gnb_sense_pattern_omni: object = OMNI
    pair_opposite_offsets: tuple = (math.pi,)
    # Per-offset overrides for pairLBT. Without them the opposite senses
    # reuse the forward pattern and a threshold raised by
    # pair_opposite_ed_offset_db: an interferer as far behind the gNB as the
    # UE is in front reaches the UE 20*log10(2) dB weaker than the gNB.
    pair_opposite_patterns: tuple | None = None
    pair_opposite_ed_norm_dbm: tuple | None = None
    pair_opposite_ed_offset_db: float = 20.0 * math.log10(2.0)
    harmful_margin_db: float = 10.0
    tx_pattern: object = TX_PATTERN

    def __post_init__(self):
        if not math.isfinite(self.ed_norm_dbm):
            raise ValueError("ed_norm_dbm must be finite")
        if not self.pair_opposite_offsets:
            raise ValueError("pair_opposite_offsets must not be empty")
        n = len(self.pair_opposite_offsets)
        for name in ("pair_opposite_patterns", "pair_opposite_ed_norm_dbm"):
            v = getattr(self, name)
            if v is not None and len(v) != n:
                raise ValueError(f"{name} needs one entry per opposite offset")

    def opposite_senses(self):
        """(offset, pattern, ed_norm_dbm) for every opposite pairLBT sense."""
        pats = self.pair_opposite_patterns or (self.gnb_sense_pattern_dir,) * len(
            self.pair_opposite_offsets
        )
        eds = self.pair_opposite_ed_norm_dbm or (
            self.ed_norm_dbm + self.pair_opposite_ed_offset_db,
        ) * len(
            self.pair_opposite_offsets
        )
        return list(zip(self.pair_opposite_offsets, pats, eds))


class Decision(Enum):
    ADMITTED = "admitted"
    BLOCKED_TX_SENSE = "blocked_tx_sense"
    BLOCKED_RX_SENSE = "blocked_rx_sense"


@dataclass(frozen=True)
class AccessOutcome:
    admitted: tuple
    attempt_order: tuple
    per_pair_decision: dict = field(default_factory=dict)


# -- single decisions -------------------------------------------------------


def tx_endpoint(pair, cfg):
    return Endpoint(tuple(pair.tx_pos), cfg.tx_pattern, pair.tx_boresight)


def _active_endpoints(active, cfg):
    return [a if isinstance(a, Endpoint) else tx_endpoint(a, cfg) for a in active]


def sensed_power_dbm(listener, active, ch):
    """Total power (noise included) a listener measures from ``active``.

    ``active`` holds transmitter :class:`Endpoint` objects. The sum runs in
    milliwatts in the given order.
    """
    total = 0.0
    for tx in active:
        total += rx_power_mw(ch, tx, listener)
    return float(lin_to_db(total + noise_power_mw(ch)))


def is_busy(sensed_dbm, cfg, sense_max_gain_db):
    """Energy detection with the threshold raised by the sensing gain.

    Equality counts as idle.
    """
    return sensed_dbm > cfg.ed_norm_dbm + sense_max_gain_db


def _sense(listener_pos, pattern, boresight, active, cfg, ch, ed_norm_dbm=None):
    listener = Endpoint(tuple(listener_pos), pattern, boresight)
    sensed = sensed_power_dbm(listener, _active_endpoints(active, cfg), ch)
    ed = cfg.ed_norm_dbm if ed_norm_dbm is None else ed_norm_dbm
    return BUSY if sensed > ed + pattern.main_gain_db else IDLE


def omni_lbt(pair, active, cfg, ch):
    return _sense(pair.tx_pos, cfg.gnb_sense_pattern_omni, pair.tx_boresight, active, cfg, ch)


def dir_lbt(pair, active, cfg, ch):
    return _sense(pair.tx_pos, cfg.gnb_sense_pattern_dir, pair.tx_boresight, active, cfg, ch)


def pair_lbt(pair, active, cfg, ch):
    if not dir_lbt(pair, active, cfg, ch):
        return BUSY
    for offset, pattern, ed in cfg.opposite_senses():
        if not _sense(pair.tx_pos, pattern, pair.tx_boresight + offset, active, cfg, ch, ed):
            return BUSY
    return IDLE


def ue_sense(pair, active, cfg, ch, mode):
    """Busy indication at the receiver, sensing with its reception pattern."""
    return _sense(pair.rx_pos, mode.rx_pattern, pair.rx_boresight, active, cfg, ch)


def lbt_switch(pair, active, cfg, ch, rx_sense):
    """omniLBT when the receiver reports busy, dirLBT otherwise."""
    if rx_sense is BUSY:
        return omni_lbt(pair, active, cfg, ch)
    return dir_lbt(pair, active, cfg, ch)


def lbr_check(pair, active, cfg, ch, mode):
    """Receiver-side sensing after a successful LBT; True means grant."""
    return ue_sense(pair, active, cfg, ch, mode) is IDLE


def lbt_switch_lbr(pair, active, cfg, ch, mode):
    """LBTswitch with LBR feedback carrying a sensing recommendation.

    Below the receiver's threshold the gNB runs dirLBT; within
    ``harmful_margin_db`` above it the gNB must pass omniLBT; beyond that the
    receiver denies the access.
    """
    pattern = mode.rx_pattern
    listener = Endpoint(tuple(pair.rx_pos), pattern, pair.rx_boresight)
    sensed = sensed_power_dbm(listener, _active_endpoints(active, cfg), ch)
    ed = cfg.ed_norm_dbm + pattern.main_gain_db
    if sensed >= ed + cfg.harmful_margin_db:
        return Decision.BLOCKED_RX_SENSE
    if sensed > ed:
        ok = omni_lbt(pair, active, cfg, ch)
    else:
        ok = dir_lbt(pair, active, cfg, ch)
    return Decision.ADMITTED if ok else Decision.BLOCKED_TX_SENSE


def admit_pair(pair, active, strategy, mode, cfg, ch):
    """Access decision for one pair given the currently active pairs."""
    if pair.rat is Rat.WIGIG:
        return Decision.ADMITTED if omni_lbt(pair, active, cfg, ch) else Decision.BLOCKED_TX_SENSE
    proc = strategy.procedure
    if proc is Procedure.NO_LBT:
        return Decision.ADMITTED
    if proc is Procedure.LBT_SWITCH and strategy.lbr_assist:
        return lbt_switch_lbr(pair, active, cfg, ch, mode)
    if proc is Procedure.OMNI_LBT:
        state = omni_lbt(pair, active, cfg, ch)
    elif proc is Procedure.DIR_LBT:
        state = dir_lbt(pair, active, cfg, ch)
    elif proc is Procedure.PAIR_LBT:
        state = pair_lbt(pair, active, cfg, ch)
    else:
        state = lbt_switch(pair, active, cfg, ch, ue_sense(pair, active, cfg, ch, mode))
    if not state:
        return Decision.BLOCKED_TX_SENSE
    if strategy.lbr_assist and not lbr_check(pair, active, cfg, ch, mode):
        return Decision.BLOCKED_RX_SENSE
    return Decision.ADMITTED


# -- whole snapshot ---------------------------------------------------------


def attempt_order(k, order_seed):
    rng = np.random.default_rng(np.random.SeedSequence(order_seed & ((1 << 64) - 1)))
    return tuple(int(i) for i in rng.permutation(k))


class _Sensor:
    """Running interference at one kind of listener, one entry per pair."""

    def __init__(self, matrix, pattern, ed_norm_dbm, noise_mw):
        self.matrix = matrix
        self.acc = np.zeros(matrix.shape[0])
        self.threshold = ed_norm_dbm + pattern.main_gain_db
        self.noise_mw = noise_mw

    def dbm(self, i):
        return float(lin_to_db(self.acc[i] + self.noise_mw))

    def busy(self, i):
        return self.dbm(i) > self.threshold

    def add(self, j):
        self.acc += self.matrix[:, j]


def run_admission(dep, strategy, mode, cfg, ch, order_seed, links=None):
    """Sequential greedy admission of every pair in a random order.

    WiGig APs always run omniLBT; NR-U gNBs run ``strategy``. Powers are
    accumulated incrementally as pairs are admitted.
    """
    k = len(dep.pairs)
    order = attempt_order(k, order_seed)
    if links is None:
        links = LinkTable(dep, ch, cfg.tx_pattern, mode.rx_pattern)
    noise = links.noise_mw
    omni = _Sensor(links.at_tx(cfg.gnb_sense_pattern_omni), cfg.gnb_sense_pattern_omni,
                   cfg.ed_norm_dbm, noise)
    sensors = [omni]
    proc = strategy.procedure
    if proc in (Procedure.DIR_LBT, Procedure.PAIR_LBT, Procedure.LBT_SWITCH):
        fwd = _Sensor(links.at_tx(cfg.gnb_sense_pattern_dir), cfg.gnb_sense_pattern_dir,
                      cfg.ed_norm_dbm, noise)
        sensors.append(fwd)
    opposite = []
    if proc is Procedure.PAIR_LBT:
        for offset, pattern, ed in cfg.opposite_senses():
            opposite.append(
                _Sensor(links.at_tx(pattern, links.tx_bore + offset), pattern, ed, noise)
            )
        sensors.extend(opposite)
    ue = None
    if strategy.lbr_assist or proc is Procedure.LBT_SWITCH:
        ue = _Sensor(links.rx_matrix, mode.rx_pattern, cfg.ed_norm_dbm, noise)
        sensors.append(ue)

    decisions = {}
    admitted = []
    for i in order:
        pair = dep.pairs[i]
        if pair.rat is Rat.WIGIG:
            d = Decision.BLOCKED_TX_SENSE if omni.busy(i) else Decision.ADMITTED
        elif proc is Procedure.NO_LBT:
            d = Decision.ADMITTED
        elif proc is Procedure.LBT_SWITCH and strategy.lbr_assist:
            sensed = ue.dbm(i)
            if sensed >= ue.threshold + cfg.harmful_margin_db:
                d = Decision.BLOCKED_RX_SENSE
            else:
                gate = omni if sensed > ue.threshold else fwd
                d = Decision.BLOCKED_TX_SENSE if gate.busy(i) else Decision.ADMITTED
        else:
            if proc is Procedure.OMNI_LBT:
                busy = omni.busy(i)
            elif proc is Procedure.DIR_LBT:
                busy = fwd.busy(i)
            elif proc is Procedure.PAIR_LBT:
                busy = fwd.busy(i) or any(s.busy(i) for s in opposite)
            else:
                busy = omni.busy(i) if ue.busy(i) else fwd.busy(i)
            if busy:
                d = Decision.BLOCKED_TX_SENSE
            elif strategy.lbr_assist and ue.busy(i):
                d = Decision.BLOCKED_RX_SENSE
            else:
                d = Decision.ADMITTED
        decisions[pair.id] = d
        if d is Decision.ADMITTED:
            admitted.append(pair.id)
            for s in sensors:
                s.add(i)
    return AccessOutcome(
        admitted=tuple(admitted),
        attempt_order=tuple(dep.pairs[i].id for i in order),
        per_pair_decision=decisions,
    )
