"""
Who hears whom: three two-link layouts
======================================

A WiGig AP is already transmitting. A gNB then tries each sensing scheme
before serving its UE. The three layouts show where sensing at the
transmitter goes wrong and how asking the receiver (LBR) fixes it.
"""

from nrucoex.access import (
    Decision,
    ReceptionMode,
    SensingConfig,
    SensingStrategy,
    admit_pair,
    sensed_power_dbm,
    TX_PATTERN,
)
from nrucoex.radio import OMNI, ChannelParams, Endpoint
from nrucoex.scenario import LinkPair, Point2D, Rat

ch = ChannelParams()
cfg = SensingConfig()


def pair(pid, rat, tx, rx):
    tx, rx = Point2D(*tx), Point2D(*rx)
    return LinkPair(pid, rat, tx, rx, tx.bearing_to(rx), rx.bearing_to(tx))


layouts = {
    # AP beam runs straight through the gNB and on to the UE
    "everything in line": (pair(1, Rat.WIGIG, (0, 0), (10, 0)), pair(0, Rat.NRU, (8, 0), (12, 0))),
    # the gNB sits in the AP beam but points its own beam sideways
    "transmitters aligned": (pair(1, Rat.WIGIG, (0, 0), (10, 0)), pair(0, Rat.NRU, (8, 0.5), (8, 6.5))),
    # the UE sits in the AP beam, the gNB is well outside it
    "receivers aligned": (pair(1, Rat.WIGIG, (0, 0), (6, 0)), pair(0, Rat.NRU, (5, 8.5), (5, 0.5))),
}

names = ["omniLBT", "dirLBT", "pairLBT", "LBTswitch", "omniLBT+LBR", "dirLBT+LBR", "LBTswitch+LBR"]
short = {Decision.ADMITTED: "go", Decision.BLOCKED_TX_SENSE: "defer@gNB",
         Decision.BLOCKED_RX_SENSE: "defer@UE"}

for title, (ap, nru) in layouts.items():
    ap_tx = Endpoint(tuple(ap.tx_pos), TX_PATTERN, ap.tx_boresight)
    at_gnb = sensed_power_dbm(Endpoint(tuple(nru.tx_pos), OMNI), [ap_tx], ch)
    at_ue = sensed_power_dbm(Endpoint(tuple(nru.rx_pos), OMNI), [ap_tx], ch)
    print(f"{title}: AP heard at {at_gnb:.1f} dBm by the gNB, {at_ue:.1f} dBm by the UE (omni)")
    row = []
    for n in names:
        d = admit_pair(nru, [ap], SensingStrategy.parse(n), ReceptionMode.OMNI, cfg, ch)
        row.append(f"{n}={short[d]}")
    print("   ", "  ".join(row))
    print()

# in the last layout every gNB-side scheme says "go" although the UE is
# drowned by the AP: the hidden-node case that only the receiver can detect
