import math

import pytest

from nrucoex.scenario import Deployment, LinkPair, Point2D, Rat, ScenarioParams


def make_pair(pid, rat, tx, rx):
    tx, rx = Point2D(*tx), Point2D(*rx)
    return LinkPair(pid, rat, tx, rx, tx.bearing_to(rx), rx.bearing_to(tx))


def make_deployment(*links):
    """Deployment from ``(rat, tx_xy, rx_xy)`` triples, ids in order."""
    pairs = tuple(make_pair(i, rat, tx, rx) for i, (rat, tx, rx) in enumerate(links))
    return Deployment(pairs, ScenarioParams(k_pairs=len(pairs) + len(pairs) % 2), seed=0)


@pytest.fixture
def deployment_of():
    return make_deployment


ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE:
        terminalreporter.write_line(line)
