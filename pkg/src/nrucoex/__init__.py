"""Monte-Carlo simulation of beam-based NR-U / WiGig coexistence at 60 GHz.

Modules:

  :mod:`nrucoex.scenario`   random indoor deployments of K link pairs
  :mod:`nrucoex.radio`      cone antenna patterns and the link budget
  :mod:`nrucoex.access`     omniLBT, dirLBT, pairLBT, LBTswitch, LBR, admission
  :mod:`nrucoex.metrics`    SINR, Shannon rates, drop metrics, aggregation
  :mod:`nrucoex.regulatory` ETSI band constants and LBR overhead
  :mod:`nrucoex.experiment` seeded sweeps and result files (``nrucoex-sim``)
"""

from .access import (
    ALL_STRATEGIES,
    AccessOutcome,
    Decision,
    Procedure,
    ReceptionMode,
    SensingConfig,
    SensingStrategy,
    run_admission,
)
from .experiment import ExperimentConfig, run_cell, run_experiment
from .metrics import aggregate, compute_drop_metrics
from .radio import ChannelParams, make_pattern
from .scenario import ScenarioParams, generate_deployment

__version__ = "0.1.0"
