"""Energy teleportation over XY spin chains: free-fermion ground states,
measurement-induced links, repeater cost models and receiver-side extraction."""

__version__ = "0.1.0"

from .xy_chain import (  # noqa: E402
    ChainParams,
    MajoranaCovariance,
    correlation_length,
    correlation_xx,
    dispersion,
    energy_gap,
    ground_covariance,
    ground_energy,
)
from .purification import BellDiagonalState, purify_cycle, purify_round, werner_from_fidelity  # noqa: E402
from .repeater import RepeaterConfig, simple_iterative_cost, simulate_full_repeater  # noqa: E402
from .ledger import CostLedger  # noqa: E402
