"""State-vector simulator for a quantum neural automaton market model."""

from .gates import (
    ConditionalGateSpec,
    HamiltonianParams,
    build_conditional_gate,
    gate_from_hamiltonian,
    haar_random_u2,
    pauli,
)
from .market import (
    MarketConfig,
    MarketState,
    MarketStreams,
    ReturnsSeries,
    advance_round,
    init_market,
    returns_eigenvalue,
    sample_phi,
    simulate,
)
from .network import expectation, l1, l2, l3, l_net, step
from .stats import SeriesSummary, fisher_kurtosis, jarque_bera, summarize

__version__ = "0.1.0"
