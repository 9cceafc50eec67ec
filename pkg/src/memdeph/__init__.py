"""Dephasing channel with Markov-chain memory: capacity and code fidelities."""

from memdeph.analysis import (
    binary_entropy,
    c2_beats_c1_crossover,
    c2_beats_uncoded_threshold,
    capacity,
    fe_closed,
    pe_small_eps,
)
from memdeph.engine import FidelityReport, fe_exact, fe_monte_carlo, fidelity_report
from memdeph.errormodel import (
    ChannelParams,
    ErrorSequence,
    ParameterError,
    conditional_prob,
    derived_probs,
    enumerate_sequences,
    sample_sequence,
    sequence_prob,
)

__version__ = "0.1.0"
