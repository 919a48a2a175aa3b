"""Discrete-time quantum walks with leaky (non-Hermitian) coins."""

__version__ = "0.1.0"

from .hilbert import (  # noqa: E402
    BoundaryError,
    InitialStateKind,
    WalkState,
    new_state,
    norm2,
    position_distribution,
    spread_sigma,
)
from .coin import (  # noqa: E402
    CoinConsistencyError,
    CoinKind,
    CoinOp,
    dimer_coin,
    hermitian_coin,
    nonhermitian_coin,
)
from .dimer import (  # noqa: E402
    DimerParams,
    Regime,
    classify_regime,
    greens_inverse,
    propagator_oracle,
    resonance_probs,
    transfer_prob_general,
)
from .walk import EvolutionTrace, ShiftKind, apply_shift, evolve, step  # noqa: E402
from .analysis import (  # noqa: E402
    DensityMatrix,
    MeasurementRecord,
    measure,
    nm_witness,
    nm_witness_grid,
    reduced_coin_density,
    reduced_position_density,
    trace_distance,
    von_neumann_entropy_avg,
)
