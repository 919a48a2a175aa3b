"""
Step propagator ``U = S (I_p (x) C)``: the coin acts on every site, then a shift.

Two shifts are available:

``CONDITIONAL``
    ``|0_c, m> -> |0_c, m+1>`` and ``|1_c, m> -> |1_c, m-1>``.
``GENERALIZED``
    ``|0_c, m> -> (|0_c, m-1> + |1_c, m>) / sqrt(2)`` and
    ``|1_c, m> -> (-|0_c, m> + |1_c, m+1>) / sqrt(2)``, which both displaces
    and mixes the coin. Every figure-reproducing run uses this one.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .coin import CoinOp
from .hilbert import BoundaryError, WalkState, norm2

__all__ = ["ShiftKind", "EvolutionTrace", "apply_shift", "apply_coin", "step", "evolve"]

_INV_SQRT2 = 1.0 / np.sqrt(2.0)


class ShiftKind(enum.Enum):
    CONDITIONAL = "conditional"
    GENERALIZED = "generalized"


@dataclass(frozen=True)
class EvolutionTrace:
    final: WalkState
    norms: NDArray[np.float64]

    def __post_init__(self):
        norms = np.array(self.norms, dtype=np.float64, copy=True)
        norms.setflags(write=False)
        object.__setattr__(self, "norms", norms)


def _check_step_budget(state: WalkState) -> None:
    if state.steps_taken + 1 > state.bound:
        raise BoundaryError(
            f"step {state.steps_taken + 1} exceeds lattice bound L={state.bound}"
        )


def _check_edges(a: NDArray[np.complex128], kind: ShiftKind) -> None:
    # coin 0 moves left under GENERALIZED and right under CONDITIONAL
    leaving = (a[0, 0], a[1, -1]) if kind is ShiftKind.GENERALIZED else (a[0, -1], a[1, 0])
    if leaving[0] != 0 or leaving[1] != 0:
        raise BoundaryError("amplitude would leave the lattice [-L, L]")


def _shift_array(a: NDArray[np.complex128], kind: ShiftKind) -> NDArray[np.complex128]:
    out = np.zeros_like(a)
    if kind is ShiftKind.CONDITIONAL:
        out[0, 1:] = a[0, :-1]
        out[1, :-1] = a[1, 1:]
        return out
    s = _INV_SQRT2
    out[0, :-1] += s * a[0, 1:]
    out[1, :] += s * a[0, :]
    out[0, :] -= s * a[1, :]
    out[1, 1:] += s * a[1, :-1]
    return out


def apply_shift(state: WalkState, kind: ShiftKind | str = ShiftKind.GENERALIZED) -> WalkState:
    """Apply only the shift operator. ``steps_taken`` is left unchanged."""
    kind = ShiftKind(kind)
    _check_step_budget(state)
    _check_edges(state.amplitudes, kind)
    return WalkState(_shift_array(state.amplitudes, kind), state.bound, state.steps_taken)


def apply_coin(state: WalkState, coin: CoinOp) -> WalkState:
    """Apply ``I_p (x) C`` without shifting."""
    return WalkState(coin.matrix @ state.amplitudes, state.bound, state.steps_taken)


def step(state: WalkState, coin: CoinOp, kind: ShiftKind | str = ShiftKind.GENERALIZED) -> WalkState:
    """One full walk step: coin on every site, then the shift."""
    kind = ShiftKind(kind)
    _check_step_budget(state)
    coined = coin.matrix @ state.amplitudes
    _check_edges(coined, kind)
    return WalkState(_shift_array(coined, kind), state.bound, state.steps_taken + 1)


def evolve(
    state: WalkState,
    coin: CoinOp,
    kind: ShiftKind | str = ShiftKind.GENERALIZED,
    n: int = 1,
) -> EvolutionTrace:
    """Apply ``n`` homogeneous steps, recording the squared norm after each.

    ``norms[0]`` is the norm of the input state.
    """
    kind = ShiftKind(kind)
    if n < 0:
        raise ValueError("n must be non-negative")
    if state.steps_taken + n > state.bound:
        raise BoundaryError(
            f"{n} steps from step {state.steps_taken} exceed lattice bound L={state.bound}"
        )
    norms = np.empty(n + 1)
    norms[0] = norm2(state)
    for k in range(1, n + 1):
        state = step(state, coin, kind)
        norms[k] = norm2(state)
    return EvolutionTrace(state, norms)
