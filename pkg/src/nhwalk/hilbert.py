"""
Walker state on the product space of a bounded 1-D lattice and a two-level coin.

Amplitudes are stored densely as a ``(2, 2L + 1)`` complex array: row ``c`` is
the coin index, column ``m + L`` the lattice position ``m``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "BoundaryError",
    "InitialStateKind",
    "WalkState",
    "new_state",
    "norm2",
    "position_distribution",
    "spread_sigma",
]


class BoundaryError(RuntimeError):
    """Raised when amplitude would be pushed outside the lattice ``[-L, L]``."""


class InitialStateKind(enum.Enum):
    LOCALIZED = "localized"
    SYMMETRIC = "symmetric"


@dataclass(frozen=True)
class WalkState:
    """Immutable walker state.

    Attributes
    ----------
    amplitudes : ndarray of complex128, shape (2, 2 * bound + 1)
        ``amplitudes[c, m + bound]`` is the amplitude of ``|c_c, m_p>``.
    bound : int
        Half-width ``L`` of the lattice.
    steps_taken : int
        Number of step operators applied since construction.
    """

    amplitudes: NDArray[np.complex128]
    bound: int
    steps_taken: int = 0

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128, copy=True)
        if amps.shape != (2, 2 * self.bound + 1):
            raise ValueError(
                f"amplitudes must have shape (2, {2 * self.bound + 1}), got {amps.shape}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def positions(self) -> NDArray[np.int64]:
        return np.arange(-self.bound, self.bound + 1)

    def amplitude(self, coin: int, position: int) -> complex:
        if abs(position) > self.bound:
            return 0j
        return complex(self.amplitudes[coin, position + self.bound])


def new_state(kind: InitialStateKind | str, bound: int) -> WalkState:
    """Walker localized at the origin with the requested coin preparation.

    ``LOCALIZED`` is ``|0_c> (x) |0_p>``; ``SYMMETRIC`` is
    ``(|0_c> + i|1_c>)/sqrt(2) (x) |0_p>``, which gives a left-right symmetric
    Hadamard walk.
    """
    kind = InitialStateKind(kind)
    if isinstance(bound, bool) or int(bound) != bound or bound < 1:
        raise ValueError(f"lattice bound must be a positive integer, got {bound!r}")
    bound = int(bound)
    amps = np.zeros((2, 2 * bound + 1), dtype=np.complex128)
    if kind is InitialStateKind.LOCALIZED:
        amps[0, bound] = 1.0
    else:
        amps[0, bound] = 1.0 / np.sqrt(2.0)
        amps[1, bound] = 1j / np.sqrt(2.0)
    return WalkState(amps, bound, 0)


def norm2(state: WalkState) -> float:
    """Total occupation probability, i.e. the squared norm of the state."""
    a = state.amplitudes
    return float(np.sum(a.real**2 + a.imag**2))


def position_distribution(state: WalkState) -> NDArray[np.float64]:
    """Occupation probability per lattice site, coin traced out.

    Not renormalized: for a leaky coin the entries sum to ``norm2(state)``.
    Index ``m + bound`` holds position ``m``.
    """
    a = state.amplitudes
    return np.sum(a.real**2 + a.imag**2, axis=0)


def spread_sigma(dist, positions=None) -> float:
    """Standard deviation of position under ``dist`` renormalized to unit mass.

    Parameters
    ----------
    dist : array_like
        Non-negative weights per site.
    positions : array_like, optional
        Site labels. Defaults to a lattice centred on zero, ``-(n-1)/2 .. (n-1)/2``,
        which is what :func:`position_distribution` produces.
    """
    p = np.asarray(dist, dtype=np.float64)
    if p.ndim != 1:
        raise ValueError("dist must be one-dimensional")
    total = p.sum()
    if not total > 0:
        raise ValueError("distribution has zero total weight")
    if positions is None:
        half = (p.size - 1) / 2
        positions = np.arange(p.size) - half
    x = np.asarray(positions, dtype=np.float64)
    p = p / total
    mean = np.dot(p, x)
    return float(np.sqrt(max(np.dot(p, (x - mean) ** 2), 0.0)))
