"""
Observables of a walker state: reduced density matrices, averaged occupation
entropy, trace distance, a trace-distance non-Markovianity witness, and the
coin-then-position projective measurement table.

None of the functions renormalize. Leaked amplitude shows up as a trace
deficit, except in :func:`measure`, which conditions on survival.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.typing import NDArray

from .coin import dimer_coin, hermitian_coin, CoinOp
from .hilbert import InitialStateKind, WalkState, new_state, norm2
from .walk import ShiftKind, evolve

__all__ = [
    "DensityMatrix",
    "MeasurementRecord",
    "reduced_coin_density",
    "reduced_position_density",
    "von_neumann_entropy_avg",
    "binary_entropy",
    "trace_distance",
    "trace_distance_batch",
    "position_density_after",
    "nm_witness",
    "nm_witness_grid",
    "measure",
]

DEFAULT_TAU_PRIME = 1e-5


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian matrix with labelled basis.

    ``labels`` are coin indices ``(0, 1)`` for coin-reduced states and
    lattice positions for position-reduced ones.
    """

    matrix: NDArray[np.complex128]
    labels: tuple[int, ...]

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128, copy=True)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] != len(self.labels):
            raise ValueError("matrix must be square and match the number of labels")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "labels", tuple(int(x) for x in self.labels))

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def eigenvalues(self) -> NDArray[np.float64]:
        """Ascending eigenvalues of the Hermitian part."""
        m = self.matrix
        return np.linalg.eigvalsh(0.5 * (m + m.conj().T))

    def __getitem__(self, key):
        """Index by basis labels, e.g. ``rho[-2, -1]`` for positions."""
        i, j = key
        idx = {lab: k for k, lab in enumerate(self.labels)}
        return complex(self.matrix[idx[i], idx[j]])


@dataclass(frozen=True)
class MeasurementRecord:
    coin_outcome: int
    position_outcome: int
    probability: float
    state_sign: int


def reduced_coin_density(state: WalkState) -> DensityMatrix:
    """Trace out position: ``rho_c[i, j] = sum_m a(i, m) conj(a(j, m))``."""
    a = state.amplitudes
    return DensityMatrix(a @ a.conj().T, (0, 1))


def _support_window(state: WalkState) -> tuple[int, int]:
    n = min(state.steps_taken, state.bound)
    return -n, n


def reduced_position_density(state: WalkState, window: tuple[int, int] | None = None) -> DensityMatrix:
    """Trace out the coin, restricted to positions ``window = (lo, hi)`` inclusive.

    The default window is the light cone ``[-steps_taken, steps_taken]``, so
    after two steps the basis is ``(-2, -1, 0, 1, 2)``.
    """
    lo, hi = _support_window(state) if window is None else window
    if lo > hi or lo < -state.bound or hi > state.bound:
        raise ValueError(f"window {(lo, hi)} not inside [-{state.bound}, {state.bound}]")
    sub = state.amplitudes[:, lo + state.bound : hi + state.bound + 1]
    # rho_p[m, m'] = sum_c a(c, m) conj(a(c, m'))
    return DensityMatrix(sub.T @ sub.conj(), tuple(range(lo, hi + 1)))


def binary_entropy(p) -> NDArray[np.float64]:
    """``-p ln p - (1 - p) ln(1 - p)`` elementwise, with ``h(0) = h(1) = 0``."""
    p = np.clip(np.asarray(p, dtype=np.float64), 0.0, 1.0)
    q = 1.0 - p
    with np.errstate(divide="ignore", invalid="ignore"):
        hp = np.where(p > 0, -p * np.log(np.where(p > 0, p, 1.0)), 0.0)
        hq = np.where(q > 0, -q * np.log(np.where(q > 0, q, 1.0)), 0.0)
    return hp + hq


def von_neumann_entropy_avg(dist, n_steps: int) -> float:
    """Average site entropy ``S = (1/N) sum_n h(p_n)``.

    Each site is treated as a two-level occupied/empty system with
    ``rho_n = diag(p_n, 1 - p_n)``, so its von Neumann entropy is the binary
    entropy of the occupation ``p_n``. Occupations are used as given, leaked
    amplitude included; ``N`` is the number of walk steps.
    """
    p = np.asarray(dist, dtype=np.float64)
    if n_steps < 1:
        raise ValueError("n_steps must be a positive integer")
    if np.any(p < -1e-12) or np.any(p > 1 + 1e-12):
        raise ValueError("occupation probabilities must lie in [0, 1]")
    p = p[p > 0]
    return float(binary_entropy(p).sum() / n_steps)


def trace_distance(rho1: DensityMatrix, rho2: DensityMatrix) -> float:
    """``(1/2) sum_k |eig_k(rho1 - rho2)|``."""
    if rho1.labels != rho2.labels:
        raise ValueError(
            f"density matrices live on different bases: {rho1.labels} vs {rho2.labels}"
        )
    a, b = rho1.matrix, rho2.matrix
    # fixed operand order keeps D(a, b) == D(b, a) bit for bit
    if a.tobytes() > b.tobytes():
        a, b = b, a
    diff = a - b
    diff = 0.5 * (diff + diff.conj().T)
    return float(0.5 * np.abs(np.linalg.eigvalsh(diff)).sum())


def trace_distance_batch(a: NDArray, b: NDArray) -> NDArray[np.float64]:
    """Trace distance between stacks of matrices of shape ``(..., d, d)``."""
    diff = np.asarray(a) - np.asarray(b)
    diff = 0.5 * (diff + np.conj(np.swapaxes(diff, -1, -2)))
    return 0.5 * np.abs(np.linalg.eigvalsh(diff)).sum(axis=-1)


def position_density_after(coin: CoinOp, n_steps: int = 2,
                           shift: ShiftKind | str = ShiftKind.GENERALIZED) -> DensityMatrix:
    """Position-reduced state of a localized walker after ``n_steps``."""
    state = new_state(InitialStateKind.LOCALIZED, max(n_steps, 1))
    final = evolve(state, coin, shift, n_steps).final
    return reduced_position_density(final)


@lru_cache(maxsize=65536)
def _dimer_rho(V: float, lam: float, x: float, n_steps: int) -> NDArray[np.complex128]:
    return position_density_after(dimer_coin(V, lam, x), n_steps).matrix


def nm_witness(V: float, lam: float, T: float, tau: float,
               tau_prime: float = DEFAULT_TAU_PRIME, n_steps: int = 2) -> float:
    """Trace-distance difference ``D[rho(tau'), rho(tau)] - D[rho(T+tau'), rho(T+tau)]``.

    ``rho(x)`` is the position-reduced state after ``n_steps`` (two by
    default) with the dimer coin of walk time ``x``. Negative values mean the
    two states became more distinguishable over the lapse ``T``, i.e.
    information flowed back.
    """
    def rho(x):
        return _dimer_rho(float(V), float(lam), float(x), int(n_steps))

    early = trace_distance_batch(rho(tau_prime), rho(tau))
    late = trace_distance_batch(rho(T + tau_prime), rho(T + tau))
    return float(early - late)


def nm_witness_grid(V: float, lam: float, T_values, tau_values,
                    tau_prime: float = DEFAULT_TAU_PRIME, n_steps: int = 2) -> NDArray[np.float64]:
    """``nm_witness`` over a grid; result has shape ``(len(T_values), len(tau_values))``."""
    T = np.asarray(T_values, dtype=np.float64)
    tau = np.asarray(tau_values, dtype=np.float64)

    def rho(x):
        return _dimer_rho(float(V), float(lam), float(x), int(n_steps))

    r_tp = rho(tau_prime)
    r_tau = np.stack([rho(t) for t in tau])
    early = trace_distance_batch(r_tp[None], r_tau)  # (n_tau,)
    r_late_p = np.stack([rho(Ti + tau_prime) for Ti in T])  # (n_T, d, d)
    r_late = np.stack([[rho(Ti + t) for t in tau] for Ti in T])  # (n_T, n_tau, d, d)
    late = trace_distance_batch(r_late_p[:, None], r_late)
    return early[None, :] - late


def hermitian_nm_witness(alpha_of_time, T: float, tau: float,
                         tau_prime: float = DEFAULT_TAU_PRIME, n_steps: int = 2) -> float:
    """Witness for a unitary coin whose parameter depends on time via ``alpha_of_time``."""
    def rho(x):
        return position_density_after(hermitian_coin(alpha_of_time(x)), n_steps)

    return trace_distance(rho(tau_prime), rho(tau)) - trace_distance(rho(T + tau_prime), rho(T + tau))


def _sign(z: complex) -> int:
    if z.real != 0:
        return 1 if z.real > 0 else -1
    return 1 if z.imag >= 0 else -1


def measure(state: WalkState, atol: float = 0.0) -> list[MeasurementRecord]:
    """Outcome table of a coin measurement followed by a position measurement.

    Probabilities are conditioned on survival (divided by ``norm2(state)``).
    ``state_sign`` is the sign of the real part of the amplitude (imaginary
    part if the real part vanishes). Only outcomes with ``|amplitude| > atol``
    are listed, sorted by ``(coin, position)``.
    """
    total = norm2(state)
    if not total > 0:
        raise ValueError("cannot measure a state with zero norm")
    records = []
    a = state.amplitudes
    for c in (0, 1):
        for k, m in enumerate(state.positions):
            z = complex(a[c, k])
            if abs(z) > atol:
                records.append(
                    MeasurementRecord(c, int(m), (z.real**2 + z.imag**2) / total, _sign(z))
                )
    return records
