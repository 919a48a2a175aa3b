"""
2x2 coin operators: the unitary reflection family, the leaky real-symmetric
family, and the family parameterized by a dissipative exciton dimer.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "CoinConsistencyError",
    "CoinKind",
    "CoinOp",
    "hermitian_coin",
    "nonhermitian_coin",
    "dimer_coin",
    "dimer_coin_amplitudes",
    "EXCEPTIONAL_RTOL",
]

UNITARY_ATOL = 1e-12
# tolerance for the admissibility check alpha1^2 + alpha2^2 <= 1
NORM_ATOL = 1e-12
DIMER_NORM_ATOL = 1e-9
EXCEPTIONAL_RTOL = 1e-9


class CoinConsistencyError(ArithmeticError):
    """The dimer coin formulas produced a pair with alpha1^2 + alpha2^2 > 1."""


class CoinKind(enum.Enum):
    HERMITIAN_UNITARY = "hermitian_unitary"
    NON_HERMITIAN = "non_hermitian"


@dataclass(frozen=True)
class CoinOp:
    matrix: NDArray[np.complex128]
    kind: CoinKind

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128, copy=True)
        if m.shape != (2, 2):
            raise ValueError(f"coin matrix must be 2x2, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def alpha1(self) -> float:
        return float(self.matrix[0, 0].real)

    @property
    def alpha2(self) -> float:
        return float(self.matrix[0, 1].real)

    @property
    def norm_factor(self) -> float:
        """Per-step squared-norm multiplier ``alpha1**2 + alpha2**2``.

        Exact for the real-symmetric families, whose matrix is a scaled
        reflection; meaningless for arbitrary complex matrices.
        """
        return self.alpha1**2 + self.alpha2**2

    @property
    def is_unitary(self) -> bool:
        m = self.matrix
        return bool(np.allclose(m.conj().T @ m, np.eye(2), rtol=0, atol=UNITARY_ATOL))


def hermitian_coin(alpha: float) -> CoinOp:
    """Unitary coin ``[[a, sqrt(1-a^2)], [sqrt(1-a^2), -a]]``; ``a = 1/sqrt(2)`` is Hadamard."""
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    s = math.sqrt(max(1.0 - alpha * alpha, 0.0))
    return CoinOp(np.array([[alpha, s], [s, -alpha]]), CoinKind.HERMITIAN_UNITARY)


def _leaky_coin(alpha1: float, alpha2: float, atol: float) -> CoinOp:
    n = alpha1 * alpha1 + alpha2 * alpha2
    if not n <= 1.0 + atol:
        raise ValueError(f"alpha1^2 + alpha2^2 = {n!r} exceeds 1")
    kind = CoinKind.HERMITIAN_UNITARY if abs(n - 1.0) <= atol else CoinKind.NON_HERMITIAN
    return CoinOp(np.array([[alpha1, alpha2], [alpha2, -alpha1]]), kind)


def nonhermitian_coin(alpha1: float, alpha2: float) -> CoinOp:
    """Leaky coin ``[[a1, a2], [a2, -a1]]`` with ``a1, a2 >= 0`` and ``a1^2 + a2^2 <= 1``.

    The ordering ``a2 < a1`` is deliberately not enforced. The returned kind is
    ``HERMITIAN_UNITARY`` when the pair lies on the unit circle within 1e-12.
    """
    alpha1 = float(alpha1)
    alpha2 = float(alpha2)
    if not (math.isfinite(alpha1) and math.isfinite(alpha2)):
        raise ValueError(f"coin entries must be finite, got ({alpha1}, {alpha2})")
    if alpha1 < 0.0 or alpha2 < 0.0:
        raise ValueError(f"coin entries must be non-negative, got ({alpha1}, {alpha2})")
    return _leaky_coin(alpha1, alpha2, NORM_ATOL)


def _is_exceptional(V: float, lam: float) -> bool:
    return abs(lam - 4.0 * V) <= EXCEPTIONAL_RTOL * max(1.0, 4.0 * V)


def dimer_coin_amplitudes(V: float, lam: float, tau: float) -> tuple[float, float]:
    """Coin entries from the resonant dimer with leak ``lam`` on one site only.

    With the leaky site carrying rate ``lam`` and the other none, the mean and
    half-difference decay rates are both ``lam / 2`` and::

        w  = sqrt(4 V^2 - lam^2 / 4)
        a1 = exp(-lam tau / 4) [cos(w tau) - lam / (4 w) sin(w tau)]
        a2 = exp(-lam tau / 4) (V / w) sin(w tau)

    Above ``lam = 4V`` the trigonometric functions become hyperbolic with
    ``w = sqrt(lam^2 / 4 - 4 V^2)``; at ``lam = 4V`` the removable singularity
    is replaced by its limit ``a1 = e^{-lam tau/4}(1 - lam tau / 4)``,
    ``a2 = e^{-lam tau/4} V tau``.
    """
    V = float(V)
    lam = float(lam)
    tau = float(tau)
    if not V > 0.0:
        raise ValueError(f"tunneling energy V must be positive, got {V}")
    if lam < 0.0:
        raise ValueError(f"leak rate lambda must be non-negative, got {lam}")
    if tau < 0.0:
        raise ValueError(f"walk time tau must be non-negative, got {tau}")

    env = math.exp(-lam * tau / 4.0)
    if _is_exceptional(V, lam):
        return env * (1.0 - lam * tau / 4.0), env * V * tau
    disc = 4.0 * V * V - lam * lam / 4.0
    if disc > 0.0:
        w = math.sqrt(disc)
        c, s = math.cos(w * tau), math.sin(w * tau)
    else:
        w = math.sqrt(-disc)
        c, s = math.cosh(w * tau), math.sinh(w * tau)
    return env * (c - lam / (4.0 * w) * s), env * (V / w) * s


def dimer_coin(V: float, lam: float, tau: float) -> CoinOp:
    """Leaky coin whose entries follow the dimer site amplitudes after time ``tau``.

    Raises
    ------
    ValueError
        For ``V <= 0``, ``lam < 0`` or ``tau < 0``.
    CoinConsistencyError
        If the pair is not admissible. This happens with the hyperbolic branch
        once ``lam > 8 V / sqrt(3)`` and ``tau`` is large enough, where the
        growing ``sinh``/``cosh`` outrun the ``exp(-lam tau / 4)`` envelope.
    """
    try:
        a1, a2 = dimer_coin_amplitudes(V, lam, tau)
    except OverflowError as exc:
        raise CoinConsistencyError(
            f"dimer coin at V={V}, lambda={lam}, tau={tau} overflows"
        ) from exc
    n = a1 * a1 + a2 * a2
    if not n <= 1.0 + DIMER_NORM_ATOL:
        raise CoinConsistencyError(
            f"dimer coin at V={V}, lambda={lam}, tau={tau} has alpha1^2 + alpha2^2 = {n!r} > 1"
        )
    # signs are kept: both entries oscillate through zero in the coherent regime
    return _leaky_coin(a1, a2, DIMER_NORM_ATOL)
