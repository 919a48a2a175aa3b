"""
Dissipative two-site exciton model (hbar = 1).

Sites ``l`` and ``m`` with energies ``E_l``, ``E_m``, leak rates ``gamma_l``,
``gamma_m`` and real tunneling ``V``. The effective Hamiltonian is::

    H_eff = [[E_l - i gamma_l / 2, V],
             [V, E_m - i gamma_m / 2]]

Two routes to the transfer probabilities are provided and deliberately kept
separate: closed forms (``transfer_prob_general``, ``resonance_probs``) and a
direct matrix exponential of ``H_eff`` (``propagator_oracle``). They do not
agree everywhere; see ``transfer_prob_general``.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "DimerParams",
    "Regime",
    "greens_inverse",
    "transfer_prob_general",
    "resonance_probs",
    "classify_regime",
    "propagator_oracle",
]

REGIME_RTOL = 1e-9


class Regime(enum.Enum):
    COHERENT = "coherent"
    EXCEPTIONAL = "exceptional"
    INCOHERENT = "incoherent"


@dataclass(frozen=True)
class DimerParams:
    V: float
    gamma_l: float = 0.0
    gamma_m: float = 0.0
    E_l: float = 0.0
    E_m: float = 0.0

    def __post_init__(self):
        if not self.V > 0:
            raise ValueError(f"tunneling energy V must be positive, got {self.V}")
        if self.gamma_l < 0 or self.gamma_m < 0:
            raise ValueError("leak rates must be non-negative")

    @classmethod
    def from_leak(cls, V: float, lam: float) -> DimerParams:
        """Resonant dimer with all the leakage on site ``m``, as used by the dimer coin."""
        return cls(V=V, gamma_l=0.0, gamma_m=lam)

    @property
    def E0(self) -> float:
        return self.E_m - self.E_l

    @property
    def gamma_d(self) -> float:
        return 0.5 * (self.gamma_l + self.gamma_m)

    @property
    def gamma_bar(self) -> float:
        return 0.5 * (self.gamma_m - self.gamma_l)

    @property
    def Omega(self) -> complex:
        """Principal root of ``4 V^2 + (E0 - i gamma_bar)^2`` (real part >= 0)."""
        return cmath.sqrt(4 * self.V**2 + (self.E0 - 1j * self.gamma_bar) ** 2)

    @property
    def Omega0(self) -> float:
        """``sqrt(|4 V^2 - gamma_bar^2|)``; the frequency of the resonant closed forms."""
        return math.sqrt(abs(4 * self.V**2 - self.gamma_bar**2))

    @property
    def H_eff(self) -> NDArray[np.complex128]:
        return np.array(
            [
                [self.E_l - 0.5j * self.gamma_l, self.V],
                [self.V, self.E_m - 0.5j * self.gamma_m],
            ],
            dtype=np.complex128,
        )


def greens_inverse(E: float, params: DimerParams, eta: float = 1e-9) -> NDArray[np.complex128]:
    """Inverse retarded Green's function ``G^{-1}(E)`` of the dimer."""
    if not eta > 0:
        raise ValueError("eta must be positive")
    p = params
    return np.array(
        [
            [E - p.E_l + 1j * eta + 0.5j * p.gamma_l, -p.V],
            [-p.V, E - p.E_m + 1j * eta + 0.5j * p.gamma_m],
        ],
        dtype=np.complex128,
    )


def transfer_prob_general(params: DimerParams, t: float) -> float:
    """Closed-form ``l -> m`` transfer probability for arbitrary detuning.

    ``P(t) = 2 V^2 / |Omega|^2 * exp(-gamma_d t) * (cosh(Omega_i t) - cos(Omega_r t))``.

    At resonance without leakage this gives ``sin^2(V t)``, which is what the
    matrix exponential gives; ``resonance_probs`` instead gives
    ``sin^2(2 V t) / 4`` there. Both forms are kept as written.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    om = params.Omega
    mag2 = om.real**2 + om.imag**2
    return (
        2 * params.V**2 / mag2
        * math.exp(-params.gamma_d * t)
        * (math.cosh(om.imag * t) - math.cos(om.real * t))
    )


def classify_regime(params: DimerParams) -> Regime:
    """Coherent when ``V > gamma_bar / 2``, incoherent when below, exceptional at equality."""
    half = params.gamma_bar / 2
    if abs(params.V - half) <= REGIME_RTOL * max(1.0, params.V):
        return Regime.EXCEPTIONAL
    return Regime.COHERENT if params.V > half else Regime.INCOHERENT


def resonance_probs(V: float, gamma_l: float, gamma_m: float, t: float) -> tuple[float, float]:
    """Survival and transfer probabilities ``(P_ll, P_lm)`` at resonance (``E0 = 0``)."""
    if t < 0:
        raise ValueError("t must be non-negative")
    params = DimerParams(V=V, gamma_l=gamma_l, gamma_m=gamma_m)
    gd, gb = params.gamma_d, params.gamma_bar
    env = math.exp(-gd * t)
    regime = classify_regime(params)
    if regime is Regime.EXCEPTIONAL:
        return env * (1 - gb * t / 2) ** 2, env * V**2 * t**2
    w = params.Omega0
    if regime is Regime.COHERENT:
        c, s = math.cos(w * t), math.sin(w * t)
    else:
        c, s = math.cosh(w * t), math.sinh(w * t)
    p_ll = env * (c - gb / (2 * w) * s) ** 2
    p_lm = env * (V / w) ** 2 * s**2
    return p_ll, p_lm


def propagator_oracle(params: DimerParams, t: float) -> NDArray[np.complex128]:
    """``exp(-i H_eff t)`` computed from the spectral decomposition of ``H_eff``.

    Writing ``H_eff = c I + K`` with ``c = tr(H)/2`` and traceless ``K``,
    ``K^2 = q I`` where ``q = -det K``; the two eigenvalues are ``c +- sqrt(q)``
    and the projector expansion collapses to::

        exp(-i H t) = exp(-i c t) [cos(r t) I - i sin(r t) / r K],  r = sqrt(q)

    At the exceptional point ``q = 0``, ``H_eff`` is a Jordan block and the
    bracket reduces to ``I - i t K``; the ``sin(r t)/r`` factor is taken from
    its Taylor series whenever ``|r t|`` is small, so both cases share one path.

    Entry ``[m, l]`` (row 1, column 0) is the amplitude to find the excitation
    on site ``m`` having started on ``l``.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    H = params.H_eff
    c = 0.5 * (H[0, 0] + H[1, 1])
    K = H - c * np.eye(2)
    q = K[0, 0] ** 2 + K[0, 1] * K[1, 0]
    r = cmath.sqrt(q)
    z = r * t
    if abs(z) < 1e-4:
        z2 = z * z
        cos_z = 1 - z2 / 2 + z2 * z2 / 24
        sinc = t * (1 - z2 / 6 + z2 * z2 / 120)
    else:
        cos_z = cmath.cos(z)
        sinc = cmath.sin(z) / r
    return cmath.exp(-1j * c * t) * (cos_z * np.eye(2) - 1j * sinc * K)
