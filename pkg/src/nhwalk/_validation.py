"""Input checks shared by the estimator wrappers and the CLI."""

from __future__ import annotations

import numbers

import numpy as np
from sklearn.utils.validation import check_array

from .hilbert import InitialStateKind
from .walk import ShiftKind

COIN_FEATURES = {
    "hermitian": ("alpha",),
    "nonhermitian": ("alpha1", "alpha2"),
    "dimer": ("lambda", "tau"),
}


def check_positive_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def check_coin_family(coin: str) -> str:
    if coin not in COIN_FEATURES:
        raise ValueError(f"coin must be one of {sorted(COIN_FEATURES)}, got {coin!r}")
    return coin


def check_shift(shift) -> ShiftKind:
    try:
        return ShiftKind(shift)
    except ValueError:
        raise ValueError(
            f"shift must be one of {[k.value for k in ShiftKind]}, got {shift!r}"
        ) from None


def check_initial(initial) -> InitialStateKind:
    try:
        return InitialStateKind(initial)
    except ValueError:
        raise ValueError(
            f"initial must be one of {[k.value for k in InitialStateKind]}, got {initial!r}"
        ) from None


def check_coin_params(X, coin: str) -> np.ndarray:
    """Validate a 2-D array whose rows are coin parameters for ``coin``."""
    names = COIN_FEATURES[check_coin_family(coin)]
    X = check_array(X, dtype=np.float64, ensure_2d=True)
    if X.shape[1] != len(names):
        raise ValueError(
            f"{coin} coin expects {len(names)} column(s) {names}, got {X.shape[1]}"
        )
    if np.any(X < 0):
        raise ValueError(f"{coin} coin parameters must be non-negative")
    return X
