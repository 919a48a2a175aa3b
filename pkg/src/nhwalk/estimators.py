"""
scikit-learn compatible wrappers.

Each row of ``X`` holds the parameters of one coin; the transformers map it to
a walk observable, so parameter scans can be dropped into pipelines,
``FunctionTransformer`` chains or joblib-parallel grid evaluation.

>>> import numpy as np
>>> from nhwalk.estimators import WalkDistributionTransformer
>>> X = np.array([[0.0, 1.0], [0.15, 1.0]])      # (lambda, tau) rows
>>> walk = WalkDistributionTransformer(coin="dimer", n_steps=40).fit(X)
>>> walk.transform(X).shape
(2, 81)
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import (
    COIN_FEATURES,
    check_coin_params,
    check_initial,
    check_positive_int,
    check_shift,
)
from .analysis import von_neumann_entropy_avg
from .coin import dimer_coin, hermitian_coin, nonhermitian_coin
from .hilbert import new_state, position_distribution
from .walk import evolve

__all__ = ["WalkDistributionTransformer", "WalkEntropyTransformer", "make_coin"]


def make_coin(coin: str, row, V: float = 1.0):
    """Build a coin of family ``coin`` from one parameter row."""
    if coin == "hermitian":
        return hermitian_coin(row[0])
    if coin == "nonhermitian":
        return nonhermitian_coin(row[0], row[1])
    return dimer_coin(V, row[0], row[1])


class _WalkBase(TransformerMixin, BaseEstimator):
    def __init__(self, coin="dimer", n_steps=40, V=1.0, shift="generalized",
                 initial="localized"):
        self.coin = coin
        self.n_steps = n_steps
        self.V = V
        self.shift = shift
        self.initial = initial

    def fit(self, X, y=None):
        """Validate hyperparameters and the shape of ``X``. Nothing is learned."""
        check_positive_int(self.n_steps, "n_steps")
        check_shift(self.shift)
        check_initial(self.initial)
        if not self.V > 0:
            raise ValueError(f"V must be positive, got {self.V!r}")
        X = check_coin_params(X, self.coin)
        self.n_features_in_ = X.shape[1]
        self.feature_names_in_coin_ = COIN_FEATURES[self.coin]
        self.positions_ = np.arange(-self.n_steps, self.n_steps + 1)
        return self

    def _distributions(self, X):
        check_is_fitted(self, "positions_")
        X = check_coin_params(X, self.coin)
        if X.shape[1] != self.n_features_in_:
            raise ValueError("X has a different number of columns than during fit")
        shift = check_shift(self.shift)
        start = new_state(check_initial(self.initial), self.n_steps)
        out = np.empty((X.shape[0], self.positions_.size))
        for i, row in enumerate(X):
            trace = evolve(start, make_coin(self.coin, row, self.V), shift, self.n_steps)
            out[i] = position_distribution(trace.final)
        return out


class WalkDistributionTransformer(_WalkBase):
    """Map coin parameters to the (unnormalized) position distribution.

    Parameters
    ----------
    coin : {"dimer", "hermitian", "nonhermitian"}
        Coin family; fixes the expected columns of ``X``: ``(lambda, tau)``,
        ``(alpha,)`` or ``(alpha1, alpha2)`` respectively.
    n_steps : int
        Walk length. Output has ``2 * n_steps + 1`` columns, positions
        ``-n_steps .. n_steps`` (see ``positions_``).
    V : float
        Tunneling energy used by the dimer family.
    shift : {"generalized", "conditional"}
    initial : {"localized", "symmetric"}
    """

    def transform(self, X):
        return self._distributions(X)


class WalkEntropyTransformer(_WalkBase):
    """Map coin parameters to the step-averaged site occupation entropy (one column)."""

    def __init__(self, coin="dimer", n_steps=50, V=1.0, shift="generalized",
                 initial="localized"):
        super().__init__(coin=coin, n_steps=n_steps, V=V, shift=shift, initial=initial)

    def transform(self, X):
        dists = self._distributions(X)
        return np.array([[von_neumann_entropy_avg(d, self.n_steps)] for d in dists])
