"""scikit-learn style wrappers around the constants and clustering search."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .chain import steady_state, validate_generator
from .coarse import clustering_search, pushforward
from .constants import constant_report


class GeneralisedConstants(BaseEstimator):
    """Fit Poincare and log-Sobolev constants of a rate matrix.

    Parameters
    ----------
    reference : array_like, optional
        Reference measure; the steady state of the fitted chain if omitted.
    which : str
        Subset passed to :func:`markovfi.constants.constant_report`.
    seed, restarts : int
        Optimizer settings.

    Attributes
    ----------
    gpi_, glsi_, slsi_ : float or None
    report_ : ConstantReport
    """

    def __init__(self, reference=None, which="all", seed=0, restarts=16):
        self.reference = reference
        self.which = which
        self.seed = seed
        self.restarts = restarts

    def fit(self, X, y=None):
        """``X`` is the ``(n, n)`` rate matrix; ``y`` is ignored."""
        M = validate_generator(np.asarray(X, dtype=float))
        zeta = (steady_state(M).weights if self.reference is None
                else np.asarray(self.reference, dtype=float))
        self.report_ = constant_report(zeta, M, which=self.which, seed=self.seed,
                                       restarts=self.restarts)
        self.gpi_ = self.report_.gpi
        self.glsi_ = self.report_.glsi_estimate
        self.slsi_ = self.report_.slsi_estimate
        self.n_states_ = M.size
        return self


class ClusteringSearch(TransformerMixin, BaseEstimator):
    """Best partition of the states by quality score.

    ``fit`` takes the rate matrix; ``transform`` maps rows of fine
    distributions to their cluster masses under the best partition.

    Attributes
    ----------
    labels_ : ndarray of int
        Cluster index of each state in the best partition.
    alpha_ : float
        Its quality score.
    ranking_ : SearchResult
    """

    def __init__(self, n_clusters=2, max_states=12, budget=None):
        self.n_clusters = n_clusters
        self.max_states = max_states
        self.budget = budget

    def fit(self, X, y=None):
        M = validate_generator(np.asarray(X, dtype=float))
        self.ranking_ = clustering_search(M, self.n_clusters,
                                          max_states=self.max_states,
                                          budget=self.budget)
        if not self.ranking_.ranking:
            raise ValueError("no admissible partition")
        self.map_, self.alpha_ = self.ranking_.best
        self.labels_ = np.asarray(self.map_.assignment)
        self.n_features_in_ = M.size
        return self

    def transform(self, X):
        check_is_fitted(self, "map_")
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.array([pushforward(self.map_, row) for row in X])
