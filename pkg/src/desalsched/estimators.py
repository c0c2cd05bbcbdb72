"""scikit-learn compatible wrappers around the policy and the sampler."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .model import PlantConfig, Tariff
from .policy import ZONES, compute_thresholds
from .scenario import HOURS, HourlyStats, fit_hourly_stats, sample_matrix
from .sim import simulate_matrix

DISPATCH_COLUMNS = ("w_h", "w_r", "q_h", "q_r", "p_h", "g", "z")


def check_generation(X) -> np.ndarray:
    """Coerce renewable generation input to a 1-D float array.

    Accepts a scalar, a 1-D array, or a single-column 2-D array.
    """
    X = check_array(np.atleast_1d(X), ensure_2d=False, dtype=float, input_name="X")
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise ValueError(f"expected one generation column, got {X.shape[1]}")
        X = X[:, 0]
    if np.any(X < 0):
        raise ValueError("renewable generation must be >= 0")
    return X


def check_profiles(X) -> np.ndarray:
    X = check_array(X, dtype=float, input_name="X")
    if X.shape[1] != HOURS:
        raise ValueError(f"expected {HOURS} hourly columns, got {X.shape[1]}")
    if np.any(X < 0):
        raise ValueError("renewable generation must be >= 0")
    return X


class ThresholdDispatcher(TransformerMixin, BaseEstimator):
    """Optimal hourly dispatch as an estimator.

    ``fit`` computes the thresholds (no data needed); ``predict`` returns the
    optimal ``(w_h, w_r)`` per generation value; ``transform`` returns the
    full operating point with columns :data:`DISPATCH_COLUMNS`.

    Parameters
    ----------
    config : PlantConfig
    tariff : Tariff
    """

    def __init__(self, config: PlantConfig | None = None, tariff: Tariff | None = None):
        self.config = config
        self.tariff = tariff

    def fit(self, X=None, y=None):
        if self.config is None or self.tariff is None:
            raise ValueError("config and tariff are required")
        self.thresholds_ = compute_thresholds(self.config, self.tariff)
        self.regime_ = self.thresholds_.regime
        return self

    def _run(self, X):
        check_is_fitted(self, "thresholds_")
        return simulate_matrix(check_generation(X), self.thresholds_, self.config, self.tariff)

    def predict(self, X) -> np.ndarray:
        res = self._run(X)
        return np.column_stack([res["w_h"], res["w_r"]])

    def transform(self, X) -> np.ndarray:
        g = check_generation(X)
        res = self._run(g)
        res["g"] = g
        return np.column_stack([res[c] for c in DISPATCH_COLUMNS])

    def zones(self, X) -> np.ndarray:
        return np.array([ZONES[c].value for c in self._run(X)["zone"]])

    def profit(self, X) -> np.ndarray:
        return self._run(X)["profit"]

    def score(self, X, y=None) -> float:
        """Mean hourly profit over ``X``."""
        return float(np.mean(self.profit(X)))


class HourlyNormalSampler(BaseEstimator):
    """Fit hour-specific normals to daily profiles and draw new days.

    Draws are independent across hours and truncated at zero.
    """

    def __init__(self, random_state: int = 0):
        self.random_state = random_state

    def fit(self, X, y=None):
        self.stats_ = fit_hourly_stats(check_profiles(X))
        return self

    @classmethod
    def from_stats(cls, stats: HourlyStats, random_state: int = 0) -> "HourlyNormalSampler":
        est = cls(random_state=random_state)
        est.stats_ = stats
        return est

    def sample(self, n_samples: int = 1) -> np.ndarray:
        check_is_fitted(self, "stats_")
        return sample_matrix(self.stats_, n_samples, int(self.random_state))
