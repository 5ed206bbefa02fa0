"""Scikit-learn compatible estimator wrappers.

Thin adapters over the functional core so the copula composes with the
wider ecosystem (``get_params``/``set_params``, fit attributes with trailing
underscores, array-in/array-out methods).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from . import copula, estimation, sampling
from .bivariate import BivariateModel

__all__ = ["NegativeDependenceCopula", "BivariateCopulaModel"]


class NegativeDependenceCopula(BaseEstimator):
    """The copula itself, fit on bivariate data by rank inversion.

    Parameters
    ----------
    theta : float, optional
        Fix the dependence parameter instead of estimating it.
    method : {"rho_inversion", "tau_inversion"}
        Rank-inversion method used when ``theta`` is not given.

    Attributes
    ----------
    theta_ : float
        The (estimated or fixed) dependence parameter after ``fit``.
    """

    def __init__(self, theta=None, method="rho_inversion"):
        self.theta = theta
        self.method = method

    def _validate(self, X):
        return check_array(X, ensure_min_samples=1, ensure_2d=True)

    def fit(self, X, y=None):
        """Fit from an (n, 2) array of paired observations.

        Any strictly increasing transform of either column leaves the fit
        unchanged; only ranks are used.
        """
        X = check_array(X, ensure_min_samples=3)
        if X.shape[1] != 2:
            raise ValueError("X must have exactly 2 columns")
        if self.theta is not None:
            self.theta_ = copula.check_theta(self.theta)
        else:
            data = estimation.PairedData(X[:, 0], X[:, 1])
            self.theta_ = estimation.estimate_theta(data, method=self.method)
        return self

    def cdf(self, X):
        """Copula CDF at (n, 2) points of the unit square."""
        check_is_fitted(self, "theta_")
        X = self._validate(X)
        return copula.cdf(X[:, 0], X[:, 1], self.theta_)

    def pdf(self, X):
        """Copula density at (n, 2) points of the unit square."""
        check_is_fitted(self, "theta_")
        X = self._validate(X)
        return copula.pdf(X[:, 0], X[:, 1], self.theta_)

    def sample(self, n, seed=0):
        """Draw an (n, 2) array of pairs by conditional inversion."""
        check_is_fitted(self, "theta_")
        return sampling.sample_copula(n, self.theta_, seed).pairs

    def dependence_measures(self):
        """Spearman's rho and Kendall's tau implied by the fitted theta."""
        check_is_fitted(self, "theta_")
        return {
            "rho": copula.spearman_rho(self.theta_),
            "tau": copula.kendall_tau(self.theta_),
        }


class BivariateCopulaModel(BaseEstimator):
    """Full two-stage pipeline as an estimator: marginals by AIC, theta by ranks.

    Parameters mirror :class:`negacopula.estimation.FitConfig`.  After ``fit``,
    ``report_`` holds the complete fit report and ``model_`` the composed
    bivariate model.
    """

    def __init__(
        self,
        families=estimation.DEFAULT_FAMILIES,
        method="rho_inversion",
        bootstrap_B=10000,
        seed=0,
        ks_compare_to="data_ecdf",
    ):
        self.families = families
        self.method = method
        self.bootstrap_B = bootstrap_B
        self.seed = seed
        self.ks_compare_to = ks_compare_to

    def fit(self, X, y=None):
        try:
            X = check_array(X, ensure_min_samples=3, ensure_all_finite=False)
        except TypeError:  # scikit-learn < 1.6
            X = check_array(X, ensure_min_samples=3, force_all_finite=False)
        if X.shape[1] != 2:
            raise ValueError("X must have exactly 2 columns")
        data = estimation.PairedData.from_columns(X[:, 0], X[:, 1])
        config = estimation.FitConfig(
            families=tuple(self.families),
            method=self.method,
            bootstrap_B=self.bootstrap_B,
            seed=self.seed,
            ks_compare_to=self.ks_compare_to,
        )
        self.report_ = estimation.fit_pipeline(data, config)
        self.model_ = self.report_.model
        self.theta_ = self.report_.theta_hat
        return self

    def joint_cdf(self, X):
        check_is_fitted(self, "model_")
        X = check_array(X)
        return np.asarray(self.model_.joint_cdf(X[:, 0], X[:, 1]))

    def conditional_cdf(self, y, x):
        """P[Y <= y | X = x] under the fitted model."""
        check_is_fitted(self, "model_")
        return self.model_.cond_cdf_y_given_x(y, x)

    def sample(self, n, seed=0):
        check_is_fitted(self, "model_")
        x, y = sampling.sample_bivariate(n, self.model_, seed)
        return np.column_stack([x, y])
