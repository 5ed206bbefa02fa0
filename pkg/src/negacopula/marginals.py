"""Univariate marginal families: evaluation, quantiles, and ML fitting.

Five families are supported.  Exponential, Weibull, Gamma and Lognormal are
the fitting candidates; the piecewise power-law family (``BaselineY``) is the
second margin of the baseline joint distribution and exists as a round-trip
oracle only, so it has no fitting routine.

Gamma is parameterized by shape and scale.  Special functions (log-gamma,
digamma, regularized incomplete gamma and its inverse) come from
``scipy.special``, which exceeds the 1e-12 accuracy needed for quantiles
feeding the sampler.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

__all__ = [
    "NonPositiveData",
    "FailedConvergence",
    "Exponential",
    "Weibull",
    "Gamma",
    "Lognormal",
    "BaselineY",
    "FitResult",
    "mle_fit",
    "select_by_aic",
    "FIT_FAMILIES",
    "family_from_dict",
]

_NEWTON_TOL = 1e-10
_NEWTON_MAXITER = 100


class NonPositiveData(ValueError):
    """Raised when a positive-support family is fit to non-positive data."""


class FailedConvergence(RuntimeError):
    """Raised when an MLE iteration fails to converge.

    Carries the last iterate and gradient norm for diagnosis.
    """

    def __init__(self, message, last_iterate=None, gradient_norm=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.gradient_norm = gradient_norm


def _check_support(x, strict=True):
    x = np.asarray(x, dtype=float)
    bad = x < 0.0 if not strict else x <= 0.0
    if np.any(bad):
        raise ValueError("value outside the support of the distribution")
    return x


def _check_prob(p):
    p = np.asarray(p, dtype=float)
    if np.any((p < 0.0) | (p > 1.0)):
        raise ValueError("probability must lie in [0, 1]")
    return p


@dataclass(frozen=True)
class Exponential:
    """Exponential with rate ``rate``: F(x) = 1 - exp(-rate*x)."""

    rate: float
    family = "exponential"
    n_params = 1

    def __post_init__(self):
        if not (self.rate > 0):
            raise ValueError("rate must be positive")

    def cdf(self, x):
        return -np.expm1(-self.rate * _check_support(x, strict=False))

    def pdf(self, x):
        return self.rate * np.exp(-self.rate * _check_support(x, strict=False))

    def log_pdf(self, x):
        return math.log(self.rate) - self.rate * _check_support(x, strict=False)

    def quantile(self, p):
        return -np.log1p(-_check_prob(p)) / self.rate

    @property
    def params(self):
        return {"rate": self.rate}


@dataclass(frozen=True)
class Weibull:
    """Weibull with rate and shape: F(x) = 1 - exp(-(rate*x)**shape)."""

    rate: float
    shape: float
    family = "weibull"
    n_params = 2

    def __post_init__(self):
        if not (self.rate > 0 and self.shape > 0):
            raise ValueError("rate and shape must be positive")

    def cdf(self, x):
        return -np.expm1(-((self.rate * _check_support(x, strict=False)) ** self.shape))

    def pdf(self, x):
        x = _check_support(x, strict=False)
        z = self.rate * x
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.shape * self.rate * z ** (self.shape - 1.0) * np.exp(-(z**self.shape))
        return np.where(x == 0.0, 0.0 if self.shape > 1 else out, out)

    def log_pdf(self, x):
        x = _check_support(x)
        z = self.rate * x
        return (
            math.log(self.shape)
            + math.log(self.rate)
            + (self.shape - 1.0) * np.log(z)
            - z**self.shape
        )

    def quantile(self, p):
        return (-np.log1p(-_check_prob(p))) ** (1.0 / self.shape) / self.rate

    @property
    def params(self):
        return {"rate": self.rate, "shape": self.shape}


@dataclass(frozen=True)
class Gamma:
    """Gamma with shape and scale; CDF is the regularized incomplete gamma."""

    shape: float
    scale: float
    family = "gamma"
    n_params = 2

    def __post_init__(self):
        if not (self.shape > 0 and self.scale > 0):
            raise ValueError("shape and scale must be positive")

    def cdf(self, x):
        return special.gammainc(self.shape, _check_support(x, strict=False) / self.scale)

    def pdf(self, x):
        x = _check_support(x, strict=False)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.exp(self.log_pdf(np.where(x > 0, x, 1.0)))
        return np.where(x > 0, out, 0.0)

    def log_pdf(self, x):
        x = _check_support(x)
        a, s = self.shape, self.scale
        return (a - 1.0) * np.log(x) - x / s - special.gammaln(a) - a * math.log(s)

    def quantile(self, p):
        return self.scale * special.gammaincinv(self.shape, _check_prob(p))

    @property
    def params(self):
        return {"shape": self.shape, "scale": self.scale}


@dataclass(frozen=True)
class Lognormal:
    """Lognormal: log X is normal with mean ``mu`` and sd ``sigma``."""

    mu: float
    sigma: float
    family = "lognormal"
    n_params = 2

    def __post_init__(self):
        if not (self.sigma > 0):
            raise ValueError("sigma must be positive")

    def _z(self, x):
        x = _check_support(x, strict=False)
        with np.errstate(divide="ignore"):
            return (np.log(x) - self.mu) / self.sigma

    def cdf(self, x):
        return np.where(np.asarray(x, float) > 0, special.ndtr(self._z(np.maximum(x, 1e-300))), 0.0)

    def pdf(self, x):
        x = _check_support(x, strict=False)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.exp(self.log_pdf(np.where(x > 0, x, 1.0)))
        return np.where(x > 0, out, 0.0)

    def log_pdf(self, x):
        x = _check_support(x)
        z = (np.log(x) - self.mu) / self.sigma
        return -0.5 * z**2 - np.log(x) - math.log(self.sigma) - 0.5 * math.log(2.0 * math.pi)

    def quantile(self, p):
        return np.exp(self.mu + self.sigma * special.ndtri(_check_prob(p)))

    @property
    def params(self):
        return {"mu": self.mu, "sigma": self.sigma}


@dataclass(frozen=True)
class BaselineY:
    """Piecewise power-law margin of the baseline joint distribution.

    CDF is ``mu/(lam+mu) * y**lam`` on (0, 1] and ``1 - lam/((lam+mu)*y**mu)``
    beyond 1.  Used as the second margin in the round-trip oracle; not fit.
    """

    lam: float
    mu: float
    family = "baseline_y"
    n_params = 2

    def __post_init__(self):
        if not (self.lam > 0 and self.mu > 0):
            raise ValueError("lam and mu must be positive")

    def cdf(self, y):
        y = _check_support(y, strict=False)
        lam, mu = self.lam, self.mu
        with np.errstate(divide="ignore", over="ignore"):
            low = mu / (lam + mu) * y**lam
            high = 1.0 - lam / ((lam + mu) * np.where(y > 0, y, 1.0) ** mu)
        return np.where(y <= 1.0, low, high)

    def pdf(self, y):
        y = _check_support(y, strict=False)
        lam, mu = self.lam, self.mu
        coeff = lam * mu / (lam + mu)
        with np.errstate(divide="ignore", over="ignore"):
            low = coeff * np.where(y > 0, y, 1.0) ** (lam - 1.0)
            high = coeff * np.where(y > 0, y, 1.0) ** (-(mu + 1.0))
        out = np.where(y <= 1.0, low, high)
        return np.where(y > 0, out, 0.0)

    def log_pdf(self, y):
        return np.log(self.pdf(_check_support(y)))

    def quantile(self, p):
        p = _check_prob(p)
        lam, mu = self.lam, self.mu
        split = mu / (lam + mu)
        with np.errstate(divide="ignore"):
            low = (p * (lam + mu) / mu) ** (1.0 / lam)
            high = (lam / ((lam + mu) * np.maximum(1.0 - p, 1e-300))) ** (1.0 / mu)
        out = np.where(p <= split, low, high)
        if np.ndim(p) == 0:
            return float(out)
        return out

    @property
    def params(self):
        return {"lam": self.lam, "mu": self.mu}


@dataclass(frozen=True)
class FitResult:
    """A fitted marginal with its likelihood and AIC (2k - 2*loglik)."""

    model: object
    log_likelihood: float
    aic: float
    n: int
    aic_table: dict = field(default=None, compare=False)
    warnings: tuple = ()


def _positive_data(data):
    x = np.asarray(data, dtype=float)
    if x.ndim != 1:
        x = x.ravel()
    if x.size < 2:
        raise ValueError("need at least 2 observations")
    if not np.all(np.isfinite(x)):
        raise NonPositiveData("data contains non-finite values")
    if np.any(x <= 0.0):
        raise NonPositiveData("data must be strictly positive")
    return x


def _result(model, x):
    ll = float(np.sum(model.log_pdf(x)))
    return FitResult(model=model, log_likelihood=ll, aic=2.0 * model.n_params - 2.0 * ll, n=len(x))


def _fit_exponential(x):
    return _result(Exponential(rate=1.0 / float(np.mean(x))), x)


def _fit_lognormal(x):
    logs = np.log(x)
    mu = float(np.mean(logs))
    sigma = float(np.std(logs))
    if sigma <= 1e-12 * max(1.0, abs(mu)):
        raise FailedConvergence("degenerate data: zero variance on the log scale")
    return _result(Lognormal(mu=mu, sigma=sigma), x)


def _fit_gamma(x):
    # Newton on the profile shape equation log(a) - digamma(a) = s with a
    # method-of-moments style initializer; scale follows in closed form.
    xbar = float(np.mean(x))
    s = math.log(xbar) - float(np.mean(np.log(x)))
    if s <= 0.0:
        raise FailedConvergence("degenerate data for gamma fit", last_iterate=None)
    a = (3.0 - s + math.sqrt((s - 3.0) ** 2 + 24.0 * s)) / (12.0 * s)
    grad = math.inf
    for _ in range(_NEWTON_MAXITER):
        grad = math.log(a) - special.digamma(a) - s
        step = grad / (1.0 / a - special.polygamma(1, a))
        a_new = a - step
        if a_new <= 0.0:
            a_new = a / 2.0
        if abs(a_new - a) <= _NEWTON_TOL * max(1.0, a):
            a = a_new
            break
        a = a_new
    else:
        raise FailedConvergence(
            "gamma shape iteration did not converge",
            last_iterate=a,
            gradient_norm=abs(grad),
        )
    return _result(Gamma(shape=float(a), scale=xbar / float(a)), x)


def _fit_weibull(x):
    # Profile likelihood in the shape; the rate then has a closed form.
    logx = np.log(x)
    mean_log = float(np.mean(logx))
    # initializer from the log-scale spread (extreme-value moment relation)
    sd_log = float(np.std(logx))
    d = math.pi / (sd_log * math.sqrt(6.0)) if sd_log > 0 else 1.0
    grad = math.inf
    for _ in range(_NEWTON_MAXITER):
        xd = x**d
        sw = float(np.sum(xd))
        s1 = float(np.sum(xd * logx))
        s2 = float(np.sum(xd * logx**2))
        grad = s1 / sw - 1.0 / d - mean_log
        dgrad = (s2 * sw - s1 * s1) / sw**2 + 1.0 / d**2
        step = grad / dgrad
        d_new = d - step
        if d_new <= 0.0:
            d_new = d / 2.0
        if abs(d_new - d) <= _NEWTON_TOL * max(1.0, d):
            d = d_new
            break
        d = d_new
    else:
        raise FailedConvergence(
            "weibull shape iteration did not converge",
            last_iterate=d,
            gradient_norm=abs(grad),
        )
    rate = (len(x) / float(np.sum(x**d))) ** (1.0 / d)
    return _result(Weibull(rate=float(rate), shape=float(d)), x)


FIT_FAMILIES = {
    "exponential": _fit_exponential,
    "weibull": _fit_weibull,
    "gamma": _fit_gamma,
    "lognormal": _fit_lognormal,
}

_FAMILY_TYPES = {
    "exponential": Exponential,
    "weibull": Weibull,
    "gamma": Gamma,
    "lognormal": Lognormal,
    "baseline_y": BaselineY,
}


def family_from_dict(family, params):
    """Rebuild a marginal model from its family name and parameter dict."""
    try:
        cls = _FAMILY_TYPES[family]
    except KeyError:
        raise ValueError(f"unknown family {family!r}") from None
    return cls(**params)


def mle_fit(family, data):
    """Maximum-likelihood fit of one family to strictly positive data."""
    try:
        fitter = FIT_FAMILIES[family]
    except KeyError:
        raise ValueError(
            f"unknown or unfittable family {family!r}; choose from {sorted(FIT_FAMILIES)}"
        ) from None
    return fitter(_positive_data(data))


def select_by_aic(data, families):
    """Fit every candidate family and return the minimum-AIC result.

    The returned :class:`FitResult` carries the full AIC table; families that
    fail to converge are excluded and flagged in ``warnings``.
    """
    families = list(families)
    if len(families) < 2:
        raise ValueError("need at least 2 candidate families")
    x = _positive_data(data)
    fits = {}
    failed = []
    for fam in families:
        try:
            fits[fam] = mle_fit(fam, x)
        except FailedConvergence:
            failed.append(fam)
    if not fits:
        raise FailedConvergence("no candidate family converged")
    table = {fam: fit.aic for fam, fit in fits.items()}
    best_family = min(table, key=table.get)
    best = fits[best_family]
    return FitResult(
        model=best.model,
        log_likelihood=best.log_likelihood,
        aic=best.aic,
        n=best.n,
        aic_table=table,
        warnings=tuple(f"{fam}: failed to converge, excluded" for fam in failed),
    )
