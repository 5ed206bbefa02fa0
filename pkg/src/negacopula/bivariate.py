"""Sklar composition of the copula with marginal models.

``BivariateModel`` is the production path: joint CDF/density and conditional
distributions are always computed as the copula evaluated at the marginal
CDFs.  The closed-form example densities (bivariate Weibull, bivariate Gamma,
and the baseline joint CDF) are kept as independent oracles for verification
only; they must agree with the composition wherever both are defined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from . import copula
from .marginals import BaselineY, Exponential

__all__ = [
    "BivariateModel",
    "baseline_joint_cdf",
    "baseline_model",
    "weibull_joint_pdf",
    "gamma_joint_pdf",
]


@dataclass(frozen=True)
class BivariateModel:
    """Two marginal models coupled by the negative-dependence copula."""

    margin_x: object
    margin_y: object
    theta: float

    def __post_init__(self):
        copula.check_theta(self.theta)

    def joint_cdf(self, x, y):
        """H(x, y) = C_theta(F(x), G(y))."""
        return copula.cdf(self.margin_x.cdf(x), self.margin_y.cdf(y), self.theta)

    def joint_pdf(self, x, y):
        """h(x, y) = c_theta(F(x), G(y)) * f(x) * g(y)."""
        u = np.clip(self.margin_x.cdf(x), 0.0, 1.0)
        v = np.clip(self.margin_y.cdf(y), 0.0, 1.0)
        return copula.pdf(u, v, self.theta) * self.margin_x.pdf(x) * self.margin_y.pdf(y)

    def cond_cdf_y_given_x(self, y, x):
        """P[Y <= y | X = x], the copula conditional pushed through the margins."""
        u = float(np.clip(self.margin_x.cdf(x), 1e-15, 1.0 - 1e-15))
        v = np.clip(self.margin_y.cdf(y), 1e-15, 1.0 - 1e-15)
        return copula.cond_cdf_v_given_u(v, u, self.theta)


def baseline_model(lam, theta):
    """The baseline pair: Exponential(lam) against BaselineY(lam, theta*lam)."""
    return BivariateModel(
        margin_x=Exponential(rate=lam),
        margin_y=BaselineY(lam=lam, mu=theta * lam),
        theta=theta,
    )


def baseline_joint_cdf(x, y, lam, theta):
    """Closed-form baseline joint CDF H(x, y); round-trip oracle.

    Defined for x > 0, y > 0 with mu = theta*lam.  The first-branch
    exponential carries a negative exponent, exp(-(lam+mu)x); the sign makes
    H vanish on the support boundary x = -log(y) and recover the margin as
    x grows.
    """
    lam = float(lam)
    mu = float(theta) * lam
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x, y = np.broadcast_arrays(x, y)

    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        safe_y = np.where(y > 0, y, 1.0)
        low = (
            safe_y**lam
            - np.exp(-lam * x)
            + lam
            / ((lam + mu) * safe_y**mu)
            * (np.exp(-(lam + mu) * x) - safe_y ** (lam + mu))
        )
        high = 1.0 - np.exp(-lam * x) - lam / ((lam + mu) * safe_y**mu) * (
            1.0 - np.exp(-(lam + mu) * x)
        )

    out = np.where(y <= 1.0, low, high)
    # below the support curve x <= -log(y) (only reachable for y <= 1)
    void = (y <= 1.0) & (x <= -np.log(safe_y))
    out = np.where(void | (x <= 0.0) | (y <= 0.0), 0.0, out)
    if out.ndim == 0:
        return float(out)
    return out


def weibull_joint_pdf(x, y, rate1, shape1, rate2, shape2, theta):
    """Closed-form bivariate Weibull density; oracle for the composition.

    Margins are Weibull(rate_i, shape_i).  The power-law branch carries the
    factor exp(-(rate2*y)**shape2) contributed by the second marginal
    density.
    """
    theta = copula.check_theta(theta)
    x = float(x)
    y = float(y)
    if x <= 0.0 or y <= 0.0:
        return 0.0
    zx = (rate1 * x) ** shape1
    zy = (rate2 * y) ** shape2
    v = -math.expm1(-zy)  # G(y)
    a = theta / (1.0 + theta)
    coeff = shape1 * shape2 * rate1**shape1 * rate2**shape2
    if v <= theta * math.exp(-zx) / (1.0 + theta):
        return 0.0
    if v <= a:
        return (
            coeff
            * theta ** (1.0 + theta)
            / (1.0 + theta) ** theta
            * x ** (shape1 - 1.0)
            * y ** (shape2 - 1.0)
            * math.exp(-zy)
            * (math.exp(-zx) / v) ** (1.0 + theta)
        )
    return (
        coeff
        * (1.0 + theta)
        * x ** (shape1 - 1.0)
        * y ** (shape2 - 1.0)
        * math.exp(-zy)
        * math.exp(-zx) ** (1.0 + theta)
    )


def gamma_joint_pdf(x, y, shape1, rate1, shape2, rate2, theta):
    """Closed-form bivariate Gamma density; oracle for the composition.

    Margins are Gamma with shapes alpha_i and *rates* beta_i (the scale is
    1/beta_i).  Regularized incomplete gamma ratios come from scipy.
    """
    theta = copula.check_theta(theta)
    x = float(x)
    y = float(y)
    if x <= 0.0 or y <= 0.0:
        return 0.0
    px = special.gammainc(shape1, rate1 * x)  # F(x)
    py = special.gammainc(shape2, rate2 * y)  # G(y)
    a = theta / (1.0 + theta)
    base = (
        rate1**shape1
        * rate2**shape2
        * x ** (shape1 - 1.0)
        * y ** (shape2 - 1.0)
        * math.exp(-(rate1 * x + rate2 * y))
        / (special.gamma(shape1) * special.gamma(shape2))
    )
    if py <= theta * (1.0 - px) / (1.0 + theta):
        return 0.0
    if py <= a:
        return (
            base
            * theta ** (1.0 + theta)
            / (1.0 + theta) ** theta
            * (1.0 - px) ** theta
            * py ** (-(1.0 + theta))
        )
    return base * (1.0 + theta) * (1.0 - px) ** theta
