"""Closed-form evaluation of the one-parameter negative-dependence copula.

The copula C_theta lives on the unit square and is parameterized by a single
dependence parameter ``theta > 0``.  It is piecewise: below the support line
``v = theta*(1-u)/(1+theta)`` it places no mass (C equals the Frechet lower
bound, which is 0 there), between the support line and the horizontal
threshold ``v = theta/(1+theta)`` it follows a power-law branch, and above
the threshold a linear-in-v branch.  All quantities here (CDF, density,
conditionals, conditional moments, Spearman/Kendall measures and their
inversions) are exact closed forms; quadrature is used only as a fallback
for a removable singularity in one conditional-mean formula.

Everything in this module is a pure function of its arguments and safe for
concurrent use.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

__all__ = [
    "THETA_MIN",
    "THETA_MAX",
    "Region",
    "check_theta",
    "region_threshold",
    "support_lower_bound",
    "classify_region",
    "cdf",
    "survival_copula",
    "pdf",
    "cond_cdf_u_given_v",
    "cond_quantile_u_given_v",
    "cond_cdf_v_given_u",
    "cond_quantile_v_given_u",
    "cond_mean_var_u_given_v",
    "cond_mean_v_given_u",
    "spearman_rho",
    "kendall_tau",
    "theta_from_rho",
    "theta_from_tau",
]

# Outside this range powers like (1-u)**(1+theta) under/overflow in double
# precision, so the parameter is rejected up front.
THETA_MIN = 1e-8
THETA_MAX = 1e8

_BOUNDARY_TOL = 1e-14


class Region:
    """Tags for the pieces of the piecewise copula."""

    VOID = "void"
    LOWER = "lower"
    UPPER = "upper"
    BOUNDARY_LOWER_UPPER = "boundary_lower_upper"
    BOUNDARY_SUPPORT = "boundary_support"


def check_theta(theta):
    """Validate the dependence parameter, returning it as a float."""
    theta = float(theta)
    if not math.isfinite(theta) or theta <= 0.0:
        raise ValueError(f"theta must be a finite positive real, got {theta}")
    if not (THETA_MIN <= theta <= THETA_MAX):
        raise ValueError(
            f"theta={theta} outside supported range [{THETA_MIN}, {THETA_MAX}]"
        )
    return theta


def region_threshold(theta):
    """Horizontal threshold a(theta) = theta/(1+theta) separating the branches."""
    theta = check_theta(theta)
    return theta / (1.0 + theta)


def support_lower_bound(u, theta):
    """Support line v0(u) = theta*(1-u)/(1+theta); no mass lies below it."""
    theta = check_theta(theta)
    return theta * (1.0 - np.asarray(u, dtype=float)) / (1.0 + theta)


def _check_unit(name, value, closed=True):
    arr = np.asarray(value, dtype=float)
    lo_ok = arr >= 0.0 if closed else arr > 0.0
    hi_ok = arr <= 1.0 if closed else arr < 1.0
    if not np.all(lo_ok & hi_ok):
        interval = "[0, 1]" if closed else "(0, 1)"
        raise ValueError(f"{name} must lie in {interval}")
    return arr


def classify_region(u, v, theta, tol=_BOUNDARY_TOL):
    """Classify a single point of the unit square into a copula region.

    Boundary points (equality within absolute tolerance ``tol``) get the
    dedicated boundary tags; interior classification is exhaustive and
    mutually exclusive.
    """
    theta = check_theta(theta)
    u = float(_check_unit("u", u))
    v = float(_check_unit("v", v))
    a = theta / (1.0 + theta)
    v0 = theta * (1.0 - u) / (1.0 + theta)
    if abs(v - v0) <= tol:
        return Region.BOUNDARY_SUPPORT
    if v < v0:
        return Region.VOID
    if abs(v - a) <= tol:
        return Region.BOUNDARY_LOWER_UPPER
    if v < a:
        return Region.LOWER
    return Region.UPPER


def _log_coeff(theta):
    # log of theta**theta / (1+theta)**(1+theta), kept in log space to avoid
    # overflow for large theta
    return theta * math.log(theta) - (1.0 + theta) * math.log1p(theta)


def cdf(u, v, theta):
    """Copula CDF C_theta(u, v), vectorized over u and v.

    Returns 0 on the void region, the power-law branch for
    ``v <= theta/(1+theta)`` and the linear branch above; continuous across
    all region boundaries and within the Frechet bounds everywhere.
    """
    theta = check_theta(theta)
    u = _check_unit("u", u)
    v = _check_unit("v", v)
    u, v = np.broadcast_arrays(u, v)
    a = theta / (1.0 + theta)
    one_minus_u = 1.0 - u

    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        log_term = (
            _log_coeff(theta)
            + (1.0 + theta) * np.log(one_minus_u)
            - theta * np.log(v)
        )
        lower = v - one_minus_u + np.exp(log_term)
        upper = u - (1.0 - v) * (1.0 - np.power(one_minus_u, 1.0 + theta))

    void = v <= theta * one_minus_u / (1.0 + theta)
    out = np.where(v <= a, lower, upper)
    out = np.where(void, 0.0, out)
    # exact boundary identities, immune to rounding in the branch formulas
    out = np.where(v == 1.0, u, out)
    out = np.where(u == 1.0, v, out)
    out = np.where((u == 0.0) | (v == 0.0), 0.0, out)
    if out.ndim == 0:
        return float(out)
    return out


def survival_copula(u, v, theta):
    """Survival copula via the identity u + v - 1 + C(1-u, 1-v)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    out = u + v - 1.0 + cdf(1.0 - u, 1.0 - v, theta)
    if np.ndim(out) == 0:
        return float(out)
    return out


def pdf(u, v, theta):
    """Copula density c_theta(u, v), vectorized; zero on the void region."""
    theta = check_theta(theta)
    u = _check_unit("u", u)
    v = _check_unit("v", v)
    u, v = np.broadcast_arrays(u, v)
    a = theta / (1.0 + theta)
    one_minus_u = 1.0 - u

    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        log_lower = (
            (1.0 + theta) * math.log(theta)
            - theta * math.log1p(theta)
            + theta * np.log(one_minus_u)
            - (1.0 + theta) * np.log(v)
        )
        lower = np.exp(log_lower)
        upper = (1.0 + theta) * np.power(one_minus_u, theta)

    out = np.where(v <= a, lower, upper)
    void = v <= theta * one_minus_u / (1.0 + theta)
    out = np.where(void | (u >= 1.0) | (v <= 0.0), 0.0, out)
    if out.ndim == 0:
        return float(out)
    return out


def cond_cdf_u_given_v(u, v, theta):
    """Conditional CDF of U given V = v."""
    theta = check_theta(theta)
    u = _check_unit("u", u)
    v = _check_unit("v", v, closed=False)
    u, v = np.broadcast_arrays(u, v)
    a = theta / (1.0 + theta)
    one_minus_u = 1.0 - u

    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        low = 1.0 - np.exp(
            (1.0 + theta) * (math.log(a) + np.log(one_minus_u) - np.log(v))
        )
        upp = 1.0 - np.power(one_minus_u, 1.0 + theta)

    out = np.where(v <= a, low, upp)
    out = np.where(out < 0.0, 0.0, out)  # below the support line
    out = np.where(u == 1.0, 1.0, out)
    if out.ndim == 0:
        return float(out)
    return out


def cond_quantile_u_given_v(p, v, theta):
    """Exact inverse of :func:`cond_cdf_u_given_v` in its first argument."""
    theta = check_theta(theta)
    p = np.asarray(p, dtype=float)
    if not np.all((p > 0.0) & (p < 1.0)):
        raise ValueError("p must lie in the open interval (0, 1)")
    v = _check_unit("v", v, closed=False)
    out = _cond_quantile_u_given_v_unchecked(p, v, theta)
    if np.ndim(out) == 0:
        return float(out)
    return out


def _cond_quantile_u_given_v_unchecked(p, v, theta):
    # accepts p in [0, 1); p = 0 maps to the lower end of the support
    p, v = np.broadcast_arrays(np.asarray(p, float), np.asarray(v, float))
    a = theta / (1.0 + theta)
    root = np.power(1.0 - p, 1.0 / (1.0 + theta))
    low = 1.0 - v * root / a
    upp = 1.0 - root
    return np.where(v <= a, low, upp)


def cond_cdf_v_given_u(v, u, theta):
    """Conditional CDF of V given U = u."""
    theta = check_theta(theta)
    v = _check_unit("v", v, closed=False)
    u = _check_unit("u", u, closed=False)
    u, v = np.broadcast_arrays(u, v)
    a = theta / (1.0 + theta)
    one_minus_u = 1.0 - u

    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        low = 1.0 - np.exp(theta * (math.log(a) + np.log(one_minus_u) - np.log(v)))
        upp = 1.0 - (1.0 + theta) * (1.0 - v) * np.power(one_minus_u, theta)

    out = np.where(v <= a, low, upp)
    out = np.where(out < 0.0, 0.0, out)
    if out.ndim == 0:
        return float(out)
    return out


def cond_quantile_v_given_u(p, u, theta):
    """Exact inverse of :func:`cond_cdf_v_given_u` in its first argument."""
    theta = check_theta(theta)
    p = np.asarray(p, dtype=float)
    if not np.all((p > 0.0) & (p < 1.0)):
        raise ValueError("p must lie in the open interval (0, 1)")
    u = _check_unit("u", u, closed=False)
    out = _cond_quantile_v_given_u_unchecked(p, u, theta)
    if np.ndim(out) == 0:
        return float(out)
    return out


def _cond_quantile_v_given_u_unchecked(p, u, theta):
    # accepts p in [0, 1); p = 0 maps to the support line v0(u)
    p, u = np.broadcast_arrays(np.asarray(p, float), np.asarray(u, float))
    a = theta / (1.0 + theta)
    one_minus_u = 1.0 - u
    p_star = 1.0 - np.power(one_minus_u, theta)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        low = a * one_minus_u * np.power(1.0 - p, -1.0 / theta)
        upp = 1.0 - (1.0 - p) / ((1.0 + theta) * np.power(one_minus_u, theta))
    return np.where(p < p_star, low, upp)


def cond_mean_var_u_given_v(v, theta):
    """Conditional mean and variance of U given V = v (closed forms)."""
    theta = check_theta(theta)
    v = _check_unit("v", v, closed=False)
    a = theta / (1.0 + theta)
    t2 = theta + 2.0
    t3 = theta + 3.0
    mean_low = 1.0 - (1.0 + theta) ** 2 * v / (theta * t2)
    var_low = (1.0 + theta) ** 3 * v**2 / (theta**2 * t2**2 * t3)
    mean_upp = 1.0 / t2
    var_upp = (theta + 1.0) / (t2**2 * t3)
    mean = np.where(v <= a, mean_low, mean_upp)
    var = np.where(v <= a, var_low, var_upp)
    if np.ndim(v) == 0:
        return float(mean), float(var)
    return mean, var


def _cond_mean_v_given_u_quad(u, theta):
    a = theta / (1.0 + theta)
    b = a * (1.0 - u)

    def integrand(v):
        return v * pdf(u, v, theta)

    val, _ = integrate.quad(integrand, b, 1.0, points=[a], limit=200)
    return val


def cond_mean_v_given_u(u, theta):
    """Conditional mean E[V | U = u].

    Closed form ``(1-u)**theta / (2(1-theta)) - theta**2 (1-u) / (1-theta**2)``
    for theta away from 1; the removable singularity at theta = 1 is handled
    by adaptive quadrature of the conditional density.
    """
    theta = check_theta(theta)
    u_arr = _check_unit("u", u, closed=False)
    if abs(theta - 1.0) < 1e-3:
        if np.ndim(u_arr) == 0:
            return _cond_mean_v_given_u_quad(float(u_arr), theta)
        return np.array([_cond_mean_v_given_u_quad(ui, theta) for ui in u_arr])
    one_minus_u = 1.0 - np.asarray(u_arr, float)
    out = np.power(one_minus_u, theta) / (2.0 * (1.0 - theta)) - (
        theta**2 * one_minus_u / (1.0 - theta**2)
    )
    if np.ndim(out) == 0:
        return float(out)
    return out


def spearman_rho(theta):
    """Spearman's rho: -theta*(3+theta) / ((1+theta)*(2+theta))."""
    theta = check_theta(theta)
    return -theta * (3.0 + theta) / ((1.0 + theta) * (2.0 + theta))


def kendall_tau(theta):
    """Kendall's tau: -theta / (1+theta)."""
    theta = check_theta(theta)
    return -theta / (1.0 + theta)


def theta_from_rho(rho):
    """Invert Spearman's rho; the unique positive root of a quadratic."""
    rho = float(rho)
    if not (-1.0 < rho < 0.0):
        raise ValueError(f"rho must lie in (-1, 0), got {rho}")
    q = 1.0 + rho
    theta = (-3.0 * q + math.sqrt(q * (rho + 9.0))) / (2.0 * q)
    return check_theta(theta)


def theta_from_tau(tau):
    """Invert Kendall's tau: theta = -tau / (1+tau)."""
    tau = float(tau)
    if not (-1.0 < tau < 0.0):
        raise ValueError(f"tau must lie in (-1, 0), got {tau}")
    return check_theta(-tau / (1.0 + tau))
