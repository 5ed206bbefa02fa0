"""End-to-end acceptance gate.

One test per shipped acceptance criterion; each records a single pass/fail
line (echoed again in the terminal summary) and asserts at the stated
tolerance.  Criteria are ordered and independent; the full air-quality
pipeline (criterion 9) is the only expensive fixture and is shared.
"""

import time

import numpy as np
import pytest
from scipy import stats

from negacopula import audit, copula, estimation, marginals, sampling
from negacopula.bivariate import (
    BivariateModel,
    baseline_joint_cdf,
    baseline_model,
    gamma_joint_pdf,
    weibull_joint_pdf,
)
from negacopula.marginals import Exponential, Gamma, Weibull

import _oracles

AXIOM_THETAS = (0.1, 0.5, 1.0, 2.0, 5.0, 10.0)


@pytest.fixture(scope="module")
def full_pipeline(airquality):
    """Full pipeline at bootstrap size 10**4; shared by criterion 9."""
    config = estimation.FitConfig(bootstrap_B=10000, seed=42, conditioning_x=(5.7, 9.7, 14.9))
    return estimation.fit_pipeline(airquality, config)


def test_criterion_1_copula_axioms(acceptance):
    start = time.perf_counter()
    g = np.linspace(0.0, 1.0, 201)
    worst_boundary = 0.0
    worst_rectangle = 0.0
    for theta in AXIOM_THETAS:
        worst_boundary = max(
            worst_boundary,
            float(np.max(np.abs(copula.cdf(g, np.ones_like(g), theta) - g))),
            float(np.max(np.abs(copula.cdf(np.ones_like(g), g, theta) - g))),
            float(np.max(np.abs(copula.cdf(g, np.zeros_like(g), theta)))),
            float(np.max(np.abs(copula.cdf(np.zeros_like(g), g, theta)))),
        )
        report = audit.audit_rectangle_inequality(theta, n_rect=10000, seed=0)
        worst_rectangle = max(worst_rectangle, report.worst_violation)
    elapsed = time.perf_counter() - start
    ok = worst_boundary <= 1e-12 and worst_rectangle <= 1e-12 and elapsed < 5.0
    acceptance(
        1,
        "copula axioms (boundaries, rectangle inequality)",
        ok,
        f"boundary={worst_boundary:.2e}, rectangle={worst_rectangle:.2e}, {elapsed:.2f}s",
    )


def test_criterion_2_absolute_continuity(acceptance):
    rng = np.random.default_rng(202)
    worst = 0.0
    for theta in (0.5, 1.0, 5.0):
        for _ in range(100):
            u, v = rng.random(2)
            integral = _oracles.density_rectangle_integral(u, v, theta)
            worst = max(worst, abs(integral - copula.cdf(u, v, theta)))
    acceptance(2, "absolute continuity (density integrates to C)", worst <= 1e-6, f"worst={worst:.2e}")


def test_criterion_3_dependence_measures(acceptance):
    worst = max(
        abs(copula.spearman_rho(t) - _oracles.spearman_rho_by_quadrature(t))
        for t in (0.25, 0.765, 1.0, 3.0)
    )
    exact = (
        abs(copula.spearman_rho(1.0) + 2.0 / 3.0) <= 1e-15
        and copula.kendall_tau(1.0) == -0.5
    )
    grid = np.logspace(-2, 2, 50)
    ordered = all(copula.spearman_rho(t) < copula.kendall_tau(t) for t in grid)
    ok = worst <= 1e-6 and exact and ordered
    acceptance(
        3,
        "rho/tau closed forms vs quadrature and rho < tau",
        ok,
        f"worst quadrature gap={worst:.2e}",
    )


def test_criterion_4_sampler(acceptance):
    batch = sampling.sample_copula(200000, 1.0, seed=42)
    tau = float(stats.kendalltau(batch.u, batch.v).statistic)
    rho = float(stats.spearmanr(batch.u, batch.v).statistic)
    dist = _oracles.empirical_copula_sup_distance(batch.u, batch.v, 1.0, grid=20)
    ok = abs(tau + 0.5) <= 0.01 and abs(rho + 2.0 / 3.0) <= 0.01 and dist <= 0.01
    acceptance(
        4,
        "sampler convergence at n=200000",
        ok,
        f"tau={tau:.4f}, rho={rho:.4f}, sup-dist={dist:.4f}",
    )


def test_criterion_5_dependence_audits(acceptance):
    failures = []
    for theta in (0.1, 1.0, 10.0):
        for report in audit.standard_suite(theta, grid=200, n_rect=10000, seed=0):
            if not report.passed:
                failures.append((report.check_name, theta, report.worst_violation))
    acceptance(5, "dependence audits at theta in {0.1, 1, 10}", not failures, str(failures or "all pass"))


def test_criterion_6_ordering_audits(acceptance):
    failures = []
    for pair in ((0.5, 1.0), (1.0, 5.0)):
        for report in audit.ordering_suite(*pair, grid=100, n_quad=10000, seed=0):
            if not report.passed:
                failures.append((report.check_name, pair, report.worst_violation))
    acceptance(6, "ordering audits for (0.5,1) and (1,5)", not failures, str(failures or "all pass"))


def test_criterion_7_conditional_moments(acceptance):
    rng = np.random.default_rng(707)
    worst_uv = 0.0
    for _ in range(50):
        theta = float(np.exp(rng.uniform(np.log(0.1), np.log(10.0))))
        v = float(rng.uniform(0.02, 0.98))
        mean, var = copula.cond_mean_var_u_given_v(v, theta)
        m_q, v_q = _oracles.cond_moments_u_given_v_quad(v, theta)
        worst_uv = max(worst_uv, abs(mean - m_q), abs(var - v_q))
    worst_vu = 0.0
    for theta in (0.3, 0.9995, 2.0, 7.0):
        for u in (0.1, 0.5, 0.9):
            got = copula.cond_mean_v_given_u(u, theta)
            worst_vu = max(worst_vu, abs(got - _oracles.cond_mean_v_given_u_quad(u, theta)))
    spot = abs(copula.cond_mean_v_given_u(0.5, 2.0) - 13.0 / 24.0)
    ok = worst_uv <= 1e-8 and worst_vu <= 1e-8 and spot <= 1e-8
    acceptance(
        7,
        "conditional moments vs quadrature (incl. 13/24 spot value)",
        ok,
        f"U|V={worst_uv:.2e}, V|U={worst_vu:.2e}, spot={spot:.2e}",
    )


def test_criterion_8_sklar_round_trips(acceptance):
    # baseline joint CDF round trip
    worst_baseline = 0.0
    lam = 1.0
    q = np.linspace(0.01, 0.99, 50)
    for theta in (0.5, 1.0, 2.0):
        model = baseline_model(lam, theta)
        X, Y = np.meshgrid(model.margin_x.quantile(q), model.margin_y.quantile(q))
        diff = np.abs(model.joint_cdf(X, Y) - baseline_joint_cdf(X, Y, lam, theta))
        worst_baseline = max(worst_baseline, float(np.max(diff)))

    # closed-form example densities vs the generic composition
    rng = np.random.default_rng(808)
    theta = 1.5
    weib = BivariateModel(Weibull(0.7, 1.6), Weibull(1.4, 0.9), theta)
    gam = BivariateModel(Gamma(7.171, 1.375), Gamma(1.7, 24.775), theta)
    worst_rel = 0.0
    count = 0
    while count < 100:
        u, v = rng.uniform(0.01, 0.99, size=2)
        if v <= theta * (1.0 - u) / (1.0 + theta):
            continue
        count += 1
        xw, yw = float(weib.margin_x.quantile(u)), float(weib.margin_y.quantile(v))
        ow = weibull_joint_pdf(xw, yw, 0.7, 1.6, 1.4, 0.9, theta)
        worst_rel = max(worst_rel, abs(float(weib.joint_pdf(xw, yw)) - ow) / ow)
        xg, yg = float(gam.margin_x.quantile(u)), float(gam.margin_y.quantile(v))
        og = gamma_joint_pdf(xg, yg, 7.171, 1.0 / 1.375, 1.7, 1.0 / 24.775, theta)
        worst_rel = max(worst_rel, abs(float(gam.joint_pdf(xg, yg)) - og) / og)

    # exponential reduction: shape-1 Weibull == shape-1 Gamma == composition
    expo = BivariateModel(Exponential(0.8), Exponential(1.2), theta)
    worst_expo = 0.0
    for _ in range(50):
        x, y = rng.uniform(0.05, 3.0, size=2)
        composed = float(expo.joint_pdf(x, y))
        for oracle in (
            weibull_joint_pdf(x, y, 0.8, 1.0, 1.2, 1.0, theta),
            gamma_joint_pdf(x, y, 1.0, 0.8, 1.0, 1.2, theta),
        ):
            if composed == oracle == 0.0:
                continue
            worst_expo = max(worst_expo, abs(composed - oracle) / max(composed, oracle))

    ok = worst_baseline <= 1e-12 and worst_rel <= 1e-10 and worst_expo <= 1e-12
    acceptance(
        8,
        "Sklar round trips (baseline CDF, example densities, exponential reduction)",
        ok,
        f"baseline={worst_baseline:.2e}, densities rel={worst_rel:.2e}, reduction={worst_expo:.2e}",
    )


def test_criterion_9_air_quality_pipeline(acceptance, full_pipeline):
    report = full_pipeline
    gx = report.marginal_x.model
    gy = report.marginal_y.model
    checks = {
        "wind shape": abs(gx.shape / 7.171 - 1.0) <= 0.01,
        "wind scale": abs(gx.scale / 1.375 - 1.0) <= 0.01,
        "ozone shape": abs(gy.shape / 1.7 - 1.0) <= 0.01,
        "ozone scale": abs(gy.scale / 24.775 - 1.0) <= 0.01,
        "rho": abs(report.rho_emp + 0.59) <= 0.005,
        "tau": abs(report.tau_emp + 0.43) <= 0.005,
        "theta": abs(report.theta_hat - 0.765) <= 0.005,
        "ks p wind": abs(report.ks_x[1] - 0.809) <= 0.05,
        "ks p ozone": abs(report.ks_y[1] - 0.637) <= 0.05,
        "gamma selected": gx.family == "gamma" and gy.family == "gamma",
    }
    curves = report.conditional_curves["cdf_by_x"]
    low, mid, high = (np.array(curves[k]) for k in ("5.7", "9.7", "14.9"))
    checks["conditional ordering"] = bool(
        np.all(low <= mid + 1e-12) and np.all(mid <= high + 1e-12)
    )
    failed = [name for name, passed in checks.items() if not passed]
    detail = (
        f"theta={report.theta_hat:.4f}, rho={report.rho_emp:.4f}, tau={report.tau_emp:.4f}, "
        f"ks p=({report.ks_x[1]:.3f}, {report.ks_y[1]:.3f})"
    )
    if failed:
        detail += f"; failed: {failed}"
    acceptance(9, "air-quality pipeline at B=10000", not failed, detail)


def test_criterion_10_bootstrap_calibration(acceptance):
    base = marginals.Gamma(shape=1.7, scale=24.8)
    n, reps, level = 116, 200, 0.05
    rejects = 0
    for child in sampling.child_seed_sequences(2025, reps):
        rng = np.random.default_rng(child)
        simulated = base.quantile(rng.random(n))
        fit = marginals.mle_fit("gamma", simulated)
        _, p = estimation.ks_test_bootstrap(
            simulated, fit.model, 200, child.spawn(1)[0], compare_to="sample_ecdf"
        )
        rejects += p <= level
    rate = rejects / reps
    ok = abs(rate - 0.05) <= 0.03
    acceptance(10, "KS bootstrap calibration (5% +/- 3% rejections)", ok, f"rate={rate:.3f}")
